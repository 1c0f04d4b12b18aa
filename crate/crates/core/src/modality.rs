//! Narrative modalities (descriptions and transcripts): hierarchical encoding
//! into a feature `m`, and concatenation with the video and question features.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::autodiff::{ParamStore, Tape, Var};
use crate::error::{Error, Result};
use crate::nn::{EmbeddingTable, Init, LstmCell, UNK_ID};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextSource {
    Description,
    Transcript,
}

/// Which inputs feed the answer head besides the question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum ModalityConfig {
    #[default]
    #[serde(rename = "V")]
    V,
    #[serde(rename = "CC")]
    Cc,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "V+CC")]
    VCc,
    #[serde(rename = "V+D")]
    VD,
}

impl ModalityConfig {
    pub const ALL: [ModalityConfig; 5] = [
        ModalityConfig::V,
        ModalityConfig::Cc,
        ModalityConfig::D,
        ModalityConfig::VCc,
        ModalityConfig::VD,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ModalityConfig::V => "V",
            ModalityConfig::Cc => "CC",
            ModalityConfig::D => "D",
            ModalityConfig::VCc => "V+CC",
            ModalityConfig::VD => "V+D",
        }
    }

    pub fn has_video(self) -> bool {
        matches!(
            self,
            ModalityConfig::V | ModalityConfig::VCc | ModalityConfig::VD
        )
    }

    pub fn text(self) -> Option<TextSource> {
        match self {
            ModalityConfig::Cc | ModalityConfig::VCc => Some(TextSource::Transcript),
            ModalityConfig::D | ModalityConfig::VD => Some(TextSource::Description),
            ModalityConfig::V => None,
        }
    }
}

impl fmt::Display for ModalityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ModalityConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace(' ', "");
        ModalityConfig::ALL
            .into_iter()
            .find(|m| m.label() == key)
            .ok_or_else(|| Error::Config(format!("unknown modality set `{s}`")))
    }
}

/// Which feature slots the head input carries, in the fixed order `v, m, q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FusionLayout {
    pub video: bool,
    pub text: bool,
}

impl FusionLayout {
    /// Width of the fused `(v, m, q)` vector when every feature has width `d`.
    pub fn context_dim(self, d: usize) -> usize {
        d * (1 + usize::from(self.video) + usize::from(self.text))
    }
}

/// Concatenates the present features in order `v, m, q`.
pub fn fuse(
    tape: &mut Tape,
    layout: FusionLayout,
    v: Option<Var>,
    m: Option<Var>,
    q: Var,
) -> Result<Var> {
    if v.is_some() != layout.video || m.is_some() != layout.text {
        return Err(Error::contract(format!(
            "features (video: {}, text: {}) do not match layout {layout:?}",
            v.is_some(),
            m.is_some()
        )));
    }
    if !layout.video && !layout.text {
        return Ok(q);
    }
    let parts: Vec<Var> = [v, m, Some(q)].into_iter().flatten().collect();
    tape.concat(&parts)
}

/// Lower recurrence over the words of each segment, upper recurrence over segments.
#[derive(Debug, Clone)]
pub struct TextEncoder {
    pub embedding: EmbeddingTable,
    pub word_rnn: LstmCell,
    pub segment_rnn: LstmCell,
}

impl TextEncoder {
    pub fn new(
        store: &mut ParamStore,
        vocab_size: usize,
        embed_dim: usize,
        d: usize,
        init: &mut Init,
    ) -> Result<Self> {
        Ok(Self {
            embedding: EmbeddingTable::new(store, "text.embedding", vocab_size, embed_dim, init)?,
            word_rnn: LstmCell::new(store, "text.word_rnn", embed_dim, d, init)?,
            segment_rnn: LstmCell::new(store, "text.segment_rnn", d, d, init)?,
        })
    }

    /// Encodes one token sequence per segment into `m`. Empty segments are read
    /// as a single unknown token.
    pub fn hierarchical_encode(
        &self,
        tape: &mut Tape,
        segments: &[Vec<usize>],
        expected_segments: usize,
    ) -> Result<Var> {
        if segments.len() != expected_segments {
            return Err(Error::contract(format!(
                "text has {} segments, video has {expected_segments}",
                segments.len()
            )));
        }
        let unk = [UNK_ID];
        let mut sentence_vecs = Vec::with_capacity(segments.len());
        for words in segments {
            let words: &[usize] = if words.is_empty() { &unk } else { words };
            let embedded = self.embedding.lookup(tape, words)?;
            sentence_vecs.push(self.word_rnn.encode_sequence(tape, &embedded)?.0);
        }
        Ok(self.segment_rnn.encode_sequence(tape, &sentence_vecs)?.0)
    }
}

/// A timestamped transcript utterance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub t_s: f64,
    pub text: String,
}

/// Groups utterances by the segment whose `[start, end)` span contains their
/// timestamp, in time order. Utterances outside every segment are dropped.
pub fn segment_utterances(bounds: &[(f64, f64)], utterances: &[Utterance]) -> Vec<Vec<Utterance>> {
    let mut out = vec![Vec::new(); bounds.len()];
    let mut sorted: Vec<&Utterance> = utterances.iter().collect();
    sorted.sort_by(|a, b| a.t_s.total_cmp(&b.t_s));
    for u in sorted {
        if let Some(i) = bounds
            .iter()
            .position(|&(start, end)| u.t_s >= start && u.t_s < end)
        {
            out[i].push(u.clone());
        }
    }
    out
}

/// Text of [`segment_utterances`].
pub fn align_transcripts(bounds: &[(f64, f64)], utterances: &[Utterance]) -> Vec<Vec<String>> {
    segment_utterances(bounds, utterances)
        .into_iter()
        .map(|seg| seg.into_iter().map(|u| u.text).collect())
        .collect()
}
