//! The full question-answering model and the tokenized form of a dataset.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::config::{HeadKind, RunConfig};
use crate::autodiff::{ParamStore, Tape, Tensor, Var};
use crate::error::{Error, Result};
use crate::heads::{AnswerVocabulary, McHead, KspaceHead, NUM_CHOICES};
use crate::modality::{fuse, FusionLayout, TextEncoder, TextSource};
use crate::models::{VideoEncoding, VideoFrames, VideoModel, VideoVariant};
use crate::nn::{EmbeddingTable, Init, LstmCell, PAD_ID, UNK_ID};
use crate::world::{DatasetManifest, QaRecord, Split, Tag, VideoRecord};

/// Lowercased words, with each punctuation mark as its own token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut word = String::new();
    for c in text.chars() {
        if c.is_alphanumeric() || c == '\'' {
            word.extend(c.to_lowercase());
        } else {
            if !word.is_empty() {
                out.push(std::mem::take(&mut word));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    out
}

/// Token ↔ id map. Ids 0 and 1 are padding and unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TokenVocab {
    tokens: Vec<String>,
    index: HashMap<String, usize>,
}

const PAD_TOKEN: &str = "<pad>";
const UNK_TOKEN: &str = "<unk>";

impl TokenVocab {
    /// Sorted vocabulary of every token in `texts`.
    pub fn build<'a>(texts: impl IntoIterator<Item = &'a str>) -> Self {
        let words: BTreeSet<String> = texts.into_iter().flat_map(tokenize).collect();
        let tokens: Vec<String> = [PAD_TOKEN.to_string(), UNK_TOKEN.to_string()]
            .into_iter()
            .chain(words)
            .collect();
        Self::try_from(tokens).expect("reserved tokens come first")
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn id(&self, token: &str) -> usize {
        self.index.get(token).copied().unwrap_or(UNK_ID)
    }

    pub fn encode(&self, text: &str) -> Vec<usize> {
        let ids: Vec<usize> = tokenize(text).iter().map(|t| self.id(t)).collect();
        if ids.is_empty() {
            vec![UNK_ID]
        } else {
            ids
        }
    }
}

impl From<TokenVocab> for Vec<String> {
    fn from(v: TokenVocab) -> Self {
        v.tokens
    }
}

impl TryFrom<Vec<String>> for TokenVocab {
    type Error = String;

    fn try_from(tokens: Vec<String>) -> std::result::Result<Self, String> {
        if tokens.get(PAD_ID).map(String::as_str) != Some(PAD_TOKEN)
            || tokens.get(UNK_ID).map(String::as_str) != Some(UNK_TOKEN)
        {
            return Err("vocabulary must start with <pad>, <unk>".into());
        }
        let index: HashMap<String, usize> =
            tokens.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        if index.len() != tokens.len() {
            return Err("vocabulary has repeated tokens".into());
        }
        Ok(Self { tokens, index })
    }
}

/// Vocabularies a model is built against; all come from the training split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabularies {
    pub words: TokenVocab,
    pub text: Option<TokenVocab>,
    pub answers: Option<AnswerVocabulary>,
    pub frame_dim: usize,
}

impl Vocabularies {
    pub fn from_training(data: &DatasetManifest, cfg: &RunConfig) -> Result<Self> {
        let train = data.videos_in(Split::Train);
        if train.is_empty() {
            return Err(Error::Config("dataset has no training videos".into()));
        }
        let frame_dim = frame_width(&data.videos)?;
        let qa = || train.iter().flat_map(|v| v.qa.iter());
        let words = TokenVocab::build(
            qa().flat_map(|q| std::iter::once(q.question.as_str()).chain(q.choices.iter().map(String::as_str))),
        );
        let text = cfg.modalities.text().map(|source| {
            let texts: Vec<String> = train
                .iter()
                .flat_map(|v| segment_texts(v, source))
                .collect();
            TokenVocab::build(texts.iter().map(String::as_str))
        });
        let answers = (cfg.head == HeadKind::Kspace)
            .then(|| AnswerVocabulary::build(qa().map(|q| q.answer.as_str())));
        Ok(Self {
            words,
            text,
            answers,
            frame_dim,
        })
    }
}

fn frame_width(videos: &[VideoRecord]) -> Result<usize> {
    videos
        .iter()
        .flat_map(|v| v.segments.iter())
        .flat_map(|s| s.frames.first())
        .map(Vec::len)
        .next()
        .ok_or_else(|| Error::Config("dataset has no frames".into()))
}

/// One string per segment: the description, or the aligned utterances joined.
pub fn segment_texts(video: &VideoRecord, source: TextSource) -> Vec<String> {
    video
        .segments
        .iter()
        .map(|s| match source {
            TextSource::Description => s.description.clone(),
            TextSource::Transcript => s
                .transcript
                .iter()
                .map(|u| u.text.as_str())
                .collect::<Vec<_>>()
                .join(" "),
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PreparedQuestion {
    pub question: Vec<usize>,
    pub choices: Vec<Vec<usize>>,
    pub correct: usize,
    /// K-Space class of the answer; `None` if unseen in training.
    pub answer_class: Option<usize>,
    pub tags: Vec<Tag>,
}

#[derive(Debug, Clone)]
pub struct PreparedVideo {
    pub id: String,
    pub frames: VideoFrames,
    pub text: Option<Vec<Vec<usize>>>,
    pub questions: Vec<PreparedQuestion>,
}

impl PreparedVideo {
    pub fn num_segments(&self) -> usize {
        self.frames.segments.len()
    }
}

fn prepare_question(q: &QaRecord, vocab: &Vocabularies) -> Result<PreparedQuestion> {
    let correct = q
        .correct_index()
        .ok_or_else(|| Error::contract(format!("`{}`: answer is not a choice", q.question)))?;
    Ok(PreparedQuestion {
        question: vocab.words.encode(&q.question),
        choices: q.choices.iter().map(|c| vocab.words.encode(c)).collect(),
        correct,
        answer_class: vocab.answers.as_ref().and_then(|a| a.class_of(&q.answer)),
        tags: q.tags.clone(),
    })
}

pub fn prepare_video(
    video: &VideoRecord,
    vocab: &Vocabularies,
    text: Option<TextSource>,
) -> Result<PreparedVideo> {
    let mut segments = Vec::with_capacity(video.segments.len());
    for s in &video.segments {
        if s.frames.iter().any(|f| f.len() != vocab.frame_dim) {
            return Err(Error::Compatibility(format!(
                "video {} has frames of width other than {}",
                video.id, vocab.frame_dim
            )));
        }
        segments.push(Tensor::from_rows(&s.frames)?);
    }
    let text = match (text, &vocab.text) {
        (Some(source), Some(tv)) => Some(
            segment_texts(video, source)
                .iter()
                .map(|t| {
                    let ids: Vec<usize> = tokenize(t).iter().map(|w| tv.id(w)).collect();
                    ids
                })
                .collect(),
        ),
        (None, _) => None,
        (Some(_), None) => {
            return Err(Error::Compatibility("model has no narrative vocabulary".into()))
        }
    };
    Ok(PreparedVideo {
        id: video.id.clone(),
        frames: VideoFrames::new(segments)?,
        text,
        questions: video
            .qa
            .iter()
            .map(|q| prepare_question(q, vocab))
            .collect::<Result<_>>()?,
    })
}

pub fn prepare_split(
    data: &DatasetManifest,
    split: Split,
    vocab: &Vocabularies,
    text: Option<TextSource>,
) -> Result<Vec<PreparedVideo>> {
    data.videos_in(split)
        .into_iter()
        .map(|v| prepare_video(v, vocab, text))
        .collect()
}

#[derive(Debug, Clone)]
pub enum Head {
    Mc {
        head: McHead,
        answer_rnn: LstmCell,
    },
    Kspace(KspaceHead),
}

/// Per-question result of a forward pass.
#[derive(Debug, Clone, Copy)]
pub struct Outcome {
    pub loss: Var,
    pub predicted: usize,
    pub correct: bool,
}

/// Question encoder, video model, optional narrative encoder and answer head,
/// with all parameters in one store.
#[derive(Debug, Clone)]
pub struct QaModel {
    pub config: RunConfig,
    pub vocab: Vocabularies,
    pub store: ParamStore,
    pub layout: FusionLayout,
    pub embedding: EmbeddingTable,
    pub question_rnn: LstmCell,
    pub video: VideoModel,
    pub text: Option<TextEncoder>,
    pub head: Head,
}

impl QaModel {
    /// Builds all parameters from `config.seeds.params`. The video model is
    /// built even when its feature is not fused, so that toggling the video
    /// slot changes only the head.
    pub fn new(config: &RunConfig, vocab: Vocabularies) -> Result<Self> {
        config.validate()?;
        let (d, e) = (config.hidden, config.embed);
        let mut init = Init::new(config.seeds.params);
        let mut store = ParamStore::new();
        let embedding = EmbeddingTable::new(&mut store, "qa.embedding", vocab.words.len(), e, &mut init)?;
        let question_rnn = LstmCell::new(&mut store, "qa.question_rnn", e, d, &mut init)?;
        let video = VideoModel::new(
            &mut store,
            config.model,
            vocab.frame_dim,
            d,
            config.adjacency,
            &mut init,
        )?;
        let layout = FusionLayout {
            video: config.modalities.has_video() && config.model != VideoVariant::BareQa,
            text: config.modalities.text().is_some(),
        };
        let text = match (&vocab.text, layout.text) {
            (Some(tv), true) => Some(TextEncoder::new(&mut store, tv.len(), e, d, &mut init)?),
            (None, false) => None,
            _ => return Err(Error::Compatibility("narrative vocabulary does not match modalities".into())),
        };
        let ctx = layout.context_dim(d);
        let head = match config.head {
            HeadKind::Mc => Head::Mc {
                answer_rnn: LstmCell::new(&mut store, "qa.answer_rnn", e, d, &mut init)?,
                head: McHead::new(&mut store, ctx, d, d, &mut init)?,
            },
            HeadKind::Kspace => {
                let k = vocab
                    .answers
                    .as_ref()
                    .map(AnswerVocabulary::len)
                    .ok_or_else(|| Error::Compatibility("K-Space head needs an answer vocabulary".into()))?;
                Head::Kspace(KspaceHead::new(&mut store, ctx, d, k, &mut init)?)
            }
        };
        Ok(Self {
            config: config.clone(),
            vocab,
            store,
            layout,
            embedding,
            question_rnn,
            video,
            text,
            head,
        })
    }

    pub fn text_source(&self) -> Option<TextSource> {
        self.config.modalities.text()
    }

    /// Forward pass over every question of `video`. `cache` maps token
    /// sequences to their encodings on this tape.
    pub fn forward_video(
        &self,
        tape: &mut Tape,
        video: &PreparedVideo,
        cache: &mut EncodingCache,
    ) -> Result<Vec<Outcome>> {
        let enc = if self.layout.video {
            self.video.encode(tape, &video.frames)?
        } else {
            VideoEncoding::None
        };
        let m = match (&self.text, &video.text) {
            (Some(te), Some(segs)) => Some(te.hierarchical_encode(tape, segs, video.num_segments())?),
            (None, _) => None,
            (Some(_), None) => return Err(Error::contract("video was prepared without narratives")),
        };
        let mut out = Vec::with_capacity(video.questions.len());
        for pq in &video.questions {
            let q = encode_cached(tape, &self.embedding, &self.question_rnn, &pq.question, &mut cache.questions)?;
            let v = self.video.finish(tape, enc, q)?;
            let ctx = fuse(tape, self.layout, v, m, q)?;
            out.push(match &self.head {
                Head::Mc { head, answer_rnn } => {
                    if pq.choices.len() != NUM_CHOICES {
                        return Err(Error::contract("question does not have five choices"));
                    }
                    let answers = pq
                        .choices
                        .iter()
                        .map(|c| encode_cached(tape, &self.embedding, answer_rnn, c, &mut cache.answers))
                        .collect::<Result<Vec<_>>>()?;
                    let scores = head.scores(tape, ctx, &answers)?;
                    let predicted = crate::heads::mc_predict(tape.value(scores))?;
                    Outcome {
                        loss: crate::heads::mc_loss(tape, scores, pq.correct)?,
                        predicted,
                        correct: predicted == pq.correct,
                    }
                }
                Head::Kspace(head) => {
                    let logits = head.logits(tape, ctx)?;
                    let predicted = crate::heads::kspace_predict(tape.value(logits))?;
                    // unseen answers contribute no loss and are always wrong
                    let loss = match pq.answer_class {
                        Some(c) => tape.cross_entropy(logits, c)?,
                        None => tape.constant(&[], vec![0.0])?,
                    };
                    Outcome {
                        loss,
                        predicted,
                        correct: pq.answer_class == Some(predicted),
                    }
                }
            });
        }
        Ok(out)
    }
}

/// Encodings already on the current tape, keyed by token sequence.
#[derive(Debug, Default)]
pub struct EncodingCache {
    questions: HashMap<Vec<usize>, Var>,
    answers: HashMap<Vec<usize>, Var>,
}

fn encode_cached(
    tape: &mut Tape,
    embedding: &EmbeddingTable,
    rnn: &LstmCell,
    tokens: &[usize],
    cache: &mut HashMap<Vec<usize>, Var>,
) -> Result<Var> {
    if let Some(&v) = cache.get(tokens) {
        return Ok(v);
    }
    let xs = embedding.lookup(tape, tokens)?;
    let (h, _) = rnn.encode_sequence(tape, &xs)?;
    cache.insert(tokens.to_vec(), h);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_splits_punctuation() {
        assert_eq!(
            tokenize("Which one is faster : Add Salt or stir?"),
            vec!["which", "one", "is", "faster", ":", "add", "salt", "or", "stir", "?"]
        );
        assert!(tokenize("  ").is_empty());
    }

    #[test]
    fn vocab_reserves_pad_and_unk() {
        let v = TokenVocab::build(["b a", "a ?"]);
        assert_eq!(v.len(), 5);
        assert_eq!(v.id("<pad>"), PAD_ID);
        assert_eq!(v.id("zzz"), UNK_ID);
        assert_eq!(v.encode(""), vec![UNK_ID]);
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["<pad>","<unk>","?","a","b"]"#);
        assert_eq!(serde_json::from_str::<TokenVocab>(&json).unwrap(), v);
        assert!(serde_json::from_str::<TokenVocab>(r#"["a","b"]"#).is_err());
    }
}
