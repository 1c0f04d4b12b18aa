//! Video representations: each maps per-segment features (and, for the
//! attention variants, the encoded question) to a single video vector `v`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::autodiff::{ParamId, ParamStore, Tape, Tensor, Var};
use crate::error::{Error, Result};
use crate::nn::{question_attend, Init, LstmCell};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VideoVariant {
    BareQa,
    NaiveRnn,
    Seq,
    SeqSa,
    Gcn,
    GcnSa,
    Rgcn,
    RgcnSa,
}

impl VideoVariant {
    pub const ALL: [VideoVariant; 8] = [
        VideoVariant::BareQa,
        VideoVariant::NaiveRnn,
        VideoVariant::Seq,
        VideoVariant::Gcn,
        VideoVariant::Rgcn,
        VideoVariant::SeqSa,
        VideoVariant::GcnSa,
        VideoVariant::RgcnSa,
    ];

    /// The six segment-based variants, in table column order.
    pub const SEGMENT: [VideoVariant; 6] = [
        VideoVariant::Seq,
        VideoVariant::SeqSa,
        VideoVariant::Gcn,
        VideoVariant::GcnSa,
        VideoVariant::Rgcn,
        VideoVariant::RgcnSa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VideoVariant::BareQa => "bare_qa",
            VideoVariant::NaiveRnn => "naive_rnn",
            VideoVariant::Seq => "seq",
            VideoVariant::SeqSa => "seq_sa",
            VideoVariant::Gcn => "gcn",
            VideoVariant::GcnSa => "gcn_sa",
            VideoVariant::Rgcn => "rgcn",
            VideoVariant::RgcnSa => "rgcn_sa",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            VideoVariant::BareQa => "Bare QA",
            VideoVariant::NaiveRnn => "Naive RNN",
            VideoVariant::Seq => "SEQ",
            VideoVariant::SeqSa => "SEQ-SA",
            VideoVariant::Gcn => "GCN",
            VideoVariant::GcnSa => "GCN-SA",
            VideoVariant::Rgcn => "RGCN",
            VideoVariant::RgcnSa => "RGCN-SA",
        }
    }

    /// Whether the video vector depends on the question.
    pub fn attends(self) -> bool {
        matches!(
            self,
            VideoVariant::SeqSa | VideoVariant::GcnSa | VideoVariant::RgcnSa
        )
    }

    pub fn uses_segments(self) -> bool {
        !matches!(self, VideoVariant::BareQa | VideoVariant::NaiveRnn)
    }

    /// The variant with attention removed (identity for the others).
    pub fn without_attention(self) -> VideoVariant {
        match self {
            VideoVariant::SeqSa => VideoVariant::Seq,
            VideoVariant::GcnSa => VideoVariant::Gcn,
            VideoVariant::RgcnSa => VideoVariant::Rgcn,
            v => v,
        }
    }
}

impl fmt::Display for VideoVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VideoVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        VideoVariant::ALL
            .into_iter()
            .find(|v| v.name() == key || v.name().replace('_', "") == key)
            .ok_or_else(|| Error::Config(format!("unknown model variant `{s}`")))
    }
}

/// How the graph adjacency is formed from node dot products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjacency {
    /// Row-wise softmax of `S Sᵀ`.
    #[default]
    Softmax,
    /// `S Sᵀ` as is.
    Raw,
}

/// The `N × d` segment matrix on a tape.
#[derive(Debug, Clone, Copy)]
pub struct SegmentFeatures {
    pub x: Var,
    pub n: usize,
    pub d: usize,
}

/// Encodes each segment's frames with `encoder`; row `i` is the final hidden
/// state over segment `i`.
pub fn encode_segments(
    tape: &mut Tape,
    encoder: &LstmCell,
    segments: &[Tensor],
) -> Result<SegmentFeatures> {
    if segments.is_empty() {
        return Err(Error::contract("a video needs at least one segment"));
    }
    let mut rows = Vec::with_capacity(segments.len());
    for (i, frames) in segments.iter().enumerate() {
        if frames.shape().len() != 2 {
            return Err(Error::contract(format!("segment {i} has no frames")));
        }
        let m = tape.leaf(frames);
        rows.push(encoder.encode_rows(tape, m)?);
    }
    let x = tape.stack(&rows)?;
    Ok(SegmentFeatures {
        x,
        n: segments.len(),
        d: encoder.hidden_dim,
    })
}

fn attended(tape: &mut Tape, x: &SegmentFeatures, q: Option<Var>) -> Result<Var> {
    match q {
        Some(q) => Ok(question_attend(tape, q, x.x)?.1),
        None => Ok(x.x),
    }
}

/// Final hidden state of `rnn` over the (optionally question-attended) segments.
pub fn seq_forward(
    tape: &mut Tape,
    rnn: &LstmCell,
    x: &SegmentFeatures,
    q: Option<Var>,
) -> Result<Var> {
    let input = attended(tape, x, q)?;
    rnn.encode_rows(tape, input)
}

pub fn build_adjacency(tape: &mut Tape, s: Var, mode: Adjacency) -> Result<Var> {
    let st = tape.transpose(s)?;
    let logits = tape.matmul(s, st)?;
    match mode {
        Adjacency::Softmax => tape.softmax_row(logits),
        Adjacency::Raw => Ok(logits),
    }
}

/// `ReLU(G S W)` with `G` built from `s`.
pub fn gcn_layer(tape: &mut Tape, s: Var, w: Var, mode: Adjacency) -> Result<Var> {
    let g = build_adjacency(tape, s, mode)?;
    let gs = tape.matmul(g, s)?;
    let z = tape.matmul(gs, w)?;
    Ok(tape.relu(z))
}

/// Three-layer GCN with mean pooling over segment nodes. With a question, the
/// last layer's input nodes are re-weighted by their attention to `q`.
pub fn gcn_forward(
    tape: &mut Tape,
    weights: &[ParamId],
    x: &SegmentFeatures,
    q: Option<Var>,
    mode: Adjacency,
) -> Result<Var> {
    let mut s = x.x;
    let last = weights.len() - 1;
    for (l, &w) in weights.iter().enumerate() {
        if l == last {
            if let Some(q) = q {
                s = question_attend(tape, q, s)?.1;
            }
        }
        let w = tape.param(w);
        s = gcn_layer(tape, s, w, mode)?;
    }
    tape.mean_pool(s, 0)
}

/// Intermediate values of one recurrent-graph pass.
#[derive(Debug, Clone)]
pub struct RgcnOutput {
    pub v: Var,
    /// `h_t` for `t = 1..=N`.
    pub hiddens: Vec<Var>,
    /// Layer `t` right after the swap wrote `h_t` into node `t`.
    pub swapped_layers: Vec<Var>,
}

/// Recurrent graph pass: at step `t` the cell reads node `t-1` of layer `t`
/// (zero at `t = 1`) alongside `X_t`, its hidden state replaces node `t`, and
/// the next layer is `ReLU(G Z_t W)` with one shared `W`.
pub fn rgcn_forward(
    tape: &mut Tape,
    cell: &LstmCell,
    weight: ParamId,
    x: &SegmentFeatures,
    q: Option<Var>,
    mode: Adjacency,
) -> Result<RgcnOutput> {
    if cell.input_dim != 2 * x.d || cell.hidden_dim != x.d {
        return Err(Error::dim(
            "rgcn cell",
            &[cell.input_dim, cell.hidden_dim],
            &[2 * x.d, x.d],
        ));
    }
    let input = attended(tape, x, q)?;
    let w = tape.param(weight);
    let mut layer = input;
    let mut state = cell.zero_state(tape);
    let mut hiddens = Vec::with_capacity(x.n);
    let mut swapped_layers = Vec::with_capacity(x.n);
    for t in 0..x.n {
        let read = if t == 0 {
            tape.zeros(&[x.d])
        } else {
            tape.row(layer, t - 1)?
        };
        let xt = tape.row(input, t)?;
        let cell_in = tape.concat(&[xt, read])?;
        state = cell.step(tape, cell_in, state)?;
        layer = tape.set_row(layer, t, state.h)?;
        hiddens.push(state.h);
        swapped_layers.push(layer);
        if t + 1 < x.n {
            layer = gcn_layer(tape, layer, w, mode)?;
        }
    }
    Ok(RgcnOutput {
        v: state.h,
        hiddens,
        swapped_layers,
    })
}

/// Final hidden state over all frames of the video, ignoring segment boundaries.
pub fn naive_rnn_forward(tape: &mut Tape, rnn: &LstmCell, frames: &Tensor) -> Result<Var> {
    if frames.shape().len() != 2 {
        return Err(Error::contract("naive RNN needs a non-empty frame matrix"));
    }
    let m = tape.leaf(frames);
    rnn.encode_rows(tape, m)
}

/// Frames of one video, grouped by procedure segment.
#[derive(Debug, Clone)]
pub struct VideoFrames {
    /// One `[frames × frame_dim]` matrix per segment.
    pub segments: Vec<Tensor>,
    /// All frames in temporal order.
    pub flat: Tensor,
}

impl VideoFrames {
    pub fn new(segments: Vec<Tensor>) -> Result<Self> {
        let mut rows = Vec::new();
        for s in &segments {
            for r in 0..s.rows() {
                rows.push(s.row(r).to_vec());
            }
        }
        let flat = Tensor::from_rows(&rows)?;
        Ok(Self { segments, flat })
    }
}

/// Question-independent part of a video's encoding.
#[derive(Debug, Clone, Copy)]
pub enum VideoEncoding {
    None,
    Fixed(Var),
    Segments(SegmentFeatures),
}

/// A video model variant with its parameters.
#[derive(Debug, Clone)]
pub struct VideoModel {
    pub variant: VideoVariant,
    pub d: usize,
    pub adjacency: Adjacency,
    pub frame_rnn: Option<LstmCell>,
    pub segment_encoder: Option<LstmCell>,
    pub seq_rnn: Option<LstmCell>,
    pub gcn_weights: Vec<ParamId>,
    pub rgcn_cell: Option<LstmCell>,
}

pub const GCN_LAYERS: usize = 3;

impl VideoModel {
    pub fn new(
        store: &mut ParamStore,
        variant: VideoVariant,
        frame_dim: usize,
        d: usize,
        adjacency: Adjacency,
        init: &mut Init,
    ) -> Result<Self> {
        let mut m = VideoModel {
            variant,
            d,
            adjacency,
            frame_rnn: None,
            segment_encoder: None,
            seq_rnn: None,
            gcn_weights: Vec::new(),
            rgcn_cell: None,
        };
        if variant == VideoVariant::NaiveRnn {
            m.frame_rnn = Some(LstmCell::new(store, "video.frame_rnn", frame_dim, d, init)?);
        }
        if variant.uses_segments() {
            m.segment_encoder = Some(LstmCell::new(
                store,
                "video.segment_encoder",
                frame_dim,
                d,
                init,
            )?);
        }
        match variant.without_attention() {
            VideoVariant::Seq => {
                m.seq_rnn = Some(LstmCell::new(store, "video.seq_rnn", d, d, init)?);
            }
            VideoVariant::Gcn => {
                for l in 0..GCN_LAYERS {
                    let w = init.uniform(&[d, d], d);
                    m.gcn_weights
                        .push(store.add(format!("video.gcn.{l}.weight"), w)?);
                }
            }
            VideoVariant::Rgcn => {
                let w = init.uniform(&[d, d], d);
                m.gcn_weights.push(store.add("video.rgcn.weight", w)?);
                m.rgcn_cell = Some(LstmCell::new(store, "video.rgcn_cell", 2 * d, d, init)?);
            }
            _ => {}
        }
        Ok(m)
    }

    /// Work that does not depend on the question: the segment encodings, or
    /// the whole video vector for non-attending variants.
    pub fn encode(&self, tape: &mut Tape, frames: &VideoFrames) -> Result<VideoEncoding> {
        match self.variant {
            VideoVariant::BareQa => Ok(VideoEncoding::None),
            VideoVariant::NaiveRnn => {
                let rnn = self.frame_rnn.as_ref().expect("naive rnn built");
                Ok(VideoEncoding::Fixed(naive_rnn_forward(
                    tape,
                    rnn,
                    &frames.flat,
                )?))
            }
            v => {
                let enc = self
                    .segment_encoder
                    .as_ref()
                    .expect("segment encoder built");
                let x = encode_segments(tape, enc, &frames.segments)?;
                if v.attends() {
                    Ok(VideoEncoding::Segments(x))
                } else {
                    Ok(VideoEncoding::Fixed(self.video_vector(tape, &x, None)?))
                }
            }
        }
    }

    /// The video vector for one question, given [`encode`](Self::encode)'s output.
    pub fn finish(&self, tape: &mut Tape, enc: VideoEncoding, q: Var) -> Result<Option<Var>> {
        match enc {
            VideoEncoding::None => Ok(None),
            VideoEncoding::Fixed(v) => Ok(Some(v)),
            VideoEncoding::Segments(x) => Ok(Some(self.video_vector(tape, &x, Some(q))?)),
        }
    }

    pub fn forward(&self, tape: &mut Tape, frames: &VideoFrames, q: Var) -> Result<Option<Var>> {
        let enc = self.encode(tape, frames)?;
        self.finish(tape, enc, q)
    }

    fn video_vector(&self, tape: &mut Tape, x: &SegmentFeatures, q: Option<Var>) -> Result<Var> {
        match self.variant.without_attention() {
            VideoVariant::Seq => {
                seq_forward(tape, self.seq_rnn.as_ref().expect("seq rnn built"), x, q)
            }
            VideoVariant::Gcn => gcn_forward(tape, &self.gcn_weights, x, q, self.adjacency),
            VideoVariant::Rgcn => Ok(rgcn_forward(
                tape,
                self.rgcn_cell.as_ref().expect("rgcn cell built"),
                self.gcn_weights[0],
                x,
                q,
                self.adjacency,
            )?
            .v),
            other => Err(Error::contract(format!("{other} has no segment pathway"))),
        }
    }
}
