//! Central finite-difference checks of every op, block and model variant.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{HeadKind, RunConfig};
use super::model::{EncodingCache, PreparedQuestion, PreparedVideo, QaModel, TokenVocab, Vocabularies};
use crate::autodiff::{OpKind, ParamStore, Tape, Tensor, Var};
use crate::error::{Error, Result};
use crate::heads::{mc_loss, AnswerVocabulary, KspaceHead, McHead};
use crate::modality::{fuse, FusionLayout, ModalityConfig, TextEncoder};
use crate::models::{
    build_adjacency, encode_segments, gcn_forward, gcn_layer, naive_rnn_forward, rgcn_forward,
    seq_forward, Adjacency, SegmentFeatures, VideoFrames, VideoVariant, GCN_LAYERS,
};
use crate::nn::{question_attend, EmbeddingTable, Init, LstmCell, Mlp};
use crate::world::Tag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Ops,
    Blocks,
    Models,
    All,
}

impl Scope {
    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

impl FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ops" => Ok(Scope::Ops),
            "blocks" => Ok(Scope::Blocks),
            "models" => Ok(Scope::Models),
            "all" => Ok(Scope::All),
            _ => Err(Error::Config(format!("unknown gradcheck scope `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheckOptions {
    /// Finite-difference step.
    pub step: f64,
    pub tolerance: f64,
    /// Denominator floor of the relative error.
    pub floor: f64,
    /// Corrupts this op's backward rule on the analytic tape.
    pub fault: Option<OpKind>,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        Self {
            step: 1e-5,
            tolerance: 1e-4,
            floor: 1e-6,
            fault: None,
        }
    }
}

/// `|a − n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradEntry {
    pub scope: Scope,
    pub component: String,
    pub max_rel_error: f64,
    /// Number of scalar partial derivatives compared.
    pub checked: usize,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradReport {
    pub tolerance: f64,
    pub entries: Vec<GradEntry>,
}

impl GradReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &GradEntry> {
        self.entries.iter().filter(|e| !e.passed)
    }

    pub fn max_rel_error(&self) -> f64 {
        self.entries.iter().map(|e| e.max_rel_error).fold(0.0, f64::max)
    }

    pub fn entry(&self, component: &str) -> Option<&GradEntry> {
        self.entries.iter().find(|e| e.component == component)
    }
}

impl fmt::Display for GradReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(
                f,
                "{:<4} {:<28} max rel err {:.2e} over {:>5} partials",
                if e.passed { "ok" } else { "FAIL" },
                e.component,
                e.max_rel_error,
                e.checked
            )?;
            if let Some(msg) = &e.error {
                write!(f, "  ({msg})")?;
            }
            writeln!(f)?;
        }
        let n_fail = self.failures().count();
        write!(
            f,
            "{} components, {} failed, tolerance {:.0e}",
            self.entries.len(),
            n_fail,
            self.tolerance
        )
    }
}

type Forward = Box<dyn Fn(&mut Tape, &[Var]) -> Result<Var>>;

/// A differentiable function of some input tensors and of the parameters in `store`.
struct Case {
    scope: Scope,
    name: String,
    store: ParamStore,
    inputs: Vec<Tensor>,
    f: Forward,
}

impl Case {
    fn new(
        scope: Scope,
        name: impl Into<String>,
        store: ParamStore,
        inputs: Vec<Tensor>,
        f: impl Fn(&mut Tape, &[Var]) -> Result<Var> + 'static,
    ) -> Self {
        Self {
            scope,
            name: name.into(),
            store,
            inputs: inputs.into_iter().map(Tensor::with_grad).collect(),
            f: Box::new(f),
        }
    }

    /// Scalar objective: the output itself, or its dot product with fixed
    /// pseudo-random weights so every output element gets a distinct upstream gradient.
    fn objective(&self, tape: &mut Tape, vars: &[Var]) -> Result<Var> {
        let out = (self.f)(tape, vars)?;
        if tape.shape(out).is_empty() {
            return Ok(out);
        }
        let n = tape.value(out).len();
        let flat = tape.reshape(out, &[n])?;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let w = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w = tape.constant(&[n], w)?;
        tape.dot(flat, w)
    }

    fn value(&self, store: &ParamStore, inputs: &[Tensor]) -> Result<f64> {
        let mut tape = Tape::with_params(store);
        let vars: Vec<Var> = inputs.iter().map(|t| tape.leaf(t)).collect();
        let l = self.objective(&mut tape, &vars)?;
        Ok(tape.scalar(l))
    }

    fn check(&self, opts: &GradCheckOptions) -> Result<(f64, usize)> {
        let mut tape = Tape::with_params(&self.store);
        if let Some(k) = opts.fault {
            tape.inject_fault(k);
        }
        let vars: Vec<Var> = self.inputs.iter().map(|t| tape.leaf(t)).collect();
        let loss = self.objective(&mut tape, &vars)?;
        tape.backward(loss)?;

        let h = opts.step;
        let mut worst: f64 = 0.0;
        let mut checked = 0;
        for (i, (t, v)) in self.inputs.iter().zip(&vars).enumerate() {
            let analytic = tape.grad(*v).map(<[f64]>::to_vec).unwrap_or_else(|| vec![0.0; t.len()]);
            for j in 0..t.len() {
                let mut plus = self.inputs.clone();
                plus[i].values_mut()[j] += h;
                let mut minus = self.inputs.clone();
                minus[i].values_mut()[j] -= h;
                let numeric =
                    (self.value(&self.store, &plus)? - self.value(&self.store, &minus)?) / (2.0 * h);
                worst = worst.max(relative_error(analytic[j], numeric, opts.floor));
                checked += 1;
            }
        }
        let grads: Vec<Vec<f64>> = self
            .store
            .ids()
            .map(|id| {
                tape.param_grads()
                    .find(|(p, _)| *p == id)
                    .map(|(_, g)| g.to_vec())
                    .unwrap_or_else(|| vec![0.0; self.store.get(id).len()])
            })
            .collect();
        drop(tape);
        let mut store = self.store.clone();
        for (k, id) in self.store.ids().enumerate() {
            for j in 0..self.store.get(id).len() {
                let orig = self.store.get(id).values()[j];
                store.get_mut(id).values_mut()[j] = orig + h;
                let up = self.value(&store, &self.inputs)?;
                store.get_mut(id).values_mut()[j] = orig - h;
                let down = self.value(&store, &self.inputs)?;
                store.get_mut(id).values_mut()[j] = orig;
                let numeric = (up - down) / (2.0 * h);
                worst = worst.max(relative_error(grads[k][j], numeric, opts.floor));
                checked += 1;
            }
        }
        Ok((worst, checked))
    }
}

fn rand_tensor(rng: &mut ChaCha8Rng, shape: &[usize]) -> Tensor {
    let n = shape.iter().product();
    Tensor::new(shape.to_vec(), (0..n).map(|_| rng.random_range(-1.0..1.0)).collect())
        .expect("shape matches")
}

/// Random values bounded away from zero, for ops with a kink there.
fn rand_away_from_zero(rng: &mut ChaCha8Rng, shape: &[usize]) -> Tensor {
    let mut t = rand_tensor(rng, shape);
    for v in t.values_mut() {
        *v = v.signum() * (0.1 + v.abs());
    }
    t
}

fn op_cases() -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let r = &mut rng;
    let none = ParamStore::new;
    let mut cases = Vec::new();
    let mut op = |name: &str, inputs: Vec<Tensor>, f: Box<dyn Fn(&mut Tape, &[Var]) -> Result<Var>>| {
        cases.push(Case {
            scope: Scope::Ops,
            name: format!("op/{name}"),
            store: none(),
            inputs: inputs.into_iter().map(Tensor::with_grad).collect(),
            f,
        });
    };
    op("matmul", vec![rand_tensor(r, &[3, 4]), rand_tensor(r, &[4, 2])], Box::new(|t, v| t.matmul(v[0], v[1])));
    op("matmul_vec", vec![rand_tensor(r, &[4]), rand_tensor(r, &[4, 3])], Box::new(|t, v| t.matmul(v[0], v[1])));
    op("add", vec![rand_tensor(r, &[2, 3]), rand_tensor(r, &[2, 3])], Box::new(|t, v| t.add(v[0], v[1])));
    op("sub", vec![rand_tensor(r, &[4]), rand_tensor(r, &[4])], Box::new(|t, v| t.sub(v[0], v[1])));
    op("mul", vec![rand_tensor(r, &[2, 3]), rand_tensor(r, &[2, 3])], Box::new(|t, v| t.mul(v[0], v[1])));
    op("scale", vec![rand_tensor(r, &[3])], Box::new(|t, v| Ok(t.scale(v[0], -2.5))));
    op("relu", vec![rand_away_from_zero(r, &[2, 4])], Box::new(|t, v| Ok(t.relu(v[0]))));
    op("sigmoid", vec![rand_tensor(r, &[5])], Box::new(|t, v| Ok(t.sigmoid(v[0]))));
    op("tanh", vec![rand_tensor(r, &[5])], Box::new(|t, v| Ok(t.tanh(v[0]))));
    op("softmax_row", vec![rand_tensor(r, &[3, 4])], Box::new(|t, v| t.softmax_row(v[0])));
    op("concat", vec![rand_tensor(r, &[2, 2]), rand_tensor(r, &[2, 3])], Box::new(|t, v| t.concat(&[v[0], v[1]])));
    op("slice", vec![rand_tensor(r, &[2, 5])], Box::new(|t, v| t.slice(v[0], 1, 3)));
    op("mean_pool", vec![rand_tensor(r, &[3, 4])], Box::new(|t, v| {
        let a = t.mean_pool(v[0], 0)?;
        let b = t.mean_pool(v[0], 1)?;
        let a = t.slice(a, 0, 3)?;
        t.mul(a, b)
    }));
    op("dot", vec![rand_tensor(r, &[4]), rand_tensor(r, &[4])], Box::new(|t, v| t.dot(v[0], v[1])));
    op("sum", vec![rand_tensor(r, &[2, 3])], Box::new(|t, v| {
        let s = t.sum(v[0]);
        Ok(t.mul(s, s)?)
    }));
    op("embedding", vec![rand_tensor(r, &[5, 3])], Box::new(|t, v| t.embedding(v[0], &[2, 4, 2, 1])));
    op("cross_entropy", vec![rand_tensor(r, &[5])], Box::new(|t, v| t.cross_entropy(v[0], 3)));
    op("row", vec![rand_tensor(r, &[3, 2])], Box::new(|t, v| t.row(v[0], 1)));
    op("stack", vec![rand_tensor(r, &[3]), rand_tensor(r, &[3])], Box::new(|t, v| t.stack(&[v[0], v[1], v[0]])));
    op("set_row", vec![rand_tensor(r, &[3, 2]), rand_tensor(r, &[2])], Box::new(|t, v| t.set_row(v[0], 2, v[1])));
    op("transpose", vec![rand_tensor(r, &[2, 3])], Box::new(|t, v| t.transpose(v[0])));
    op("scale_rows", vec![rand_tensor(r, &[3, 2]), rand_tensor(r, &[3])], Box::new(|t, v| t.scale_rows(v[0], v[1])));
    op("reshape", vec![rand_tensor(r, &[2, 3])], Box::new(|t, v| t.reshape(v[0], &[3, 2])));
    cases
}

fn segment_input(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Tensor {
    rand_tensor(rng, &[n, d])
}

fn features(x: Var, n: usize, d: usize) -> SegmentFeatures {
    SegmentFeatures { x, n, d }
}

fn block_cases() -> Result<Vec<Case>> {
    const N: usize = 4;
    const D: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let r = &mut rng;
    let mut cases = Vec::new();
    let block = Scope::Blocks;

    let mut s = ParamStore::new();
    let cell = LstmCell::new(&mut s, "cell", 3, D, &mut Init::new(1))?;
    let c = cell.clone();
    cases.push(Case::new(block, "block/lstm_step", s.clone(), vec![rand_tensor(r, &[3]), rand_tensor(r, &[D]), rand_tensor(r, &[D])], move |t, v| {
        let st = c.step(t, v[0], crate::nn::LstmState { h: v[1], c: v[2] })?;
        t.concat(&[st.h, st.c])
    }));
    cases.push(Case::new(block, "block/lstm_sequence", s, vec![rand_tensor(r, &[N, 3])], move |t, v| cell.encode_rows(t, v[0])));

    let mut s = ParamStore::new();
    let mlp = Mlp::new(&mut s, "mlp", &[4, 6, 3], &mut Init::new(2))?;
    cases.push(Case::new(block, "block/mlp", s, vec![rand_tensor(r, &[4])], move |t, v| mlp.forward(t, v[0])));

    let mut s = ParamStore::new();
    let emb = EmbeddingTable::new(&mut s, "emb", 6, 3, &mut Init::new(3))?;
    cases.push(Case::new(block, "block/embedding_lookup", s, vec![], move |t, _| {
        // row 0 is the frozen padding row
        let rows = emb.lookup(t, &[2, 5, 2, 3, 1])?;
        t.concat(&rows)
    }));

    cases.push(Case::new(block, "block/question_attend", ParamStore::new(), vec![rand_tensor(r, &[D]), segment_input(r, N, D)], |t, v| {
        let (a, x) = question_attend(t, v[0], v[1])?;
        let x = t.reshape(x, &[N * D])?;
        t.concat(&[a, x])
    }));

    for mode in [Adjacency::Softmax, Adjacency::Raw] {
        let tag = match mode {
            Adjacency::Softmax => "softmax",
            Adjacency::Raw => "raw",
        };
        cases.push(Case::new(block, format!("block/adjacency_{tag}"), ParamStore::new(), vec![segment_input(r, N, D)], move |t, v| build_adjacency(t, v[0], mode)));
        let mut s = ParamStore::new();
        let w = s.add("w", Init::new(4).uniform(&[D, D], D))?;
        cases.push(Case::new(block, format!("block/gcn_layer_{tag}"), s, vec![rand_away_from_zero(r, &[N, D])], move |t, v| {
            let w = t.param(w);
            gcn_layer(t, v[0], w, mode)
        }));
    }

    for attend in [false, true] {
        let sa = if attend { "_sa" } else { "" };
        let mut s = ParamStore::new();
        let rnn = LstmCell::new(&mut s, "seq", D, D, &mut Init::new(5))?;
        cases.push(Case::new(block, format!("block/seq{sa}"), s, vec![segment_input(r, N, D), rand_tensor(r, &[D])], move |t, v| {
            seq_forward(t, &rnn, &features(v[0], N, D), attend.then_some(v[1]))
        }));

        let mut s = ParamStore::new();
        let mut init = Init::new(6);
        let ws = (0..GCN_LAYERS)
            .map(|l| s.add(format!("gcn.{l}"), init.uniform(&[D, D], D)))
            .collect::<Result<Vec<_>>>()?;
        cases.push(Case::new(block, format!("block/gcn{sa}"), s, vec![segment_input(r, N, D), rand_tensor(r, &[D])], move |t, v| {
            gcn_forward(t, &ws, &features(v[0], N, D), attend.then_some(v[1]), Adjacency::Softmax)
        }));

        let mut s = ParamStore::new();
        let mut init = Init::new(7);
        let w = s.add("rgcn.w", init.uniform(&[D, D], D))?;
        let cell = LstmCell::new(&mut s, "rgcn.cell", 2 * D, D, &mut init)?;
        cases.push(Case::new(block, format!("block/rgcn{sa}"), s, vec![segment_input(r, N, D), rand_tensor(r, &[D])], move |t, v| {
            rgcn_forward(t, &cell, w, &features(v[0], N, D), attend.then_some(v[1]), Adjacency::Softmax).map(|o| o.v)
        }));
    }

    let mut s = ParamStore::new();
    let enc = LstmCell::new(&mut s, "enc", 3, D, &mut Init::new(8))?;
    let segs = vec![rand_tensor(r, &[2, 3]), rand_tensor(r, &[1, 3]), rand_tensor(r, &[3, 3])];
    cases.push(Case::new(block, "block/segment_encoder", s, vec![], move |t, _| {
        let x = encode_segments(t, &enc, &segs)?;
        t.reshape(x.x, &[3 * D])
    }));

    let mut s = ParamStore::new();
    let rnn = LstmCell::new(&mut s, "naive", 3, D, &mut Init::new(9))?;
    let frames = rand_tensor(r, &[5, 3]);
    cases.push(Case::new(block, "block/naive_rnn", s, vec![], move |t, _| naive_rnn_forward(t, &rnn, &frames)));

    let mut s = ParamStore::new();
    let te = TextEncoder::new(&mut s, 7, 3, D, &mut Init::new(10))?;
    cases.push(Case::new(block, "block/hierarchical_text", s, vec![], move |t, _| {
        te.hierarchical_encode(t, &[vec![2, 3, 6], vec![], vec![4]], 3)
    }));

    let mut s = ParamStore::new();
    let head = McHead::new(&mut s, 2 * D, D, 4, &mut Init::new(11))?;
    let answers: Vec<Tensor> = (0..5).map(|_| rand_tensor(r, &[D])).collect();
    let mut inputs = vec![rand_tensor(r, &[2 * D])];
    inputs.extend(answers);
    cases.push(Case::new(block, "block/mc_head_loss", s, inputs, move |t, v| {
        let scores = head.scores(t, v[0], &v[1..])?;
        mc_loss(t, scores, 2)
    }));

    let mut s = ParamStore::new();
    let head = KspaceHead::new(&mut s, 2 * D, 4, 6, &mut Init::new(12))?;
    cases.push(Case::new(block, "block/kspace_head_loss", s, vec![rand_tensor(r, &[2 * D])], move |t, v| {
        let logits = head.logits(t, v[0])?;
        t.cross_entropy(logits, 4)
    }));

    cases.push(Case::new(block, "block/fuse", ParamStore::new(), vec![rand_tensor(r, &[D]), rand_tensor(r, &[D]), rand_tensor(r, &[D])], |t, v| {
        fuse(t, FusionLayout { video: true, text: true }, Some(v[0]), Some(v[1]), v[2])
    }));
    Ok(cases)
}

/// A tiny two-video dataset in prepared form, for end-to-end checks.
fn toy_videos(rng: &mut ChaCha8Rng, frame_dim: usize, with_text: bool) -> Result<Vec<PreparedVideo>> {
    let mut videos = Vec::new();
    for (vi, n) in [3usize, 4].into_iter().enumerate() {
        let segments = (0..n)
            .map(|s| rand_tensor(rng, &[1 + s % 2, frame_dim]))
            .collect::<Vec<_>>();
        let text = with_text.then(|| (0..n).map(|s| if s == 1 { vec![] } else { vec![2 + s, 3] }).collect());
        let questions = (0..2)
            .map(|k| PreparedQuestion {
                question: vec![2, 3 + k, 4 + vi],
                choices: (0..5).map(|c| vec![2 + c, 3 + (c + k) % 4]).collect(),
                correct: (vi + 2 * k) % 5,
                answer_class: Some((vi + k) % 3),
                tags: vec![Tag::Order],
            })
            .collect();
        videos.push(PreparedVideo {
            id: format!("toy{vi}"),
            frames: VideoFrames::new(segments)?,
            text,
            questions,
        });
    }
    Ok(videos)
}

fn model_case(variant: VideoVariant, head: HeadKind, modalities: ModalityConfig) -> Result<Case> {
    const FRAME_DIM: usize = 4;
    let config = RunConfig {
        model: variant,
        head,
        modalities,
        hidden: 6,
        embed: 4,
        ..RunConfig::default()
    };
    let words = TokenVocab::build(["a b c d e f g h"]);
    let vocab = Vocabularies {
        words,
        text: modalities.text().map(|_| TokenVocab::build(["p q r s t"])),
        answers: (head == HeadKind::Kspace)
            .then(|| AnswerVocabulary::from_answers(vec!["x".into(), "y".into(), "z".into()])),
        frame_dim: FRAME_DIM,
    };
    let model = QaModel::new(&config, vocab)?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let videos = toy_videos(&mut rng, FRAME_DIM, modalities.text().is_some())?;
    let name = match (head, modalities) {
        (HeadKind::Mc, ModalityConfig::V) => format!("model/{variant}"),
        _ => format!("model/{variant}+{head}+{modalities}"),
    };
    let store = model.store.clone();
    Ok(Case::new(Scope::Models, name, store, vec![], move |t, _| {
        let mut cache = EncodingCache::default();
        let mut losses = Vec::new();
        for v in &videos {
            losses.extend(model.forward_video(t, v, &mut cache)?.into_iter().map(|o| o.loss));
        }
        let mut sum = losses[0];
        for &l in &losses[1..] {
            sum = t.add(sum, l)?;
        }
        Ok(t.scale(sum, 1.0 / losses.len() as f64))
    }))
}

fn model_cases() -> Result<Vec<Case>> {
    let mut cases = VideoVariant::ALL
        .iter()
        .map(|&v| model_case(v, HeadKind::Mc, ModalityConfig::V))
        .collect::<Result<Vec<_>>>()?;
    cases.push(model_case(VideoVariant::RgcnSa, HeadKind::Kspace, ModalityConfig::V)?);
    cases.push(model_case(VideoVariant::RgcnSa, HeadKind::Mc, ModalityConfig::VD)?);
    cases.push(model_case(VideoVariant::Gcn, HeadKind::Mc, ModalityConfig::Cc)?);
    Ok(cases)
}

/// Runs every check in `scope`. Failures, including errors raised while
/// building or running a component, are report entries.
pub fn gradcheck(scope: Scope, opts: &GradCheckOptions) -> GradReport {
    let mut cases: Vec<Case> = Vec::new();
    let mut entries = Vec::new();
    let mut setup_failure = |scope: Scope, name: &str, e: Error| {
        entries.push(GradEntry {
            scope,
            component: name.to_string(),
            max_rel_error: f64::INFINITY,
            checked: 0,
            passed: false,
            error: Some(e.to_string()),
        })
    };
    if scope.includes(Scope::Ops) {
        cases.extend(op_cases());
    }
    if scope.includes(Scope::Blocks) {
        match block_cases() {
            Ok(c) => cases.extend(c),
            Err(e) => setup_failure(Scope::Blocks, "block/setup", e),
        }
    }
    if scope.includes(Scope::Models) {
        match model_cases() {
            Ok(c) => cases.extend(c),
            Err(e) => setup_failure(Scope::Models, "model/setup", e),
        }
    }
    for case in &cases {
        let entry = match case.check(opts) {
            Ok((err, checked)) => GradEntry {
                scope: case.scope,
                component: case.name.clone(),
                max_rel_error: err,
                checked,
                passed: err < opts.tolerance,
                error: None,
            },
            Err(e) => GradEntry {
                scope: case.scope,
                component: case.name.clone(),
                max_rel_error: f64::INFINITY,
                checked: 0,
                passed: false,
                error: Some(e.to_string()),
            },
        };
        entries.push(entry);
    }
    GradReport {
        tolerance: opts.tolerance,
        entries,
    }
}
