//! Building blocks shared by every model: embeddings, the LSTM cell, MLPs and
//! question attention.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autodiff::{ParamId, ParamStore, Tape, Tensor, Var};
use crate::error::{Error, Result};

/// Reserved token ids.
pub const PAD_ID: usize = 0;
pub const UNK_ID: usize = 1;

/// Parameter initializer: uniform in `±1/√fan_in`, biases zero.
pub struct Init {
    rng: ChaCha8Rng,
    zero: bool,
}

impl Init {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            zero: false,
        }
    }

    /// Every weight and bias (including the forget bias) starts at zero.
    pub fn zeros() -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(0),
            zero: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn uniform(&mut self, shape: &[usize], fan_in: usize) -> Tensor {
        let n: usize = shape.iter().product();
        if self.zero {
            return Tensor::zeros(shape);
        }
        let bound = 1.0 / (fan_in as f64).sqrt();
        let values = (0..n)
            .map(|_| self.rng.random_range(-bound..=bound))
            .collect();
        Tensor::new(shape.to_vec(), values).expect("shape product matches")
    }
}

#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    pub table: ParamId,
    pub vocab_size: usize,
    pub dim: usize,
}

impl EmbeddingTable {
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        vocab_size: usize,
        dim: usize,
        init: &mut Init,
    ) -> Result<Self> {
        if vocab_size < 2 || dim == 0 {
            return Err(Error::contract(format!(
                "embedding `{name}` needs vocab ≥ 2 and dim ≥ 1"
            )));
        }
        let mut t = init.uniform(&[vocab_size, dim], dim);
        // the padding row stays zero
        t.values_mut()[..dim].iter_mut().for_each(|v| *v = 0.0);
        let table = store.add(format!("{name}.table"), t)?;
        Ok(Self {
            table,
            vocab_size,
            dim,
        })
    }

    /// One `[dim]` vector per token.
    pub fn lookup(&self, tape: &mut Tape, ids: &[usize]) -> Result<Vec<Var>> {
        let t = tape.param(self.table);
        let m = tape.embedding(t, ids)?;
        (0..ids.len()).map(|i| tape.row(m, i)).collect()
    }
}

/// Four-gate LSTM cell. Gate blocks in the fused weight are ordered
/// input, forget, candidate, output.
#[derive(Debug, Clone)]
pub struct LstmCell {
    pub weight: ParamId,
    pub bias: ParamId,
    pub input_dim: usize,
    pub hidden_dim: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LstmState {
    pub h: Var,
    pub c: Var,
}

impl LstmCell {
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        input_dim: usize,
        hidden_dim: usize,
        init: &mut Init,
    ) -> Result<Self> {
        let fan_in = input_dim + hidden_dim;
        let weight = init.uniform(&[fan_in, 4 * hidden_dim], fan_in);
        let mut bias = Tensor::zeros(&[4 * hidden_dim]);
        if !init.is_zero() {
            bias.values_mut()[hidden_dim..2 * hidden_dim]
                .iter_mut()
                .for_each(|v| *v = 1.0);
        }
        Ok(Self {
            weight: store.add(format!("{name}.weight"), weight)?,
            bias: store.add(format!("{name}.bias"), bias)?,
            input_dim,
            hidden_dim,
        })
    }

    pub fn zero_state(&self, tape: &mut Tape) -> LstmState {
        let z = tape.zeros(&[self.hidden_dim]);
        LstmState { h: z, c: z }
    }

    pub fn step(&self, tape: &mut Tape, x: Var, state: LstmState) -> Result<LstmState> {
        if tape.shape(x) != [self.input_dim] {
            return Err(Error::dim("lstm step", tape.shape(x), &[self.input_dim]));
        }
        let hd = self.hidden_dim;
        let xh = tape.concat(&[x, state.h])?;
        let w = tape.param(self.weight);
        let b = tape.param(self.bias);
        let pre = tape.matmul(xh, w)?;
        let gates = tape.add(pre, b)?;
        let i = tape.slice(gates, 0, hd)?;
        let f = tape.slice(gates, hd, hd)?;
        let g = tape.slice(gates, 2 * hd, hd)?;
        let o = tape.slice(gates, 3 * hd, hd)?;
        let i = tape.sigmoid(i);
        let f = tape.sigmoid(f);
        let g = tape.tanh(g);
        let o = tape.sigmoid(o);
        let keep = tape.mul(f, state.c)?;
        let write = tape.mul(i, g)?;
        let c = tape.add(keep, write)?;
        let tc = tape.tanh(c);
        let h = tape.mul(o, tc)?;
        Ok(LstmState { h, c })
    }

    /// Runs the cell from the zero state. Returns the final hidden state and
    /// the hidden state after every step.
    pub fn encode_sequence(&self, tape: &mut Tape, inputs: &[Var]) -> Result<(Var, Vec<Var>)> {
        if inputs.is_empty() {
            return Err(Error::contract("encode_sequence on an empty sequence"));
        }
        let mut state = self.zero_state(tape);
        let mut hiddens = Vec::with_capacity(inputs.len());
        for &x in inputs {
            state = self.step(tape, x, state)?;
            hiddens.push(state.h);
        }
        Ok((state.h, hiddens))
    }

    /// Same as [`encode_sequence`](Self::encode_sequence) over the rows of a matrix.
    pub fn encode_rows(&self, tape: &mut Tape, rows: Var) -> Result<Var> {
        let n = tape.shape(rows)[0];
        let xs = (0..n)
            .map(|i| tape.row(rows, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode_sequence(tape, &xs)?.0)
    }
}

/// Multi-layer perceptron: ReLU between layers, identity on the output.
#[derive(Debug, Clone)]
pub struct Mlp {
    pub layers: Vec<(ParamId, ParamId)>,
    pub sizes: Vec<usize>,
}

impl Mlp {
    pub fn new(
        store: &mut ParamStore,
        name: &str,
        sizes: &[usize],
        init: &mut Init,
    ) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::contract(format!("bad MLP sizes {sizes:?}")));
        }
        let mut layers = Vec::new();
        for (l, pair) in sizes.windows(2).enumerate() {
            let w = store.add(
                format!("{name}.{l}.weight"),
                init.uniform(&[pair[0], pair[1]], pair[0]),
            )?;
            let b = store.add(format!("{name}.{l}.bias"), Tensor::zeros(&[pair[1]]))?;
            layers.push((w, b));
        }
        Ok(Self {
            layers,
            sizes: sizes.to_vec(),
        })
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    /// Width of the first hidden layer (or the output, for one-layer MLPs).
    pub fn first_width(&self) -> usize {
        self.sizes[1]
    }

    pub fn forward(&self, tape: &mut Tape, x: Var) -> Result<Var> {
        if tape.shape(x) != [self.input_dim()] {
            return Err(Error::dim("mlp", tape.shape(x), &[self.input_dim()]));
        }
        let mut h = x;
        for (l, &(w, b)) in self.layers.iter().enumerate() {
            let w = tape.param(w);
            let b = tape.param(b);
            let z = tape.matmul(h, w)?;
            h = tape.add(z, b)?;
            if l + 1 < self.layers.len() {
                h = tape.relu(h);
            }
        }
        Ok(h)
    }
}

/// Attention weights `a = softmax(X q)` and the re-weighted rows `a_i X_i`.
pub fn question_attend(tape: &mut Tape, q: Var, xs: Var) -> Result<(Var, Var)> {
    let s = tape.shape(xs).to_vec();
    if s.len() != 2 || tape.shape(q) != [s[1]] {
        return Err(Error::dim("question_attend", &s, tape.shape(q)));
    }
    let qc = tape.reshape(q, &[s[1], 1])?;
    let logits = tape.matmul(xs, qc)?;
    let logits = tape.reshape(logits, &[s[0]])?;
    let a = tape.softmax_row(logits)?;
    let attended = tape.scale_rows(xs, a)?;
    Ok((a, attended))
}
