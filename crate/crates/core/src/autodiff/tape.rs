//! Wengert tape: every operation appends a node holding its forward value and
//! the references its backward rule needs. `backward` replays nodes in reverse.

use std::fmt;
use std::str::FromStr;

use super::{kernels, ParamId, ParamStore, Tensor};
use crate::error::{Error, Result};

/// Handle to a node on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Operation kinds, used for diagnostics and fault injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Leaf,
    Param,
    MatMul,
    Add,
    Sub,
    Mul,
    Scale,
    Relu,
    Sigmoid,
    Tanh,
    SoftmaxRow,
    Concat,
    Slice,
    MeanPool,
    Dot,
    Sum,
    Embedding,
    CrossEntropy,
    Row,
    Stack,
    SetRow,
    Transpose,
    ScaleRows,
    Reshape,
}

impl OpKind {
    pub const ALL: [OpKind; 24] = [
        OpKind::Leaf,
        OpKind::Param,
        OpKind::MatMul,
        OpKind::Add,
        OpKind::Sub,
        OpKind::Mul,
        OpKind::Scale,
        OpKind::Relu,
        OpKind::Sigmoid,
        OpKind::Tanh,
        OpKind::SoftmaxRow,
        OpKind::Concat,
        OpKind::Slice,
        OpKind::MeanPool,
        OpKind::Dot,
        OpKind::Sum,
        OpKind::Embedding,
        OpKind::CrossEntropy,
        OpKind::Row,
        OpKind::Stack,
        OpKind::SetRow,
        OpKind::Transpose,
        OpKind::ScaleRows,
        OpKind::Reshape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Leaf => "leaf",
            OpKind::Param => "param",
            OpKind::MatMul => "matmul",
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
            OpKind::Scale => "scale",
            OpKind::Relu => "relu",
            OpKind::Sigmoid => "sigmoid",
            OpKind::Tanh => "tanh",
            OpKind::SoftmaxRow => "softmax_row",
            OpKind::Concat => "concat",
            OpKind::Slice => "slice",
            OpKind::MeanPool => "mean_pool",
            OpKind::Dot => "dot",
            OpKind::Sum => "sum",
            OpKind::Embedding => "embedding_lookup",
            OpKind::CrossEntropy => "cross_entropy",
            OpKind::Row => "row",
            OpKind::Stack => "stack",
            OpKind::SetRow => "set_row",
            OpKind::Transpose => "transpose",
            OpKind::ScaleRows => "scale_rows",
            OpKind::Reshape => "reshape",
        }
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        OpKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown op `{s}`")))
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    Param,
    MatMul(Var, Var),
    Add(Var, Var),
    Sub(Var, Var),
    Mul(Var, Var),
    Scale(Var, f64),
    Relu(Var),
    Sigmoid(Var),
    Tanh(Var),
    SoftmaxRow(Var),
    Concat(Vec<Var>),
    Slice { x: Var, start: usize },
    MeanPool { x: Var, axis: usize },
    Dot(Var, Var),
    Sum(Var),
    Embedding { table: Var, ids: Vec<usize> },
    CrossEntropy { logits: Var, target: usize },
    Row { x: Var, i: usize },
    Stack(Vec<Var>),
    SetRow { x: Var, i: usize, row: Var },
    Transpose(Var),
    ScaleRows { x: Var, w: Var },
    Reshape(Var),
}

impl Op {
    fn kind(&self) -> OpKind {
        match self {
            Op::Leaf => OpKind::Leaf,
            Op::Param => OpKind::Param,
            Op::MatMul(..) => OpKind::MatMul,
            Op::Add(..) => OpKind::Add,
            Op::Sub(..) => OpKind::Sub,
            Op::Mul(..) => OpKind::Mul,
            Op::Scale(..) => OpKind::Scale,
            Op::Relu(_) => OpKind::Relu,
            Op::Sigmoid(_) => OpKind::Sigmoid,
            Op::Tanh(_) => OpKind::Tanh,
            Op::SoftmaxRow(_) => OpKind::SoftmaxRow,
            Op::Concat(_) => OpKind::Concat,
            Op::Slice { .. } => OpKind::Slice,
            Op::MeanPool { .. } => OpKind::MeanPool,
            Op::Dot(..) => OpKind::Dot,
            Op::Sum(_) => OpKind::Sum,
            Op::Embedding { .. } => OpKind::Embedding,
            Op::CrossEntropy { .. } => OpKind::CrossEntropy,
            Op::Row { .. } => OpKind::Row,
            Op::Stack(_) => OpKind::Stack,
            Op::SetRow { .. } => OpKind::SetRow,
            Op::Transpose(_) => OpKind::Transpose,
            Op::ScaleRows { .. } => OpKind::ScaleRows,
            Op::Reshape(_) => OpKind::Reshape,
        }
    }
}

struct Node {
    shape: Vec<usize>,
    value: Vec<f64>,
    op: Op,
    needs_grad: bool,
}

/// Records one forward computation. Parameters are read from an optional
/// borrowed [`ParamStore`]; each is copied onto the tape on first use.
pub struct Tape<'s> {
    nodes: Vec<Node>,
    store: Option<&'s ParamStore>,
    param_vars: Vec<Option<Var>>,
    grads: Vec<Option<Vec<f64>>>,
    fault: Option<OpKind>,
}

impl Default for Tape<'_> {
    fn default() -> Self {
        Self::new()
    }
}

impl<'s> Tape<'s> {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            store: None,
            param_vars: Vec::new(),
            grads: Vec::new(),
            fault: None,
        }
    }

    pub fn with_params(store: &'s ParamStore) -> Self {
        Self {
            param_vars: vec![None; store.len()],
            store: Some(store),
            ..Self::new()
        }
    }

    /// Scales the backward contribution of every `kind` node by 1.5.
    /// Exists so gradient checks can be shown to catch a broken rule.
    #[doc(hidden)]
    pub fn inject_fault(&mut self, kind: OpKind) {
        self.fault = Some(kind);
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn shape(&self, v: Var) -> &[usize] {
        &self.nodes[v.0].shape
    }

    pub fn value(&self, v: Var) -> &[f64] {
        &self.nodes[v.0].value
    }

    pub fn scalar(&self, v: Var) -> f64 {
        self.nodes[v.0].value[0]
    }

    pub fn kind(&self, v: Var) -> OpKind {
        self.nodes[v.0].op.kind()
    }

    pub fn tensor(&self, v: Var) -> Tensor {
        let n = &self.nodes[v.0];
        Tensor::new(n.shape.clone(), n.value.clone()).expect("tape node is well formed")
    }

    fn push(&mut self, shape: Vec<usize>, value: Vec<f64>, op: Op, needs_grad: bool) -> Var {
        debug_assert_eq!(shape.iter().product::<usize>(), value.len());
        self.nodes.push(Node {
            shape,
            value,
            op,
            needs_grad,
        });
        Var(self.nodes.len() - 1)
    }

    fn needs(&self, v: Var) -> bool {
        self.nodes[v.0].needs_grad
    }

    /// Places a tensor on the tape. Gradients flow to it iff it requires grad.
    pub fn leaf(&mut self, t: &Tensor) -> Var {
        self.push(
            t.shape().to_vec(),
            t.values().to_vec(),
            Op::Leaf,
            t.requires_grad(),
        )
    }

    pub fn constant(&mut self, shape: &[usize], values: Vec<f64>) -> Result<Var> {
        let t = Tensor::new(shape.to_vec(), values)?;
        Ok(self.leaf(&t))
    }

    pub fn zeros(&mut self, shape: &[usize]) -> Var {
        self.leaf(&Tensor::zeros(shape))
    }

    pub fn param(&mut self, id: ParamId) -> Var {
        if let Some(v) = self.param_vars.get(id.0).copied().flatten() {
            return v;
        }
        let store = self.store.expect("tape has no parameter store attached");
        let t = store.get(id);
        let v = self.push(t.shape().to_vec(), t.values().to_vec(), Op::Param, true);
        self.param_vars[id.0] = Some(v);
        v
    }

    // ---- forward operations ------------------------------------------------

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (sa, sb) = (self.shape(a).to_vec(), self.shape(b).to_vec());
        let (m, k) = match sa.len() {
            1 => (1, sa[0]),
            2 => (sa[0], sa[1]),
            _ => return Err(Error::dim("matmul", &sa, &sb)),
        };
        if sb.len() != 2 || sb[0] != k {
            return Err(Error::dim("matmul", &sa, &sb));
        }
        let n = sb[1];
        let mut out = vec![0.0; m * n];
        kernels::matmul(self.value(a), self.value(b), &mut out, m, k, n);
        let shape = if sa.len() == 1 { vec![n] } else { vec![m, n] };
        let ng = self.needs(a) || self.needs(b);
        Ok(self.push(shape, out, Op::MatMul(a, b), ng))
    }

    fn same_shape(&self, op: &'static str, a: Var, b: Var) -> Result<()> {
        if self.shape(a) != self.shape(b) {
            return Err(Error::dim(op, self.shape(a), self.shape(b)));
        }
        Ok(())
    }

    fn zip_with(&mut self, a: Var, b: Var, op: Op, f: impl Fn(f64, f64) -> f64) -> Var {
        let out = self
            .value(a)
            .iter()
            .zip(self.value(b))
            .map(|(&x, &y)| f(x, y))
            .collect();
        let ng = self.needs(a) || self.needs(b);
        self.push(self.shape(a).to_vec(), out, op, ng)
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("add", a, b)?;
        Ok(self.zip_with(a, b, Op::Add(a, b), |x, y| x + y))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("sub", a, b)?;
        Ok(self.zip_with(a, b, Op::Sub(a, b), |x, y| x - y))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("mul", a, b)?;
        Ok(self.zip_with(a, b, Op::Mul(a, b), |x, y| x * y))
    }

    fn map(&mut self, x: Var, op: Op, f: impl Fn(f64) -> f64) -> Var {
        let out = self.value(x).iter().map(|&v| f(v)).collect();
        let ng = self.needs(x);
        self.push(self.shape(x).to_vec(), out, op, ng)
    }

    pub fn scale(&mut self, x: Var, c: f64) -> Var {
        self.map(x, Op::Scale(x, c), |v| v * c)
    }

    pub fn relu(&mut self, x: Var) -> Var {
        self.map(x, Op::Relu(x), |v| if v > 0.0 { v } else { 0.0 })
    }

    pub fn sigmoid(&mut self, x: Var) -> Var {
        self.map(x, Op::Sigmoid(x), kernels::sigmoid)
    }

    pub fn tanh(&mut self, x: Var) -> Var {
        self.map(x, Op::Tanh(x), f64::tanh)
    }

    /// Softmax over the trailing axis of each row.
    pub fn softmax_row(&mut self, x: Var) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        let n = *shape
            .last()
            .ok_or_else(|| Error::contract("softmax_row needs at least one axis"))?;
        let xs = self.value(x);
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("softmax_row input".into()));
        }
        let mut out = xs.to_vec();
        for row in out.chunks_mut(n) {
            kernels::softmax_in_place(row);
        }
        let ng = self.needs(x);
        Ok(self.push(shape, out, Op::SoftmaxRow(x), ng))
    }

    /// Concatenation along the last axis. Inputs are all rank 1, or all rank 2
    /// with the same row count.
    pub fn concat(&mut self, xs: &[Var]) -> Result<Var> {
        let first = *xs
            .first()
            .ok_or_else(|| Error::contract("concat of zero tensors"))?;
        let rank = self.shape(first).len();
        let rows = if rank == 2 { self.shape(first)[0] } else { 1 };
        let mut cols = 0;
        for &x in xs {
            let s = self.shape(x);
            let ok = match rank {
                1 => s.len() == 1,
                2 => s.len() == 2 && s[0] == rows,
                _ => false,
            };
            if !ok {
                return Err(Error::dim("concat", self.shape(first), s));
            }
            cols += s[s.len() - 1];
        }
        let mut out = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for &x in xs {
                let w = *self.shape(x).last().unwrap();
                out.extend_from_slice(&self.value(x)[r * w..(r + 1) * w]);
            }
        }
        let shape = if rank == 1 {
            vec![cols]
        } else {
            vec![rows, cols]
        };
        let ng = xs.iter().any(|&x| self.needs(x));
        Ok(self.push(shape, out, Op::Concat(xs.to_vec()), ng))
    }

    /// Columns `start..start + len` of the last axis.
    pub fn slice(&mut self, x: Var, start: usize, len: usize) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        let w = *shape.last().unwrap_or(&0);
        if len == 0 || start + len > w || shape.len() > 2 {
            return Err(Error::dim("slice", &shape, &[start, len]));
        }
        let rows = if shape.len() == 2 { shape[0] } else { 1 };
        let xs = self.value(x);
        let mut out = Vec::with_capacity(rows * len);
        for r in 0..rows {
            out.extend_from_slice(&xs[r * w + start..r * w + start + len]);
        }
        let new_shape = if shape.len() == 2 {
            vec![rows, len]
        } else {
            vec![len]
        };
        let ng = self.needs(x);
        Ok(self.push(new_shape, out, Op::Slice { x, start }, ng))
    }

    /// Mean over `axis` of a rank-2 tensor (axis 0 pools rows into one row).
    pub fn mean_pool(&mut self, x: Var, axis: usize) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        if shape.len() != 2 || axis > 1 {
            return Err(Error::dim("mean_pool", &shape, &[axis]));
        }
        let (r, c) = (shape[0], shape[1]);
        let xs = self.value(x);
        let out = if axis == 0 {
            let mut acc = vec![0.0; c];
            for row in xs.chunks(c) {
                for (a, v) in acc.iter_mut().zip(row) {
                    *a += v;
                }
            }
            acc.iter().map(|a| a / r as f64).collect::<Vec<_>>()
        } else {
            xs.chunks(c)
                .map(|row| row.iter().sum::<f64>() / c as f64)
                .collect()
        };
        let new_shape = vec![if axis == 0 { c } else { r }];
        let ng = self.needs(x);
        Ok(self.push(new_shape, out, Op::MeanPool { x, axis }, ng))
    }

    pub fn dot(&mut self, a: Var, b: Var) -> Result<Var> {
        if self.shape(a).len() != 1 {
            return Err(Error::dim("dot", self.shape(a), self.shape(b)));
        }
        self.same_shape("dot", a, b)?;
        let s = kernels::dot(self.value(a), self.value(b));
        let ng = self.needs(a) || self.needs(b);
        Ok(self.push(Vec::new(), vec![s], Op::Dot(a, b), ng))
    }

    pub fn sum(&mut self, x: Var) -> Var {
        let s = self.value(x).iter().sum();
        let ng = self.needs(x);
        self.push(Vec::new(), vec![s], Op::Sum(x), ng)
    }

    /// Gathers rows of `table` into a `[ids.len() × dim]` matrix.
    pub fn embedding(&mut self, table: Var, ids: &[usize]) -> Result<Var> {
        let shape = self.shape(table).to_vec();
        if shape.len() != 2 {
            return Err(Error::dim("embedding_lookup", &shape, &[ids.len()]));
        }
        if ids.is_empty() {
            return Err(Error::contract("embedding lookup of an empty sequence"));
        }
        let (vocab, dim) = (shape[0], shape[1]);
        let mut out = Vec::with_capacity(ids.len() * dim);
        for &id in ids {
            if id >= vocab {
                return Err(Error::Lookup {
                    what: "embedding table",
                    index: id,
                    len: vocab,
                });
            }
            out.extend_from_slice(&self.value(table)[id * dim..(id + 1) * dim]);
        }
        let ng = self.needs(table);
        Ok(self.push(
            vec![ids.len(), dim],
            out,
            Op::Embedding {
                table,
                ids: ids.to_vec(),
            },
            ng,
        ))
    }

    /// `logsumexp(logits) - logits[target]` over a flat logit vector.
    pub fn cross_entropy(&mut self, logits: Var, target: usize) -> Result<Var> {
        let xs = self.value(logits);
        let n = xs.len();
        if target >= n {
            return Err(Error::Lookup {
                what: "logits",
                index: target,
                len: n,
            });
        }
        if xs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("cross_entropy logits".into()));
        }
        let loss = kernels::logsumexp(xs) - xs[target];
        let ng = self.needs(logits);
        Ok(self.push(
            Vec::new(),
            vec![loss],
            Op::CrossEntropy { logits, target },
            ng,
        ))
    }

    pub fn row(&mut self, x: Var, i: usize) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        if shape.len() != 2 {
            return Err(Error::dim("row", &shape, &[i]));
        }
        if i >= shape[0] {
            return Err(Error::Lookup {
                what: "matrix rows",
                index: i,
                len: shape[0],
            });
        }
        let c = shape[1];
        let out = self.value(x)[i * c..(i + 1) * c].to_vec();
        let ng = self.needs(x);
        Ok(self.push(vec![c], out, Op::Row { x, i }, ng))
    }

    /// Stacks equal-length vectors into rows of a matrix.
    pub fn stack(&mut self, rows: &[Var]) -> Result<Var> {
        let first = *rows
            .first()
            .ok_or_else(|| Error::contract("stack of zero rows"))?;
        let d = self.shape(first).to_vec();
        if d.len() != 1 {
            return Err(Error::dim("stack", &d, &[]));
        }
        let mut out = Vec::with_capacity(rows.len() * d[0]);
        for &r in rows {
            if self.shape(r) != d.as_slice() {
                return Err(Error::dim("stack", &d, self.shape(r)));
            }
            out.extend_from_slice(self.value(r));
        }
        let ng = rows.iter().any(|&r| self.needs(r));
        Ok(self.push(vec![rows.len(), d[0]], out, Op::Stack(rows.to_vec()), ng))
    }

    /// Copy of `x` with row `i` replaced by `row`.
    pub fn set_row(&mut self, x: Var, i: usize, row: Var) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        if shape.len() != 2 || self.shape(row) != [shape[1]] {
            return Err(Error::dim("set_row", &shape, self.shape(row)));
        }
        if i >= shape[0] {
            return Err(Error::Lookup {
                what: "matrix rows",
                index: i,
                len: shape[0],
            });
        }
        let c = shape[1];
        let mut out = self.value(x).to_vec();
        out[i * c..(i + 1) * c].copy_from_slice(self.value(row));
        let ng = self.needs(x) || self.needs(row);
        Ok(self.push(shape, out, Op::SetRow { x, i, row }, ng))
    }

    pub fn transpose(&mut self, x: Var) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        if shape.len() != 2 {
            return Err(Error::dim("transpose", &shape, &[]));
        }
        let (r, c) = (shape[0], shape[1]);
        let xs = self.value(x);
        let mut out = vec![0.0; r * c];
        for i in 0..r {
            for j in 0..c {
                out[j * r + i] = xs[i * c + j];
            }
        }
        let ng = self.needs(x);
        Ok(self.push(vec![c, r], out, Op::Transpose(x), ng))
    }

    /// Multiplies row `i` of `x [N×d]` by `w[i]`.
    pub fn scale_rows(&mut self, x: Var, w: Var) -> Result<Var> {
        let shape = self.shape(x).to_vec();
        if shape.len() != 2 || self.shape(w) != [shape[0]] {
            return Err(Error::dim("scale_rows", &shape, self.shape(w)));
        }
        let c = shape[1];
        let ws = self.value(w);
        let out = self
            .value(x)
            .chunks(c)
            .zip(ws)
            .flat_map(|(row, &s)| row.iter().map(move |v| v * s))
            .collect();
        let ng = self.needs(x) || self.needs(w);
        Ok(self.push(shape, out, Op::ScaleRows { x, w }, ng))
    }

    pub fn reshape(&mut self, x: Var, shape: &[usize]) -> Result<Var> {
        if shape.iter().product::<usize>() != self.value(x).len() {
            return Err(Error::dim("reshape", self.shape(x), shape));
        }
        let out = self.value(x).to_vec();
        let ng = self.needs(x);
        Ok(self.push(shape.to_vec(), out, Op::Reshape(x), ng))
    }

    // ---- reverse pass ------------------------------------------------------

    /// Populates gradients of `loss` with respect to every node that needs one.
    /// Gradients from any earlier call are discarded first.
    pub fn backward(&mut self, loss: Var) -> Result<()> {
        if self.value(loss).len() != 1 {
            return Err(Error::contract(format!(
                "backward needs a scalar loss, got shape {:?}",
                self.shape(loss)
            )));
        }
        self.grads = vec![None; self.nodes.len()];
        self.grads[loss.0] = Some(vec![1.0]);
        for i in (0..=loss.0).rev() {
            if !self.nodes[i].needs_grad {
                continue;
            }
            let Some(g) = self.grads[i].take() else {
                continue;
            };
            let scale = match self.fault {
                Some(k) if k == self.nodes[i].op.kind() => 1.5,
                _ => 1.0,
            };
            let g_eff: Vec<f64>;
            let gs: &[f64] = if scale != 1.0 {
                g_eff = g.iter().map(|v| v * scale).collect();
                &g_eff
            } else {
                &g
            };
            self.backward_node(i, gs);
            self.grads[i] = Some(g);
        }
        Ok(())
    }

    /// Gradient of the most recent `backward` loss with respect to `v`.
    pub fn grad(&self, v: Var) -> Option<&[f64]> {
        self.grads.get(v.0).and_then(|g| g.as_deref())
    }

    /// Gradients of every parameter that took part in the computation.
    pub fn param_grads(&self) -> impl Iterator<Item = (ParamId, &[f64])> + '_ {
        self.param_vars
            .iter()
            .enumerate()
            .filter_map(move |(i, v)| Some((ParamId(i), self.grad((*v)?)?)))
    }

    /// Adds this tape's parameter gradients into the store's gradient slots.
    pub fn accumulate_into(&self, store: &mut ParamStore) -> Result<()> {
        for (id, g) in self.param_grads() {
            store.get_mut(id).accumulate_grad(g)?;
        }
        Ok(())
    }

    /// First node holding a non-finite value, for diagnostics.
    pub fn first_non_finite(&self) -> Option<(usize, OpKind, Vec<usize>)> {
        self.nodes.iter().enumerate().find_map(|(i, n)| {
            n.value
                .iter()
                .any(|v| !v.is_finite())
                .then(|| (i, n.op.kind(), n.shape.clone()))
        })
    }

    fn acc(&mut self, v: Var) -> Option<&mut [f64]> {
        let node = &self.nodes[v.0];
        if !node.needs_grad {
            return None;
        }
        let n = node.shape.iter().product();
        Some(self.grads[v.0].get_or_insert_with(|| vec![0.0; n]))
    }

    fn backward_node(&mut self, i: usize, g: &[f64]) {
        // Ops are cloned only for the index-carrying variants; inputs are Copy.
        let op = self.nodes[i].op.clone();
        match op {
            Op::Leaf | Op::Param => {}
            Op::MatMul(a, b) => {
                let sa = self.nodes[a.0].shape.clone();
                let (m, k) = if sa.len() == 1 {
                    (1, sa[0])
                } else {
                    (sa[0], sa[1])
                };
                let n = self.nodes[b.0].shape[1];
                if self.needs(a) {
                    let bv = std::mem::take(&mut self.nodes[b.0].value);
                    if let Some(ga) = self.acc(a) {
                        kernels::matmul_nt_acc(g, &bv, ga, m, n, k);
                    }
                    self.nodes[b.0].value = bv;
                }
                if self.needs(b) {
                    let av = std::mem::take(&mut self.nodes[a.0].value);
                    if let Some(gb) = self.acc(b) {
                        kernels::matmul_tn_acc(&av, g, gb, m, k, n);
                    }
                    self.nodes[a.0].value = av;
                }
            }
            Op::Add(a, b) => {
                self.acc_map(a, g, |_, gi| gi);
                self.acc_map(b, g, |_, gi| gi);
            }
            Op::Sub(a, b) => {
                self.acc_map(a, g, |_, gi| gi);
                self.acc_map(b, g, |_, gi| -gi);
            }
            Op::Mul(a, b) => {
                let bv = self.nodes[b.0].value.clone();
                let av = self.nodes[a.0].value.clone();
                self.acc_map(a, g, |j, gi| gi * bv[j]);
                self.acc_map(b, g, |j, gi| gi * av[j]);
            }
            Op::Scale(x, c) => self.acc_map(x, g, |_, gi| gi * c),
            Op::Relu(x) => {
                let xv = std::mem::take(&mut self.nodes[x.0].value);
                self.acc_map(x, g, |j, gi| if xv[j] > 0.0 { gi } else { 0.0 });
                self.nodes[x.0].value = xv;
            }
            Op::Sigmoid(x) => {
                let y = std::mem::take(&mut self.nodes[i].value);
                self.acc_map(x, g, |j, gi| gi * y[j] * (1.0 - y[j]));
                self.nodes[i].value = y;
            }
            Op::Tanh(x) => {
                let y = std::mem::take(&mut self.nodes[i].value);
                self.acc_map(x, g, |j, gi| gi * (1.0 - y[j] * y[j]));
                self.nodes[i].value = y;
            }
            Op::SoftmaxRow(x) => {
                let y = std::mem::take(&mut self.nodes[i].value);
                let n = *self.nodes[i].shape.last().unwrap();
                if let Some(gx) = self.acc(x) {
                    for ((gr, yr), dr) in gx.chunks_mut(n).zip(y.chunks(n)).zip(g.chunks(n)) {
                        let s = kernels::dot(yr, dr);
                        for j in 0..n {
                            gr[j] += yr[j] * (dr[j] - s);
                        }
                    }
                }
                self.nodes[i].value = y;
            }
            Op::Concat(xs) => {
                let shape = self.nodes[i].shape.clone();
                let total = *shape.last().unwrap();
                let rows = if shape.len() == 2 { shape[0] } else { 1 };
                let mut off = 0;
                for x in xs {
                    let w = *self.nodes[x.0].shape.last().unwrap();
                    if let Some(gx) = self.acc(x) {
                        for r in 0..rows {
                            for c in 0..w {
                                gx[r * w + c] += g[r * total + off + c];
                            }
                        }
                    }
                    off += w;
                }
            }
            Op::Slice { x, start } => {
                let len = *self.nodes[i].shape.last().unwrap();
                let w = *self.nodes[x.0].shape.last().unwrap();
                if let Some(gx) = self.acc(x) {
                    for (r, gr) in g.chunks(len).enumerate() {
                        for (c, v) in gr.iter().enumerate() {
                            gx[r * w + start + c] += v;
                        }
                    }
                }
            }
            Op::MeanPool { x, axis } => {
                let s = self.nodes[x.0].shape.clone();
                let (r, c) = (s[0], s[1]);
                if let Some(gx) = self.acc(x) {
                    for ri in 0..r {
                        for ci in 0..c {
                            gx[ri * c + ci] += if axis == 0 {
                                g[ci] / r as f64
                            } else {
                                g[ri] / c as f64
                            };
                        }
                    }
                }
            }
            Op::Dot(a, b) => {
                let av = self.nodes[a.0].value.clone();
                let bv = self.nodes[b.0].value.clone();
                self.acc_map(a, &vec![g[0]; av.len()], |j, gi| gi * bv[j]);
                self.acc_map(b, &vec![g[0]; bv.len()], |j, gi| gi * av[j]);
            }
            Op::Sum(x) => {
                if let Some(gx) = self.acc(x) {
                    gx.iter_mut().for_each(|v| *v += g[0]);
                }
            }
            Op::Embedding { table, ids } => {
                let dim = self.nodes[table.0].shape[1];
                if let Some(gt) = self.acc(table) {
                    for (k, &id) in ids.iter().enumerate() {
                        // id 0 is padding and never receives gradient
                        if id == 0 {
                            continue;
                        }
                        for c in 0..dim {
                            gt[id * dim + c] += g[k * dim + c];
                        }
                    }
                }
            }
            Op::CrossEntropy { logits, target } => {
                let mut p = self.nodes[logits.0].value.clone();
                kernels::softmax_in_place(&mut p);
                p[target] -= 1.0;
                self.acc_map(logits, &p, |_, v| v * g[0]);
            }
            Op::Row { x, i: ri } => {
                let c = g.len();
                if let Some(gx) = self.acc(x) {
                    for (dst, v) in gx[ri * c..(ri + 1) * c].iter_mut().zip(g) {
                        *dst += v;
                    }
                }
            }
            Op::Stack(rows) => {
                let c = self.nodes[i].shape[1];
                for (k, r) in rows.into_iter().enumerate() {
                    self.acc_map(r, &g[k * c..(k + 1) * c], |_, v| v);
                }
            }
            Op::SetRow { x, i: ri, row } => {
                let c = self.nodes[i].shape[1];
                self.acc_map(x, g, |j, v| if j / c == ri { 0.0 } else { v });
                self.acc_map(row, &g[ri * c..(ri + 1) * c], |_, v| v);
            }
            Op::Transpose(x) => {
                let s = self.nodes[x.0].shape.clone();
                let (r, c) = (s[0], s[1]);
                if let Some(gx) = self.acc(x) {
                    for a in 0..r {
                        for b in 0..c {
                            gx[a * c + b] += g[b * r + a];
                        }
                    }
                }
            }
            Op::ScaleRows { x, w } => {
                let c = self.nodes[x.0].shape[1];
                let xv = self.nodes[x.0].value.clone();
                let wv = self.nodes[w.0].value.clone();
                self.acc_map(x, g, |j, v| v * wv[j / c]);
                if let Some(gw) = self.acc(w) {
                    for (k, gr) in g.chunks(c).enumerate() {
                        gw[k] += kernels::dot(gr, &xv[k * c..(k + 1) * c]);
                    }
                }
            }
            Op::Reshape(x) => self.acc_map(x, g, |_, v| v),
        }
    }

    fn acc_map(&mut self, v: Var, g: &[f64], f: impl Fn(usize, f64) -> f64) {
        if let Some(gx) = self.acc(v) {
            for (j, (dst, &gi)) in gx.iter_mut().zip(g).enumerate() {
                *dst += f(j, gi);
            }
        }
    }
}
