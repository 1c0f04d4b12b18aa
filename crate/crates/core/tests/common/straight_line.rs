//! Plain-loop reimplementations of the graph video models, written without the
//! tape so they can serve as reference values.

use procqa::models::Adjacency;

pub type Mat = Vec<Vec<f64>>;

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = 0.0;
            for t in 0..k {
                acc += a[i][t] * b[t][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn softmax(xs: &[f64]) -> Vec<f64> {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = xs.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn adjacency(s: &Mat, mode: Adjacency) -> Mat {
    let g = matmul(s, &transpose(s));
    match mode {
        Adjacency::Softmax => g.iter().map(|r| softmax(r)).collect(),
        Adjacency::Raw => g,
    }
}

pub fn gcn_layer(s: &Mat, w: &Mat, mode: Adjacency) -> Mat {
    let g = adjacency(s, mode);
    let z = matmul(&matmul(&g, s), w);
    z.into_iter()
        .map(|r| r.into_iter().map(|v| v.max(0.0)).collect())
        .collect()
}

/// Attention weights over rows and the rows scaled by them.
pub fn attend(x: &Mat, q: &[f64]) -> (Vec<f64>, Mat) {
    let logits: Vec<f64> = x
        .iter()
        .map(|r| r.iter().zip(q).map(|(a, b)| a * b).sum())
        .collect();
    let a = softmax(&logits);
    let scaled = x
        .iter()
        .zip(&a)
        .map(|(r, w)| r.iter().map(|v| v * w).collect())
        .collect();
    (a, scaled)
}

pub fn mean_rows(x: &Mat) -> Vec<f64> {
    let n = x.len() as f64;
    (0..x[0].len())
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect()
}

pub fn gcn(x: &Mat, ws: &[Mat], q: Option<&[f64]>, mode: Adjacency) -> Vec<f64> {
    let mut s = x.clone();
    for (l, w) in ws.iter().enumerate() {
        if l == ws.len() - 1 {
            if let Some(q) = q {
                s = attend(&s, q).1;
            }
        }
        s = gcn_layer(&s, w, mode);
    }
    mean_rows(&s)
}

/// LSTM cell with fused weight `[(in + hid) × 4 hid]`, gates i, f, g, o.
pub struct Lstm {
    pub weight: Mat,
    pub bias: Vec<f64>,
    pub hidden: usize,
}

impl Lstm {
    pub fn from_flat(weight: &[f64], bias: &[f64], input: usize, hidden: usize) -> Self {
        let cols = 4 * hidden;
        let weight = (0..input + hidden)
            .map(|r| weight[r * cols..(r + 1) * cols].to_vec())
            .collect();
        Self {
            weight,
            bias: bias.to_vec(),
            hidden,
        }
    }

    pub fn step(&self, x: &[f64], h: &[f64], c: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let hd = self.hidden;
        let xh: Vec<f64> = x.iter().chain(h).copied().collect();
        let mut z = self.bias.clone();
        for (r, v) in xh.iter().enumerate() {
            for (j, zj) in z.iter_mut().enumerate() {
                *zj += v * self.weight[r][j];
            }
        }
        let mut h2 = vec![0.0; hd];
        let mut c2 = vec![0.0; hd];
        for k in 0..hd {
            let i = sigmoid(z[k]);
            let f = sigmoid(z[hd + k]);
            let g = z[2 * hd + k].tanh();
            let o = sigmoid(z[3 * hd + k]);
            c2[k] = f * c[k] + i * g;
            h2[k] = o * c2[k].tanh();
        }
        (h2, c2)
    }
}

/// Recurrent graph pass; returns the final hidden state.
pub fn rgcn(x: &Mat, cell: &Lstm, w: &Mat, q: Option<&[f64]>, mode: Adjacency) -> Vec<f64> {
    let d = x[0].len();
    let input = match q {
        Some(q) => attend(x, q).1,
        None => x.clone(),
    };
    let mut layer = input.clone();
    let mut h = vec![0.0; d];
    let mut c = vec![0.0; d];
    for t in 0..x.len() {
        let read = if t == 0 {
            vec![0.0; d]
        } else {
            layer[t - 1].clone()
        };
        let cell_in: Vec<f64> = input[t].iter().chain(&read).copied().collect();
        let (h2, c2) = cell.step(&cell_in, &h, &c);
        h = h2;
        c = c2;
        layer[t] = h.clone();
        if t + 1 < x.len() {
            layer = gcn_layer(&layer, w, mode);
        }
    }
    h
}
