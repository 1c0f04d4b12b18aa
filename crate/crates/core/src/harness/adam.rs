use crate::autodiff::ParamStore;
use crate::error::{Error, Result};

/// Adam with bias-corrected moment estimates.
#[derive(Debug, Clone)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl Adam {
    pub fn new(lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: Vec::new(),
            v: Vec::new(),
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn moments(&self, index: usize) -> Option<(&[f64], &[f64])> {
        Some((self.m.get(index)?, self.v.get(index)?))
    }

    /// Updates one flat parameter block in place.
    fn update(&self, params: &mut [f64], grads: &[f64], m: &mut [f64], v: &mut [f64]) {
        let t = self.step as i32;
        let c1 = 1.0 - self.beta1.powi(t);
        let c2 = 1.0 - self.beta2.powi(t);
        for i in 0..params.len() {
            let g = grads[i];
            m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
            v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = m[i] / c1;
            let v_hat = v[i] / c2;
            params[i] -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }

    /// One step over raw blocks: `params[k] -= lr · m̂ / (√v̂ + ε)`.
    pub fn step_slices(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != grads.len() {
            return Err(Error::contract(format!(
                "{} parameter blocks but {} gradient blocks",
                params.len(),
                grads.len()
            )));
        }
        if self.m.is_empty() {
            self.m = params.iter().map(|p| vec![0.0; p.len()]).collect();
            self.v = self.m.clone();
        }
        for (k, (p, g)) in params.iter().zip(grads).enumerate() {
            if self.m.get(k).map(Vec::len) != Some(p.len()) || g.len() != p.len() {
                return Err(Error::contract(format!(
                    "block {k}: parameter, gradient and state sizes disagree"
                )));
            }
        }
        if self.m.len() != params.len() {
            return Err(Error::contract("optimizer state has a different block count"));
        }
        self.step += 1;
        let mut m = std::mem::take(&mut self.m);
        let mut v = std::mem::take(&mut self.v);
        for (k, (p, g)) in params.iter_mut().zip(grads).enumerate() {
            self.update(p, g, &mut m[k], &mut v[k]);
        }
        self.m = m;
        self.v = v;
        Ok(())
    }

    /// One step on every parameter of `store` using its accumulated gradients.
    pub fn step(&mut self, store: &mut ParamStore) -> Result<()> {
        let ids: Vec<_> = store.ids().collect();
        if self.m.is_empty() {
            self.m = ids.iter().map(|&id| vec![0.0; store.get(id).len()]).collect();
            self.v = self.m.clone();
        }
        if self.m.len() != ids.len() {
            return Err(Error::contract("optimizer state has a different block count"));
        }
        self.step += 1;
        let mut m = std::mem::take(&mut self.m);
        let mut v = std::mem::take(&mut self.v);
        for (k, &id) in ids.iter().enumerate() {
            let t = store.get_mut(id);
            let grads = match t.grad() {
                Some(g) => g.to_vec(),
                None => vec![0.0; t.len()],
            };
            if m[k].len() != t.len() {
                self.m = m;
                self.v = v;
                return Err(Error::contract(format!("block {k}: optimizer state size differs")));
            }
            self.update(t.values_mut(), &grads, &mut m[k], &mut v[k]);
        }
        self.m = m;
        self.v = v;
        Ok(())
    }
}
