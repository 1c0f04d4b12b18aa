use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Tensor;
use crate::error::{Error, Result};

/// Stable handle to a trainable tensor inside a [`ParamStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub(crate) usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Named collection of trainable tensors. Names are unique and stable across runs.
#[derive(Debug, Clone, Default)]
pub struct ParamStore {
    names: Vec<String>,
    tensors: Vec<Tensor>,
    index: HashMap<String, ParamId>,
}

/// On-disk form of one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredParam {
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

impl ParamStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, tensor: Tensor) -> Result<ParamId> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::contract(format!(
                "duplicate parameter name `{name}`"
            )));
        }
        let id = ParamId(self.tensors.len());
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.tensors.push(tensor.with_grad());
        Ok(id)
    }

    pub fn get(&self, id: ParamId) -> &Tensor {
        &self.tensors[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Tensor {
        &mut self.tensors[id.0]
    }

    pub fn id(&self, name: &str) -> Option<ParamId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id.0]
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.tensors.len()).map(ParamId)
    }

    /// Total number of trainable scalars.
    pub fn num_scalars(&self) -> usize {
        self.tensors.iter().map(Tensor::len).sum()
    }

    /// Number of trainable scalars in parameters whose name starts with `prefix`.
    pub fn num_scalars_with_prefix(&self, prefix: &str) -> usize {
        self.names
            .iter()
            .zip(&self.tensors)
            .filter(|(n, _)| n.starts_with(prefix))
            .map(|(_, t)| t.len())
            .sum()
    }

    pub fn zero_grad(&mut self) {
        self.tensors.iter_mut().for_each(Tensor::zero_grad);
    }

    pub fn to_map(&self) -> BTreeMap<String, StoredParam> {
        self.names
            .iter()
            .zip(&self.tensors)
            .map(|(n, t)| {
                (
                    n.clone(),
                    StoredParam {
                        shape: t.shape().to_vec(),
                        values: t.values().to_vec(),
                    },
                )
            })
            .collect()
    }

    /// Overwrites every parameter from `map`. Names and shapes must match exactly.
    pub fn load_map(&mut self, map: &BTreeMap<String, StoredParam>) -> Result<()> {
        if map.len() != self.len() {
            return Err(Error::Compatibility(format!(
                "checkpoint holds {} parameters, model expects {}",
                map.len(),
                self.len()
            )));
        }
        for (name, stored) in map {
            let id = self.id(name).ok_or_else(|| {
                Error::Compatibility(format!("unknown parameter `{name}` in checkpoint"))
            })?;
            let t = &mut self.tensors[id.0];
            if t.shape() != stored.shape.as_slice() || stored.values.len() != t.len() {
                return Err(Error::Compatibility(format!(
                    "parameter `{name}` has shape {:?}, model expects {:?}",
                    stored.shape,
                    t.shape()
                )));
            }
            t.values_mut().copy_from_slice(&stored.values);
        }
        Ok(())
    }
}
