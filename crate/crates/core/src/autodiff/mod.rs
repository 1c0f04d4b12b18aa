//! Dense tensors with tape-based reverse-mode differentiation.

mod kernels;
mod params;
mod tape;
mod tensor;

pub use params::{ParamId, ParamStore, StoredParam};
pub use tape::{OpKind, Tape, Var};
pub use tensor::Tensor;

pub use kernels::{logsumexp, sigmoid};
