//! Video question answering over procedural recipes: a small reverse-mode
//! autodiff engine, sequence, graph and recurrent-graph video encoders,
//! multiple-choice and answer-space heads, a synthetic recipe world with an
//! answer oracle, and a training harness.

pub mod autodiff;
pub mod error;
pub mod heads;
pub mod modality;
pub mod models;
pub mod nn;
pub mod world;

pub use error::{Error, Result};
pub mod harness;
