pub mod averaging;
pub mod baselines;
pub mod cli;
pub mod dtw;
pub mod error;
pub mod io;
pub mod phase;
pub mod series;
pub mod synth;

pub use error::{Error, PathViolation, Result};
