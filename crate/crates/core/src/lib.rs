//! Few-body ground states of bosons in a quasi-one-dimensional harmonic trap.

pub mod basis;
pub mod cli;
pub mod correlation;
pub mod error;
pub mod limits;
pub mod model;
pub mod pipeline;
pub mod solvers;

pub use error::{Error, Result};
