//! Word-metric growth and asymptotic shapes of nilpotent groups.

pub mod ball;
pub mod cc;
pub mod cli;
pub mod counterexamples;
pub mod dido;
pub mod dido_dp;
pub mod error;
pub mod grading;
pub mod group;
pub mod interval;
pub mod norm;
pub mod profile;
pub mod quadrature;
pub mod quasinorm;
pub mod shape;
pub mod solvable;
pub mod volume;

pub use error::{Error, Result};
