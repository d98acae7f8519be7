//! Benchmarking toolkit for Ising and higher-order Ising (hising) spin-glass
//! problems: seeded instance generators, the bias-field null-hypothesis solver
//! (BF-Null), exact ground-state computation, cubic-to-quadratic reduction,
//! solution-quality metrics, and hardware runtime models.

pub mod bfnull;
pub mod error;
pub mod exact;
pub mod generators;
pub mod io;
pub mod metrics;
pub mod model;
pub mod reduce;
pub mod rng;
pub mod timing;

pub use error::{Error, Result};
pub use model::{BiasField, PolynomialModel, SampleRecord, SampleSet, SpinAssignment};
