//! Random Vandermonde matrices with unit-modulus phases.
//!
//! The crate computes the expansion coefficients that weight set partitions in
//! the limiting moment formula, assembles moments and their bounds, samples
//! spectra of the equivalent real sinc kernel, and runs the maximum-eigenvalue
//! and channel-capacity experiments.
//!
//! Modules map onto the pipeline:
//!
//! * [`phase`]: phase distributions on `[-π, π]`.
//! * [`partition`], [`counting`], [`equations`]: set partitions, counting
//!   sequences and the linear equations attached to a partition.
//! * [`irwin_hall`], [`coefficients`]: the coefficients `K_{ρ,u}` and `K_{ρ,ν}`.
//! * [`moments`]: limiting moments and bounds.
//! * [`linalg`], [`spectra`], [`maxeig`], [`capacity`]: simulation.
//! * [`report`], [`cli`], [`verify`]: output tables, the batch driver and the
//!   acceptance checks.

pub mod capacity;
pub mod cli;
pub mod coefficients;
pub mod counting;
pub mod equations;
pub mod error;
pub mod irwin_hall;
pub mod linalg;
pub mod maxeig;
pub mod moments;
pub mod partition;
pub mod phase;
pub mod quad;
pub mod report;
pub mod rng;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
pub use phase::PhaseDistribution;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
