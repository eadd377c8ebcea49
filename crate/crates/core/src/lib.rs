//! Dynamics and entropy of two-level anyonic-PT symmetric systems.
//!
//! The crate builds the Hamiltonian family `H_φ`, propagates density
//! matrices under the non-Hermitian evolution `Ω(t) = U Ω(0) U†`, evaluates
//! Rényi and von Neumann entropies of the resulting (unnormalized) states, and
//! measures long-time patterns from the generated series.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod hamiltonian;
pub mod linalg;
pub mod verification;

pub use analysis::{analyze, classify_pattern, sweep_phi, Pattern, PatternReport, SweepRow, SweepTable};
pub use config::{ExperimentConfig, OutputSet, Provenance};
pub use dynamics::{evolve, propagator_closed, propagator_numeric, trajectory, StateSpec, Trajectory};
pub use entropy::{annotate_trajectory, Alpha};
pub use error::{Error, Result};
pub use hamiltonian::{build_hamiltonian, spectral_info, AnyonParams, PtPhase, SpectralInfo};
pub use linalg::{ComplexMatrix, C64};
