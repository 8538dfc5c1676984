//! Synchronization analysis for arrays of identical linear oscillators
//! coupled through matrix-weighted dissipative and restorative Laplacians.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense symmetric and complex eigen-kernels, null spaces,
//!   subspace intersections, spectral norms.
//! - [`model`]: oscillator unit, coupling graph, normalized array system and
//!   the complex matrix `L_d + j(I ⊗ P + ε L_r)`.
//! - [`criteria`]: the synchronization tests (spectral count, eigenspace
//!   intersection, modal blocks, weak-coupling radius, special cases).
//! - [`simulate`]: fixed-step RK4 integration, energy and sync-error
//!   diagnostics, explicit non-synchronizing trajectories.
//! - [`cli`]: configuration files, reports and the `oscnet` commands.

pub mod cli;
pub mod criteria;
pub mod error;
pub mod linalg;
pub mod model;
pub mod simulate;

pub use error::{Error, Result};
