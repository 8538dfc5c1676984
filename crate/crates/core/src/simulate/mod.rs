//! Time-domain integration of the normalized array.
//!
//! Trajectories solve `z̈ + L_d ż + (I ⊗ P + ε L_r) z = 0` with fixed-step
//! classical RK4. Energy and distance from the sync subspace are recorded at
//! every step.

mod counterexample;
mod integrator;
mod trace;

pub use counterexample::{counterexample_ic, CounterexampleMode, DESYNC_TOL};
pub use integrator::{check_step, default_dt, omega_max, Integrator, STABILITY_LIMIT};
pub use trace::{
    desync_component, energy, integrate, integrate_physical, random_initial_condition, sync_error,
    PhysicalTrace, SimulationTrace,
};
