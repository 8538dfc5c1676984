//! Oscillator unit, coupling graph and the normalized array built from them.

mod graph;
mod oscillator;
mod system;

pub use graph::{
    build_laplacian, check_weight, commensurable_expand, is_laplacian, Commensurable,
    CommensurableExpansion, CouplingGraph, Edge, WEIGHT_TOL,
};
pub use oscillator::{build_mass_spring_chain, OscillatorModel, DISTINCT_TOL, SPD_TOL};
pub use system::{gamma, normal_modes, normalize, ArraySystem, NormalModes};
