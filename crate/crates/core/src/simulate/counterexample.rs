use super::trace::desync_component;
use crate::criteria::{axis_modes, Tolerances};
use crate::error::Result;
use crate::linalg::norm2;
use crate::model::ArraySystem;

/// Residual below which a candidate mode shape counts as synchronized.
pub const DESYNC_TOL: f64 = 1e-6;

/// Undamped non-synchronizing motion `ζ(t) = cos(ωt)·ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CounterexampleMode {
    pub omega: f64,
    /// Unit-norm mode shape, orthogonal to the sync subspace.
    pub xi: Vec<f64>,
    pub period: f64,
}

/// A mode in `null(L_d)` outside the sync subspace, when one exists.
///
/// Components are scanned from the largest `ρ` down; within a component the
/// first basis vector with a desynchronized part above `DESYNC_TOL` is used.
pub fn counterexample_ic(sys: &ArraySystem, epsilon: f64) -> Result<Option<CounterexampleMode>> {
    let modes = axis_modes(sys, epsilon, &Tolerances::default())?;
    if modes.count() <= sys.n() {
        return Ok(None);
    }
    for mode in modes.modes.iter().rev() {
        for k in 0..mode.basis.dim() {
            let part = desync_component(sys.q(), sys.n(), &mode.basis.vector(k));
            let norm = norm2(&part);
            if norm > DESYNC_TOL {
                let omega = mode.rho.max(0.0).sqrt();
                return Ok(Some(CounterexampleMode {
                    omega,
                    xi: part.iter().map(|x| x / norm).collect(),
                    period: 2.0 * std::f64::consts::PI / omega,
                }));
            }
        }
    }
    Ok(None)
}
