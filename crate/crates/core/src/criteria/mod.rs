//! Synchronization tests for a normalized array.
//!
//! Two independent routes decide the general case: counting eigenvalues of
//! `Γ_ε` on the imaginary axis, and intersecting eigenspaces of
//! `I ⊗ P + ε L_r` with `null(L_d)`. The modal form, the weak-coupling radius
//! and the special-case checks build on the same data.

mod bound;
mod modal;
mod special;
mod spectral;
mod subspace;

use serde::{Deserialize, Serialize};

pub use bound::{weak_coupling_bound, weak_coupling_bound_with, BoundStatus, WeakCouplingBound};
pub use modal::{modal_transform, ModalForm};
pub use special::{
    commensurable_check, commensurable_check_with, harmonic_check, harmonic_check_with,
    pure_dissipative_check, pure_dissipative_check_with, CommensurableReport,
    WeakCouplingSufficiency,
};
pub use spectral::{sync_check_spectral, sync_check_spectral_with};
pub use subspace::{
    axis_modes, sync_check_subspace, sync_check_subspace_with, AxisMode, AxisModes,
};

/// Margins inside `(τ, INDETERMINATE_FACTOR·τ]` are too close to call.
pub const INDETERMINATE_FACTOR: f64 = 10.0;

/// Relative tolerances used by the checks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// `Re λ ≤ axis·max(‖Γ_ε‖₂, 1)` counts as on the imaginary axis.
    pub axis: f64,
    /// Null-space and observability threshold relative to the operand norm.
    pub rank: f64,
    /// Eigenvalues of `S` closer than `cluster·‖S‖₂` share an eigenspace.
    pub cluster: f64,
    /// A principal direction is shared when its cosine is at least `1 - angle`.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            axis: 1e-8,
            rank: crate::linalg::DEFAULT_RANK_TOL,
            cluster: 1e-8,
            angle: 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Synchronizes {
    Yes,
    No,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    Subspace,
    PureDissipative,
    Harmonic,
    Commensurable,
}

/// Outcome of one synchronization test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyncVerdict {
    pub synchronizes: Synchronizes,
    /// Number of modes that do not decay (eigenvalues on the imaginary axis).
    pub imaginary_axis_count: usize,
    /// Smallest decay rate outside the `n` sync modes, where the method defines one.
    pub margin: Option<f64>,
    pub method: Method,
    /// Absolute threshold the decision was taken against.
    pub tolerance: f64,
    pub diagnostic: Option<String>,
}

impl SyncVerdict {
    pub fn is_yes(&self) -> bool {
        self.synchronizes == Synchronizes::Yes
    }

    pub fn is_no(&self) -> bool {
        self.synchronizes == Synchronizes::No
    }
}

/// Three-valued decision from a count of non-decaying modes and the margin.
///
/// More than `n` modes on the axis is conclusive. With exactly `n`, the
/// margin must clear `INDETERMINATE_FACTOR·τ`. Fewer than `n` contradicts the
/// structure of the problem and is reported as indeterminate.
pub(crate) fn decide(
    count: usize,
    n: usize,
    margin: Option<f64>,
    tau: f64,
) -> (Synchronizes, Option<String>) {
    use std::cmp::Ordering::*;
    match count.cmp(&n) {
        Greater => (Synchronizes::No, None),
        Less => (
            Synchronizes::Indeterminate,
            Some(format!(
                "found {count} non-decaying modes but the {n} sync modes are always present"
            )),
        ),
        Equal => match margin {
            Some(m) if m <= INDETERMINATE_FACTOR * tau => (
                Synchronizes::Indeterminate,
                Some(format!(
                    "margin {m:e} lies within {INDETERMINATE_FACTOR} x tolerance {tau:e}"
                )),
            ),
            _ => (Synchronizes::Yes, None),
        },
    }
}
