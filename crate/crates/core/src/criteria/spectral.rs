use super::{decide, Method, SyncVerdict, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{complex_eig, spectral_norm_complex};
use crate::model::{gamma, ArraySystem};

/// Counts eigenvalues of `Γ_ε` on the imaginary axis; the array synchronizes
/// iff there are exactly `n`.
pub fn sync_check_spectral(sys: &ArraySystem, epsilon: f64) -> Result<SyncVerdict> {
    sync_check_spectral_with(sys, epsilon, &Tolerances::default())
}

pub fn sync_check_spectral_with(
    sys: &ArraySystem,
    epsilon: f64,
    tol: &Tolerances,
) -> Result<SyncVerdict> {
    check_epsilon(epsilon)?;
    let g = gamma(sys, epsilon);
    let tau = tol.axis * spectral_norm_complex(&g).max(1.0);
    let ev = complex_eig(&g)?;
    let n = sys.n();
    let count = ev.iter().filter(|z| z.re <= tau).count();
    let margin = ev.get(n).map(|z| z.re);
    let (synchronizes, diagnostic) = decide(count, n, margin, tau);
    Ok(SyncVerdict {
        synchronizes,
        imaginary_axis_count: count,
        margin,
        method: Method::Spectral,
        tolerance: tau,
        diagnostic,
    })
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "epsilon must be finite and nonnegative, got {epsilon}"
        )))
    }
}
