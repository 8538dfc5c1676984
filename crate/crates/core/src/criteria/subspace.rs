use super::spectral::check_epsilon;
use super::{Method, SyncVerdict, Synchronizes, Tolerances, INDETERMINATE_FACTOR};
use crate::error::Result;
use crate::linalg::{
    cluster_sorted, nullspace_basis, subspace_intersection, sym_eig, SubspaceBasis,
};
use crate::model::ArraySystem;

/// One eigenspace of `S = I ⊗ P + ε L_r` intersected with `null(L_d)`.
#[derive(Clone, Debug)]
pub struct AxisMode {
    /// Eigenvalue `ρ` of `S`; the mode oscillates at `√ρ`.
    pub rho: f64,
    /// Orthonormal basis of `E_ρ ∩ null(L_d)`.
    pub basis: SubspaceBasis,
}

/// Non-decaying modes found by the eigenspace route.
#[derive(Clone, Debug)]
pub struct AxisModes {
    /// Nonempty intersections, ordered by ascending `ρ`.
    pub modes: Vec<AxisMode>,
    /// Absolute gap below which eigenvalues of `S` were merged.
    pub cluster_tol: f64,
    /// Set when two clusters are too close to separate reliably.
    pub ambiguous: Option<String>,
}

impl AxisModes {
    pub fn count(&self) -> usize {
        self.modes.iter().map(|m| m.basis.dim()).sum()
    }
}

/// Eigenspaces of `S` that lie (partly) in `null(L_d)`.
pub fn axis_modes(sys: &ArraySystem, epsilon: f64, tol: &Tolerances) -> Result<AxisModes> {
    check_epsilon(epsilon)?;
    let s = sys.stiffness(epsilon);
    let eig = sym_eig(&s)?;
    let s_norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let cluster_tol = tol.cluster * s_norm;
    let clusters = cluster_sorted(&eig.values, cluster_tol);

    let mut ambiguous = None;
    for w in clusters.windows(2) {
        let gap = eig.values[w[1].start] - eig.values[w[0].end - 1];
        if gap <= INDETERMINATE_FACTOR * cluster_tol {
            ambiguous = Some(format!(
                "eigenvalues {:e} and {:e} of the stiffness matrix are separated by {gap:e}, within {INDETERMINATE_FACTOR} x the clustering tolerance",
                eig.values[w[0].end - 1],
                eig.values[w[1].start]
            ));
            break;
        }
    }

    let null_d = nullspace_basis(sys.l_d(), tol.rank)?;
    let mut modes = Vec::new();
    for range in clusters {
        let idx: Vec<usize> = range.clone().collect();
        let rho = eig.values[range.clone()].iter().sum::<f64>() / range.len() as f64;
        let e = SubspaceBasis::from_orthonormal(eig.vectors.select_columns(&idx), tol.cluster);
        let shared = subspace_intersection(&e, &null_d, tol.angle)?;
        if !shared.is_empty() {
            modes.push(AxisMode { rho, basis: shared });
        }
    }
    Ok(AxisModes {
        modes,
        cluster_tol,
        ambiguous,
    })
}

/// Counts `Σ_ρ dim(E_ρ ∩ null L_d)`; the array synchronizes iff it equals `n`.
pub fn sync_check_subspace(sys: &ArraySystem, epsilon: f64) -> Result<SyncVerdict> {
    sync_check_subspace_with(sys, epsilon, &Tolerances::default())
}

pub fn sync_check_subspace_with(
    sys: &ArraySystem,
    epsilon: f64,
    tol: &Tolerances,
) -> Result<SyncVerdict> {
    let modes = axis_modes(sys, epsilon, tol)?;
    let count = modes.count();
    let n = sys.n();
    let (synchronizes, diagnostic) = if let Some(msg) = modes.ambiguous {
        (Synchronizes::Indeterminate, Some(msg))
    } else {
        super::decide(count, n, None, 0.0)
    };
    Ok(SyncVerdict {
        synchronizes,
        imaginary_axis_count: count,
        margin: None,
        method: Method::Subspace,
        tolerance: tol.angle,
        diagnostic,
    })
}
