use serde::{Deserialize, Serialize};

use super::modal::{modal_transform, ModalForm};
use super::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{
    cluster_sorted, complex_eig, nullspace_basis, spectral_norm, subspace_intersection, sym_eig,
    RealMatrix, SubspaceBasis,
};
use crate::model::ArraySystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    /// Every hypothesis margin is positive; `0 < ε < r` guarantees synchronization.
    Applicable,
    /// Some hypothesis margin is not positive, or `γ̄ = 0`.
    Inapplicable,
    /// `μ̄` is undefined because no `B_kk` has two distinct eigenvalues.
    Indeterminate,
}

/// Explicit restorative-coupling radius for weakly perturbed arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingBound {
    pub sigma_bar: f64,
    pub mu_bar: Option<f64>,
    pub gamma_bar: f64,
    pub norm_g: f64,
    pub norm_b: f64,
    /// Perturbation constant `√(n-1)·‖B‖/σ̄·(1 + ‖B‖/μ̄)`.
    pub c: Option<f64>,
    pub r: f64,
    /// `Re λ_2(G_kk + j B_kk)` for each mode `k`.
    pub hypothesis_margins: Vec<f64>,
    /// `λ_2(G_kk)` for each mode `k`.
    pub dissipative_margins: Vec<f64>,
    pub status: BoundStatus,
    pub tolerance: f64,
    pub diagnostic: Option<String>,
}

/// Computes `σ̄`, `μ̄`, `γ̄` and the radius `r` from the modal blocks.
pub fn weak_coupling_bound(sys: &ArraySystem) -> Result<WeakCouplingBound> {
    weak_coupling_bound_with(sys, &Tolerances::default())
}

pub fn weak_coupling_bound_with(sys: &ArraySystem, tol: &Tolerances) -> Result<WeakCouplingBound> {
    let n = sys.n();
    if n < 2 {
        return Err(Error::Unsupported(
            "the weak-coupling radius needs n >= 2; use the harmonic check for n = 1".into(),
        ));
    }
    if !sys.has_restorative() {
        return Err(Error::Unsupported(
            "the weak-coupling radius needs at least one nonzero restorative weight; use the pure-dissipative check".into(),
        ));
    }
    let modal = modal_transform(sys, 1.0)?;
    let q = sys.q();
    let sigma = sys.sigma();
    let sigma_bar = 0.5
        * sigma
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);

    let norm_g = spectral_norm(&modal.g);
    let norm_b = spectral_norm(&modal.b);
    let tolerance = tol.axis * norm_g.max(norm_b).max(1.0);

    let mut hypothesis_margins = Vec::with_capacity(n);
    let mut dissipative_margins = Vec::with_capacity(n);
    for k in 0..n {
        let ev = complex_eig(&modal.diagonal_pencil(k))?;
        hypothesis_margins.push(ev.get(1).map_or(f64::INFINITY, |z| z.re));
        let gv = sym_eig(&modal.g_block(k, k))?.values;
        dissipative_margins.push(gv.get(1).copied().unwrap_or(f64::INFINITY));
    }

    let mu_bar = mu_bar(&modal, tol)?;
    let gamma_sq = gamma_bar_squared(&modal, tol)?;
    let gamma_bar = gamma_sq.max(0.0).sqrt();

    let root_n1 = ((n - 1) as f64).sqrt();
    let (c, r) = match mu_bar {
        Some(mu) => {
            let c = root_n1 * norm_b / sigma_bar * (1.0 + norm_b / mu);
            let r = gamma_bar * sigma_bar * mu
                / ((norm_g.sqrt() + 2.0 * gamma_bar) * root_n1 * norm_b * (mu + norm_b));
            (Some(c), r)
        }
        None => (None, 0.0),
    };

    let margins_ok = q < 2 || hypothesis_margins.iter().all(|&m| m > tolerance);
    let (status, diagnostic) = if mu_bar.is_none() {
        (
            BoundStatus::Indeterminate,
            Some("no diagonal restorative block has two distinct eigenvalues, so mu_bar is undefined".into()),
        )
    } else if !margins_ok {
        (
            BoundStatus::Inapplicable,
            Some("some Re lambda_2(G_kk + j B_kk) is not positive".into()),
        )
    } else if gamma_bar <= 0.0 || r <= 0.0 {
        (
            BoundStatus::Inapplicable,
            Some("gamma_bar = 0, so the radius is zero".into()),
        )
    } else {
        (BoundStatus::Applicable, None)
    };

    Ok(WeakCouplingBound {
        sigma_bar,
        mu_bar,
        gamma_bar,
        norm_g,
        norm_b,
        c,
        r,
        hypothesis_margins,
        dissipative_margins,
        status,
        tolerance,
        diagnostic,
    })
}

/// Clusters of a symmetric block's spectrum, with the shared tolerance policy.
fn block_eigenspaces(
    block: &RealMatrix,
    tol: &Tolerances,
) -> Result<(Vec<f64>, Vec<SubspaceBasis>)> {
    let eig = sym_eig(block)?;
    let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let clusters = cluster_sorted(&eig.values, tol.cluster * norm);
    let mut centers = Vec::with_capacity(clusters.len());
    let mut spaces = Vec::with_capacity(clusters.len());
    for range in clusters {
        let idx: Vec<usize> = range.clone().collect();
        centers.push(eig.values[range.clone()].iter().sum::<f64>() / range.len() as f64);
        spaces.push(SubspaceBasis::from_orthonormal(
            eig.vectors.select_columns(&idx),
            tol.cluster,
        ));
    }
    Ok((centers, spaces))
}

fn mu_bar(modal: &ModalForm, tol: &Tolerances) -> Result<Option<f64>> {
    let mut best = f64::INFINITY;
    for k in 0..modal.n() {
        let (centers, _) = block_eigenspaces(&modal.b_block(k, k), tol)?;
        for w in centers.windows(2) {
            best = best.min(w[1] - w[0]);
        }
    }
    Ok(best.is_finite().then_some(0.5 * best))
}

/// `min_k min_μ λ_min(Uᵀ G_kk U)` with `U` a basis of `E_μ(B_kk) ∩ 1_q^⊥`.
fn gamma_bar_squared(modal: &ModalForm, tol: &Tolerances) -> Result<f64> {
    let q = modal.q();
    let ones = RealMatrix::from_fn(q, q, |_, _| 1.0);
    let complement = nullspace_basis(&ones, tol.rank)?;
    let mut best = f64::INFINITY;
    for k in 0..modal.n() {
        let g = modal.g_block(k, k);
        let (_, spaces) = block_eigenspaces(&modal.b_block(k, k), tol)?;
        for e in spaces {
            let u = subspace_intersection(&e, &complement, tol.angle)?;
            if u.is_empty() {
                continue;
            }
            let restricted = u
                .matrix()
                .transpose()
                .matmul(&g)
                .matmul(u.matrix())
                .symmetrized();
            let min = sym_eig(&restricted)?.values[0];
            best = best.min(min);
        }
    }
    Ok(if best.is_finite() { best } else { 0.0 })
}
