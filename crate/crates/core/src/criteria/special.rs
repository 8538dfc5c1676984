use serde::{Deserialize, Serialize};

use super::bound::{weak_coupling_bound_with, BoundStatus};
use super::modal::modal_transform;
use super::spectral::check_epsilon;
use super::{decide, Method, SyncVerdict, Tolerances};
use crate::error::{Error, Result};
use crate::linalg::{
    complex_eig, norm2, spectral_norm, spectral_norm_complex, sym_eig, RealMatrix,
};
use crate::model::{gamma, ArraySystem};

fn axis_threshold(sys: &ArraySystem, epsilon: f64, tol: &Tolerances) -> f64 {
    tol.axis * spectral_norm_complex(&gamma(sys, epsilon)).max(1.0)
}

/// Pure dissipative coupling: synchronizes iff `λ_2(G_kk) > 0` for every mode.
pub fn pure_dissipative_check(sys: &ArraySystem) -> Result<SyncVerdict> {
    pure_dissipative_check_with(sys, &Tolerances::default())
}

pub fn pure_dissipative_check_with(sys: &ArraySystem, tol: &Tolerances) -> Result<SyncVerdict> {
    if sys.has_restorative() {
        return Err(Error::Unsupported(
            "the pure-dissipative check needs all restorative weights to be zero".into(),
        ));
    }
    let tau = axis_threshold(sys, 0.0, tol);
    let modal = modal_transform(sys, 0.0)?;
    let mut count = 0;
    let mut margin: Option<f64> = None;
    for k in 0..sys.n() {
        let ev = sym_eig(&modal.g_block(k, k))?.values;
        count += ev.iter().filter(|&&v| v <= tau).count();
        if let Some(&l2) = ev.get(1) {
            margin = Some(margin.map_or(l2, |m| m.min(l2)));
        }
    }
    let (synchronizes, diagnostic) = decide(count, sys.n(), margin, tau);
    Ok(SyncVerdict {
        synchronizes,
        imaginary_axis_count: count,
        margin,
        method: Method::PureDissipative,
        tolerance: tau,
        diagnostic,
    })
}

/// Single-mode oscillators: `λ_2(L_d) > 0` without springs, otherwise
/// `Re λ_2(L_d + j ε L_r) > 0`, with `ε` taken from the graph.
pub fn harmonic_check(sys: &ArraySystem) -> Result<SyncVerdict> {
    harmonic_check_with(sys, &Tolerances::default())
}

pub fn harmonic_check_with(sys: &ArraySystem, tol: &Tolerances) -> Result<SyncVerdict> {
    if sys.n() != 1 {
        return Err(Error::Unsupported(format!(
            "the harmonic check needs n = 1, got n = {}",
            sys.n()
        )));
    }
    let epsilon = sys.graph().epsilon();
    check_epsilon(epsilon)?;
    let tau = axis_threshold(sys, epsilon, tol);
    let real_parts: Vec<f64> = if !sys.has_restorative() || epsilon == 0.0 {
        sym_eig(sys.l_d())?.values
    } else {
        let pencil = RealMatrix::complex_from_parts(sys.l_d(), &sys.l_r().scale(epsilon));
        complex_eig(&pencil)?.iter().map(|z| z.re).collect()
    };
    let count = real_parts.iter().filter(|&&v| v <= tau).count();
    let margin = real_parts.get(1).copied();
    let (synchronizes, diagnostic) = decide(count, 1, margin, tau);
    Ok(SyncVerdict {
        synchronizes,
        imaginary_axis_count: count,
        margin,
        method: Method::Harmonic,
        tolerance: tau,
        diagnostic,
    })
}

/// Weak-coupling sufficiency for commensurable coupling with springs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingSufficiency {
    /// Both pairs observable and `Re λ_2(ℓ_d + j ℓ_r) > 0`.
    pub holds: bool,
    /// Radius below which synchronization is guaranteed, when computable.
    pub r: Option<f64>,
}

/// Diagnostics for commensurable coupling.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommensurableReport {
    /// `α_k = ‖C_d ṽ_k‖²`.
    pub alpha: Vec<f64>,
    /// `β_k = ‖C_r ṽ_k‖²`, empty without `C_r`.
    pub beta: Vec<f64>,
    pub observable_d: bool,
    pub observable_r: Option<bool>,
    /// `λ_2(ℓ_d)` without springs, otherwise `Re λ_2(ℓ_d + j ℓ_r)`.
    pub scalar_margin: Option<f64>,
    pub tolerance: f64,
    /// Exact verdict when there are no springs.
    pub verdict: Option<SyncVerdict>,
    /// Sufficient condition for small `ε` when there are springs.
    pub weak_coupling: Option<WeakCouplingSufficiency>,
}

pub fn commensurable_check(sys: &ArraySystem) -> Result<CommensurableReport> {
    commensurable_check_with(sys, &Tolerances::default())
}

/// `‖C ṽ_k‖` against `rank·‖C‖₂·‖ṽ_k‖`: the eigenvector observability test.
/// Returns `‖C ṽ_k‖²` and whether each mode is seen by the output.
fn output_energy(c: &RealMatrix, v_tilde: &RealMatrix, tol: f64) -> (Vec<f64>, Vec<bool>) {
    let c_norm = spectral_norm(c);
    (0..v_tilde.cols())
        .map(|k| {
            let v = v_tilde.column(k);
            let y = norm2(&c.mul_vec(&v));
            (y * y, y > tol * c_norm * norm2(&v))
        })
        .unzip()
}

pub fn commensurable_check_with(
    sys: &ArraySystem,
    tol: &Tolerances,
) -> Result<CommensurableReport> {
    let data = sys.graph().commensurable_data().ok_or_else(|| {
        Error::Unsupported("the commensurable check needs commensurable coupling data".into())
    })?;
    let ell_d = sys
        .ell_d()
        .expect("commensurable systems carry scalar Laplacians");
    let ell_r = sys
        .ell_r()
        .expect("commensurable systems carry scalar Laplacians");
    let (alpha, seen_d) = output_energy(&data.c_d, sys.v_tilde(), tol.rank);
    let observable_d = seen_d.iter().all(|&s| s);
    let (beta, observable_r) = match &data.c_r {
        Some(c_r) => {
            let (b, seen) = output_energy(c_r, sys.v_tilde(), tol.rank);
            (b, Some(seen.iter().all(|&s| s)))
        }
        None => (Vec::new(), None),
    };
    let springs = ell_r.max_abs() > 0.0;
    let scalar_norm = spectral_norm_complex(&RealMatrix::complex_from_parts(ell_d, ell_r));
    let tolerance = tol.axis * scalar_norm.max(1.0);

    if !springs {
        let ev = sym_eig(ell_d)?.values;
        let scalar_margin = ev.get(1).copied();
        // G_kk = α_k ℓ_d: an unobservable mode keeps all q directions on the axis.
        let tau = axis_threshold(sys, 0.0, tol);
        let mut count = 0;
        let mut margin: Option<f64> = None;
        for &a in &alpha {
            count += ev.iter().filter(|&&v| a * v <= tau).count();
            if let Some(&l2) = ev.get(1) {
                margin = Some(margin.map_or(a * l2, |m: f64| m.min(a * l2)));
            }
        }
        let (synchronizes, mut diagnostic) = decide(count, sys.n(), margin, tau);
        if !observable_d {
            diagnostic = Some("(C_d, M^-1 K) is not observable".to_string());
        }
        let verdict = SyncVerdict {
            synchronizes,
            imaginary_axis_count: count,
            margin,
            method: Method::Commensurable,
            tolerance: tau,
            diagnostic,
        };
        return Ok(CommensurableReport {
            alpha,
            beta,
            observable_d,
            observable_r,
            scalar_margin,
            tolerance,
            verdict: Some(verdict),
            weak_coupling: None,
        });
    }

    let ev = complex_eig(&RealMatrix::complex_from_parts(ell_d, ell_r))?;
    let scalar_margin = ev.get(1).map(|z| z.re);
    let holds =
        observable_d && observable_r == Some(true) && scalar_margin.is_some_and(|m| m > tolerance);
    let r = if sys.n() >= 2 {
        let b = weak_coupling_bound_with(sys, tol)?;
        (b.status == BoundStatus::Applicable).then_some(b.r)
    } else {
        None
    };
    Ok(CommensurableReport {
        alpha,
        beta,
        observable_d,
        observable_r,
        scalar_margin,
        tolerance,
        verdict: None,
        weak_coupling: Some(WeakCouplingSufficiency { holds, r }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize, Commensurable, CouplingGraph, Edge, OscillatorModel};

    fn scalar(x: f64) -> RealMatrix {
        RealMatrix::from_rows(&[[x]]).unwrap()
    }

    fn diag_model() -> OscillatorModel {
        OscillatorModel::new(RealMatrix::identity(2), RealMatrix::diag(&[1.0, 4.0])).unwrap()
    }

    fn harmonic(q: usize, dampers: &[(usize, usize)], springs: &[(usize, usize)]) -> ArraySystem {
        let model = OscillatorModel::new(scalar(1.0), scalar(1.0)).unwrap();
        let e = |v: &[(usize, usize)]| {
            v.iter()
                .map(|&(i, j)| Edge::new(i, j, scalar(1.0)))
                .collect()
        };
        normalize(
            &model,
            &CouplingGraph::new(q, 1, e(dampers), e(springs), 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn pure_dissipative_full_rank_weight() {
        let graph = CouplingGraph::new(
            2,
            2,
            vec![Edge::new(0, 1, RealMatrix::identity(2))],
            vec![],
            1.0,
        )
        .unwrap();
        let v = pure_dissipative_check(&normalize(&diag_model(), &graph).unwrap()).unwrap();
        assert!(v.is_yes());
        assert!((v.margin.unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn pure_dissipative_rank_one_weight() {
        let w = RealMatrix::diag(&[1.0, 0.0]);
        let graph = CouplingGraph::new(2, 2, vec![Edge::new(0, 1, w)], vec![], 1.0).unwrap();
        let v = pure_dissipative_check(&normalize(&diag_model(), &graph).unwrap()).unwrap();
        assert!(v.is_no());
        assert_eq!(v.imaginary_axis_count, 3);
    }

    #[test]
    fn pure_dissipative_refuses_springs() {
        let sys = harmonic(2, &[(0, 1)], &[(0, 1)]);
        assert!(matches!(
            pure_dissipative_check(&sys),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn harmonic_connected_and_disconnected() {
        assert!(harmonic_check(&harmonic(3, &[(0, 1), (1, 2)], &[]))
            .unwrap()
            .is_yes());
        let v = harmonic_check(&harmonic(4, &[(0, 1), (2, 3)], &[])).unwrap();
        assert!(v.is_no());
        assert_eq!(v.imaginary_axis_count, 2);
    }

    #[test]
    fn harmonic_with_springs_matches_spectral() {
        let sys = harmonic(3, &[(0, 1)], &[(1, 2)]);
        let h = harmonic_check(&sys).unwrap();
        let s = crate::criteria::sync_check_spectral(&sys, 1.0).unwrap();
        assert_eq!(h.synchronizes, s.synchronizes);
        assert_eq!(h.imaginary_axis_count, s.imaginary_axis_count);
    }

    #[test]
    fn harmonic_refuses_multimode() {
        let graph = CouplingGraph::new(2, 2, vec![], vec![], 1.0).unwrap();
        let sys = normalize(&diag_model(), &graph).unwrap();
        assert!(matches!(harmonic_check(&sys), Err(Error::Unsupported(_))));
    }

    fn commensurable(c_d: &[[f64; 2]]) -> ArraySystem {
        let data = Commensurable {
            c_d: RealMatrix::from_rows(c_d).unwrap(),
            c_r: None,
            d: RealMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
            r: RealMatrix::zeros(2, 2),
        };
        normalize(
            &diag_model(),
            &CouplingGraph::commensurable(2, data, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn commensurable_unobservable_output() {
        let rep = commensurable_check(&commensurable(&[[1.0, 0.0]])).unwrap();
        assert!(!rep.observable_d);
        assert_eq!(rep.alpha, vec![1.0, 0.0]);
        assert!(rep.verdict.unwrap().is_no());
    }

    #[test]
    fn commensurable_observable_output() {
        let sys = commensurable(&[[1.0, 1.0]]);
        let rep = commensurable_check(&sys).unwrap();
        assert!(rep.observable_d);
        let v = rep.verdict.unwrap();
        assert!(v.is_yes());
        let s = crate::criteria::sync_check_spectral(&sys, 1.0).unwrap();
        assert_eq!(v.imaginary_axis_count, s.imaginary_axis_count);
    }

    #[test]
    fn commensurable_requires_data() {
        let sys = harmonic(2, &[(0, 1)], &[]);
        assert!(matches!(
            commensurable_check(&sys),
            Err(Error::Unsupported(_))
        ));
    }
}
