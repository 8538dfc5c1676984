//! Dense real and complex matrix kernels.
//!
//! Everything here is a pure function of its inputs. Sizes of interest are
//! small (a few dozen rows), so the kernels favour robustness over speed:
//! Jacobi for symmetric spectra, balanced Hessenberg QR for general complex
//! spectra, one-sided Jacobi for singular values.

mod complex_eig;
mod matrix;
mod norm;
mod subspace;
mod sym_eig;

pub use complex_eig::{complex_eig, sort_by_real_part};
pub use matrix::{dot, norm2, ComplexMatrix, Matrix, RealMatrix};
pub use norm::{singular_values, spectral_norm, spectral_norm_complex};
pub use subspace::{nullspace_basis, principal_angles, subspace_intersection, SubspaceBasis};
pub use sym_eig::{sym_eig, sym_eigenvalues, SymEig, SYMMETRY_TOL};

pub use num_complex::Complex64;

/// Default relative tolerance for rank and null-space decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Groups ascending values into clusters whose consecutive gaps do not exceed
/// `gap_tol`. Returns index ranges into `values`.
pub fn cluster_sorted(values: &[f64], gap_tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap_tol {
            if k > start {
                out.push(start..k);
            }
            start = k;
        }
    }
    out
}
