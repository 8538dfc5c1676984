//! Spectral (induced 2-) norms.

use super::matrix::{ComplexMatrix, RealMatrix};

const MAX_SWEEPS: usize = 60;

/// Singular values of `a` by one-sided (Hestenes) Jacobi orthogonalization of
/// its columns. Returned in descending order.
pub fn singular_values(a: &RealMatrix) -> Vec<f64> {
    // Work on the orientation with fewer columns.
    let work = if a.cols() > a.rows() {
        a.transpose()
    } else {
        a.clone()
    };
    let n = work.cols();
    let mut cols: Vec<Vec<f64>> = (0..n).map(|j| work.column(j)).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let alpha: f64 = cols[i].iter().map(|x| x * x).sum();
                let beta: f64 = cols[j].iter().map(|x| x * x).sum();
                let gamma: f64 = cols[i].iter().zip(&cols[j]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (lo, hi) = cols.split_at_mut(j);
                for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                    let (a, b) = (*x, *y);
                    *x = c * a - s * b;
                    *y = s * a + c * b;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| super::norm2(c)).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Largest singular value of a real matrix.
pub fn spectral_norm(a: &RealMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Largest singular value of a complex matrix, via its real embedding.
pub fn spectral_norm_complex(a: &ComplexMatrix) -> f64 {
    spectral_norm(&a.real_embedding())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_edge_laplacian() {
        assert!((spectral_norm(&RealMatrix::identity(4)) - 1.0).abs() < 1e-15);
        let l = RealMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        assert!((spectral_norm(&l) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rectangular_and_empty() {
        let a = RealMatrix::from_rows(&[[3.0, 0.0, 0.0], [0.0, 0.0, 4.0]]).unwrap();
        assert!((spectral_norm(&a) - 4.0).abs() < 1e-14);
        assert_eq!(spectral_norm(&RealMatrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn complex_scalar() {
        let z = ComplexMatrix::from_rows(&[[num_complex::Complex64::new(3.0, 4.0)]]).unwrap();
        assert!((spectral_norm_complex(&z) - 5.0).abs() < 1e-14);
    }
}
