//! Cyclic Jacobi eigensolver for dense real symmetric matrices.

use super::matrix::RealMatrix;
use crate::error::{Error, Result};

/// Symmetry tolerance accepted on input, relative to `‖A‖_F`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Sweeps stop once the off-diagonal Frobenius mass drops below this
/// fraction of `‖A‖_F`.
const OFF_DIAGONAL_TOL: f64 = 1e-13;

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = Q Λ Qᵀ` of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: RealMatrix,
}

impl SymEig {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }
}

fn validate(a: &RealMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::InvalidInput(format!(
            "symmetric eigensolver needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    if !a.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::InvalidInput(
            "matrix is not symmetric to within 1e-12 relative".into(),
        ));
    }
    Ok(())
}

fn off_diagonal_norm(a: &RealMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += 2.0 * a[(i, j)] * a[(i, j)];
        }
    }
    s.sqrt()
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a symmetric matrix.
///
/// Uses cyclic-by-row Jacobi rotations. The first three sweeps skip entries
/// below a threshold proportional to the mean off-diagonal magnitude; later
/// sweeps rotate every nonzero entry.
pub fn sym_eig(a: &RealMatrix) -> Result<SymEig> {
    validate(a)?;
    let n = a.rows();
    let mut a = a.symmetrized();
    let mut v = RealMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= OFF_DIAGONAL_TOL * scale {
            converged = true;
            break;
        }
        let threshold = if sweep < 3 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= threshold || apq == 0.0 {
                    continue;
                }
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > OFF_DIAGONAL_TOL * scale {
        return Err(Error::NumericalFailure(format!(
            "Jacobi sweeps did not converge for a {n}x{n} matrix within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = v.select_columns(&order);

    // Deterministic sign: the largest-magnitude entry of each column is positive.
    for j in 0..n {
        let mut best = 0usize;
        for i in 0..n {
            if vectors[(i, j)].abs() > vectors[(best, j)].abs() + 1e-14 {
                best = i;
            }
        }
        if vectors[(best, j)] < 0.0 {
            for i in 0..n {
                vectors[(i, j)] = -vectors[(i, j)];
            }
        }
    }
    Ok(SymEig { values, vectors })
}

/// Symmetric eigenvalues only.
pub fn sym_eigenvalues(a: &RealMatrix) -> Result<Vec<f64>> {
    sym_eig(a).map(|e| e.values)
}

fn rotate(a: &mut RealMatrix, v: &mut RealMatrix, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    // signum(+0.0) = 1, so equal diagonal entries rotate by 45 degrees.
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[(p, p)] -= t * apq;
    a[(q, q)] += t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp;
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_spectrum() {
        let e = sym_eig(&RealMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn swap_matrix() {
        let a = RealMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let e = sym_eig(&a).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_is_already_diagonal() {
        let e = sym_eig(&RealMatrix::zeros(4, 4)).unwrap();
        assert!(e.values.iter().all(|&x| x == 0.0));
        assert_eq!(e.vectors, RealMatrix::identity(4));
    }

    #[test]
    fn rejects_nonsquare_and_asymmetric() {
        assert!(matches!(
            sym_eig(&RealMatrix::zeros(2, 3)),
            Err(Error::InvalidInput(_))
        ));
        let a = RealMatrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(sym_eig(&a), Err(Error::InvalidInput(_))));
        let mut b = RealMatrix::identity(2);
        b[(0, 0)] = f64::NAN;
        assert!(matches!(sym_eig(&b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn tridiagonal_spectrum() {
        // tridiag(-1, 2, -1) of order 3: 2 - 2cos(kπ/4)
        let a = RealMatrix::from_rows(&[[2.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 2.0]])
            .unwrap();
        let e = sym_eig(&a).unwrap();
        for (k, &lam) in e.values.iter().enumerate() {
            let expect = 2.0 - 2.0 * (((k + 1) as f64) * std::f64::consts::PI / 4.0).cos();
            assert!((lam - expect).abs() < 1e-14, "{lam} vs {expect}");
        }
    }
}
