//! Orthonormal subspace bases, null spaces and intersections.

use super::matrix::RealMatrix;
use super::sym_eig::sym_eig;
use crate::error::{Error, Result};

/// Orthonormal basis of a subspace of `R^ambient`, stored as columns.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    basis: RealMatrix,
    /// Tolerance used to decide the rank when the basis was computed.
    pub tol: f64,
}

impl SubspaceBasis {
    /// Wraps columns that the caller guarantees to be orthonormal.
    pub fn from_orthonormal(basis: RealMatrix, tol: f64) -> Self {
        Self { basis, tol }
    }

    /// The zero subspace of `R^ambient`.
    pub fn empty(ambient: usize, tol: f64) -> Self {
        Self {
            basis: RealMatrix::zeros(ambient, 0),
            tol,
        }
    }

    /// Orthonormalizes `vectors` (columns of `raw`) with modified Gram-Schmidt,
    /// dropping columns whose residual falls below `drop_tol` times their norm.
    pub fn orthonormalize(raw: &RealMatrix, drop_tol: f64) -> Self {
        let m = raw.rows();
        let mut cols: Vec<Vec<f64>> = Vec::new();
        for j in 0..raw.cols() {
            let mut v = raw.column(j);
            let n0 = super::norm2(&v);
            if n0 == 0.0 {
                continue;
            }
            // Two passes of projection keep the result orthogonal to roundoff.
            for _ in 0..2 {
                for u in &cols {
                    let d = super::dot(u, &v);
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= d * ui;
                    }
                }
            }
            let n1 = super::norm2(&v);
            if n1 > drop_tol * n0 {
                v.iter_mut().for_each(|x| *x /= n1);
                cols.push(v);
            }
        }
        Self {
            basis: RealMatrix::from_columns(m, &cols),
            tol: drop_tol,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.basis
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.basis.column(k)
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        let coeffs = self.basis.transpose().mul_vec(x);
        self.basis.mul_vec(&coeffs)
    }

    /// `‖x - proj(x)‖`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let p = self.project(x);
        x.iter()
            .zip(&p)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Basis of `{v : ‖Av‖ ≤ tol·‖A‖₂·‖v‖}` for a symmetric PSD matrix `A`,
/// i.e. the eigenvectors whose eigenvalues do not exceed `tol·‖A‖₂`.
pub fn nullspace_basis(a: &RealMatrix, tol: f64) -> Result<SubspaceBasis> {
    let eig = sym_eig(a)?;
    let norm = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let threshold = tol * norm;
    if eig
        .values
        .first()
        .is_some_and(|&v| v < -threshold.max(1e-12 * norm))
    {
        return Err(Error::InvalidInput(
            "nullspace_basis expects a positive semidefinite matrix".into(),
        ));
    }
    let idx: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] <= threshold)
        .collect();
    Ok(SubspaceBasis {
        basis: eig.vectors.select_columns(&idx),
        tol,
    })
}

/// Principal-angle cosines between two subspaces, descending, together with
/// the matching principal vectors on the side of `u`.
pub fn principal_angles(u: &SubspaceBasis, v: &SubspaceBasis) -> Result<(Vec<f64>, RealMatrix)> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "subspaces live in different spaces ({} vs {})",
            u.ambient_dim(),
            v.ambient_dim()
        )));
    }
    if u.is_empty() || v.is_empty() {
        return Ok((Vec::new(), RealMatrix::zeros(u.ambient_dim(), 0)));
    }
    // Singular values of M = UᵀV are the cosines; left singular vectors are
    // eigenvectors of M Mᵀ.
    let m = u.matrix().transpose().matmul(v.matrix());
    let mmt = m.matmul(&m.transpose()).symmetrized();
    let eig = sym_eig(&mmt)?;
    let k = eig.values.len();
    let order: Vec<usize> = (0..k).rev().collect();
    let cosines = order
        .iter()
        .map(|&i| eig.values[i].max(0.0).sqrt().min(1.0))
        .collect();
    let vectors = u.matrix().matmul(&eig.vectors.select_columns(&order));
    Ok((cosines, vectors))
}

/// Orthonormal basis of `span U ∩ span V`. A principal direction is kept when
/// its cosine is at least `1 - tol`.
pub fn subspace_intersection(
    u: &SubspaceBasis,
    v: &SubspaceBasis,
    tol: f64,
) -> Result<SubspaceBasis> {
    let (cosines, vectors) = principal_angles(u, v)?;
    let keep: Vec<usize> = cosines
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= 1.0 - tol)
        .map(|(i, _)| i)
        .collect();
    let raw = vectors.select_columns(&keep);
    // Reorthonormalize to remove the roundoff of the two products.
    let out = SubspaceBasis::orthonormalize(&raw, 1e-6);
    Ok(SubspaceBasis { tol, ..out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(cols: &[Vec<f64>]) -> SubspaceBasis {
        SubspaceBasis::orthonormalize(&RealMatrix::from_columns(cols[0].len(), cols), 1e-12)
    }

    #[test]
    fn edge_laplacian_kernel_is_constants() {
        let l = RealMatrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap();
        let n = nullspace_basis(&l, 1e-9).unwrap();
        assert_eq!(n.dim(), 1);
        let v = n.vector(0);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - r).abs() < 1e-14 && (v[0] - v[1]).abs() < 1e-14);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        assert_eq!(
            nullspace_basis(&RealMatrix::zeros(5, 5), 1e-9)
                .unwrap()
                .dim(),
            5
        );
    }

    #[test]
    fn coordinate_plane_intersections() {
        let e = |i: usize| {
            let mut v = vec![0.0; 3];
            v[i] = 1.0;
            v
        };
        let a = basis(&[e(0), e(1)]);
        let b = basis(&[e(1), e(2)]);
        let ab = subspace_intersection(&a, &b, 1e-9).unwrap();
        assert_eq!(ab.dim(), 1);
        assert!((ab.vector(0)[1].abs() - 1.0).abs() < 1e-14);

        let c = basis(&[e(0)]);
        let d = basis(&[e(1)]);
        assert!(subspace_intersection(&c, &d, 1e-9).unwrap().is_empty());
    }

    #[test]
    fn mismatched_ambient_dimension() {
        let a = SubspaceBasis::empty(3, 1e-9);
        let b = SubspaceBasis::empty(4, 1e-9);
        assert!(subspace_intersection(&a, &b, 1e-9).is_err());
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let raw = RealMatrix::from_columns(
            3,
            &[
                vec![1.0, 1.0, 0.0],
                vec![2.0, 2.0, 0.0],
                vec![0.0, 0.0, 1.0],
            ],
        );
        let b = SubspaceBasis::orthonormalize(&raw, 1e-10);
        assert_eq!(b.dim(), 2);
    }
}
