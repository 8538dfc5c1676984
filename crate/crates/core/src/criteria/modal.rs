use super::spectral::check_epsilon;
use crate::error::Result;
use crate::linalg::{ComplexMatrix, RealMatrix};
use crate::model::ArraySystem;

/// `L_d` and `L_r` expressed in the normal-mode basis and regrouped by mode.
///
/// Block ordering puts index `k·q + i` on oscillator `i`, mode `k`, so that
/// block `(k, ℓ)` is the `q x q` matrix `(I_q ⊗ v_kᵀ) L (I_q ⊗ v_ℓ)`.
#[derive(Clone, Debug)]
pub struct ModalForm {
    q: usize,
    n: usize,
    pub g: RealMatrix,
    pub b: RealMatrix,
    /// `Ω_ε = G + j(Λ ⊗ I_q + ε B)`.
    pub omega: ComplexMatrix,
    pub epsilon: f64,
    sigma: Vec<f64>,
    /// `permutation[k·q + i] = i·n + k`: block index to `I_q ⊗ V` column.
    pub permutation: Vec<usize>,
}

impl ModalForm {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn g_block(&self, k: usize, l: usize) -> RealMatrix {
        self.g.block(k * self.q, l * self.q, self.q, self.q)
    }

    pub fn b_block(&self, k: usize, l: usize) -> RealMatrix {
        self.b.block(k * self.q, l * self.q, self.q, self.q)
    }

    /// `G_kk + j B_kk`.
    pub fn diagonal_pencil(&self, k: usize) -> ComplexMatrix {
        RealMatrix::complex_from_parts(&self.g_block(k, k), &self.b_block(k, k))
    }

    /// Diagonal of `Λ ⊗ I_q` in block ordering.
    pub fn lambda_diag(&self) -> Vec<f64> {
        self.sigma
            .iter()
            .flat_map(|&s| std::iter::repeat_n(s, self.q))
            .collect()
    }

    /// `e_k ⊗ 1_q` in block ordering, with `1_q` the all-ones vector.
    pub fn sync_vector(&self, k: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.q * self.n];
        x[k * self.q..(k + 1) * self.q].fill(1.0);
        x
    }
}

/// Builds `G`, `B` and `Ω_ε` for the array.
pub fn modal_transform(sys: &ArraySystem, epsilon: f64) -> Result<ModalForm> {
    check_epsilon(epsilon)?;
    let q = sys.q();
    let n = sys.n();
    let dim = q * n;
    let t = RealMatrix::identity(q).kron(sys.v());
    let permutation: Vec<usize> = (0..dim).map(|a| (a % q) * n + a / q).collect();
    let tp = t.select_columns(&permutation);
    let sandwich = |l: &RealMatrix| tp.transpose().matmul(l).matmul(&tp).symmetrized();
    let g = sandwich(sys.l_d());
    let b = sandwich(sys.l_r());
    let sigma = sys.sigma().to_vec();
    let mut imag = b.scale(epsilon);
    for (a, &s) in sigma
        .iter()
        .flat_map(|s| std::iter::repeat_n(s, q))
        .enumerate()
    {
        imag[(a, a)] += s;
    }
    let omega = RealMatrix::complex_from_parts(&g, &imag);
    Ok(ModalForm {
        q,
        n,
        g,
        b,
        omega,
        epsilon,
        sigma,
        permutation,
    })
}
