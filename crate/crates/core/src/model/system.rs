use super::graph::{build_laplacian, commensurable_expand, CouplingGraph, Edge};
use super::oscillator::{OscillatorModel, DISTINCT_TOL};
use crate::error::{Error, Result};
use crate::linalg::{sym_eig, ComplexMatrix, RealMatrix};

/// Normal modes of one oscillator: `P = M^{-1/2} K M^{-1/2} = V diag(σ) Vᵀ`.
#[derive(Clone, Debug)]
pub struct NormalModes {
    pub p: RealMatrix,
    pub sigma: Vec<f64>,
    pub v: RealMatrix,
    /// Columns `ṽ_k = M^{-1/2} v_k`.
    pub v_tilde: RealMatrix,
    pub m_sqrt: RealMatrix,
    pub m_inv_sqrt: RealMatrix,
}

/// Computes `P`, its eigenpairs and `M^{±1/2}`, rejecting repeated `σ`.
pub fn normal_modes(model: &OscillatorModel) -> Result<NormalModes> {
    let me = sym_eig(model.mass())?;
    let q = &me.vectors;
    let root: Vec<f64> = me.values.iter().map(|v| v.sqrt()).collect();
    let inv_root: Vec<f64> = root.iter().map(|v| 1.0 / v).collect();
    let m_sqrt = q
        .matmul(&RealMatrix::diag(&root))
        .matmul(&q.transpose())
        .symmetrized();
    let m_inv_sqrt = q
        .matmul(&RealMatrix::diag(&inv_root))
        .matmul(&q.transpose())
        .symmetrized();
    let p = m_inv_sqrt
        .matmul(model.stiffness())
        .matmul(&m_inv_sqrt)
        .symmetrized();
    let pe = sym_eig(&p)?;
    let sigma = pe.values;
    let mut errors = Vec::new();
    for k in 1..sigma.len() {
        let gap = sigma[k] - sigma[k - 1];
        if gap <= DISTINCT_TOL * sigma[k].abs() {
            errors.push(format!(
                "normal-mode eigenvalues must be distinct: sigma_{} = {:e} and sigma_{} = {:e} differ by a relative gap of {:e}",
                k,
                sigma[k - 1],
                k + 1,
                sigma[k],
                gap / sigma[k].abs()
            ));
        }
    }
    if !errors.is_empty() {
        return Err(Error::InvalidModel(errors));
    }
    let v = pe.vectors;
    let v_tilde = m_inv_sqrt.matmul(&v);
    Ok(NormalModes {
        p,
        sigma,
        v,
        v_tilde,
        m_sqrt,
        m_inv_sqrt,
    })
}

/// The coupled array in normalized coordinates `z_i = M^{1/2} x_i`.
#[derive(Clone, Debug)]
pub struct ArraySystem {
    model: OscillatorModel,
    graph: CouplingGraph,
    modes: NormalModes,
    l_d: RealMatrix,
    l_r: RealMatrix,
    ell_d: Option<RealMatrix>,
    ell_r: Option<RealMatrix>,
}

/// Builds the normalized array from a unit model and its coupling graph.
pub fn normalize(model: &OscillatorModel, graph: &CouplingGraph) -> Result<ArraySystem> {
    let n = model.n();
    if graph.n() != n {
        return Err(Error::InvalidModel(vec![format!(
            "coupling weights are {0}x{0} but the oscillator has n = {n}",
            graph.n()
        )]));
    }
    let modes = normal_modes(model)?;
    let q = graph.q();
    let transform = |edges: &[Edge]| -> Vec<Edge> {
        edges
            .iter()
            .map(|e| Edge {
                weight: modes
                    .m_inv_sqrt
                    .matmul(&e.weight)
                    .matmul(&modes.m_inv_sqrt)
                    .symmetrized(),
                ..e.clone()
            })
            .collect()
    };
    let l_d = build_laplacian(&transform(graph.dissipative()), q, n)?;
    let l_r = build_laplacian(&transform(graph.restorative()), q, n)?;
    let (ell_d, ell_r) = match graph.commensurable_data() {
        Some(c) => {
            let ell_d = commensurable_expand(&c.c_d, &c.d)?.scalar_laplacian;
            let c_r = c.c_r.clone().unwrap_or_else(|| RealMatrix::zeros(0, n));
            let ell_r = commensurable_expand(&c_r, &c.r)?.scalar_laplacian;
            (Some(ell_d), Some(ell_r))
        }
        None => (None, None),
    };
    Ok(ArraySystem {
        model: model.clone(),
        graph: graph.clone(),
        modes,
        l_d,
        l_r,
        ell_d,
        ell_r,
    })
}

impl ArraySystem {
    pub fn model(&self) -> &OscillatorModel {
        &self.model
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn modes(&self) -> &NormalModes {
        &self.modes
    }

    pub fn q(&self) -> usize {
        self.graph.q()
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    /// `q·n`, the dimension of the stacked state.
    pub fn dim(&self) -> usize {
        self.q() * self.n()
    }

    pub fn p(&self) -> &RealMatrix {
        &self.modes.p
    }

    pub fn sigma(&self) -> &[f64] {
        &self.modes.sigma
    }

    pub fn v(&self) -> &RealMatrix {
        &self.modes.v
    }

    pub fn v_tilde(&self) -> &RealMatrix {
        &self.modes.v_tilde
    }

    pub fn l_d(&self) -> &RealMatrix {
        &self.l_d
    }

    pub fn l_r(&self) -> &RealMatrix {
        &self.l_r
    }

    pub fn ell_d(&self) -> Option<&RealMatrix> {
        self.ell_d.as_ref()
    }

    pub fn ell_r(&self) -> Option<&RealMatrix> {
        self.ell_r.as_ref()
    }

    /// True when `L_r` has no nonzero entry.
    pub fn has_restorative(&self) -> bool {
        self.l_r.max_abs() > 0.0
    }

    /// `I_q ⊗ P`.
    pub fn block_p(&self) -> RealMatrix {
        RealMatrix::identity(self.q()).kron(&self.modes.p)
    }

    /// `S_ε = I_q ⊗ P + ε L_r`, the stiffness of the normalized array.
    pub fn stiffness(&self, epsilon: f64) -> RealMatrix {
        (&self.block_p() + &self.l_r.scale(epsilon)).symmetrized()
    }

    /// `1_q ⊗ v`, with `1_q` the all-ones vector.
    pub fn sync_vector(&self, v: &[f64]) -> Vec<f64> {
        (0..self.q()).flat_map(|_| v.iter().copied()).collect()
    }
}

/// `Γ_ε = L_d + j(I_q ⊗ P + ε L_r)`.
pub fn gamma(sys: &ArraySystem, epsilon: f64) -> ComplexMatrix {
    RealMatrix::complex_from_parts(sys.l_d(), &sys.stiffness(epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Complex64;

    fn scalar(x: f64) -> RealMatrix {
        RealMatrix::from_rows(&[[x]]).unwrap()
    }

    fn two_node(p: f64, d: f64, r: f64) -> ArraySystem {
        let model = OscillatorModel::new(scalar(1.0), scalar(p)).unwrap();
        let rest = if r > 0.0 {
            vec![Edge::new(0, 1, scalar(r))]
        } else {
            vec![]
        };
        let graph = CouplingGraph::new(2, 1, vec![Edge::new(0, 1, scalar(d))], rest, 1.0).unwrap();
        normalize(&model, &graph).unwrap()
    }

    #[test]
    fn diagonal_model_modes() {
        let m =
            OscillatorModel::new(RealMatrix::identity(2), RealMatrix::diag(&[1.0, 4.0])).unwrap();
        let nm = normal_modes(&m).unwrap();
        assert_eq!(nm.sigma, vec![1.0, 4.0]);
        assert_eq!(nm.v, RealMatrix::identity(2));
    }

    #[test]
    fn scalar_mass_scaling() {
        let m = OscillatorModel::new(scalar(4.0), scalar(1.0)).unwrap();
        assert!((normal_modes(&m).unwrap().p[(0, 0)] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn repeated_sigma_rejected() {
        let m = OscillatorModel::new(RealMatrix::identity(2), RealMatrix::identity(2)).unwrap();
        let err = normal_modes(&m).unwrap_err().to_string();
        assert!(err.contains("sigma_1") && err.contains("sigma_2"), "{err}");
    }

    #[test]
    fn gamma_two_node() {
        let sys = two_node(4.0, 1.0, 0.0);
        let g = gamma(&sys, 3.0);
        assert_eq!(g[(0, 0)], Complex64::new(1.0, 4.0));
        assert_eq!(g[(0, 1)], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn gamma_without_damping_is_imaginary() {
        let model = OscillatorModel::new(scalar(1.0), scalar(2.0)).unwrap();
        let graph = CouplingGraph::new(3, 1, vec![], vec![], 1.0).unwrap();
        let sys = normalize(&model, &graph).unwrap();
        let g = gamma(&sys, 0.0);
        assert_eq!(g.real_part(), RealMatrix::zeros(3, 3));
        assert_eq!(g.imag_part(), RealMatrix::identity(3).scale(2.0));
    }

    #[test]
    fn dimension_mismatch() {
        let model = OscillatorModel::new(scalar(1.0), scalar(2.0)).unwrap();
        let graph = CouplingGraph::new(2, 2, vec![], vec![], 1.0).unwrap();
        assert!(normalize(&model, &graph).is_err());
    }

    #[test]
    fn epsilon_scales_restorative_part() {
        let sys = two_node(4.0, 1.0, 2.0);
        assert_eq!(gamma(&sys, 0.5)[(0, 1)], Complex64::new(-1.0, -1.0));
    }
}
