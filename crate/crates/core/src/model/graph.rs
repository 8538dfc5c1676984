use crate::error::{Error, Result};
use crate::linalg::{sym_eigenvalues, RealMatrix};

/// Symmetry and PSD tolerance for coupling weights, relative to `‖W‖`.
pub const WEIGHT_TOL: f64 = 1e-12;

/// One undirected coupling element between oscillators `i < j` (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: RealMatrix,
}

impl Edge {
    /// Stores the pair with the smaller index first.
    pub fn new(i: usize, j: usize, weight: RealMatrix) -> Self {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        Self { i, j, weight }
    }

    fn label(&self) -> String {
        format!("({},{})", self.i + 1, self.j + 1)
    }
}

/// Coupling data shared by every edge: `D_ij = d_ij·C_dᵀC_d`, `R_ij = r_ij·C_rᵀC_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Commensurable {
    pub c_d: RealMatrix,
    pub c_r: Option<RealMatrix>,
    /// Symmetric `q x q` matrix of nonnegative scalars with zero diagonal.
    pub d: RealMatrix,
    pub r: RealMatrix,
}

/// Scalar weights expanded against a shared output matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CommensurableExpansion {
    pub edges: Vec<Edge>,
    /// `lap(d_ij)`, the `q x q` scalar Laplacian.
    pub scalar_laplacian: RealMatrix,
}

/// Topology and weights of the array.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingGraph {
    q: usize,
    n: usize,
    dissipative: Vec<Edge>,
    restorative: Vec<Edge>,
    epsilon: f64,
    commensurable: Option<Commensurable>,
}

impl CouplingGraph {
    /// Validates edges for `q` oscillators with `n x n` weights.
    pub fn new(
        q: usize,
        n: usize,
        dissipative: Vec<Edge>,
        restorative: Vec<Edge>,
        epsilon: f64,
    ) -> Result<Self> {
        let mut errors = Vec::new();
        if q == 0 {
            errors.push("the array needs at least one oscillator".into());
        }
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            errors.push(format!(
                "epsilon must be finite and nonnegative, got {epsilon}"
            ));
        }
        validate_edges("dissipative", &dissipative, q, n, &mut errors);
        validate_edges("restorative", &restorative, q, n, &mut errors);
        if !errors.is_empty() {
            return Err(Error::InvalidModel(errors));
        }
        let sym = |edges: Vec<Edge>| {
            edges
                .into_iter()
                .map(|e| Edge {
                    weight: e.weight.symmetrized(),
                    ..e
                })
                .collect()
        };
        Ok(Self {
            q,
            n,
            dissipative: sym(dissipative),
            restorative: sym(restorative),
            epsilon,
            commensurable: None,
        })
    }

    /// Builds the graph from commensurable data; edge weights are expanded.
    pub fn commensurable(q: usize, data: Commensurable, epsilon: f64) -> Result<Self> {
        let n = data.c_d.cols();
        let mut errors = Vec::new();
        if let Some(c_r) = &data.c_r {
            if c_r.cols() != n {
                errors.push(format!("C_r has {} columns but C_d has {n}", c_r.cols()));
            }
        }
        for (name, s) in [("d", &data.d), ("r", &data.r)] {
            if s.rows() != q || s.cols() != q {
                errors.push(format!(
                    "scalar weights {name} must be {q}x{q}, got {}x{}",
                    s.rows(),
                    s.cols()
                ));
            } else if !s.is_symmetric(0.0) {
                errors.push(format!("scalar weights {name} must be symmetric"));
            }
        }
        if data.c_r.is_none() && data.r.max_abs() > 0.0 {
            errors.push("restorative scalars r given without C_r".into());
        }
        if !errors.is_empty() {
            return Err(Error::InvalidModel(errors));
        }
        let diss = commensurable_expand(&data.c_d, &data.d)?;
        let rest = match &data.c_r {
            Some(c_r) => commensurable_expand(c_r, &data.r)?,
            None => CommensurableExpansion {
                edges: Vec::new(),
                scalar_laplacian: RealMatrix::zeros(q, q),
            },
        };
        let mut g = Self::new(q, n, diss.edges, rest.edges, epsilon)?;
        g.commensurable = Some(data);
        Ok(g)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dissipative(&self) -> &[Edge] {
        &self.dissipative
    }

    pub fn restorative(&self) -> &[Edge] {
        &self.restorative
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn commensurable_data(&self) -> Option<&Commensurable> {
        self.commensurable.as_ref()
    }

    /// True when every restorative weight is zero.
    pub fn is_purely_dissipative(&self) -> bool {
        self.restorative.iter().all(|e| e.weight.max_abs() == 0.0)
    }

    /// Copy with a different restorative strength.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self {
            epsilon,
            ..self.clone()
        }
    }
}

fn validate_edges(kind: &str, edges: &[Edge], q: usize, n: usize, errors: &mut Vec<String>) {
    let mut seen = std::collections::BTreeSet::new();
    for e in edges {
        let label = e.label();
        if e.i == e.j {
            errors.push(format!("{kind} edge {label}: self-loops are not allowed"));
            continue;
        }
        if e.j >= q {
            errors.push(format!(
                "{kind} edge {label}: node index out of range for q = {q}"
            ));
            continue;
        }
        if !seen.insert((e.i, e.j)) {
            errors.push(format!("{kind} edge {label}: listed more than once"));
        }
        if let Err(msg) = check_weight(&e.weight, n) {
            errors.push(format!("{kind} edge {label}: {msg}"));
        }
    }
}

/// Checks `W = Wᵀ ⪰ 0` to within `WEIGHT_TOL · ‖W‖`.
pub fn check_weight(w: &RealMatrix, n: usize) -> std::result::Result<(), String> {
    if w.rows() != n || w.cols() != n {
        return Err(format!(
            "weight must be {n}x{n}, got {}x{}",
            w.rows(),
            w.cols()
        ));
    }
    if !w.is_finite() {
        return Err("weight has non-finite entries".into());
    }
    if !w.is_symmetric(WEIGHT_TOL) {
        return Err("weight violates symmetry W = W^T".into());
    }
    let ev = sym_eigenvalues(&w.symmetrized()).map_err(|e| e.to_string())?;
    let norm = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if ev.first().is_some_and(|&min| min < -WEIGHT_TOL * norm) {
        return Err(format!(
            "weight is not positive semidefinite (smallest eigenvalue {:e})",
            ev[0]
        ));
    }
    Ok(())
}

/// `lap(W_ij)`: block `(i,i)` holds `Σ_j W_ij`, block `(i,j)` holds `-W_ij`.
///
/// Each edge is stored once; the builder fills both `(i,j)` and `(j,i)`.
pub fn build_laplacian(edges: &[Edge], q: usize, n: usize) -> Result<RealMatrix> {
    let mut errors = Vec::new();
    validate_edges("coupling", edges, q, n, &mut errors);
    if !errors.is_empty() {
        return Err(Error::InvalidModel(errors));
    }
    let mut l = RealMatrix::zeros(q * n, q * n);
    for e in edges {
        let w = e.weight.symmetrized();
        for a in 0..n {
            for b in 0..n {
                let x = w[(a, b)];
                l[(e.i * n + a, e.i * n + b)] += x;
                l[(e.j * n + a, e.j * n + b)] += x;
                l[(e.i * n + a, e.j * n + b)] -= x;
                l[(e.j * n + a, e.i * n + b)] -= x;
            }
        }
    }
    Ok(l)
}

/// Expands scalar weights `d_ij` against `C`: edge `(i,j)` gets `d_ij·CᵀC`.
/// Zero scalars produce no edge.
pub fn commensurable_expand(c: &RealMatrix, d: &RealMatrix) -> Result<CommensurableExpansion> {
    let q = d.rows();
    let mut errors = Vec::new();
    if !c.is_finite() {
        errors.push("output matrix C has non-finite entries".to_string());
    }
    for i in 0..q {
        for j in 0..d.cols() {
            let x = d[(i, j)];
            if !x.is_finite() || x < 0.0 {
                errors.push(format!(
                    "scalar weight ({},{}) must be nonnegative, got {x}",
                    i + 1,
                    j + 1
                ));
            }
        }
        if d.cols() > i && d[(i, i)] != 0.0 {
            errors.push(format!("scalar weight ({0},{0}) must be zero", i + 1));
        }
    }
    if !errors.is_empty() {
        return Err(Error::InvalidModel(errors));
    }
    let ctc = c.transpose().matmul(c);
    let mut edges = Vec::new();
    let mut scalar = RealMatrix::zeros(q, q);
    for i in 0..q {
        for j in (i + 1)..q {
            let x = d[(i, j)];
            if x == 0.0 {
                continue;
            }
            edges.push(Edge::new(i, j, ctc.scale(x)));
            scalar[(i, i)] += x;
            scalar[(j, j)] += x;
            scalar[(i, j)] -= x;
            scalar[(j, i)] -= x;
        }
    }
    Ok(CommensurableExpansion {
        edges,
        scalar_laplacian: scalar,
    })
}

/// Checks membership in the Laplacian set for `q` blocks of size `n`:
/// symmetric, positive semidefinite and annihilating `1_q ⊗ I_n`.
pub fn is_laplacian(l: &RealMatrix, q: usize, n: usize, tol: f64) -> bool {
    if l.rows() != q * n || l.cols() != q * n {
        return false;
    }
    let scale = l.max_abs().max(1.0);
    if !l.is_symmetric(tol) {
        return false;
    }
    for a in 0..q * n {
        for b in 0..n {
            let s: f64 = (0..q).map(|blk| l[(a, blk * n + b)]).sum();
            if s.abs() > tol * scale {
                return false;
            }
        }
    }
    match sym_eigenvalues(l) {
        Ok(ev) => ev.first().is_none_or(|&m| m >= -tol * scale),
        Err(_) => false,
    }
}
