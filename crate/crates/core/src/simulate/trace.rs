use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::integrator::{check_step, Integrator};
use crate::error::{Error, Result};
use crate::linalg::{norm2, RealMatrix};
use crate::model::{build_laplacian, ArraySystem};

/// Sampled trajectory of the normalized array.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    pub z: Vec<Vec<f64>>,
    pub v: Vec<Vec<f64>>,
    pub energy: Vec<f64>,
    pub sync_error: Vec<f64>,
    pub dt: f64,
    pub epsilon: f64,
    /// Seed of the random initial condition, when one was used.
    pub seed: Option<u64>,
}

impl SimulationTrace {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// CSV with a `#` metadata line, then `t,e,W,z_1..,v_1..` rows at 17
    /// significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let d = self.z.first().map_or(0, Vec::len);
        match self.seed {
            Some(s) => writeln!(
                out,
                "# seed={s} dt={:.16e} epsilon={:.16e}",
                self.dt, self.epsilon
            )?,
            None => writeln!(
                out,
                "# seed=none dt={:.16e} epsilon={:.16e}",
                self.dt, self.epsilon
            )?,
        }
        let mut header = String::from("t,e,W");
        for i in 1..=d {
            header.push_str(&format!(",z_{i}"));
        }
        for i in 1..=d {
            header.push_str(&format!(",v_{i}"));
        }
        writeln!(out, "{header}")?;
        for k in 0..self.len() {
            let mut row = format!(
                "{:.16e},{:.16e},{:.16e}",
                self.times[k], self.sync_error[k], self.energy[k]
            );
            for x in self.z[k].iter().chain(&self.v[k]) {
                row.push_str(&format!(",{x:.16e}"));
            }
            writeln!(out, "{row}")?;
        }
        Ok(())
    }
}

/// `W = ½ zᵀ(I ⊗ P + ε L_r)z + ½ żᵀż`.
pub fn energy(sys: &ArraySystem, epsilon: f64, z: &[f64], zdot: &[f64]) -> f64 {
    energy_with(&sys.stiffness(epsilon), z, zdot)
}

fn energy_with(s: &RealMatrix, z: &[f64], zdot: &[f64]) -> f64 {
    0.5 * s.quadratic_form(z) + 0.5 * zdot.iter().map(|x| x * x).sum::<f64>()
}

/// Distance of `z` from the sync subspace: `‖z_i - z̄‖` stacked over `i`.
pub fn sync_error(sys: &ArraySystem, z: &[f64]) -> f64 {
    norm2(&desync_component(sys.q(), sys.n(), z))
}

/// `z` minus its orthogonal projection onto `range(1_q ⊗ I_n)`.
pub fn desync_component(q: usize, n: usize, z: &[f64]) -> Vec<f64> {
    let mut mean = vec![0.0; n];
    for i in 0..q {
        for a in 0..n {
            mean[a] += z[i * n + a] / q as f64;
        }
    }
    (0..q * n).map(|idx| z[idx] - mean[idx % n]).collect()
}

fn check_state(sys: &ArraySystem, z0: &[f64], v0: &[f64]) -> Result<()> {
    let d = sys.dim();
    if z0.len() != d || v0.len() != d {
        return Err(Error::InvalidInput(format!(
            "initial state must have {d} entries, got z0: {}, v0: {}",
            z0.len(),
            v0.len()
        )));
    }
    if z0.iter().chain(v0).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(
            "initial state has non-finite entries".into(),
        ));
    }
    Ok(())
}

fn step_count(dt: f64, t_final: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final >= dt) {
        return Err(Error::InvalidInput(format!(
            "t_final must be at least dt = {dt}, got {t_final}"
        )));
    }
    Ok((t_final / dt - 1e-9).ceil() as usize)
}

/// Integrates the normalized array from `(z0, v0)` on the grid `k·dt`,
/// `k = 0..=⌈t_final/dt⌉`.
pub fn integrate(
    sys: &ArraySystem,
    epsilon: f64,
    z0: &[f64],
    v0: &[f64],
    dt: f64,
    t_final: f64,
) -> Result<SimulationTrace> {
    check_state(sys, z0, v0)?;
    check_step(sys, epsilon, dt)?;
    let steps = step_count(dt, t_final)?;
    let it = Integrator::new(sys, epsilon);
    let s = sys.stiffness(epsilon);
    let mut trace = SimulationTrace {
        times: Vec::with_capacity(steps + 1),
        z: Vec::with_capacity(steps + 1),
        v: Vec::with_capacity(steps + 1),
        energy: Vec::with_capacity(steps + 1),
        sync_error: Vec::with_capacity(steps + 1),
        dt,
        epsilon,
        seed: None,
    };
    let (mut z, mut v) = (z0.to_vec(), v0.to_vec());
    for k in 0..=steps {
        if k > 0 {
            it.step(&mut z, &mut v, dt);
        }
        trace.times.push(k as f64 * dt);
        trace.energy.push(energy_with(&s, &z, &v));
        trace.sync_error.push(sync_error(sys, &z));
        trace.z.push(z.clone());
        trace.v.push(v.clone());
    }
    Ok(trace)
}

/// Seeded standard-normal `(z0, v0)` of dimension `dim` each.
pub fn random_initial_condition(dim: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> Vec<f64> { (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect() };
    let z = draw();
    let v = draw();
    (z, v)
}

/// Trajectory in physical coordinates `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalTrace {
    pub times: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub xdot: Vec<Vec<f64>>,
}

/// Integrates `(I ⊗ M) ẍ + lap(D) ẋ + (I ⊗ K + ε lap(R)) x = 0` directly.
pub fn integrate_physical(
    sys: &ArraySystem,
    epsilon: f64,
    x0: &[f64],
    xdot0: &[f64],
    dt: f64,
    t_final: f64,
) -> Result<PhysicalTrace> {
    check_state(sys, x0, xdot0)?;
    check_step(sys, epsilon, dt)?;
    let steps = step_count(dt, t_final)?;
    let (q, n) = (sys.q(), sys.n());
    let graph = sys.graph();
    let iq = RealMatrix::identity(q);
    let m_inv = sys.modes().m_inv_sqrt.matmul(&sys.modes().m_inv_sqrt);
    let block_m_inv = iq.kron(&m_inv);
    let k_x = &iq.kron(sys.model().stiffness())
        + &build_laplacian(graph.restorative(), q, n)?.scale(epsilon);
    let d_x = build_laplacian(graph.dissipative(), q, n)?;
    let it = Integrator::from_matrices(block_m_inv.matmul(&k_x), block_m_inv.matmul(&d_x));
    let mut out = PhysicalTrace {
        times: Vec::with_capacity(steps + 1),
        x: Vec::with_capacity(steps + 1),
        xdot: Vec::with_capacity(steps + 1),
    };
    let (mut x, mut xd) = (x0.to_vec(), xdot0.to_vec());
    for k in 0..=steps {
        if k > 0 {
            it.step(&mut x, &mut xd, dt);
        }
        out.times.push(k as f64 * dt);
        out.x.push(x.clone());
        out.xdot.push(xd.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{normalize, CouplingGraph, Edge, OscillatorModel};

    fn scalar(x: f64) -> RealMatrix {
        RealMatrix::from_rows(&[[x]]).unwrap()
    }

    fn two_node() -> ArraySystem {
        let model = OscillatorModel::new(scalar(1.0), scalar(4.0)).unwrap();
        let graph =
            CouplingGraph::new(2, 1, vec![Edge::new(0, 1, scalar(1.0))], vec![], 1.0).unwrap();
        normalize(&model, &graph).unwrap()
    }

    #[test]
    fn energy_values() {
        let model = OscillatorModel::new(scalar(1.0), scalar(4.0)).unwrap();
        let graph = CouplingGraph::new(1, 1, vec![], vec![], 1.0).unwrap();
        let sys = normalize(&model, &graph).unwrap();
        assert_eq!(energy(&sys, 1.0, &[0.0], &[0.0]), 0.0);
        assert_eq!(energy(&sys, 1.0, &[1.0], &[0.0]), 2.0);
    }

    #[test]
    fn sync_start_stays_synchronized() {
        let sys = two_node();
        let t = integrate(&sys, 1.0, &[0.3, 0.3], &[-1.0, -1.0], 0.01, 5.0).unwrap();
        assert!(t.sync_error.iter().all(|&e| e <= 1e-12));
    }

    #[test]
    fn grid_is_uniform() {
        let t = integrate(&two_node(), 1.0, &[1.0, 0.0], &[0.0, 0.0], 0.1, 1.0).unwrap();
        assert_eq!(t.len(), 11);
        assert!((t.times[10] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unstable_step_suggests_replacement() {
        let err = integrate(&two_node(), 1.0, &[1.0, 0.0], &[0.0, 0.0], 2.0, 4.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("stability") && msg.contains("try dt"), "{msg}");
    }

    #[test]
    fn bad_dimensions_and_horizon() {
        let sys = two_node();
        assert!(integrate(&sys, 1.0, &[1.0], &[0.0, 0.0], 0.01, 1.0).is_err());
        assert!(integrate(&sys, 1.0, &[1.0, 0.0], &[0.0, 0.0], 0.01, 0.001).is_err());
    }

    #[test]
    fn seeded_conditions_repeat() {
        assert_eq!(
            random_initial_condition(4, 7),
            random_initial_condition(4, 7)
        );
        assert_ne!(
            random_initial_condition(4, 7),
            random_initial_condition(4, 8)
        );
    }

    #[test]
    fn csv_header() {
        let t = integrate(&two_node(), 1.0, &[1.0, 0.0], &[0.0, 0.0], 0.25, 0.5).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# seed=none"));
        assert_eq!(lines[1], "t,e,W,z_1,z_2,v_1,v_2");
        assert_eq!(lines.len(), 5);
    }
}
