use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, sym_eigenvalues, RealMatrix};
use crate::model::ArraySystem;

/// `dt·ω_max` above this leaves the classical RK4 stability region for
/// spectra in the closed left half-disk of radius `ω_max`.
pub const STABILITY_LIMIT: f64 = 2.5;

/// Fixed-step classical RK4 for `ż = v`, `v̇ = -A z - C v`.
#[derive(Clone, Debug)]
pub struct Integrator {
    a: RealMatrix,
    c: RealMatrix,
}

impl Integrator {
    /// Normalized array: `A = I ⊗ P + ε L_r`, `C = L_d`.
    pub fn new(sys: &ArraySystem, epsilon: f64) -> Self {
        Self::from_matrices(sys.stiffness(epsilon), sys.l_d().clone())
    }

    pub fn from_matrices(a: RealMatrix, c: RealMatrix) -> Self {
        assert!(a.is_square() && c.rows() == a.rows() && c.cols() == a.cols());
        Self { a, c }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    fn rate(&self, z: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let az = self.a.mul_vec(z);
        let cv = self.c.mul_vec(v);
        let acc = az.iter().zip(&cv).map(|(x, y)| -x - y).collect();
        (v.to_vec(), acc)
    }

    /// Advances `(z, v)` by one step of size `dt` in place.
    pub fn step(&self, z: &mut [f64], v: &mut [f64], dt: f64) {
        let shift = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> {
            x.iter().zip(k).map(|(a, b)| a + h * b).collect()
        };
        let (k1z, k1v) = self.rate(z, v);
        let (k2z, k2v) = self.rate(&shift(z, &k1z, 0.5 * dt), &shift(v, &k1v, 0.5 * dt));
        let (k3z, k3v) = self.rate(&shift(z, &k2z, 0.5 * dt), &shift(v, &k2v, 0.5 * dt));
        let (k4z, k4v) = self.rate(&shift(z, &k3z, dt), &shift(v, &k3v, dt));
        let w = dt / 6.0;
        for i in 0..z.len() {
            z[i] += w * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
            v[i] += w * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
    }

    /// Matrix of the one-step map on the stacked state `(z, v)`.
    pub fn step_matrix(&self, dt: f64) -> RealMatrix {
        let d = self.dim();
        let cols: Vec<Vec<f64>> = (0..2 * d)
            .map(|j| {
                let mut x = vec![0.0; 2 * d];
                x[j] = 1.0;
                let (z, v) = x.split_at_mut(d);
                self.step(z, v, dt);
                x
            })
            .collect();
        RealMatrix::from_columns(2 * d, &cols)
    }

    /// State after `steps` steps, by repeated squaring of the one-step map.
    ///
    /// The map is linear, so this is the stepped trajectory's endpoint up to
    /// roundoff, at logarithmic cost in `steps`.
    pub fn propagate(&self, z: &[f64], v: &[f64], dt: f64, steps: u64) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        let mut x: Vec<f64> = z.iter().chain(v).copied().collect();
        let mut p = self.step_matrix(dt);
        let mut k = steps;
        while k > 0 {
            if k & 1 == 1 {
                x = p.mul_vec(&x);
            }
            k >>= 1;
            if k > 0 {
                p = p.matmul(&p);
            }
        }
        let v = x.split_off(d);
        (x, v)
    }
}

/// `√λ_max(I ⊗ P + ε L_r) + 2‖L_d‖₂`, a bound on the modulus of every
/// eigenvalue of the first-order system.
pub fn omega_max(sys: &ArraySystem, epsilon: f64) -> Result<f64> {
    let top = sym_eigenvalues(&sys.stiffness(epsilon))?
        .last()
        .copied()
        .unwrap_or(0.0);
    Ok(top.max(0.0).sqrt() + 2.0 * spectral_norm(sys.l_d()))
}

/// `min(0.01, 0.1/ω_max)`.
pub fn default_dt(sys: &ArraySystem, epsilon: f64) -> Result<f64> {
    let w = omega_max(sys, epsilon)?;
    Ok(if w > 0.0 { (0.1 / w).min(0.01) } else { 0.01 })
}

/// Rejects steps outside the RK4 stability region.
pub fn check_step(sys: &ArraySystem, epsilon: f64, dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidInput(format!(
            "dt must be positive, got {dt}"
        )));
    }
    let w = omega_max(sys, epsilon)?;
    if dt * w > STABILITY_LIMIT {
        return Err(Error::InvalidInput(format!(
            "dt = {dt} exceeds the stability bound {:e} (omega_max = {w:e}); try dt = {:e}",
            STABILITY_LIMIT / w,
            default_dt(sys, epsilon)?
        )));
    }
    Ok(())
}
