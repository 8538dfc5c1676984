use crate::error::{Error, Result};
use crate::linalg::{sym_eig, RealMatrix};

/// Smallest admissible eigenvalue of `M` and `K`, relative to the largest.
pub const SPD_TOL: f64 = 1e-12;

/// Minimum relative gap between consecutive normal-mode eigenvalues.
pub const DISTINCT_TOL: f64 = 1e-6;

/// One oscillator unit `M ẍ + K x = 0` with `n` degrees of freedom.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorModel {
    mass: RealMatrix,
    stiffness: RealMatrix,
}

impl OscillatorModel {
    /// Validates that `M` and `K` are symmetric positive definite of the same order.
    ///
    /// Distinctness of the normal-mode spectrum is checked later, when the
    /// array is normalized, since it depends on `M^{-1/2} K M^{-1/2}`.
    pub fn new(mass: RealMatrix, stiffness: RealMatrix) -> Result<Self> {
        let mut errors = Vec::new();
        check_spd("M", &mass, &mut errors);
        check_spd("K", &stiffness, &mut errors);
        if mass.rows() != stiffness.rows() {
            errors.push(format!(
                "M is {}x{} but K is {}x{}",
                mass.rows(),
                mass.cols(),
                stiffness.rows(),
                stiffness.cols()
            ));
        }
        if !errors.is_empty() {
            return Err(Error::InvalidModel(errors));
        }
        Ok(Self {
            mass: mass.symmetrized(),
            stiffness: stiffness.symmetrized(),
        })
    }

    pub fn n(&self) -> usize {
        self.mass.rows()
    }

    pub fn mass(&self) -> &RealMatrix {
        &self.mass
    }

    pub fn stiffness(&self) -> &RealMatrix {
        &self.stiffness
    }
}

fn check_spd(name: &str, a: &RealMatrix, errors: &mut Vec<String>) {
    if !a.is_square() || a.rows() == 0 {
        errors.push(format!("{name} must be a nonempty square matrix"));
        return;
    }
    if !a.is_finite() {
        errors.push(format!("{name} has non-finite entries"));
        return;
    }
    if !a.is_symmetric(1e-12) {
        errors.push(format!("{name} is not symmetric"));
        return;
    }
    match sym_eig(a) {
        Ok(e) => {
            let max = e.values.last().copied().unwrap_or(0.0);
            let min = e.values[0];
            if !(max > 0.0 && min > SPD_TOL * max) {
                errors.push(format!(
                    "{name} is not positive definite (eigenvalues {min:e} .. {max:e})"
                ));
            }
        }
        Err(e) => errors.push(format!("{name}: {e}")),
    }
}

/// Chain of `n` masses between two walls, joined by `n + 1` springs.
///
/// `springs[0]` ties mass 1 to the left wall and `springs[n]` ties mass `n` to
/// the right wall.
pub fn build_mass_spring_chain(masses: &[f64], springs: &[f64]) -> Result<OscillatorModel> {
    let n = masses.len();
    let mut errors = Vec::new();
    if n == 0 {
        errors.push("chain needs at least one mass".to_string());
    }
    if springs.len() != n + 1 {
        errors.push(format!(
            "chain of {n} masses needs {} springs, got {}",
            n + 1,
            springs.len()
        ));
    }
    for (i, &m) in masses.iter().enumerate() {
        if !(m.is_finite() && m > 0.0) {
            errors.push(format!("mass {} must be positive, got {m}", i + 1));
        }
    }
    for (i, &k) in springs.iter().enumerate() {
        if !(k.is_finite() && k > 0.0) {
            errors.push(format!("spring {} must be positive, got {k}", i + 1));
        }
    }
    if !errors.is_empty() {
        return Err(Error::InvalidModel(errors));
    }
    let mass = RealMatrix::diag(masses);
    let mut stiffness = RealMatrix::zeros(n, n);
    for i in 0..n {
        stiffness[(i, i)] = springs[i] + springs[i + 1];
        if i + 1 < n {
            stiffness[(i, i + 1)] = -springs[i + 1];
            stiffness[(i + 1, i)] = -springs[i + 1];
        }
    }
    let model = OscillatorModel::new(mass, stiffness)?;
    // Reject repeated normal modes here rather than at normalization time.
    super::system::normal_modes(&model)?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mass_chain() {
        let m = build_mass_spring_chain(&[1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(m.mass().to_rows(), vec![vec![1.0]]);
        assert_eq!(m.stiffness().to_rows(), vec![vec![2.0]]);
    }

    #[test]
    fn two_mass_chain() {
        let m = build_mass_spring_chain(&[1.0, 1.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            m.stiffness().to_rows(),
            vec![vec![2.0, -1.0], vec![-1.0, 2.0]]
        );
    }

    #[test]
    fn chain_rejects_bad_parameters() {
        assert!(build_mass_spring_chain(&[1.0, -1.0], &[1.0, 1.0, 1.0]).is_err());
        assert!(build_mass_spring_chain(&[1.0], &[1.0]).is_err());
        assert!(build_mass_spring_chain(&[], &[1.0]).is_err());
    }

    #[test]
    fn rejects_indefinite_stiffness() {
        let m = RealMatrix::identity(2);
        let k = RealMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        let err = OscillatorModel::new(m, k).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(ref v) if v[0].contains("K")));
    }

    #[test]
    fn reports_every_problem() {
        let m = RealMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let k = RealMatrix::from_rows(&[[-1.0]]).unwrap();
        match OscillatorModel::new(m, k) {
            Err(Error::InvalidModel(v)) => assert_eq!(v.len(), 3, "{v:?}"),
            other => panic!("{other:?}"),
        }
    }
}
