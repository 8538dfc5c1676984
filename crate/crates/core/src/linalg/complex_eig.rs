//! Eigenvalues of general complex matrices.
//!
//! The matrix is balanced, reduced to upper Hessenberg form with Householder
//! reflections and then driven to triangular form by single-shift QR sweeps
//! (Givens rotations, Wilkinson shift). Only eigenvalues are produced; the
//! similarity transforms are not accumulated.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Deflation: `|h[k+1][k]| ≤ DEFLATION_TOL · (|h[k][k]| + |h[k+1][k+1]|)`.
const DEFLATION_TOL: f64 = 1e-14;

/// QR sweeps allowed per eigenvalue before giving up.
const ITERATIONS_PER_EIGENVALUE: usize = 40;

/// Every `EXCEPTIONAL_PERIOD`-th sweep on the same eigenvalue uses an ad hoc shift.
const EXCEPTIONAL_PERIOD: usize = 10;

/// Eigenvalues of a square complex matrix, with multiplicity, sorted by
/// real part and then by imaginary part.
pub fn complex_eig(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::InvalidInput(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    let mut values = hessenberg_qr(&mut h)?;
    sort_by_real_part(&mut values);
    Ok(values)
}

/// Sort by `(Re, Im)` lexicographically.
pub fn sort_by_real_part(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity scaling by powers of two so that row and column
/// off-diagonal norms are comparable.
fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    let mut done = false;
    let mut rounds = 0;
    while !done && rounds < 100 {
        done = true;
        rounds += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += cabs1(a[(j, i)]);
                    r += cabs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let ginv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= ginv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..(n - 2) {
        let len = n - k - 1;
        let x: Vec<Complex64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = x[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if xnorm == 0.0 || tail == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // A ← H A with H = I - β v v*, acting on rows k+1..n.
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += v[i].conj() * a[(k + 1 + i, j)];
            }
            s *= beta;
            for i in 0..len {
                let t = v[i] * s;
                a[(k + 1 + i, j)] -= t;
            }
        }
        // A ← A H, acting on columns k+1..n.
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..len {
                s += a[(i, k + 1 + j)] * v[j];
            }
            s *= beta;
            for j in 0..len {
                let t = s * v[j].conj();
                a[(i, k + 1 + j)] -= t;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Plane rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let gnorm = g.norm();
    if gnorm == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let fnorm = f.norm();
    if fnorm == 0.0 {
        return (0.0, g.conj() / gnorm);
    }
    let r = fnorm.hypot(gnorm);
    let c = fnorm / r;
    let s = (f / fnorm) * g.conj() / r;
    (c, s)
}

/// Eigenvalue of the 2x2 block `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = 0.5 * (a - d);
    let disc = (half * half + b * c).sqrt();
    let mid = 0.5 * (a + d);
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(values);
    }
    let norm = h.frobenius_norm();
    let mut hi = n - 1;
    let mut iters = 0usize;
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    loop {
        if hi == 0 {
            values[0] = h[(0, 0)];
            break;
        }
        // Locate the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let scale = cabs1(h[(lo - 1, lo - 1)]) + cabs1(h[(lo, lo)]);
            let scale = if scale == 0.0 { norm } else { scale };
            if cabs1(h[(lo, lo - 1)]) <= DEFLATION_TOL * scale {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            values[hi] = h[(hi, hi)];
            hi -= 1;
            iters = 0;
            continue;
        }

        iters += 1;
        if iters > ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NumericalFailure(format!(
                "QR iteration stalled at eigenvalue index {hi} after {ITERATIONS_PER_EIGENVALUE} sweeps"
            )));
        }

        let shift = if iters.is_multiple_of(EXCEPTIONAL_PERIOD) {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].re.abs(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // One explicit shifted QR step on the window lo..=hi: H - μI = QR, H ← RQ + μI.
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    Ok(values)
}
