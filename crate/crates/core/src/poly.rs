//! Rescaled polynomials and the simultaneous (Aberth) root iteration.
//!
//! A truncated series `f(z) = Σ c_n zⁿ` is handled through
//! `f(ρw) = e^{L}·p(w)` where the largest coefficient of `p` has modulus 1.
//! Coefficients far below that scale underflow to zero, which only moves
//! roots of modulus far above `ρ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;

/// `f(ρw) = exp(log_scale)·p(w)` with `max |p_n| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledPoly {
    pub rho: f64,
    pub log_scale: f64,
    pub coeffs: Vec<Complex64>,
}

impl ScaledPoly {
    /// Builds the rescaled polynomial from unit phases and log magnitudes
    /// (`log_mag[n] = -inf` marks a zero coefficient).
    pub fn from_log_parts(phases: &[Complex64], log_mag: &[f64], rho: f64) -> Self {
        debug_assert_eq!(phases.len(), log_mag.len());
        let log_rho = rho.ln();
        let logs: Vec<f64> = log_mag
            .iter()
            .enumerate()
            .map(|(n, &l)| if l == f64::NEG_INFINITY { l } else { l + n as f64 * log_rho })
            .collect();
        let log_scale = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if log_scale == f64::NEG_INFINITY {
            return Self {
                rho,
                log_scale,
                coeffs: vec![Complex64::new(0.0, 0.0); phases.len()],
            };
        }
        let coeffs = phases
            .iter()
            .zip(&logs)
            .map(|(ph, &l)| *ph * (l - log_scale).exp())
            .collect();
        Self {
            rho,
            log_scale,
            coeffs,
        }
    }

    pub fn from_coeffs(coeffs: &[Complex64], rho: f64) -> Self {
        let phases: Vec<Complex64> = coeffs
            .iter()
            .map(|c| {
                let m = c.norm();
                if m > 0.0 {
                    c / m
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .collect();
        let logs: Vec<f64> = coeffs.iter().map(|c| c.norm().ln()).collect();
        Self::from_log_parts(&phases, &logs, rho)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.log_scale == f64::NEG_INFINITY
    }

    /// `p(w)` by Horner.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        horner(&self.coeffs, w)
    }

    /// `(p(w), p'(w))`.
    pub fn eval_with_deriv(&self, w: Complex64) -> (Complex64, Complex64) {
        horner_deriv(&self.coeffs, w)
    }

    /// `log|f(ρw)|`.
    pub fn log_abs_f(&self, w: Complex64) -> f64 {
        self.log_scale + self.eval(w).norm().ln()
    }

    /// `Σ |p_n| |w|ⁿ`, the scale against which `p(w)` rounding is measured.
    pub fn abs_eval(&self, modulus: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * modulus + c.norm())
    }

    /// Minimum of `|p|` over `k` equispaced nodes of the unit circle.
    pub fn min_on_unit_circle(&self, k: usize) -> f64 {
        (0..k)
            .map(|j| self.eval(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64)).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn horner(c: &[Complex64], w: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &x| acc * w + x)
}

pub fn horner_deriv(c: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &x in c.iter().rev() {
        dp = dp * w + p;
        p = p * w + x;
    }
    (p, dp)
}

/// Root iteration settings.
#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    pub max_iter: usize,
    pub newton_polish: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        Self {
            max_iter: 600,
            newton_polish: 2,
        }
    }
}

/// All roots of `Σ c_n wⁿ`, counted with multiplicity (exact zero roots
/// from vanishing low-order coefficients are returned as `0`).
pub fn aberth_roots(c: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>> {
    let hi = match c.iter().rposition(|x| *x != Complex64::new(0.0, 0.0)) {
        Some(h) => h,
        None => return Err(Error::NumericalFailure("zero polynomial has no isolated roots".into())),
    };
    let lo = c.iter().position(|x| *x != Complex64::new(0.0, 0.0)).unwrap();
    let mut roots = vec![Complex64::new(0.0, 0.0); lo];
    let core = &c[lo..=hi];
    let deg = core.len() - 1;
    match deg {
        0 => return Ok(roots),
        1 => {
            roots.push(-core[0] / core[1]);
            return Ok(roots);
        }
        _ => {}
    }
    let abs_c: Vec<f64> = core.iter().map(|x| x.norm()).collect();
    let rev: Vec<Complex64> = core.iter().rev().copied().collect();
    let abs_rev: Vec<f64> = abs_c.iter().rev().copied().collect();

    let mut z = newton_polygon_guesses(&abs_c);
    let mut done = vec![false; deg];
    let mut remaining = deg;
    for _ in 0..opts.max_iter {
        for k in 0..deg {
            if done[k] {
                continue;
            }
            let zk = z[k];
            let (ratio, converged) = newton_ratio(core, &abs_c, &rev, &abs_rev, zk);
            if converged {
                done[k] = true;
                remaining -= 1;
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    sum += (zk - zj).inv();
                }
            }
            let denom = Complex64::new(1.0, 0.0) - ratio * sum;
            let step = if denom.norm() > 0.0 && denom.is_finite() { ratio / denom } else { ratio };
            if !step.is_finite() {
                return Err(Error::NumericalFailure(format!("non-finite Aberth step at root {k}")));
            }
            z[k] = zk - step;
            if step.norm() <= EPS * z[k].norm() {
                done[k] = true;
                remaining -= 1;
            }
        }
        if remaining == 0 {
            break;
        }
    }
    if remaining > 0 {
        return Err(Error::NumericalFailure(format!(
            "Aberth iteration left {remaining} of {deg} roots unconverged after {} sweeps",
            opts.max_iter
        )));
    }
    for zk in z.iter_mut() {
        for _ in 0..opts.newton_polish {
            let (ratio, converged) = newton_ratio(core, &abs_c, &rev, &abs_rev, *zk);
            if converged || !ratio.is_finite() {
                break;
            }
            let cand = *zk - ratio;
            let before = scaled_residual(core, &rev, *zk);
            if scaled_residual(core, &rev, cand) <= before {
                *zk = cand;
            } else {
                break;
            }
        }
    }
    roots.extend(z);
    Ok(roots)
}

/// `p/p'` at `z` and whether `z` already meets the backward-error stop.
/// Points outside the unit disk are evaluated through the reversed
/// polynomial so that `|z|^deg` never overflows.
fn newton_ratio(
    c: &[Complex64],
    abs_c: &[f64],
    rev: &[Complex64],
    abs_rev: &[f64],
    z: Complex64,
) -> (Complex64, bool) {
    let deg = (c.len() - 1) as f64;
    let m = z.norm();
    if m <= 1.0 {
        let (p, dp) = horner_deriv(c, z);
        let bound = abs_c.iter().rev().fold(0.0, |acc, x| acc * m + x);
        let converged = p.norm() <= 4.0 * deg * EPS * bound;
        (p / dp, converged)
    } else {
        let y = z.inv();
        let (q, dq) = horner_deriv(rev, y);
        let bound = abs_rev.iter().rev().fold(0.0, |acc, x| acc * y.norm() + x);
        let converged = q.norm() <= 4.0 * deg * EPS * bound;
        // p(z) = z^d q(1/z), p'(z) = z^{d-1} (d q(y) - y q'(y))
        (z * q / (deg * q - y * dq), converged)
    }
}

fn scaled_residual(c: &[Complex64], rev: &[Complex64], z: Complex64) -> f64 {
    if z.norm() <= 1.0 {
        horner(c, z).norm()
    } else {
        horner(rev, z.inv()).norm()
    }
}

/// Initial points on circles whose radii come from the upper convex hull of
/// `(n, log|c_n|)`, one circle per hull edge.
fn newton_polygon_guesses(abs_c: &[f64]) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> = abs_c
        .iter()
        .enumerate()
        .filter(|(_, a)| **a > 0.0)
        .map(|(n, a)| (n as f64, a.ln()))
        .collect();
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly above the chord a -> p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let deg = abs_c.len() - 1;
    let mut guesses = Vec::with_capacity(deg);
    for (e, w) in hull.windows(2).enumerate() {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = (k1 - k0) as usize;
        let radius = ((l0 - l1) / (k1 - k0)).exp();
        let offset = 0.7 + 0.31 * e as f64;
        for j in 0..count {
            let theta = 2.0 * PI * j as f64 / count as f64 + offset / count as f64 + 0.4;
            guesses.push(Complex64::from_polar(radius, theta));
        }
    }
    debug_assert_eq!(guesses.len(), deg);
    guesses
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        v
    }

    #[test]
    fn cube_roots_of_unity() {
        let roots = aberth_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], AberthOptions::default()).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!((r.powu(3) - c(1.0, 0.0)).norm() < 1e-14);
        }
        let args: Vec<f64> = sorted_by_arg(roots).iter().map(|r| r.arg()).collect();
        assert!((args[0] + 2.0 * PI / 3.0).abs() < 1e-12);
        assert!(args[1].abs() < 1e-12);
    }

    #[test]
    fn double_root_converges_to_sqrt_eps() {
        let roots = aberth_roots(&[c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)], AberthOptions::default()).unwrap();
        for r in roots {
            assert!((r - c(1.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let roots = aberth_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], AberthOptions::default()).unwrap();
        assert_eq!(roots, vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn wide_dynamic_range() {
        // roots 10^k for k = 0..12
        let mut poly = vec![c(1.0, 0.0)];
        for k in 0..12 {
            let r = 10f64.powi(k);
            let mut next = vec![c(0.0, 0.0); poly.len() + 1];
            for (i, &p) in poly.iter().enumerate() {
                next[i] += -p * r;
                next[i + 1] += p;
            }
            poly = next;
        }
        // normalise to avoid overflow of the raw coefficients
        let scale = poly.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let poly: Vec<_> = poly.iter().map(|x| x / scale).collect();
        let mut roots: Vec<f64> = aberth_roots(&poly, AberthOptions::default()).unwrap().iter().map(|r| r.re).collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, r) in roots.iter().enumerate() {
            let want = 10f64.powi(k as i32);
            assert!((r - want).abs() < 1e-6 * want, "{r} vs {want}");
        }
    }

    #[test]
    fn scaled_poly_matches_direct() {
        let coeffs = vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 3.0), c(0.25, -0.25)];
        let sp = ScaledPoly::from_coeffs(&coeffs, 2.0);
        let z = c(0.6, -1.1);
        let direct = horner(&coeffs, z);
        let via = sp.eval(z / 2.0) * sp.log_scale.exp();
        assert!((direct - via).norm() < 1e-13 * direct.norm());
        assert!(sp.coeffs.iter().map(|x| x.norm()).fold(0.0, f64::max) == 1.0);
    }
}
