//! Covariance of the Gaussian vector `(f(z_1), …, f(z_n))` for points on a
//! circle, its circulant spectrum, and the determinant bounds built on the
//! generalized Vandermonde matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::growth::{self, scan_terms, CoefficientSequence};
use crate::rng::{Purpose, Substream};
use crate::stats::Summary;

/// `n` points `ρe^{iθ_j}` with sorted, distinct angles in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleConfiguration {
    pub rho: f64,
    pub angles: Vec<f64>,
}

impl CircleConfiguration {
    pub fn new(rho: f64, mut angles: Vec<f64>) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(invalid("rho", format!("must be a nonnegative real, got {rho}")));
        }
        if angles.is_empty() {
            return Err(invalid("angles", "need at least one point"));
        }
        for a in angles.iter_mut() {
            *a = a.rem_euclid(2.0 * PI);
        }
        angles.sort_by(f64::total_cmp);
        if angles.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("angles", "points must be distinct"));
        }
        Ok(Self { rho, angles })
    }

    pub fn equispaced(rho: f64, n: usize) -> Result<Self> {
        Self::new(rho, (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect())
    }

    pub fn n_points(&self) -> usize {
        self.angles.len()
    }

    /// The same points turned by `phi`.
    pub fn rotated(&self, phi: f64) -> Self {
        Self::new(self.rho, self.angles.iter().map(|a| a + phi).collect()).expect("rotation keeps points distinct")
    }

    pub fn unit_points(&self) -> Vec<Complex64> {
        self.angles.iter().map(|a| Complex64::from_polar(1.0, *a)).collect()
    }
}

/// `Σ_jk = Σ_m a_m² (z_j z̄_k)^m`, stored as `exp(log_scale)·entries`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    pub entries: DMatrix<Complex64>,
    pub log_scale: f64,
    pub config: CircleConfiguration,
}

impl CovarianceMatrix {
    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// Entry `(j, k)` at its true scale.
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j, k)] * self.log_scale.exp()
    }

    /// Eigenvalues at true scale, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let scale = self.log_scale.exp();
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigenvalues().iter().map(|x| x * scale).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Smallest eigenvalue is at least `−1e−10·trace`.
    pub fn is_psd(&self) -> bool {
        let ev = self.entries.clone().symmetric_eigenvalues();
        let trace: f64 = (0..self.n()).map(|i| self.entries[(i, i)].re).sum();
        ev.iter().all(|x| *x >= -1e-10 * trace)
    }

    /// `log det Σ` through a Cholesky factor.
    pub fn log_det(&self) -> Result<f64> {
        let chol = self
            .entries
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NumericalFailure("covariance matrix is not positive definite".into()))?;
        let l = chol.l();
        let log_diag: f64 = (0..self.n()).map(|i| l[(i, i)].re.ln()).sum();
        Ok(2.0 * log_diag + self.n() as f64 * self.log_scale)
    }
}

/// `(m, 2 log(a_m ρ^m))` for the nonnegligible terms of `K(ρ²)`.
fn kernel_terms(seq: &CoefficientSequence, rho: f64) -> Result<Vec<(usize, f64)>> {
    if rho == 0.0 {
        let la = seq.log_a(0);
        return Ok(if la == f64::NEG_INFINITY { vec![] } else { vec![(0, 2.0 * la)] });
    }
    Ok(scan_terms(seq, rho.ln(), 0.0, f64::INFINITY)?
        .into_iter()
        .map(|(m, t)| (m, 2.0 * t))
        .collect())
}

pub fn build_covariance(seq: &CoefficientSequence, config: &CircleConfiguration) -> Result<CovarianceMatrix> {
    let terms = kernel_terms(seq, config.rho)?;
    let log_scale = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let n = config.n_points();
    if log_scale == f64::NEG_INFINITY {
        return Ok(CovarianceMatrix {
            entries: DMatrix::zeros(n, n),
            log_scale: 0.0,
            config: config.clone(),
        });
    }
    let weights: Vec<(usize, f64)> = terms.iter().map(|&(m, t)| (m, (t - log_scale).exp())).collect();
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        entries[(j, j)] = Complex64::new(weights.iter().map(|w| w.1).sum(), 0.0);
        for k in j + 1..n {
            let d = config.angles[j] - config.angles[k];
            let v: Complex64 = weights.iter().map(|&(m, w)| Complex64::from_polar(w, m as f64 * d)).sum();
            entries[(j, k)] = v;
            entries[(k, j)] = v.conj();
        }
    }
    Ok(CovarianceMatrix {
        entries,
        log_scale,
        config: config.clone(),
    })
}

/// `λ_k = N Σ_l a²_{k+lN} ρ^{2(k+lN)}`, `k = 0..N`.
pub fn circulant_eigenvalues(seq: &CoefficientSequence, rho: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(invalid("N", "need at least one point"));
    }
    let mut out = vec![0.0; n];
    for (m, t) in kernel_terms(seq, rho)? {
        out[m % n] += t.exp();
    }
    Ok(out.into_iter().map(|x| x * n as f64).collect())
}

/// `|det A|` for `A_{ik} = w_i^{e_k}` at unit-modulus points, in log form.
pub fn log_abs_vandermonde(points: &[Complex64], exponents: &[usize]) -> f64 {
    let n = points.len();
    debug_assert_eq!(n, exponents.len());
    let a = DMatrix::from_fn(n, n, |i, k| points[i].powu(exponents[k] as u32));
    a.determinant().norm().ln()
}

fn check_exponents(exponents: &[usize]) -> Result<()> {
    let mut sorted = exponents.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != exponents.len() {
        return Err(invalid("exponents", "exponents must be distinct"));
    }
    Ok(())
}

/// Monte Carlo estimate of `E|det A|²/ρ^{2Σj}` over independent uniform
/// angles, for the columns `0, j_1, …, j_{n−1}`.
pub fn vandermonde_average(exponents: &[usize], trials: u64, seed: u64) -> Result<Summary> {
    let cols = vandermonde_columns(exponents)?;
    let n = cols.len();
    let vals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut s = Substream::new(seed, Purpose::Angles, t);
            s.seek(0);
            let pts: Vec<Complex64> = (0..n).map(|_| Complex64::from_polar(1.0, 2.0 * PI * s.pair().0)).collect();
            (2.0 * log_abs_vandermonde(&pts, &cols)).exp()
        })
        .collect();
    Ok(Summary::of(&vals))
}

/// The same average on the product grid of `k` equispaced angles per point
/// (first point fixed at 0 by rotation invariance). Exact once `k` exceeds
/// the largest exponent.
pub fn vandermonde_grid_average(exponents: &[usize], k: usize) -> Result<f64> {
    let cols = vandermonde_columns(exponents)?;
    let n = cols.len();
    if n == 1 {
        return Ok(1.0);
    }
    let total = k.pow((n - 1) as u32);
    let mut acc = 0.0;
    let mut pts = vec![Complex64::new(1.0, 0.0); n];
    for idx in 0..total {
        let mut rest = idx;
        for p in pts.iter_mut().skip(1) {
            *p = Complex64::from_polar(1.0, 2.0 * PI * (rest % k) as f64 / k as f64);
            rest /= k;
        }
        acc += (2.0 * log_abs_vandermonde(&pts, &cols)).exp();
    }
    Ok(acc / total as f64)
}

fn vandermonde_columns(exponents: &[usize]) -> Result<Vec<usize>> {
    if exponents.contains(&0) {
        return Err(invalid("exponents", "exponents must be positive; the 0 column is implicit"));
    }
    let mut cols = vec![0];
    cols.extend_from_slice(exponents);
    check_exponents(&cols)?;
    Ok(cols)
}

/// Best configuration found for a generalized Vandermonde matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationSearch {
    pub config: CircleConfiguration,
    pub exponents: Vec<usize>,
    /// `log|det A|`.
    pub log_abs_det: f64,
    /// `Σ e_k · log ρ`, the target of the existence lemma.
    pub log_target: f64,
    pub success: bool,
    pub attempts: u64,
    /// Whether the winning candidate is the equispaced one.
    pub equispaced: bool,
}

/// Searches for points on `|z| = ρ` with `|det(z_i^{e_k})| ≥ ρ^{Σe_k}`:
/// the equispaced configuration first, then seeded random draws.
pub fn good_configuration_search(exponents: &[usize], rho: f64, attempts: u64, seed: u64) -> Result<ConfigurationSearch> {
    check_exponents(exponents)?;
    if !(rho > 0.0) {
        return Err(invalid("rho", "must be positive"));
    }
    let n = exponents.len();
    let log_rho_sum = exponents.iter().sum::<usize>() as f64 * rho.ln();
    // |det A(ρ)| = ρ^{Σe}·|det A(1)|, so the test is log|det A(1)| ≥ 0
    let eq = CircleConfiguration::equispaced(rho, n)?;
    let eq_val = log_abs_vandermonde(&eq.unit_points(), exponents);
    let mut best = (eq_val, eq, true);
    if eq_val < 0.0 {
        let found = (0..attempts)
            .into_par_iter()
            .map(|t| {
                let mut s = Substream::new(seed, Purpose::Angles, t);
                s.seek(0);
                let angles: Vec<f64> = (0..n).map(|_| 2.0 * PI * s.pair().0).collect();
                let pts: Vec<Complex64> = angles.iter().map(|a| Complex64::from_polar(1.0, *a)).collect();
                (log_abs_vandermonde(&pts, exponents), t, angles)
            })
            .reduce(
                || (f64::NEG_INFINITY, u64::MAX, Vec::new()),
                |a, b| if (b.0, std::cmp::Reverse(b.1)) > (a.0, std::cmp::Reverse(a.1)) { b } else { a },
            );
        if found.0 > best.0 {
            best = (found.0, CircleConfiguration::new(rho, found.2)?, false);
        }
    }
    Ok(ConfigurationSearch {
        config: best.1,
        exponents: exponents.to_vec(),
        log_abs_det: best.0 + log_rho_sum,
        log_target: log_rho_sum,
        success: best.0 >= 0.0,
        attempts,
        equispaced: best.2,
    })
}

/// Result of checking `log det Σ ≥ S(r)` at `n(r)` good points on `|z| = r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetSigmaCheck {
    pub rho: f64,
    pub n: usize,
    pub angles: Vec<f64>,
    pub log_det: f64,
    #[serde(rename = "S_r")]
    pub s_r: f64,
    /// `2 log|det PV|`, the projected determinant onto the `N(r)` columns.
    pub log_det_projected: f64,
    pub ok: bool,
}

pub fn det_sigma_lower_check(seq: &CoefficientSequence, r: f64, attempts: u64, seed: u64) -> Result<DetSigmaCheck> {
    let profile = growth::growth_profile(seq, r)?;
    if profile.n_count == 0 {
        return Err(Error::TooFewDominantTerms(0));
    }
    let search = good_configuration_search(&profile.n_set, r, attempts, seed)?;
    let sigma = build_covariance(seq, &search.config)?;
    if !sigma.is_psd() {
        return Err(Error::NumericalFailure("covariance matrix failed the PSD check".into()));
    }
    let log_det = sigma.log_det()?;
    let log_a: f64 = profile.n_set.iter().map(|&j| seq.log_a(j)).sum();
    let log_det_projected = 2.0 * (log_a + search.log_abs_det);
    Ok(DetSigmaCheck {
        rho: r,
        n: profile.n_count,
        angles: search.config.angles,
        log_det,
        s_r: profile.big_s,
        log_det_projected,
        ok: log_det >= profile.big_s - 1e-6,
    })
}

/// Upper and lower evaluations of `−log P(hole)` at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleBoundPair {
    pub r: f64,
    #[serde(rename = "S")]
    pub big_s: f64,
    pub m_weight: u64,
    pub n_count: usize,
    pub c_upper: f64,
    pub c_lower: f64,
    /// `S + C_u √m log m`
    pub upper: f64,
    /// `S − C_l n log S`
    pub lower: f64,
    /// `n log S + 2n + n log(4Sn)`, the explicit bound on `log I` from the
    /// polydisk covering.
    pub log_volume_bound: f64,
    pub hayman_ok: bool,
}

pub fn hole_bound_pair(seq: &CoefficientSequence, r: f64, c_upper: f64, c_lower: f64) -> Result<HoleBoundPair> {
    let p = growth::growth_profile(seq, r)?;
    if p.n_count < 2 {
        return Err(Error::TooFewDominantTerms(p.n_count));
    }
    let m = p.m_weight as f64;
    let n = p.n_count as f64;
    let s = p.big_s;
    let log_s = if s > 0.0 { s.ln() } else { f64::NEG_INFINITY };
    Ok(HoleBoundPair {
        r,
        big_s: s,
        m_weight: p.m_weight,
        n_count: p.n_count,
        c_upper,
        c_lower,
        upper: s + c_upper * m.sqrt() * m.ln(),
        lower: s - c_lower * n * log_s,
        log_volume_bound: n * log_s + 2.0 * n + n * (4.0 * s * n).ln(),
        hayman_ok: growth::hayman_window(seq, r)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn single_point_covariances() {
        let gef = CoefficientSequence::Gef;
        let c = build_covariance(&gef, &CircleConfiguration::new(1.0, vec![0.3]).unwrap()).unwrap();
        assert!((c.get(0, 0).re - E).abs() < 1e-14);
        let list = CoefficientSequence::explicit(vec![0.7, 2.0]).unwrap();
        let c = build_covariance(&list, &CircleConfiguration::new(0.0, vec![0.0]).unwrap()).unwrap();
        assert!((c.get(0, 0).re - 0.49).abs() < 1e-15);
    }

    #[test]
    fn antipodal_pair() {
        let c = build_covariance(&CoefficientSequence::Gef, &CircleConfiguration::equispaced(1.0, 2).unwrap()).unwrap();
        assert!((c.get(0, 0).re - E).abs() < 1e-14);
        assert!((c.get(0, 1) - Complex64::new(1.0 / E, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn circulant_closed_forms() {
        let ev = circulant_eigenvalues(&CoefficientSequence::Gef, 1.0, 2).unwrap();
        assert!((ev[0] - 2.0 * 1f64.cosh()).abs() < 1e-14);
        assert!((ev[1] - 2.0 * 1f64.sinh()).abs() < 1e-14);
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert_eq!(circulant_eigenvalues(&one, 2.5, 3).unwrap(), vec![3.0, 0.0, 0.0]);
    }

    #[test]
    fn circulant_matches_dense() {
        let seq = CoefficientSequence::Gef;
        let mut lam = circulant_eigenvalues(&seq, 2.0, 16).unwrap();
        lam.sort_by(f64::total_cmp);
        let dense = build_covariance(&seq, &CircleConfiguration::equispaced(2.0, 16).unwrap())
            .unwrap()
            .eigenvalues();
        for (a, b) in lam.iter().zip(&dense) {
            assert!((a - b).abs() <= 1e-9 * lam[15]);
        }
    }

    #[test]
    fn vandermonde_grid_is_factorial() {
        assert!((vandermonde_grid_average(&[1], 4).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(vandermonde_grid_average(&[], 4).unwrap(), 1.0);
        assert!((vandermonde_grid_average(&[1, 2, 3], 5).unwrap() - 24.0).abs() < 1e-9);
        assert!((vandermonde_grid_average(&[2, 5], 7).unwrap() - 6.0).abs() < 1e-10);
        assert!(vandermonde_average(&[1, 1], 10, 0).is_err());
    }

    #[test]
    fn configuration_examples() {
        let s = good_configuration_search(&[0, 1], 1.0, 0, 0).unwrap();
        assert!(s.success && s.equispaced);
        assert!((s.log_abs_det - 2f64.ln()).abs() < 1e-14);
        let s = good_configuration_search(&[0, 1, 2], 1.0, 0, 0).unwrap();
        assert!((s.log_abs_det - 1.5 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn det_sigma_small_cases() {
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        let c = det_sigma_lower_check(&one, 1.0, 10, 0).unwrap();
        assert!(c.log_det.abs() < 1e-15 && c.s_r == 0.0 && c.ok);
        let c = det_sigma_lower_check(&CoefficientSequence::Gef, 2.0, 100, 1).unwrap();
        assert!(c.ok, "{c:?}");
        assert!(c.log_det >= c.log_det_projected - 1e-9);
    }

    #[test]
    fn hole_bounds_examples() {
        let b = hole_bound_pair(&CoefficientSequence::Gef, 2.0, 1.0, 1.0).unwrap();
        assert!((b.upper - b.big_s - 12.0 * 144f64.ln()).abs() < 1e-9);
        assert!((b.big_s - b.lower - 9.0 * b.big_s.ln()).abs() < 1e-9);
        let two = CoefficientSequence::explicit(vec![1.0, 1.0]).unwrap();
        let b = hole_bound_pair(&two, 10.0, 1.0, 1.0).unwrap();
        assert!((b.big_s - 2.0 * 10f64.ln()).abs() < 1e-14);
        assert_eq!(
            hole_bound_pair(&CoefficientSequence::explicit(vec![1.0]).unwrap(), 3.0, 1.0, 1.0),
            Err(Error::TooFewDominantTerms(1))
        );
    }
}
