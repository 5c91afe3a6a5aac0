//! Random ensembles, certified truncation of a series realization, and
//! evaluation of the sampled function.
//!
//! A realization of `f(z) = Σ ξ_n a_n zⁿ` is stored as the random factors
//! `ξ_n` next to `log a_n`, truncated at the smallest degree whose envelope
//! tail at the working radius is below the requested tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::growth::{self, delta_of, scan_terms, CoefficientSequence, GrowthProfile, DEFAULT_ETA};
use crate::poly::ScaledPoly;
use crate::rng::{Purpose, Substream};
use crate::stats::log_sum_exp;

/// Largest truncation degree `sample` will accept.
pub const DEGREE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Density `(1/π)e^{−|z|²}`.
    ComplexGaussian,
    /// `±1` with probability 1/2 each.
    Rademacher,
    /// `e^{2πiγ}`, `γ` uniform on `[0, 1]`.
    Steinhaus,
    /// Deterministic signs; indices past the list use `+1`.
    FixedSigns { signs: Vec<i8> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn gaussian(seed: u64) -> Self {
        Self::new(EnsembleKind::ComplexGaussian, seed)
    }

    pub fn rademacher(seed: u64) -> Self {
        Self::new(EnsembleKind::Rademacher, seed)
    }

    pub fn steinhaus(seed: u64) -> Self {
        Self::new(EnsembleKind::Steinhaus, seed)
    }

    pub fn fixed_signs(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(invalid("signs", "fixed signs must be +1 or -1"));
        }
        Ok(Self::new(EnsembleKind::FixedSigns { signs }, 0))
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, EnsembleKind::ComplexGaussian)
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            EnsembleKind::ComplexGaussian => "gaussian",
            EnsembleKind::Rademacher => "rademacher",
            EnsembleKind::Steinhaus => "steinhaus",
            EnsembleKind::FixedSigns { .. } => "fixed",
        }
    }

    pub fn parse(name: &str, seed: u64) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "gaussian" | "complex_gaussian" => Ok(Self::gaussian(seed)),
            "rademacher" => Ok(Self::rademacher(seed)),
            "steinhaus" => Ok(Self::steinhaus(seed)),
            other => Err(invalid("ensemble", format!("unknown ensemble `{other}`"))),
        }
    }

    /// `ξ_n` for `n = 0..len` of trial `trial`.
    pub fn draw(&self, trial: u64, len: usize) -> Vec<Complex64> {
        let mut s = Substream::new(self.seed, Purpose::Coefficients, trial);
        s.seek(0);
        (0..len).map(|n| self.factor(&mut s, n)).collect()
    }

    /// `ξ_n` alone, addressed by `(seed, trial, n)`.
    pub fn draw_one(&self, trial: u64, n: usize) -> Complex64 {
        let mut s = Substream::new(self.seed, Purpose::Coefficients, trial);
        s.seek(n as u64);
        self.factor(&mut s, n)
    }

    fn factor(&self, s: &mut Substream, n: usize) -> Complex64 {
        match &self.kind {
            EnsembleKind::ComplexGaussian => {
                let (u, v) = s.pair();
                Complex64::from_polar((-u.ln()).sqrt(), 2.0 * PI * v)
            }
            EnsembleKind::Rademacher => {
                let (a, _) = s.raw_pair();
                Complex64::new(if a >> 63 == 0 { 1.0 } else { -1.0 }, 0.0)
            }
            EnsembleKind::Steinhaus => {
                let (u, _) = s.pair();
                Complex64::from_polar(1.0, 2.0 * PI * u)
            }
            EnsembleKind::FixedSigns { signs } => {
                let _ = s.raw_pair();
                Complex64::new(signs.get(n).copied().unwrap_or(1) as f64, 0.0)
            }
        }
    }

    /// `log A_n` slope of the per-ensemble envelope `A_n = e^{δn/2}`
    /// (Gaussian) or `A_n = 1` (unimodular ensembles).
    fn envelope_slope(&self, delta: f64) -> f64 {
        if self.is_gaussian() {
            delta / 2.0
        } else {
            0.0
        }
    }
}

/// Truncation settings for [`sample`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub r_max: f64,
    pub tail_tol: f64,
    /// Use this degree instead of the certified minimum; the reported tail
    /// bound then reflects the override.
    pub degree_override: Option<usize>,
}

impl SampleOptions {
    pub fn new(r_max: f64, tail_tol: f64) -> Self {
        Self {
            r_max,
            tail_tol,
            degree_override: None,
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree_override = Some(degree);
        self
    }
}

/// Degree and tail certificate of a truncation plan, independent of the draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    pub degree: usize,
    pub tail_log_bound: f64,
    pub envelope_delta: f64,
}

/// Chooses the minimal degree `D` with `log Σ_{n>D} A_n a_n r_maxⁿ ≤ log(tail_tol)`.
pub fn plan_truncation(seq: &CoefficientSequence, ensemble: &EnsembleSpec, opts: &SampleOptions) -> Result<Truncation> {
    if !(opts.r_max > 0.0) || !opts.r_max.is_finite() {
        return Err(invalid("r_max", format!("must be a positive real, got {}", opts.r_max)));
    }
    if !(opts.tail_tol > 0.0) {
        return Err(invalid("tail_tol", "must be positive"));
    }
    let envelope_delta = if ensemble.is_gaussian() {
        delta_of(growth::m_weight(seq, opts.r_max)?, DEFAULT_ETA)
    } else {
        0.0
    };
    let log_tol = opts.tail_tol.ln();
    let slope = ensemble.envelope_slope(envelope_delta);
    let terms = scan_terms(seq, opts.r_max.ln(), slope, log_tol - 40.0)?;
    // Remainder past the scan: terms keep shrinking at least geometrically
    // with the last observed ratio (log-concave or super-geometric families).
    let remainder = match (seq.support_len(), terms.len()) {
        (Some(len), _) if terms.last().is_none_or(|(n, _)| n + 1 >= len) => f64::NEG_INFINITY,
        (_, k) if k >= 2 => {
            let (_, t1) = terms[k - 1];
            let (_, t0) = terms[k - 2];
            let q = t1 - t0;
            if q >= 0.0 {
                return Err(Error::NonEntireSequence("envelope terms not decaying at scan end".into()));
            }
            t1 + q - (-q.exp()).ln_1p()
        }
        _ => f64::NEG_INFINITY,
    };
    // suffix[i] = log Σ_{j ≥ i} e^{t_j} + remainder
    let mut suffix = vec![remainder; terms.len() + 1];
    for i in (0..terms.len()).rev() {
        suffix[i] = log_sum_exp(&[terms[i].1, suffix[i + 1]]);
    }
    let tail_after = |degree: usize| -> f64 {
        let i = terms.partition_point(|(n, _)| *n <= degree);
        suffix[i]
    };
    if let Some(d) = opts.degree_override {
        return Ok(Truncation {
            degree: d,
            tail_log_bound: tail_after(d),
            envelope_delta,
        });
    }
    let first_ok = (0..=terms.len()).find(|&i| suffix[i] <= log_tol).unwrap_or(terms.len());
    let degree = if first_ok == 0 { 0 } else { terms[first_ok - 1].0 };
    if degree > DEGREE_CAP {
        return Err(Error::TruncationFailure {
            log_tol,
            cap: DEGREE_CAP,
        });
    }
    Ok(Truncation {
        degree,
        tail_log_bound: suffix[first_ok],
        envelope_delta,
    })
}

/// One realization of a truncated random series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSample {
    pub seq: CoefficientSequence,
    pub ensemble: EnsembleSpec,
    pub trial: u64,
    pub r_max: f64,
    pub degree: usize,
    pub tail_log_bound: f64,
    /// Random factors `ξ_n`, `n = 0..=degree`.
    pub xi: Vec<Complex64>,
    /// `log a_n`, `-inf` for vanishing magnitudes.
    pub log_a: Vec<f64>,
}

/// Draws trial `trial` of `Σ ξ_n a_n zⁿ`, truncated per `opts`.
pub fn sample(seq: &CoefficientSequence, ensemble: &EnsembleSpec, trial: u64, opts: &SampleOptions) -> Result<SeriesSample> {
    let plan = plan_truncation(seq, ensemble, opts)?;
    Ok(sample_with_plan(seq, ensemble, trial, opts.r_max, plan))
}

/// Same as [`sample`] with a precomputed truncation (for batch drivers).
pub fn sample_with_plan(seq: &CoefficientSequence, ensemble: &EnsembleSpec, trial: u64, r_max: f64, plan: Truncation) -> SeriesSample {
    let len = plan.degree + 1;
    SeriesSample {
        seq: seq.clone(),
        ensemble: ensemble.clone(),
        trial,
        r_max,
        degree: plan.degree,
        tail_log_bound: plan.tail_log_bound,
        xi: ensemble.draw(trial, len),
        log_a: (0..len).map(|n| seq.log_a(n)).collect(),
    }
}

/// JSON form of a sample: coefficients as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seq: String,
    pub ensemble: String,
    pub seed: u64,
    pub trial: u64,
    pub degree: usize,
    pub r_max: f64,
    pub tail_log_bound: f64,
    pub coefficients: Vec<[f64; 2]>,
}

impl SeriesSample {
    /// A polynomial sample with the given coefficients (no tail, unbounded disk).
    pub fn from_coeffs(coeffs: &[Complex64]) -> Self {
        let xi = coeffs
            .iter()
            .map(|c| if c.norm() > 0.0 { c / c.norm() } else { Complex64::new(1.0, 0.0) })
            .collect();
        Self {
            seq: CoefficientSequence::ExplicitList {
                values: coeffs.iter().map(|c| c.norm()).collect(),
            },
            ensemble: EnsembleSpec::new(EnsembleKind::FixedSigns { signs: vec![] }, 0),
            trial: 0,
            r_max: f64::INFINITY,
            degree: coeffs.len().saturating_sub(1),
            tail_log_bound: f64::NEG_INFINITY,
            xi,
            log_a: coeffs.iter().map(|c| c.norm().ln()).collect(),
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        let c: Vec<Complex64> = coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_coeffs(&c)
    }

    /// `c_n = ξ_n a_n` (may underflow to zero for very small magnitudes).
    pub fn coeff(&self, n: usize) -> Complex64 {
        if self.log_a[n] == f64::NEG_INFINITY {
            Complex64::new(0.0, 0.0)
        } else {
            self.xi[n] * self.log_a[n].exp()
        }
    }

    pub fn coeffs(&self) -> Vec<Complex64> {
        (0..=self.degree).map(|n| self.coeff(n)).collect()
    }

    /// `log|c_n|`, `-inf` for zero coefficients.
    pub fn log_abs_coeff(&self, n: usize) -> f64 {
        let m = self.xi[n].norm();
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.log_a[n] + m.ln()
        }
    }

    /// `f(ρw) = e^{L} p(w)` for this truncation.
    pub fn scaled(&self, rho: f64) -> ScaledPoly {
        let phases: Vec<Complex64> = self
            .xi
            .iter()
            .map(|x| if x.norm() > 0.0 { x / x.norm() } else { Complex64::new(1.0, 0.0) })
            .collect();
        let logs: Vec<f64> = (0..=self.degree).map(|n| self.log_abs_coeff(n)).collect();
        ScaledPoly::from_log_parts(&phases, &logs, rho)
    }

    pub fn check_disk(&self, modulus: f64) -> Result<()> {
        if modulus > self.r_max * (1.0 + 1e-12) {
            return Err(Error::OutOfCertifiedDisk {
                modulus,
                r_max: self.r_max,
            });
        }
        Ok(())
    }

    /// Horner evaluation of the truncation at `z`, `|z| ≤ r_max`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.check_disk(z.norm())?;
        let rho = if z.norm() > 0.0 { z.norm() } else { 1.0 };
        let p = self.scaled(rho);
        Ok(p.eval(z / rho) * p.log_scale.exp())
    }

    /// Copy with `b` subtracted from the constant term (for `f(z) = b`).
    pub fn shifted(&self, b: Complex64) -> Self {
        let mut out = self.clone();
        let c0 = self.coeff(0) - b;
        let m = c0.norm();
        out.xi[0] = if m > 0.0 { c0 / m } else { Complex64::new(1.0, 0.0) };
        out.log_a[0] = m.ln();
        out
    }

    pub fn record(&self) -> SampleRecord {
        SampleRecord {
            seq: self.seq.to_string(),
            ensemble: self.ensemble.name().to_string(),
            seed: self.ensemble.seed,
            trial: self.trial,
            degree: self.degree,
            r_max: self.r_max,
            tail_log_bound: self.tail_log_bound,
            coefficients: self.coeffs().iter().map(|c| [c.re, c.im]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.record()).expect("sample record serializes")
    }
}

/// `θ ↦ f(re^{2πiθ})/σ(r)` for one sample.
#[derive(Debug, Clone)]
pub struct NormalizedCircle {
    poly: ScaledPoly,
    log_sigma: f64,
}

impl NormalizedCircle {
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.poly.eval(Complex64::from_polar(1.0, 2.0 * PI * theta)) * (self.poly.log_scale - self.log_sigma).exp()
    }

    /// `∫₀¹ |f̂|² dθ` by the trapezoid rule; exact once `nodes > degree`.
    pub fn l2_mass(&self, nodes: usize) -> f64 {
        let nodes = nodes.max(self.poly.degree() + 1);
        (0..nodes).map(|k| self.eval(k as f64 / nodes as f64).norm_sqr()).sum::<f64>() / nodes as f64
    }
}

pub fn sigma_hat_normalize(sample: &SeriesSample, r: f64) -> Result<NormalizedCircle> {
    sample.check_disk(r)?;
    Ok(NormalizedCircle {
        poly: sample.scaled(r),
        log_sigma: 0.5 * growth::log_sigma_sq(&sample.seq, r)?,
    })
}

/// Log-probabilities of the four independent events whose intersection
/// forces the Gaussian series to be zero-free on `|z| ≤ r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventLogProbabilities {
    pub r: f64,
    pub big_s: f64,
    pub m_weight: u64,
    pub n_count: usize,
    pub delta: f64,
    /// Constant of event (i), `|ξ_0| ≥ C m^{1/4}`.
    pub c_event: f64,
    pub c1: f64,
    pub c2: f64,
    pub log_p_i: f64,
    pub log_p_ii: f64,
    pub log_p_iii: f64,
    pub log_p_iv: f64,
    /// The generic lower bound `log(1/4)` for event (iv).
    pub log_p_iv_lower: f64,
    pub total: f64,
    /// `(−S − total)/(√m·log m)`: the constant realized at this radius.
    pub c_prime: f64,
    /// Indices of `Ñ_δ \ N` (event (iii)).
    pub iii_indices: Vec<usize>,
}

/// Index sets and thresholds of the zero-free event at radius `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaEvent {
    pub profile: GrowthProfile,
    pub c_event: f64,
    pub c1: f64,
    pub c2: f64,
    /// `|ξ_0|` lower threshold.
    pub xi0_min: f64,
    /// `(n, λ_n)` with `|ξ_n| ≤ λ_n` for `n ∈ N(r) \ {0}`.
    pub ii: Vec<(usize, f64)>,
    /// `(n, λ)` for `n ∈ Ñ_δ(r) \ N(r)`.
    pub iii: Vec<(usize, f64)>,
    /// Smallest index of event (iv): every nonzero index not in `Ñ_δ`.
    pub tilde_n: Vec<usize>,
}

impl OmegaEvent {
    /// Builds the event; `c_event = None` takes `C₁ + C₂ + 4`.
    pub fn new(seq: &CoefficientSequence, r: f64, c_event: Option<f64>) -> Result<Self> {
        let profile = growth::growth_profile(seq, r)?;
        let m = profile.m_weight as f64;
        let delta = profile.delta;
        let n_delta = growth::n_delta_set(seq, r, delta)?;
        let sqrt_m = m.sqrt();
        let mut tilde: Vec<usize> = n_delta.clone();
        let mut n = 0;
        while (n as f64) < sqrt_m {
            if seq.log_a(n) > f64::NEG_INFINITY && !tilde.contains(&n) {
                tilde.push(n);
            }
            n += 1;
        }
        tilde.sort_unstable();
        let inv_sqrt_m = if m > 0.0 { 1.0 / sqrt_m } else { f64::INFINITY };
        let ii: Vec<(usize, f64)> = profile
            .n_set
            .iter()
            .filter(|&&n| n > 0)
            .map(|&n| {
                let log_term = seq.log_a(n) + n as f64 * r.ln();
                (n, (-log_term).exp() * inv_sqrt_m)
            })
            .collect();
        let iii: Vec<(usize, f64)> = tilde
            .iter()
            .filter(|n| !profile.n_set.contains(n))
            .map(|&n| (n, inv_sqrt_m))
            .collect();
        let (c1, c2) = if m > 0.0 {
            (profile.n_count as f64 / sqrt_m, iii.len() as f64 / sqrt_m)
        } else {
            (0.0, 0.0)
        };
        let c_event = c_event.unwrap_or(c1 + c2 + 4.0);
        Ok(Self {
            xi0_min: c_event * m.powf(0.25),
            profile,
            c_event,
            c1,
            c2,
            ii,
            iii,
            tilde_n: tilde,
        })
    }

    /// `|ξ_n| ≤ e^{δn/2}` bound of event (iv) at index `n`.
    pub fn iv_bound(&self, n: usize) -> f64 {
        (self.profile.delta * n as f64 / 2.0).exp()
    }

    /// Whether the factors of `sample` satisfy events (i)–(iv) up to its degree.
    pub fn holds(&self, sample: &SeriesSample) -> bool {
        let xi = &sample.xi;
        if xi[0].norm() < self.xi0_min {
            return false;
        }
        let within = |n: usize, lam: f64| n >= xi.len() || xi[n].norm() <= lam;
        if !self.ii.iter().all(|&(n, l)| within(n, l)) || !self.iii.iter().all(|&(n, l)| within(n, l)) {
            return false;
        }
        (1..xi.len())
            .filter(|n| sample.log_a[*n] > f64::NEG_INFINITY && self.tilde_n.binary_search(n).is_err())
            .all(|n| xi[n].norm() <= self.iv_bound(n))
    }
}

/// `log P(|ξ| ≤ λ) = log(1 − e^{−λ²})` for a standard complex Gaussian.
fn log_p_small(lambda: f64) -> f64 {
    if lambda == f64::INFINITY {
        return 0.0;
    }
    let l2 = lambda * lambda;
    // log(1 - e^{-x}) = log(-expm1(-x))
    (-(-l2).exp_m1()).ln()
}

/// Exact log-probabilities of events (i)–(iv) for a Gaussian series.
pub fn envelope_event_probability(
    seq: &CoefficientSequence,
    ensemble: &EnsembleSpec,
    r: f64,
    c_event: Option<f64>,
) -> Result<EventLogProbabilities> {
    if !ensemble.is_gaussian() {
        return Err(Error::UnsupportedEnsemble(ensemble.name().to_string()));
    }
    let ev = OmegaEvent::new(seq, r, c_event)?;
    let p = &ev.profile;
    let log_p_i = -ev.xi0_min * ev.xi0_min;
    let log_p_ii: f64 = ev.ii.iter().map(|&(_, l)| log_p_small(l)).sum();
    let log_p_iii: f64 = ev.iii.iter().map(|&(_, l)| log_p_small(l)).sum();
    // P((iv)_n^c) = exp(−e^{δn}); sum log(1 − exp(−e^{δn})) over remaining nonzero indices.
    let mut log_p_iv = 0.0;
    for n in seq.candidate_indices().skip_while(|n| *n == 0) {
        if n > crate::growth::SCAN_CAP {
            break;
        }
        if seq.log_a(n) == f64::NEG_INFINITY || ev.tilde_n.binary_search(&n).is_ok() {
            if seq.support_len().is_some_and(|len| n + 1 >= len) {
                break;
            }
            continue;
        }
        let x = (p.delta * n as f64).exp();
        let term = (-(-x).exp()).ln_1p();
        log_p_iv += term;
        if term.abs() < 1e-300 {
            break;
        }
    }
    let total = log_p_i + log_p_ii + log_p_iii + log_p_iv;
    let m = p.m_weight as f64;
    let c_prime = if m > 1.0 {
        (-p.big_s - total) / (m.sqrt() * m.ln())
    } else {
        f64::NAN
    };
    Ok(EventLogProbabilities {
        r,
        big_s: p.big_s,
        m_weight: p.m_weight,
        n_count: p.n_count,
        delta: p.delta,
        c_event: ev.c_event,
        c1: ev.c1,
        c2: ev.c2,
        log_p_i,
        log_p_ii,
        log_p_iii,
        log_p_iv,
        log_p_iv_lower: 0.25f64.ln(),
        total,
        c_prime,
        iii_indices: ev.iii.iter().map(|(n, _)| *n).collect(),
    })
}

/// Draws a Gaussian sample conditioned on the zero-free event: each factor
/// is drawn from its law restricted to its own event, using the same
/// per-index uniforms as an unconditioned draw.
pub fn sample_conditioned_on_omega(
    seq: &CoefficientSequence,
    ev: &OmegaEvent,
    seed: u64,
    trial: u64,
    opts: &SampleOptions,
) -> Result<SeriesSample> {
    let ensemble = EnsembleSpec::gaussian(seed);
    let plan = plan_truncation(seq, &ensemble, opts)?;
    let len = plan.degree + 1;
    let mut s = Substream::new(seed, Purpose::Coefficients, trial);
    s.seek(0);
    let ii: std::collections::HashMap<usize, f64> = ev.ii.iter().chain(ev.iii.iter()).copied().collect();
    let xi = (0..len)
        .map(|n| {
            let (u, v) = s.pair();
            let phase = 2.0 * PI * v;
            // |ξ|² ~ Exp(1); condition by inverse CDF on the event window
            let modulus_sq = if n == 0 {
                ev.xi0_min * ev.xi0_min - u.ln()
            } else {
                let lam = ii.get(&n).copied().unwrap_or_else(|| ev.iv_bound(n));
                let cap = -(-lam * lam).exp_m1();
                -(-u * cap).ln_1p()
            };
            Complex64::from_polar(modulus_sq.sqrt(), phase)
        })
        .collect();
    Ok(SeriesSample {
        seq: seq.clone(),
        ensemble,
        trial,
        r_max: opts.r_max,
        degree: plan.degree,
        tail_log_bound: plan.tail_log_bound,
        xi,
        log_a: (0..len).map(|n| seq.log_a(n)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gef_rademacher_truncation_is_certified() {
        let gef = CoefficientSequence::Gef;
        let plan = plan_truncation(&gef, &EnsembleSpec::rademacher(1), &SampleOptions::new(2.0, 1e-12)).unwrap();
        assert!((30..=60).contains(&plan.degree), "degree {}", plan.degree);
        // oracle: direct tail sum of a_n 2^n past the degree
        let tail: f64 = (plan.degree + 1..400)
            .map(|n| (n as f64 * 2f64.ln() - 0.5 * libm::lgamma(n as f64 + 1.0)).exp())
            .sum();
        assert!(tail <= 1e-12);
        assert!((tail.ln() - plan.tail_log_bound).abs() < 1e-6);
        // minimality: one degree less fails
        let prev: f64 = (plan.degree..400)
            .map(|n| (n as f64 * 2f64.ln() - 0.5 * libm::lgamma(n as f64 + 1.0)).exp())
            .sum();
        assert!(prev > 1e-12);
    }

    #[test]
    fn finite_list_has_empty_tail() {
        let seq = CoefficientSequence::explicit(vec![1.0, 1.0]).unwrap();
        for ens in [EnsembleSpec::rademacher(0), EnsembleSpec::gaussian(0), EnsembleSpec::steinhaus(0)] {
            let s = sample(&seq, &ens, 0, &SampleOptions::new(1.0, 1e-12)).unwrap();
            assert_eq!(s.degree, 1);
            assert_eq!(s.tail_log_bound, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn gauss_squared_gaussian_degree_small() {
        let seq = CoefficientSequence::gauss_squared(1.1).unwrap();
        let plan = plan_truncation(&seq, &EnsembleSpec::gaussian(0), &SampleOptions::new(6.6f64.exp(), 1e-10)).unwrap();
        assert!(plan.degree <= 15, "degree {}", plan.degree);
        // index 6 sits exactly on b_6 = 0 at this radius; in floating point it
        // lands just below, so N = {0..5} and m = 60
        let delta = 60f64.powf(-0.25);
        assert!((plan.envelope_delta - delta).abs() < 1e-15);
        let tail: f64 = (plan.degree + 1..60)
            .map(|n| {
                let n = n as f64;
                (delta * n / 2.0 - 1.1 * n * n + 6.6 * n).exp()
            })
            .sum();
        assert!(tail <= 1e-10);
    }

    #[test]
    fn evaluate_trivial_polynomials() {
        let s = SeriesSample::from_real(&[1.0, 1.0]);
        assert_eq!(s.evaluate(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        let s = SeriesSample::from_real(&[1.0, -1.0]);
        assert!(s.evaluate(Complex64::new(1.0, 0.0)).unwrap().norm() < 1e-16);
    }

    #[test]
    fn evaluate_matches_term_by_term_sum() {
        let s = sample(&CoefficientSequence::Gef, &EnsembleSpec::gaussian(11), 0, &SampleOptions::new(2.0, 1e-12)).unwrap();
        let z = Complex64::new(0.3, 0.4);
        let mut direct = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut fact = 1.0f64;
        for n in 0..=s.degree {
            if n > 0 {
                fact *= n as f64;
            }
            direct += s.xi[n] * zn / fact.sqrt();
            zn *= z;
        }
        assert!((s.evaluate(z).unwrap() - direct).norm() < 1e-10);
        assert!(matches!(
            s.evaluate(Complex64::new(3.0, 0.0)),
            Err(Error::OutOfCertifiedDisk { .. })
        ));
    }

    #[test]
    fn unimodular_ensembles() {
        for ens in [EnsembleSpec::rademacher(3), EnsembleSpec::steinhaus(3)] {
            for x in ens.draw(5, 500) {
                assert!((x.norm() - 1.0).abs() < 1e-15);
            }
        }
        let r = EnsembleSpec::rademacher(3).draw(0, 10_000);
        assert!(r.iter().all(|x| x.im == 0.0 && x.re.abs() == 1.0));
        let plus = r.iter().filter(|x| x.re > 0.0).count() as f64 / 10_000.0;
        assert!((plus - 0.5).abs() < 4.0 * 0.5 / 100.0);
    }

    #[test]
    fn draws_are_reproducible_and_addressable() {
        let ens = EnsembleSpec::gaussian(42);
        let a = ens.draw(9, 64);
        assert_eq!(a, ens.draw(9, 64));
        for n in [0usize, 17, 63] {
            assert_eq!(ens.draw_one(9, n), a[n]);
        }
    }

    #[test]
    fn normalized_constant_series() {
        let seq = CoefficientSequence::explicit(vec![1.0]).unwrap();
        let s = sample(&seq, &EnsembleSpec::rademacher(2), 0, &SampleOptions::new(3.0, 1e-12)).unwrap();
        let nc = sigma_hat_normalize(&s, 2.0).unwrap();
        assert!((nc.eval(0.3).norm() - 1.0).abs() < 1e-15);
        assert!((nc.l2_mass(16) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn event_probabilities_constant_series_vacuous() {
        let seq = CoefficientSequence::explicit(vec![1.0]).unwrap();
        let e = envelope_event_probability(&seq, &EnsembleSpec::gaussian(0), 1.0, None).unwrap();
        assert_eq!(e.log_p_ii, 0.0);
        assert_eq!(e.log_p_iii, 0.0);
        assert!(matches!(
            envelope_event_probability(&seq, &EnsembleSpec::rademacher(0), 1.0, None),
            Err(Error::UnsupportedEnsemble(_))
        ));
    }

    #[test]
    fn event_probabilities_gef_r2() {
        let gef = CoefficientSequence::Gef;
        let e = envelope_event_probability(&gef, &EnsembleSpec::gaussian(0), 2.0, None).unwrap();
        assert!(e.log_p_iv >= e.log_p_iv_lower);
        assert!(e.c_prime.is_finite() && e.c_prime > 0.0);
        let bound = -e.big_s - e.c_prime * 12.0 * 144f64.ln();
        assert!((e.total - bound).abs() < 1e-9 * e.total.abs());
        // (i): C = C1 + C2 + 4 with C1 = 9/12
        assert!((e.c1 - 0.75).abs() < 1e-15);
        assert!((e.log_p_i + (e.c_event * 144f64.powf(0.25)).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn conditioned_samples_satisfy_event() {
        let gef = CoefficientSequence::Gef;
        let ev = OmegaEvent::new(&gef, 2.0, None).unwrap();
        for t in 0..50 {
            let s = sample_conditioned_on_omega(&gef, &ev, 5, t, &SampleOptions::new(2.0, 1e-12)).unwrap();
            assert!(ev.holds(&s));
        }
    }
}
