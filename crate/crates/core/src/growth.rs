//! Deterministic growth functionals of a coefficient sequence `{a_n}`.
//!
//! Everything here is computed from the magnitudes `a_n` and a radius `r`:
//! the L² size `σ(r)`, its logarithmic derivative `s(r)`, the per-index
//! log sizes `b_n(r)`, the dominant index set `N(r)` and the hole exponent
//! `S(r) = 2 Σ log⁺(a_n rⁿ)`.
//!
//! Magnitudes are handled in the log domain throughout, so sequences such as
//! `1/√n!` can be summed for indices far beyond the range of `f64` factorials.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::stats::log_sum_exp;

/// Default exponent in `δ(r) = m(r)^{-η}`.
pub const DEFAULT_ETA: f64 = 0.25;

/// Hard cap on the number of indices any scan may visit.
pub(crate) const SCAN_CAP: usize = 10_000_000;

/// Relative cutoff for truncated sums: terms below `max · e^{-45}` (< 2⁻⁶⁰)
/// are dropped once the scan has passed the largest term.
const REL_CUTOFF: f64 = 45.0;

/// Parameters and materialized block table of the block construction in
/// which `a_j r_m^j = 1` for every `j` in block `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HoleBlocks {
    pub a: f64,
    pub b: f64,
    pub blocks: usize,
    /// `k_0 = 0, k_1, ..., k_M` with `k_m = floor(exp(b^m))`.
    pub ends: Vec<usize>,
    /// `log r_m = a^m` for `m = 1..=M` (index 0 holds `log r_0 = 0`).
    pub log_radii: Vec<f64>,
}

impl HoleBlocks {
    pub fn new(a: f64, b: f64, blocks: usize) -> Result<Self> {
        if !(a > 1.0) {
            return Err(invalid("a", "block radii base must exceed 1"));
        }
        if !(b > 1.0) {
            return Err(invalid("b", "block length base must exceed 1"));
        }
        let mut ends = vec![0usize];
        let mut log_radii = vec![0.0];
        for m in 1..=blocks {
            let k = b.powi(m as i32).exp().floor();
            if !(k < SCAN_CAP as f64) {
                return Err(invalid("blocks", format!("block {m} ends beyond index cap")));
            }
            let k = k as usize;
            if k <= *ends.last().unwrap() {
                return Err(invalid("b", format!("block {m} is empty (k_m = {k})")));
            }
            ends.push(k);
            log_radii.push(a.powi(m as i32));
        }
        Ok(Self {
            a,
            b,
            blocks,
            ends,
            log_radii,
        })
    }

    fn block_of(&self, j: usize) -> Option<usize> {
        if j == 0 || j > *self.ends.last().unwrap() {
            return None;
        }
        // ends is sorted; block m covers k_{m-1}+1 ..= k_m
        Some(self.ends.partition_point(|&k| k < j))
    }

    /// Closed-form block expression `Σ_m log⁺(r/r_m)·(k_m² + k_m − k_{m−1}² − k_{m−1})`.
    pub fn s_closed_form(&self, r: f64) -> f64 {
        let log_r = r.ln();
        (1..=self.blocks)
            .map(|m| {
                let gap = (log_r - self.log_radii[m]).max(0.0);
                let (k, kp) = (self.ends[m] as f64, self.ends[m - 1] as f64);
                gap * (k * k + k - kp * kp - kp)
            })
            .sum()
    }
}

/// Deterministic magnitudes `a_n ≥ 0` of a random Taylor series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSequence {
    /// `a_n = 1/√n!`
    Gef,
    /// `a_n = 1/Γ(αn + 1)`
    GammaType { alpha: f64 },
    /// `a_n = exp(−α n²)`
    GaussSquared { alpha: f64 },
    /// `a_j = exp(−2ⁿ n)` for `j = 2ⁿ`, zero otherwise (so `a_0 = 0`).
    Lacunary,
    /// Finite list of magnitudes; zero beyond the list.
    ExplicitList { values: Vec<f64> },
    /// Block construction, materialized up to block `M`.
    HoleBlocks(HoleBlocks),
}

impl CoefficientSequence {
    pub fn gamma_type(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonEntireSequence(format!(
                "GammaType needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Self::GammaType { alpha })
    }

    pub fn gauss_squared(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::NonEntireSequence(format!(
                "GaussSquared needs alpha > 0, got {alpha}"
            )));
        }
        Ok(Self::GaussSquared { alpha })
    }

    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "explicit list is empty"));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(invalid("values", format!("magnitude {v} is not a finite nonnegative real")));
        }
        Ok(Self::ExplicitList { values })
    }

    pub fn hole_blocks(a: f64, b: f64, blocks: usize) -> Result<Self> {
        Ok(Self::HoleBlocks(HoleBlocks::new(a, b, blocks)?))
    }

    /// Parses the compact textual form used by the CLI and config files:
    /// `gef`, `gamma:0.5`, `gauss2:1.1`, `lacunary`, `list:1,0.5,0.25`,
    /// `holeblocks:2,1.5,3`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (head, tail) = match spec.split_once(':') {
            Some((h, t)) => (h.trim(), Some(t.trim())),
            None => (spec.trim(), None),
        };
        let nums = |t: Option<&str>| -> Result<Vec<f64>> {
            t.ok_or_else(|| invalid("seq", format!("`{head}` needs parameters")))?
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid("seq", format!("bad number `{x}`")))
                })
                .collect()
        };
        match head.to_ascii_lowercase().as_str() {
            "gef" => Ok(Self::Gef),
            "lacunary" => Ok(Self::Lacunary),
            "gamma" => Self::gamma_type(single(nums(tail)?)?),
            "gauss2" | "gausssquared" => Self::gauss_squared(single(nums(tail)?)?),
            "list" => Self::explicit(nums(tail)?),
            "holeblocks" => {
                let v = nums(tail)?;
                if v.len() != 3 || v[2] < 1.0 || v[2].fract() != 0.0 {
                    return Err(invalid("seq", "holeblocks:a,b,M expects two reals and a block count"));
                }
                Self::hole_blocks(v[0], v[1], v[2] as usize)
            }
            other => Err(invalid("seq", format!("unknown sequence kind `{other}`"))),
        }
    }

    /// `log a_n`, or `-inf` when `a_n = 0`.
    pub fn log_a(&self, n: usize) -> f64 {
        match self {
            Self::Gef => -0.5 * libm::lgamma(n as f64 + 1.0),
            Self::GammaType { alpha } => -libm::lgamma(alpha * n as f64 + 1.0),
            Self::GaussSquared { alpha } => -alpha * (n as f64) * (n as f64),
            Self::Lacunary => {
                if n.is_power_of_two() {
                    let k = n.trailing_zeros() as f64;
                    -(n as f64) * k
                } else {
                    f64::NEG_INFINITY
                }
            }
            Self::ExplicitList { values } => values.get(n).map_or(f64::NEG_INFINITY, |v| v.ln()),
            Self::HoleBlocks(h) => {
                if n == 0 {
                    0.0
                } else {
                    match h.block_of(n) {
                        Some(m) => -(n as f64) * h.log_radii[m],
                        None => f64::NEG_INFINITY,
                    }
                }
            }
        }
    }

    pub fn a(&self, n: usize) -> f64 {
        self.log_a(n).exp()
    }

    /// One past the last possibly nonzero index, for finitely supported sequences.
    pub fn support_len(&self) -> Option<usize> {
        match self {
            Self::ExplicitList { values } => Some(values.len()),
            Self::HoleBlocks(h) => Some(h.ends.last().unwrap() + 1),
            _ => None,
        }
    }

    /// Indices that may carry a nonzero magnitude, in increasing order.
    pub fn candidate_indices(&self) -> Box<dyn Iterator<Item = usize> + '_> {
        match self {
            Self::Lacunary => Box::new((0..usize::BITS - 1).map(|k| 1usize << k)),
            _ => match self.support_len() {
                Some(len) => Box::new(0..len),
                None => Box::new(0..),
            },
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }
}

fn single(v: Vec<f64>) -> Result<f64> {
    match v.as_slice() {
        [x] => Ok(*x),
        _ => Err(invalid("seq", "expected exactly one parameter")),
    }
}

impl fmt::Display for CoefficientSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gef => write!(f, "gef"),
            Self::GammaType { alpha } => write!(f, "gamma:{alpha}"),
            Self::GaussSquared { alpha } => write!(f, "gauss2:{alpha}"),
            Self::Lacunary => write!(f, "lacunary"),
            Self::ExplicitList { values } => {
                let v: Vec<String> = values.iter().map(|x| x.to_string()).collect();
                write!(f, "list:{}", v.join(","))
            }
            Self::HoleBlocks(h) => write!(f, "holeblocks:{},{},{}", h.a, h.b, h.blocks),
        }
    }
}

/// Nonzero terms `(n, log a_n + n·log_r + slope·n)` of a scan, stopping once
/// the remaining terms are provably negligible for an entire sequence.
///
/// The scan stops past the running maximum when a term is both `REL_CUTOFF`
/// below the maximum and below `floor`, and the terms are decreasing.
pub(crate) fn scan_terms(
    seq: &CoefficientSequence,
    log_r: f64,
    slope: f64,
    floor: f64,
) -> Result<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    let mut best = f64::NEG_INFINITY;
    let mut best_at = 0usize;
    let mut prev = f64::NEG_INFINITY;
    for n in seq.candidate_indices() {
        if n > SCAN_CAP {
            return Err(Error::NonEntireSequence(format!(
                "terms of {seq} at log r = {log_r} still not decaying at n = {n}"
            )));
        }
        let la = seq.log_a(n);
        if la == f64::NEG_INFINITY {
            continue;
        }
        let t = la + n as f64 * (log_r + slope);
        if !t.is_finite() {
            return Err(Error::NonEntireSequence(format!("non-finite term at n = {n}")));
        }
        out.push((n, t));
        if t > best {
            best = t;
            best_at = n;
        }
        if n > best_at && t < best - REL_CUTOFF && t < floor && t < prev {
            break;
        }
        prev = t;
    }
    Ok(out)
}

fn log_r_checked(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("r", format!("radius must be a positive real, got {r}")));
    }
    Ok(r.ln())
}

/// `log σ²(r) = log Σ a_n² r^{2n}`.
pub fn log_sigma_sq(seq: &CoefficientSequence, r: f64) -> Result<f64> {
    let log_r = log_r_checked(r)?;
    let terms = scan_terms(seq, log_r, 0.0, f64::INFINITY)?;
    let logs: Vec<f64> = terms.iter().map(|(_, t)| 2.0 * t).collect();
    Ok(log_sum_exp(&logs))
}

/// `σ(r) = (Σ a_n² r^{2n})^{1/2}`.
pub fn sigma(seq: &CoefficientSequence, r: f64) -> Result<f64> {
    Ok((0.5 * log_sigma_sq(seq, r)?).exp())
}

/// `s(r) = d log σ / d log r = Σ n a_n² r^{2n} / Σ a_n² r^{2n}`.
pub fn s_log_deriv(seq: &CoefficientSequence, r: f64) -> Result<f64> {
    let log_r = log_r_checked(r)?;
    let terms = scan_terms(seq, log_r, 0.0, f64::INFINITY)?;
    let shift = terms.iter().map(|(_, t)| 2.0 * t).fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for &(n, t) in &terms {
        let w = (2.0 * t - shift).exp();
        num += n as f64 * w;
        den += w;
    }
    Ok(num / den)
}

/// Expected zero count of the Gaussian series from the covariance kernel
/// `K(r) = Σ a_n² r^{2n}`: `(r/2)·K'(r)/K(r)`.
pub fn edelman_kostlan(seq: &CoefficientSequence, r: f64) -> Result<f64> {
    let log_r = log_r_checked(r)?;
    let terms = scan_terms(seq, log_r, 0.0, f64::INFINITY)?;
    // K and K' are accumulated as separate max-shifted sums.
    let k_logs: Vec<f64> = terms.iter().map(|(_, t)| 2.0 * t).collect();
    let dk_logs: Vec<f64> = terms
        .iter()
        .filter(|(n, _)| *n > 0)
        .map(|&(n, t)| (2.0 * n as f64).ln() + 2.0 * t - log_r)
        .collect();
    if dk_logs.is_empty() {
        return Ok(0.0);
    }
    let log_k = log_sum_exp(&k_logs);
    let log_dk = log_sum_exp(&dk_logs);
    Ok(0.5 * (log_r + log_dk - log_k).exp())
}

/// `b_n(r) = (1/n)·log a_n + log r`, `-inf` when `a_n = 0`.
pub fn b_n(seq: &CoefficientSequence, n: usize, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let log_r = log_r_checked(r)?;
    let la = seq.log_a(n);
    if la == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(la / n as f64 + log_r)
}

/// `N_δ(r) = {n : b_n(r) ≥ −δ}`; `δ` may be negative, giving `{b_n ≥ |δ|}`.
///
/// Index 0 has no `b_0`; it belongs to every `N_δ(r)` exactly when `a_0 ≥ 1`,
/// i.e. when it contributes to `log⁺(a_0)`.
pub fn n_delta_set(seq: &CoefficientSequence, r: f64, delta: f64) -> Result<Vec<usize>> {
    let log_r = log_r_checked(r)?;
    if !delta.is_finite() {
        return Err(invalid("delta", "must be finite"));
    }
    let terms = scan_terms(seq, log_r, delta, -1.0).map_err(|e| match e {
        Error::NonEntireSequence(_) if delta > 0.0 => invalid("delta", format!("N_δ(r) at δ = {delta} extends past the scan cap")),
        e => e,
    })?;
    Ok(terms
        .into_iter()
        .filter(|&(_, t)| t >= 0.0)
        .map(|(n, _)| n)
        .collect())
}

/// Dominant set `N(r) = {n : a_n rⁿ ≥ 1}`.
pub fn dominant_set(seq: &CoefficientSequence, r: f64) -> Result<Vec<usize>> {
    n_delta_set(seq, r, 0.0)
}

/// Per-radius record of the growth functionals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub r: f64,
    pub sigma: f64,
    pub log_sigma: f64,
    pub s: f64,
    #[serde(rename = "S")]
    pub big_s: f64,
    pub n_count: usize,
    pub m_weight: u64,
    pub delta: f64,
    pub eta: f64,
    pub n_set: Vec<usize>,
}

/// `δ = m^{-η}`, with `m` clamped below at 1 so that `δ ≤ 1` when no
/// index besides 0 dominates.
pub fn delta_of(m_weight: u64, eta: f64) -> f64 {
    (m_weight.max(1) as f64).powf(-eta)
}

fn s_and_m(seq: &CoefficientSequence, log_r: f64) -> Result<(f64, u64, Vec<usize>)> {
    let terms = scan_terms(seq, log_r, 0.0, -1.0)?;
    let mut big_s = 0.0;
    let mut m = 0u64;
    let mut set = Vec::new();
    for (n, t) in terms {
        if t >= 0.0 {
            big_s += 2.0 * t;
            m += 4 * n as u64;
            set.push(n);
        }
    }
    Ok((big_s, m, set))
}

/// `S(r) = 2 Σ_{n ∈ N(r)} log(a_n rⁿ)`.
pub fn big_s(seq: &CoefficientSequence, r: f64) -> Result<f64> {
    Ok(s_and_m(seq, log_r_checked(r)?)?.0)
}

/// `m(r) = 4 Σ_{n ∈ N(r)} n`.
pub fn m_weight(seq: &CoefficientSequence, r: f64) -> Result<u64> {
    Ok(s_and_m(seq, log_r_checked(r)?)?.1)
}

pub fn growth_profile(seq: &CoefficientSequence, r: f64) -> Result<GrowthProfile> {
    growth_profile_with_eta(seq, r, DEFAULT_ETA)
}

pub fn growth_profile_with_eta(seq: &CoefficientSequence, r: f64, eta: f64) -> Result<GrowthProfile> {
    if !(eta > 0.0 && eta <= 0.25) {
        return Err(invalid("eta", format!("must lie in (0, 1/4], got {eta}")));
    }
    let log_r = log_r_checked(r)?;
    let log_sigma = 0.5 * log_sigma_sq(seq, r)?;
    let s = s_log_deriv(seq, r)?;
    let (big_s, m, n_set) = s_and_m(seq, log_r)?;
    Ok(GrowthProfile {
        r,
        sigma: log_sigma.exp(),
        log_sigma,
        s,
        big_s,
        n_count: n_set.len(),
        m_weight: m,
        delta: delta_of(m, eta),
        eta,
        n_set,
    })
}

/// `S̃(r) = 2 Σ log⁺(d·a_n rⁿ)` for the rescaled coefficients `d·a_n`.
pub fn big_s_scaled(seq: &CoefficientSequence, r: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(invalid("d", "scale must be positive"));
    }
    let log_r = log_r_checked(r)?;
    let log_d = d.ln();
    let terms = scan_terms(seq, log_r, 0.0, -1.0 - log_d.max(0.0))?;
    Ok(terms.iter().map(|(_, t)| 2.0 * (t + log_d).max(0.0)).sum())
}

/// Outcome of checking the three `S(r)` lemmas at one radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SBoundsCheck {
    /// `S ≥ m^{1−η}/8`
    pub lower_ok: bool,
    /// `S((1−γ)r) ≥ S(r) − γ·m(r)` at `γ = 1/m(r)`
    pub growth_ok: bool,
    /// `|S(r) − S̃(r)|/√m` for the rescaling `d`
    pub scaling_gap: f64,
    pub big_s: f64,
    pub lower_threshold: f64,
    pub m_weight: u64,
    pub n_count: usize,
}

pub fn s_bounds_check(seq: &CoefficientSequence, r: f64, d: f64) -> Result<SBoundsCheck> {
    let p = growth_profile(seq, r)?;
    if p.n_count < 2 {
        return Err(Error::TooFewDominantTerms(p.n_count));
    }
    let m = p.m_weight as f64;
    let lower_threshold = m.powf(1.0 - p.eta) / 8.0;
    let gamma = 1.0 / m;
    let s_shrunk = big_s(seq, (1.0 - gamma) * r)?;
    let growth_ok = s_shrunk >= p.big_s - gamma * m - 1e-12 * p.big_s.max(1.0);
    let s_tilde = big_s_scaled(seq, r, d)?;
    Ok(SBoundsCheck {
        lower_ok: p.big_s >= lower_threshold,
        growth_ok,
        scaling_gap: (p.big_s - s_tilde).abs() / m.sqrt(),
        big_s: p.big_s,
        lower_threshold,
        m_weight: p.m_weight,
        n_count: p.n_count,
    })
}

/// Whether `r` lies in the regular window where `m` varies slowly:
/// `m(re^{−δ}) > (1−η)m(r)` and `m(re^{δ}) < (1+η)m(r)` with `δ = m(r)^{−η}`.
///
/// When `m(r) = 0` both inequalities are taken as satisfied.
pub fn hayman_window(seq: &CoefficientSequence, r: f64) -> Result<bool> {
    hayman_window_with_eta(seq, r, DEFAULT_ETA)
}

pub fn hayman_window_with_eta(seq: &CoefficientSequence, r: f64, eta: f64) -> Result<bool> {
    let m = m_weight(seq, r)?;
    if m == 0 {
        return Ok(true);
    }
    let mf = m as f64;
    let delta = mf.powf(-eta);
    let lo = m_weight(seq, r * (-delta).exp())? as f64;
    let hi = m_weight(seq, r * delta.exp())? as f64;
    Ok(lo > (1.0 - eta) * mf && hi < (1.0 + eta) * mf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn gef_sigma_closed_form() {
        let gef = CoefficientSequence::Gef;
        assert!(close(sigma(&gef, 1.0).unwrap(), 0.5f64.exp(), 1e-14));
        assert!(close(sigma(&gef, 2.0).unwrap(), 2f64.exp(), 1e-14));
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert_eq!(sigma(&one, 3.7).unwrap(), 1.0);
    }

    #[test]
    fn s_log_deriv_examples() {
        let gef = CoefficientSequence::Gef;
        assert!(close(s_log_deriv(&gef, 2.0).unwrap(), 4.0, 1e-12));
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert_eq!(s_log_deriv(&one, 5.0).unwrap(), 0.0);
        let mono = CoefficientSequence::explicit(vec![0.0, 1.0]).unwrap();
        assert_eq!(s_log_deriv(&mono, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn b_n_examples() {
        let gef = CoefficientSequence::Gef;
        // -(1/6) ln 6 + ln 2, log a_3 = -ln(3!)/2
        let expect = -(6f64.ln()) / 6.0 + 2f64.ln();
        assert!(close(b_n(&gef, 3, 2.0).unwrap(), expect, 1e-14));
        assert!((b_n(&gef, 3, 2.0).unwrap() - 0.3945206).abs() < 1e-6);
        assert_eq!(b_n(&CoefficientSequence::Lacunary, 3, 10.0).unwrap(), f64::NEG_INFINITY);
        // r = a_2^{-1/2} = 2^{1/4}
        let r = 2f64.powf(0.25);
        assert!(b_n(&gef, 2, r).unwrap().abs() < 1e-15);
        assert_eq!(b_n(&gef, 0, 1.0), Err(Error::InvalidIndex(0)));
    }

    #[test]
    fn growth_profile_examples() {
        let gef = CoefficientSequence::Gef;
        let p = growth_profile(&gef, 2.0).unwrap();
        assert_eq!(p.n_count, 9);
        assert_eq!(p.m_weight, 144);
        assert_eq!(p.n_set, (0..9).collect::<Vec<_>>());
        // exact log-domain enumeration (mpmath, 50 digits): 13.7471293015773
        assert!((p.big_s - 13.747_129_301_577_3).abs() < 1e-10);
        assert!(close(p.delta, 144f64.powf(-0.25), 1e-15));

        let p1 = growth_profile(&gef, 1.0).unwrap();
        assert_eq!(p1.big_s, 0.0);
        assert_eq!(p1.n_set, vec![0, 1]);

        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        let p = growth_profile(&one, 7.0).unwrap();
        assert_eq!((p.big_s, p.n_count, p.m_weight), (0.0, 1, 0));
    }

    #[test]
    fn n_delta_examples() {
        let gef = CoefficientSequence::Gef;
        assert_eq!(n_delta_set(&gef, 2.0, 0.0).unwrap(), (0..9).collect::<Vec<_>>());
        let wide = n_delta_set(&gef, 2.0, 2.0).unwrap();
        assert!((0..9).all(|n| wide.contains(&n)));
        assert!(wide.len() > 9);
        // at δ = 10 the set runs to n ≈ 10⁹ and cannot be listed
        assert!(matches!(n_delta_set(&gef, 2.0, 10.0), Err(Error::InvalidParameter { name: "delta", .. })));
    }

    #[test]
    fn lacunary_dominant_set_near_e() {
        // b_1(r) = log r, b_2(r) = log r - 1, b_4(r) = log r - 2: at r = e the
        // index 2 sits exactly on the boundary b = 0.
        let lac = CoefficientSequence::Lacunary;
        let oracle = |r: f64| -> Vec<usize> {
            (1..=64usize)
                .filter(|j| j.is_power_of_two())
                .filter(|&j| {
                    let k = j.trailing_zeros() as f64;
                    -k + r.ln() >= 0.0
                })
                .collect()
        };
        for r in [E * (1.0 - 1e-9), E * (1.0 + 1e-9), 2.0, 30.0] {
            assert_eq!(dominant_set(&lac, r).unwrap(), oracle(r), "r = {r}");
        }
        assert_eq!(dominant_set(&lac, E * (1.0 - 1e-9)).unwrap(), vec![1]);
        assert_eq!(dominant_set(&lac, E * (1.0 + 1e-9)).unwrap(), vec![1, 2]);
    }

    #[test]
    fn edelman_kostlan_examples() {
        let gef = CoefficientSequence::Gef;
        assert!(close(edelman_kostlan(&gef, 2.0).unwrap(), 4.0, 1e-12));
        assert!(close(edelman_kostlan(&gef, 1.0).unwrap(), 1.0, 1e-12));
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert_eq!(edelman_kostlan(&one, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn s_bounds_examples() {
        let gef = CoefficientSequence::Gef;
        let c = s_bounds_check(&gef, 2.0, 2.0).unwrap();
        assert!(c.lower_ok);
        assert!(c.growth_ok);
        assert!((c.lower_threshold - 144f64.powf(0.75) / 8.0).abs() < 1e-12);
        // S̃ with d = 2 by mpmath enumeration: 27.429720082017
        assert!((c.scaling_gap - 1.140215898).abs() < 1e-8);

        let two = CoefficientSequence::explicit(vec![1.0, 1.0]).unwrap();
        let c = s_bounds_check(&two, 1.0, 2.0).unwrap();
        assert_eq!(c.n_count, 2);
        assert_eq!(c.big_s, 0.0);
        assert!(!c.lower_ok);

        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert_eq!(s_bounds_check(&one, 3.0, 2.0), Err(Error::TooFewDominantTerms(1)));
    }

    #[test]
    fn hayman_window_examples() {
        // m(r) ~ r⁴ for the GEF, so the window needs e^{-4δ} > 3/4, i.e. m ≳ 4·10⁴.
        // At r = 2: m(re^{-δ}) = 40 and m(re^{δ}) = 544 against m = 144.
        assert!(!hayman_window(&CoefficientSequence::Gef, 2.0).unwrap());
        assert_eq!(m_weight(&CoefficientSequence::Gef, 2.0 * (-144f64.powf(-0.25)).exp()).unwrap(), 40);
        assert_eq!(m_weight(&CoefficientSequence::Gef, 2.0 * 144f64.powf(-0.25).exp()).unwrap(), 544);
        assert!(hayman_window(&CoefficientSequence::Gef, 10.0).unwrap());
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        assert!(hayman_window(&one, 5.0).unwrap());
        // Near the jump of the lacunary dominant set at log r = 6 the window fails.
        let lac = CoefficientSequence::Lacunary;
        let failing = (0..200)
            .map(|i| 6.0 - 0.3 + 0.6 * i as f64 / 199.0)
            .filter(|s| !hayman_window(&lac, s.exp()).unwrap())
            .count();
        assert!(failing > 0);
    }

    #[test]
    fn hole_blocks_closed_form_matches_enumeration() {
        let seq = CoefficientSequence::hole_blocks(2.0, 1.5, 3).unwrap();
        let CoefficientSequence::HoleBlocks(h) = &seq else { unreachable!() };
        assert_eq!(h.ends, vec![0, 4, 9, 29]);
        for r in [1.5, 8.0, 20.0, 100.0, 1000.0, 5000.0] {
            let generic = big_s(&seq, r).unwrap();
            let closed = h.s_closed_form(r);
            assert!((generic - closed).abs() <= 1e-9 * closed.max(1.0), "r = {r}: {generic} vs {closed}");
        }
        // a_j r_m^j = 1 inside block m
        assert!((seq.log_a(6) + 6.0 * 4.0).abs() < 1e-12);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["gef", "gamma:0.5", "gauss2:1.1", "lacunary", "list:1,0.5", "holeblocks:2,1.5,3"] {
            let seq = CoefficientSequence::parse(s).unwrap();
            assert_eq!(CoefficientSequence::parse(&seq.to_string()).unwrap(), seq);
        }
        assert!(CoefficientSequence::parse("gamma:-1").is_err());
        assert!(CoefficientSequence::parse("bogus").is_err());
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(sigma(&CoefficientSequence::Gef, -1.0).is_err());
        assert!(sigma(&CoefficientSequence::Gef, 0.0).is_err());
    }
}
