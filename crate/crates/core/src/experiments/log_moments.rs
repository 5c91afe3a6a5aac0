//! Moments of `∫|log|g||^q` for Rademacher Fourier series `g` with `‖g‖₂ = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::{config_of, num, par_trials, ExperimentReport};
use crate::error::{invalid, Result};
use crate::sampling::EnsembleSpec;
use crate::stats::Summary;

/// Equal weights on the frequencies `|n| < w`, scaled to unit `ℓ²` norm.
/// For `w = 32` this is `b_n = 1/√63`, close to the nominal `1/8`.
pub fn flat_profile(w: usize) -> Vec<(i64, f64)> {
    let len = 2 * w - 1;
    let b = 1.0 / (len as f64).sqrt();
    (-(w as i64 - 1)..w as i64).map(|n| (n, b)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogMomentOptions {
    /// `(frequency, b_n)` pairs.
    pub profile: Vec<(i64, f64)>,
    pub q_list: Vec<f64>,
    pub trials: u64,
    /// Quadrature nodes; `None` takes the smallest power of two that is at
    /// least 64 times the top frequency.
    pub nodes: Option<usize>,
}

impl LogMomentOptions {
    pub fn new(profile: Vec<(i64, f64)>, q_list: Vec<f64>, trials: u64) -> Self {
        Self {
            profile,
            q_list,
            trials,
            nodes: None,
        }
    }
}

/// Per trial: `I_q = ∫₀¹ |log|g(θ)||^q dθ` on an equispaced grid, for
/// `g(θ) = Σ ξ_n b_n e^{2πinθ}` with Rademacher `ξ_n`.
///
/// Passes when every moment is finite and `I_q^{1/q}` is nondecreasing in
/// `q` on every sample (power means of one probability measure). The fitted
/// constant `C = max_q E[I_q]^{1/q}/q⁶` is reported.
pub fn exp_log_moments(ensemble: &EnsembleSpec, opts: &LogMomentOptions) -> Result<ExperimentReport> {
    if opts.profile.is_empty() || opts.q_list.is_empty() || opts.trials == 0 {
        return Err(invalid("profile", "need a nonempty profile, q list and trial count"));
    }
    if opts.q_list.iter().any(|q| !(*q >= 1.0)) {
        return Err(invalid("q_list", "moments need q ≥ 1"));
    }
    let l2: f64 = opts.profile.iter().map(|(_, b)| b * b).sum();
    if (l2 - 1.0).abs() > 1e-9 {
        return Err(invalid("profile", format!("‖b‖₂² = {l2}, expected 1")));
    }
    let top = opts.profile.iter().map(|(n, _)| n.unsigned_abs() as usize).max().unwrap_or(0);
    let nodes = opts.nodes.unwrap_or_else(|| (64 * top.max(1)).next_power_of_two());
    if nodes < 8 * top {
        return Err(invalid("nodes", format!("{nodes} nodes for top frequency {top}; need at least 8× it")));
    }
    let mut q_sorted = opts.q_list.clone();
    q_sorted.sort_by(f64::total_cmp);
    let config = config_of(vec![
        ("experiment", json!("moments")),
        ("ensemble", json!(ensemble.name())),
        ("profile", json!(opts.profile)),
        ("q_list", json!(q_sorted)),
        ("trials", json!(opts.trials)),
        ("nodes", json!(nodes)),
    ]);
    let mut columns = vec!["trial".to_string()];
    columns.extend(q_sorted.iter().map(|q| format!("I_q{q}")));
    let col_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = ExperimentReport::new("moments", ensemble.seed, config, &col_refs);

    let roots: Vec<Complex64> = (0..nodes)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64))
        .collect();
    let results = par_trials(opts.trials, |t| -> Vec<f64> {
        let xi = ensemble.draw(t, opts.profile.len());
        let mut sums = vec![0.0; q_sorted.len()];
        for k in 0..nodes {
            let g: Complex64 = opts
                .profile
                .iter()
                .zip(&xi)
                .map(|(&(n, b), x)| x * b * roots[(n * k as i64).rem_euclid(nodes as i64) as usize])
                .sum();
            let l = g.norm().ln().abs();
            for (s, q) in sums.iter_mut().zip(&q_sorted) {
                *s += l.powf(*q);
            }
        }
        sums.iter().map(|s| s / nodes as f64).collect()
    });

    let mut power_mean_violations = 0usize;
    let mut infinite = 0usize;
    let mut per_q: Vec<Vec<f64>> = vec![Vec::new(); q_sorted.len()];
    for (t, moments) in results.into_iter().enumerate() {
        let roots_q: Vec<f64> = moments.iter().zip(&q_sorted).map(|(m, q)| m.powf(1.0 / q)).collect();
        if roots_q.windows(2).any(|w| w[1] < w[0] * (1.0 - 1e-12)) {
            power_mean_violations += 1;
        }
        infinite += moments.iter().filter(|m| !m.is_finite()).count();
        for (acc, m) in per_q.iter_mut().zip(&moments) {
            acc.push(*m);
        }
        let mut row = vec![json!(t)];
        row.extend(moments.iter().map(|m| num(*m)));
        report.push_row(row);
    }
    let mut c_fit: f64 = 0.0;
    let mut stats = Vec::new();
    for (q, vals) in q_sorted.iter().zip(&per_q) {
        let st = Summary::of(vals);
        let c_q = st.mean.powf(1.0 / q) / q.powi(6);
        c_fit = c_fit.max(c_q);
        stats.push(json!({
            "q": q,
            "mean": num(st.mean),
            "se": num(st.std_err),
            "mean_pow_1_over_q": num(st.mean.powf(1.0 / q)),
            "c_q": num(c_q),
        }));
    }
    report.set("per_q", stats);
    report.set("c_fitted", num(c_fit));
    report.check("moments_finite", infinite == 0, format!("{infinite} non-finite moments"));
    report.check(
        "power_mean_monotone",
        power_mean_violations == 0,
        format!("{power_mean_violations} samples where I_q^(1/q) decreases in q"),
    );
    report.check(
        "growth_bounded",
        c_fit.is_finite(),
        format!("max_q E[I_q]^(1/q)/q⁶ = {c_fit:.4e}"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_profile_is_unit() {
        let p = flat_profile(32);
        assert_eq!(p.len(), 63);
        let l2: f64 = p.iter().map(|(_, b)| b * b).sum();
        assert!((l2 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_has_zero_moments() {
        let rep = exp_log_moments(&EnsembleSpec::rademacher(1), &LogMomentOptions::new(vec![(0, 1.0)], vec![1.0, 2.0], 10)).unwrap();
        assert!(rep.column_f64("I_q1").iter().all(|x| *x == 0.0));
        assert_eq!(rep.passed(), Some(true));
    }

    #[test]
    fn flat_profile_moments_finite() {
        let rep = exp_log_moments(&EnsembleSpec::rademacher(3), &LogMomentOptions::new(flat_profile(32), vec![1.0, 2.0, 3.0], 40)).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }
}
