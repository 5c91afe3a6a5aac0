//! Zero counts of the lacunary series `Σ ±e^{−n2ⁿ} z^{2ⁿ}` around `log r = k`,
//! where `n_f` jumps from `2^{k−2}` to `2^{k−1}` while `s_f` moves smoothly.

use serde_json::json;

use super::{config_of, num, par_trials, ExperimentReport};
use crate::error::{invalid, Result};
use crate::growth::{self, CoefficientSequence};
use crate::sampling::{sample, EnsembleKind, EnsembleSpec, SampleOptions};
use crate::zeros::find_zeros_disk;

#[derive(Debug, Clone, PartialEq)]
pub struct LacunaryOptions {
    pub k: u32,
    /// Sign choices run over every pattern of the lacunary terms
    /// `n = k−2, …, k+1` (16 patterns), other terms `+1`.
    pub points_per_window: usize,
    pub tail_tol: f64,
}

impl LacunaryOptions {
    pub fn new(k: u32) -> Self {
        Self {
            k,
            points_per_window: 5,
            tail_tol: 1e-12,
        }
    }
}

/// `δ_k = 2^{2−k} log 2`.
pub fn lacunary_delta(k: u32) -> f64 {
    2f64.powi(2 - k as i32) * std::f64::consts::LN_2
}

/// Interior points of `(lo, hi)`, kept `0.1·δ` away from both ends.
fn window_points(lo: f64, hi: f64, delta: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo + 0.1 * delta, hi - 0.1 * delta);
    if n == 1 {
        return vec![0.5 * (a + b)];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Checks `n_f(e^s) = 2^{k−2}` on `(k−2δ, k−δ)` and `2^{k−1}` on `(k+δ, k+2δ)`
/// for every sign pattern, and the `s_f` window bounds
/// `s_f ≥ 0.9·(18/17)·2^{k−2}` below and `s_f ≤ 1.1·(33/34)·2^{k−1}` above.
pub fn exp_lacunary_discrepancy(opts: &LacunaryOptions) -> Result<ExperimentReport> {
    if !(5..=7).contains(&opts.k) {
        return Err(invalid("k", "supported range is 5 ≤ k ≤ 7"));
    }
    let k = opts.k;
    let delta = lacunary_delta(k);
    let kf = k as f64;
    let lower = window_points(kf - 2.0 * delta, kf - delta, delta, opts.points_per_window);
    let upper = window_points(kf + delta, kf + 2.0 * delta, delta, opts.points_per_window);
    let low_n = 1usize << (k - 2);
    let high_n = 1usize << (k - 1);
    let s_low_bound = 0.9 * (18.0 / 17.0) * low_n as f64;
    let s_high_bound = 1.1 * (33.0 / 34.0) * high_n as f64;
    let config = config_of(vec![
        ("experiment", json!("lacunary")),
        ("k", json!(k)),
        ("delta_k", json!(delta)),
        ("points_per_window", json!(opts.points_per_window)),
        ("tail_tol", json!(opts.tail_tol)),
    ]);
    let mut report = ExperimentReport::new(
        "lacunary",
        0,
        config,
        &["pattern", "window", "s", "n", "expected_n", "s_f", "rel_gap"],
    );
    let seq = CoefficientSequence::Lacunary;
    let r_max = (kf + 2.0 * delta).exp();
    let top = 1usize << (k + 3);
    let patterns = 16u64;
    let points: Vec<(&str, f64, usize)> = lower
        .iter()
        .map(|&s| ("lower", s, low_n))
        .chain(upper.iter().map(|&s| ("upper", s, high_n)))
        .collect();
    let results = par_trials(patterns, |p| -> Result<Vec<usize>> {
        let mut signs = vec![1i8; top + 1];
        for (bit, n) in (k - 2..=k + 1).enumerate() {
            if p >> bit & 1 == 1 {
                signs[1 << n] = -1;
            }
        }
        let ens = EnsembleSpec::new(EnsembleKind::FixedSigns { signs }, 0);
        let s = sample(&seq, &ens, 0, &SampleOptions::new(r_max, opts.tail_tol))?;
        let zs = find_zeros_disk(&s, r_max)?;
        Ok(points.iter().map(|&(_, x, _)| zs.within(x.exp()).count()).collect())
    });
    let s_f: Vec<f64> = points.iter().map(|&(_, x, _)| growth::s_log_deriv(&seq, x.exp())).collect::<Result<_>>()?;
    let mut count_fail = 0usize;
    let mut min_gap = f64::INFINITY;
    for (p, res) in results.into_iter().enumerate() {
        let counts = res?;
        for (i, &(w, x, expected)) in points.iter().enumerate() {
            let gap = (counts[i] as f64 - s_f[i]).abs() / s_f[i];
            min_gap = min_gap.min(gap);
            if counts[i] != expected {
                count_fail += 1;
            }
            report.push_row(vec![
                json!(p),
                json!(w),
                num(x),
                json!(counts[i]),
                json!(expected),
                num(s_f[i]),
                num(gap),
            ]);
        }
    }
    let n_low = lower.len();
    let s_low_min = s_f[..n_low].iter().copied().fold(f64::INFINITY, f64::min);
    let s_high_max = s_f[n_low..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    report.set("patterns", patterns);
    report.set("s_f_lower_window_min", s_low_min);
    report.set("s_f_upper_window_max", s_high_max);
    report.set("c_min_rel_gap", min_gap);
    report.check(
        "exact_counts",
        count_fail == 0,
        format!("{count_fail} (pattern, s) points off the expected counts {low_n} / {high_n}"),
    );
    report.check(
        "s_f_lower_window",
        s_low_min >= s_low_bound,
        format!("min s_f = {s_low_min:.4} against {s_low_bound:.4}"),
    );
    report.check(
        "s_f_upper_window",
        s_high_max <= s_high_bound,
        format!("max s_f = {s_high_max:.4} against {s_high_bound:.4}"),
    );
    report.check(
        "count_gap_proportional",
        min_gap > 0.0,
        format!("min |n − s_f|/s_f = {min_gap:.4}"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_six() {
        assert!((lacunary_delta(6) - 0.04332169878499658).abs() < 1e-15);
    }

    #[test]
    fn window_points_are_interior() {
        let d = lacunary_delta(6);
        let pts = window_points(6.0 - 2.0 * d, 6.0 - d, d, 5);
        assert_eq!(pts.len(), 5);
        assert!(pts.iter().all(|&s| s > 6.0 - 2.0 * d && s < 6.0 - d));
    }
}
