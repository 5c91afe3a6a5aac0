//! Distribution of zeros among equal sectors.

use std::f64::consts::PI;

use serde_json::json;

use super::{config_of, failure_budget, num, par_trials, sample_and_find, ExperimentReport};
use crate::error::{invalid, Result};
use crate::growth::{self, CoefficientSequence};
use crate::sampling::{EnsembleSpec, SampleOptions};
use crate::stats::{strictly_increasing, Summary};
use crate::zeros::sector_histogram;

#[derive(Debug, Clone, PartialEq)]
pub struct EquidistributionOptions {
    pub r_list: Vec<f64>,
    pub n_sectors: usize,
    pub trials: u64,
    pub tail_tol: f64,
    /// Exponent slack in the normalization `s^{3/4+ε}`.
    pub epsilon: f64,
}

impl EquidistributionOptions {
    pub fn new(r_list: Vec<f64>, n_sectors: usize, trials: u64) -> Self {
        Self {
            r_list,
            n_sectors,
            trials,
            tail_tol: 1e-12,
            epsilon: 0.05,
        }
    }
}

/// Per radius, the largest sector deviation `max_k |n_k − s/K|` over `K`
/// equal sectors `[2πk/K, 2π(k+1)/K)`.
///
/// Passes when the mean of `max dev/s` decreases along the radii and the
/// mean of `max dev/s^{3/4+ε}` at the largest radius is no more than twice
/// its value at the smallest.
pub fn exp_equidistribution(
    seq: &CoefficientSequence,
    ensemble: &EnsembleSpec,
    opts: &EquidistributionOptions,
) -> Result<ExperimentReport> {
    if opts.r_list.is_empty() || !strictly_increasing(&opts.r_list) {
        return Err(invalid("r_list", "radii must be strictly increasing and nonempty"));
    }
    if opts.n_sectors == 0 {
        return Err(invalid("n_sectors", "need at least one sector"));
    }
    let r_max = *opts.r_list.last().unwrap();
    let config = config_of(vec![
        ("experiment", json!("sectors")),
        ("seq", json!(seq.to_string())),
        ("ensemble", json!(ensemble.name())),
        ("r_list", json!(opts.r_list)),
        ("n_sectors", json!(opts.n_sectors)),
        ("trials", json!(opts.trials)),
        ("tail_tol", json!(opts.tail_tol)),
        ("epsilon", json!(opts.epsilon)),
    ]);
    let mut columns = vec!["trial".to_string(), "r".to_string(), "s".to_string(), "max_dev".to_string()];
    columns.extend((0..opts.n_sectors).map(|k| format!("sector_{k}")));
    let col_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut report = ExperimentReport::new("sectors", ensemble.seed, config, &col_refs);

    let s_vals: Vec<f64> = opts.r_list.iter().map(|&r| growth::s_log_deriv(seq, r)).collect::<Result<_>>()?;
    let sample_opts = SampleOptions::new(r_max, opts.tail_tol);
    let results = par_trials(opts.trials, |t| -> Result<Vec<Vec<usize>>> {
        let (_, zs) = sample_and_find(seq, ensemble, t, &sample_opts)?;
        Ok(opts.r_list.iter().map(|&r| sector_histogram(&zs.within(r), opts.n_sectors)).collect())
    });

    let k = opts.n_sectors as f64;
    let mut failures = Vec::new();
    let mut devs: Vec<Vec<f64>> = vec![Vec::new(); opts.r_list.len()];
    let mut totals: Vec<Vec<f64>> = vec![vec![0.0; opts.n_sectors]; opts.r_list.len()];
    for (t, res) in results.into_iter().enumerate() {
        match res {
            Ok(hists) => {
                for (i, h) in hists.iter().enumerate() {
                    let target = s_vals[i] / k;
                    let dev = h.iter().map(|&n| (n as f64 - target).abs()).fold(0.0, f64::max);
                    devs[i].push(dev);
                    for (acc, &n) in totals[i].iter_mut().zip(h) {
                        *acc += n as f64;
                    }
                    let mut row = vec![json!(t), json!(opts.r_list[i]), num(s_vals[i]), num(dev)];
                    row.extend(h.iter().map(|n| json!(n)));
                    report.push_row(row);
                }
            }
            Err(e) => failures.push(format!("trial {t}: {e}")),
        }
    }
    failure_budget(&mut report, &failures, opts.trials)?;

    let n_ok = devs.first().map_or(0, Vec::len) as f64;
    let mut rel = Vec::new();
    let mut normalized = Vec::new();
    let mut per_radius = Vec::new();
    for (i, &r) in opts.r_list.iter().enumerate() {
        let s = s_vals[i];
        let st = Summary::of(&devs[i]);
        let rel_i = if s > 0.0 { st.mean / s } else { 0.0 };
        let norm_i = if s > 0.0 { st.mean / s.powf(0.75 + opts.epsilon) } else { 0.0 };
        rel.push(rel_i);
        normalized.push(norm_i);
        let mean_hist: Vec<f64> = totals[i].iter().map(|x| x / n_ok.max(1.0)).collect();
        per_radius.push(json!({
            "r": r,
            "s": s,
            "target_per_sector": s / k,
            "mean_max_dev": st.mean,
            "se_max_dev": st.std_err,
            "mean_dev_over_s": rel_i,
            "mean_dev_over_s_pow": norm_i,
            "mean_sector_counts": mean_hist,
        }));
    }
    report.set("per_radius", per_radius);
    report.set("sector_width", 2.0 * PI / k);
    if opts.r_list.len() >= 2 {
        report.check(
            "relative_deviation_decreasing",
            rel.windows(2).all(|w| w[1] < w[0]),
            format!("mean max dev / s along r: {rel:?}"),
        );
        let (first, last) = (normalized[0], *normalized.last().unwrap());
        report.check(
            "normalized_deviation_bounded",
            last <= 2.0 * first.max(f64::MIN_POSITIVE),
            format!("mean max dev / s^(3/4+ε): first {first:.4}, last {last:.4}"),
        );
    } else {
        report.exploratory = true;
        report.note("a single radius gives deviations only; trends need at least two radii");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::EnsembleKind;

    #[test]
    fn real_zero_family_fills_two_sectors() {
        let seq = CoefficientSequence::gauss_squared(1.1).unwrap();
        let ens = EnsembleSpec::new(EnsembleKind::FixedSigns { signs: vec![1, -1, 1, 1, -1] }, 0);
        let r = (2.2f64 * 3.0).exp();
        let rep = exp_equidistribution(&seq, &ens, &EquidistributionOptions::new(vec![r], 8, 1)).unwrap();
        let row = &rep.rows[0];
        let counts: Vec<f64> = row[4..].iter().map(|v| v.as_f64().unwrap()).collect();
        let nonzero: Vec<usize> = (0..8).filter(|&k| counts[k] > 0.0).collect();
        assert!(nonzero.iter().all(|&k| k == 0 || k == 4), "{counts:?}");
        assert_eq!(counts.iter().sum::<f64>(), 3.0);
    }
}
