//! Value distribution in the unit disk: `Σ_{F(w)=b, |w|≤r} (1 − |w|)` grows
//! toward `r = 1` when `Σ|a_n|²` diverges.

use num_complex::Complex64;
use serde_json::json;

use super::{config_of, failure_budget, num, par_trials, ExperimentReport};
use crate::error::{invalid, Error, Result};
use crate::growth::CoefficientSequence;
use crate::sampling::{sample, EnsembleSpec, SampleOptions};
use crate::stats::{strictly_increasing, Summary};
use crate::zeros::{jensen_n, value_solutions};

#[derive(Debug, Clone, PartialEq)]
pub struct KahaneOptions {
    /// Coefficient magnitudes `a_0, …, a_{L−1}` of the materialized range.
    pub profile: Vec<f64>,
    pub r_list: Vec<f64>,
    pub b_list: Vec<Complex64>,
    pub trials: u64,
}

impl KahaneOptions {
    /// `a_n = 1/√(n+1)` for `n < len`.
    pub fn harmonic(len: usize, r_list: Vec<f64>, b_list: Vec<Complex64>, trials: u64) -> Self {
        Self {
            profile: (0..len).map(|n| 1.0 / ((n + 1) as f64).sqrt()).collect(),
            r_list,
            b_list,
            trials,
        }
    }
}

/// Mass `Σ a_n²` over the upper half `[L/2, L)` of the profile. A profile
/// whose squares diverge keeps a fixed share there as `L` grows.
fn upper_half_mass(profile: &[f64]) -> f64 {
    profile[profile.len() / 2..].iter().map(|a| a * a).sum()
}

/// Per `b` and `r`: the sum `Σ (1 − |w|)` over solutions of `F(w) = b` in
/// `|w| ≤ r` and the Jensen integral `N_F(r, b)`.
///
/// Checks: partial sums are nondecreasing in `r` on every sample, their
/// means increase strictly along `r_list`, and every `N_F(r, b)` is finite.
/// Divergence itself is an almost-sure statement that no finite run shows.
pub fn exp_kahane_range(ensemble: &EnsembleSpec, opts: &KahaneOptions) -> Result<ExperimentReport> {
    if opts.profile.len() < 2 || upper_half_mass(&opts.profile) < 0.1 {
        return Err(invalid(
            "profile",
            "Σ|a_n|² must keep growing on the materialized range (upper-half mass ≥ 0.1)",
        ));
    }
    if opts.r_list.is_empty() || !strictly_increasing(&opts.r_list) || opts.r_list[0] <= 0.0 || *opts.r_list.last().unwrap() >= 1.0 {
        return Err(invalid("r_list", "radii must increase strictly inside (0, 1)"));
    }
    if opts.b_list.is_empty() || opts.trials == 0 {
        return Err(invalid("b_list", "need at least one value and one trial"));
    }
    let seq = CoefficientSequence::explicit(opts.profile.clone())?;
    let r_max = *opts.r_list.last().unwrap();
    let config = config_of(vec![
        ("experiment", json!("kahane")),
        ("ensemble", json!(ensemble.name())),
        ("profile_len", json!(opts.profile.len())),
        ("profile_head", json!(opts.profile.iter().take(4).collect::<Vec<_>>())),
        ("r_list", json!(opts.r_list)),
        ("b_list", json!(opts.b_list.iter().map(|b| [b.re, b.im]).collect::<Vec<_>>())),
        ("trials", json!(opts.trials)),
    ]);
    let mut report = ExperimentReport::new(
        "kahane",
        ensemble.seed,
        config,
        &["trial", "b_re", "b_im", "r", "count", "defect_sum", "jensen_n"],
    );
    let sample_opts = SampleOptions::new(r_max, 1e-12);
    let nb = opts.b_list.len();
    let nr = opts.r_list.len();
    // per trial: [b][r] -> (count, defect sum, N_F)
    let results = par_trials(opts.trials, |t| -> Result<Vec<Vec<(usize, f64, f64)>>> {
        let s = sample(&seq, ensemble, t, &sample_opts)?;
        opts.b_list
            .iter()
            .map(|&b| {
                let zs = value_solutions(&s, r_max, b)?;
                let shifted = s.shifted(b);
                opts.r_list
                    .iter()
                    .map(|&r| {
                        let inside = zs.within(r);
                        let defect = inside.roots.iter().map(|w| w.multiplicity as f64 * (1.0 - w.z.norm())).sum();
                        Ok((inside.count(), defect, jensen_n(&shifted, r)?))
                    })
                    .collect()
            })
            .collect()
    });
    let mut failures = Vec::new();
    let mut sums: Vec<Vec<Vec<f64>>> = vec![vec![Vec::new(); nr]; nb];
    let mut non_monotone = 0u64;
    let mut infinite_n = 0u64;
    for (t, res) in results.into_iter().enumerate() {
        let per_b = match res {
            Ok(x) => x,
            Err(e @ Error::TruncationFailure { .. }) => return Err(e),
            Err(e) => {
                failures.push(format!("trial {t}: {e}"));
                continue;
            }
        };
        for (i, per_r) in per_b.iter().enumerate() {
            let defects: Vec<f64> = per_r.iter().map(|x| x.1).collect();
            if defects.windows(2).any(|w| w[1] < w[0]) {
                non_monotone += 1;
            }
            for (j, &(count, defect, nf)) in per_r.iter().enumerate() {
                if !nf.is_finite() {
                    infinite_n += 1;
                }
                sums[i][j].push(defect);
                report.push_row(vec![
                    json!(t),
                    json!(opts.b_list[i].re),
                    json!(opts.b_list[i].im),
                    json!(opts.r_list[j]),
                    json!(count),
                    num(defect),
                    num(nf),
                ]);
            }
        }
    }
    failure_budget(&mut report, &failures, opts.trials)?;
    let mut growing = true;
    let mut per_b = Vec::new();
    for (i, b) in opts.b_list.iter().enumerate() {
        let means: Vec<f64> = sums[i].iter().map(|v| Summary::of(v).mean).collect();
        growing &= nr < 2 || strictly_increasing(&means);
        per_b.push(json!({"b": [b.re, b.im], "mean_defect_sum": means}));
    }
    report.set("per_b", per_b);
    report.set("upper_half_mass", upper_half_mass(&opts.profile));
    report.check(
        "partial_sums_nondecreasing",
        non_monotone == 0,
        format!("{non_monotone} (trial, b) sequences decreasing in r"),
    );
    report.check("mean_sums_increasing", growing, "mean Σ(1−|w|) increases along r for every b");
    report.check("jensen_finite", infinite_n == 0, format!("{infinite_n} non-finite N_F(r, b)"));
    report.note("divergence of Σ(1−|w|) is almost sure; finite runs only show the trend");
    Ok(report)
}
