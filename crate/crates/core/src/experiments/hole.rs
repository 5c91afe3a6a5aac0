//! Monte Carlo hole probabilities and the zero-free event `Ω_r`.

use serde_json::json;

use super::{config_of, failure_budget, num, par_trials, sample_and_find, ExperimentReport};
use crate::covariance::hole_bound_pair;
use crate::error::{invalid, Error, Result};
use crate::growth::{self, CoefficientSequence};
use crate::sampling::{
    envelope_event_probability, sample, sample_conditioned_on_omega, EnsembleSpec, OmegaEvent, SampleOptions,
};
use crate::stats::{strictly_increasing, wilson_interval, Z95, Z99};
use crate::zeros::{argument_principle_count, find_zeros_disk};

/// A pre-registered estimate of `P(hole)` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoleReference {
    pub r: f64,
    pub p: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoleOptions {
    pub r_grid: Vec<f64>,
    pub trials: u64,
    pub tail_tol: f64,
    pub reference: Option<HoleReference>,
    /// Constants of the bound pair `S + C_u √m log m` and `S − C_l n log S`.
    pub c_upper: f64,
    pub c_lower: f64,
}

impl HoleOptions {
    pub fn new(r_grid: Vec<f64>, trials: u64) -> Self {
        Self {
            r_grid,
            trials,
            tail_tol: 1e-12,
            reference: None,
            c_upper: 1.0,
            c_lower: 1.0,
        }
    }
}

struct HoleTrial {
    root_finder: Vec<bool>,
    arg_principle: Vec<bool>,
}

/// Hole indicators `f ≠ 0 on |z| ≤ r` per trial, by root finding (smallest
/// root modulus) and by the argument principle (count zero).
///
/// Checks: both methods agree on every trial, holes nest in `r` on every
/// trial, `−log P̂` increases strictly along the grid, and (if a reference
/// is given) `P̂` at the reference radius is within the 99% band of the
/// reference, combining both standard errors.
pub fn exp_hole_mc(seq: &CoefficientSequence, ensemble: &EnsembleSpec, opts: &HoleOptions) -> Result<ExperimentReport> {
    if !ensemble.is_gaussian() {
        return Err(Error::UnsupportedEnsemble(ensemble.name().to_string()));
    }
    if opts.r_grid.is_empty() || !strictly_increasing(&opts.r_grid) || opts.r_grid[0] <= 0.0 {
        return Err(invalid("r_grid", "radii must be positive, strictly increasing and nonempty"));
    }
    if opts.trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let big_s: Vec<f64> = opts.r_grid.iter().map(|&r| growth::big_s(seq, r)).collect::<Result<_>>()?;
    for (&r, &s) in opts.r_grid.iter().zip(&big_s) {
        let p = (-s).exp();
        if opts.trials as f64 * p < 10.0 {
            return Err(Error::RareEventInfeasible { r, p });
        }
    }
    let r_max = *opts.r_grid.last().unwrap();
    let mut pairs = vec![
        ("experiment", json!("hole")),
        ("seq", json!(seq.to_string())),
        ("ensemble", json!(ensemble.name())),
        ("r_grid", json!(opts.r_grid)),
        ("trials", json!(opts.trials)),
        ("tail_tol", json!(opts.tail_tol)),
        ("c_upper", json!(opts.c_upper)),
        ("c_lower", json!(opts.c_lower)),
    ];
    if let Some(rf) = opts.reference {
        pairs.push(("reference", json!({"r": rf.r, "p": rf.p, "se": rf.se})));
    }
    let mut report = ExperimentReport::new(
        "hole",
        ensemble.seed,
        config_of(pairs),
        &["trial", "r", "hole_root_finder", "hole_arg_principle", "min_modulus"],
    );
    let sample_opts = SampleOptions::new(r_max, opts.tail_tol);
    let results = par_trials(opts.trials, |t| -> Result<(HoleTrial, f64)> {
        let (s, zs) = sample_and_find(seq, ensemble, t, &sample_opts)?;
        let min_mod = zs.min_modulus().unwrap_or(f64::INFINITY);
        let root_finder = opts.r_grid.iter().map(|&r| min_mod > r).collect();
        let arg_principle = opts
            .r_grid
            .iter()
            .map(|&r| argument_principle_count(&s, r).map(|n| n == 0))
            .collect::<Result<_>>()?;
        Ok((
            HoleTrial {
                root_finder,
                arg_principle,
            },
            min_mod,
        ))
    });

    let k = opts.r_grid.len();
    let mut holes = vec![0u64; k];
    let mut n_ok = 0u64;
    let mut disagreements = 0u64;
    let mut nesting_violations = 0u64;
    let mut failures = Vec::new();
    for (t, res) in results.into_iter().enumerate() {
        let (ht, min_mod) = match res {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("trial {t}: {e}"));
                continue;
            }
        };
        n_ok += 1;
        if ht.root_finder != ht.arg_principle {
            disagreements += 1;
        }
        for ind in [&ht.root_finder, &ht.arg_principle] {
            // a hole at a larger radius forces one at every smaller radius
            if ind.windows(2).any(|w| w[1] && !w[0]) {
                nesting_violations += 1;
            }
        }
        #[allow(clippy::needless_range_loop)]
        for i in 0..k {
            if ht.root_finder[i] {
                holes[i] += 1;
            }
            report.push_row(vec![
                json!(t),
                json!(opts.r_grid[i]),
                json!(ht.root_finder[i] as u8),
                json!(ht.arg_principle[i] as u8),
                num(min_mod),
            ]);
        }
    }
    failure_budget(&mut report, &failures, opts.trials)?;

    let mut neg_log_p = Vec::with_capacity(k);
    let mut per_radius = Vec::with_capacity(k);
    let mut bound_notes = 0usize;
    for i in 0..k {
        let r = opts.r_grid[i];
        let p_hat = holes[i] as f64 / n_ok as f64;
        let (lo, hi) = wilson_interval(holes[i], n_ok, Z95);
        let nlp = -p_hat.ln();
        neg_log_p.push(nlp);
        let bounds = match hole_bound_pair(seq, r, opts.c_upper, opts.c_lower) {
            Ok(b) => json!(b),
            Err(Error::TooFewDominantTerms(_)) => {
                bound_notes += 1;
                json!(null)
            }
            Err(e) => return Err(e),
        };
        per_radius.push(json!({
            "r": r,
            "holes": holes[i],
            "trials": n_ok,
            "p_hat": p_hat,
            "se": (p_hat * (1.0 - p_hat) / n_ok as f64).sqrt(),
            "wilson95": [lo, hi],
            "neg_log_p_hat": num(nlp),
            "S": big_s[i],
            "bounds": bounds,
        }));
    }
    report.set("per_radius", per_radius);
    report.set("disagreements", disagreements);
    report.set("nesting_violations", nesting_violations);
    if bound_notes > 0 {
        report.note(format!(
            "{bound_notes} radii have fewer than two dominant terms; the bound pair is left empty there"
        ));
    }
    report.check(
        "methods_agree",
        disagreements == 0,
        format!("{disagreements} trials where the two hole indicators differ"),
    );
    report.check(
        "hole_nesting",
        nesting_violations == 0,
        format!("{nesting_violations} indicator sequences with a hole at a larger radius only"),
    );
    if k >= 2 {
        report.check(
            "neg_log_p_increasing",
            strictly_increasing(&neg_log_p),
            format!("−log P̂ along r: {neg_log_p:?}"),
        );
    }
    if let Some(rf) = opts.reference {
        let Some(i) = opts.r_grid.iter().position(|&r| (r - rf.r).abs() < 1e-12) else {
            return Err(invalid("reference", format!("radius {} is not on the grid", rf.r)));
        };
        let p_hat = holes[i] as f64 / n_ok as f64;
        let se_hat = (p_hat * (1.0 - p_hat) / n_ok as f64).sqrt();
        let band = Z99 * (se_hat * se_hat + rf.se * rf.se).sqrt();
        let literal = (p_hat - rf.p).abs() <= Z99 * rf.se;
        report.set(
            "reference_comparison",
            json!({
                "r": rf.r,
                "p_ref": rf.p,
                "se_ref": rf.se,
                "p_hat": p_hat,
                "se_hat": se_hat,
                "combined_band99": band,
                "inside_reference_ci99_alone": literal,
            }),
        );
        report.check(
            "matches_reference",
            (p_hat - rf.p).abs() <= band,
            format!("|P̂ − p_ref| = {:.6} against {band:.6}", (p_hat - rf.p).abs()),
        );
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaOptions {
    pub r: f64,
    pub trials: u64,
    /// Samples drawn directly from the law conditioned on `Ω_r`.
    pub conditioned_trials: u64,
    pub tail_tol: f64,
    pub c_event: Option<f64>,
}

impl OmegaOptions {
    pub fn new(r: f64, trials: u64, conditioned_trials: u64) -> Self {
        Self {
            r,
            trials,
            conditioned_trials,
            tail_tol: 1e-12,
            c_event: None,
        }
    }
}

/// Soundness of the zero-free event: unconditioned samples that satisfy
/// `Ω_r` must have no zeros in `|z| ≤ r`, and so must samples drawn from the
/// conditioned law (counted by both root finding and the argument
/// principle). Also reports the exact `log P(Ω_r)` and the constant `C′`
/// in `log P(Ω_r) ≥ −S − C′√m log m`.
pub fn exp_omega_soundness(seq: &CoefficientSequence, ensemble: &EnsembleSpec, opts: &OmegaOptions) -> Result<ExperimentReport> {
    if !ensemble.is_gaussian() {
        return Err(Error::UnsupportedEnsemble(ensemble.name().to_string()));
    }
    let r = opts.r;
    let ev = OmegaEvent::new(seq, r, opts.c_event)?;
    let probs = envelope_event_probability(seq, ensemble, r, opts.c_event)?;
    let config = config_of(vec![
        ("experiment", json!("omega")),
        ("seq", json!(seq.to_string())),
        ("ensemble", json!(ensemble.name())),
        ("r", json!(r)),
        ("trials", json!(opts.trials)),
        ("conditioned_trials", json!(opts.conditioned_trials)),
        ("tail_tol", json!(opts.tail_tol)),
        ("c_event", json!(opts.c_event)),
    ]);
    let mut report = ExperimentReport::new(
        "omega",
        ensemble.seed,
        config,
        &["trial", "conditioned", "in_omega", "count_root_finder", "count_arg_principle"],
    );
    let sample_opts = SampleOptions::new(r, opts.tail_tol);

    // unconditioned: zeros are only located for samples inside the event
    let plain = par_trials(opts.trials, |t| -> Result<Option<(usize, usize)>> {
        let s = sample(seq, ensemble, t, &sample_opts)?;
        if !ev.holds(&s) {
            return Ok(None);
        }
        let zs = find_zeros_disk(&s, r)?;
        Ok(Some((zs.count(), argument_principle_count(&s, r)?)))
    });
    let conditioned = par_trials(opts.conditioned_trials, |t| -> Result<(bool, usize, usize)> {
        let s = sample_conditioned_on_omega(seq, &ev, ensemble.seed, t, &sample_opts)?;
        let zs = find_zeros_disk(&s, r)?;
        Ok((ev.holds(&s), zs.count(), argument_principle_count(&s, r)?))
    });

    let mut failures = Vec::new();
    let mut in_omega = 0u64;
    let mut counterexamples = 0u64;
    for (t, res) in plain.into_iter().enumerate() {
        match res {
            Ok(None) => {}
            Ok(Some((a, b))) => {
                in_omega += 1;
                if a != 0 || b != 0 {
                    counterexamples += 1;
                }
                report.push_row(vec![json!(t), json!(0), json!(1), json!(a), json!(b)]);
            }
            Err(e) => failures.push(format!("trial {t}: {e}")),
        }
    }
    let mut cond_outside = 0u64;
    let mut cond_with_zeros = 0u64;
    for (t, res) in conditioned.into_iter().enumerate() {
        match res {
            Ok((holds, a, b)) => {
                if !holds {
                    cond_outside += 1;
                }
                if a != 0 || b != 0 {
                    cond_with_zeros += 1;
                }
                report.push_row(vec![json!(t), json!(1), json!(holds as u8), json!(a), json!(b)]);
            }
            Err(e) => failures.push(format!("conditioned trial {t}: {e}")),
        }
    }
    failure_budget(&mut report, &failures, opts.trials + opts.conditioned_trials)?;

    let m = probs.m_weight as f64;
    let bound = -probs.big_s - probs.c_prime * m.sqrt() * m.ln();
    report.set("event", &probs);
    report.set("unconditioned_in_omega", in_omega);
    report.set("unconditioned_counterexamples", counterexamples);
    report.set("conditioned_outside_event", cond_outside);
    report.set("conditioned_with_zeros", cond_with_zeros);
    report.set("log_p_omega", probs.total);
    report.set("c_prime", num(probs.c_prime));
    report.check(
        "omega_implies_no_zeros",
        counterexamples == 0 && cond_with_zeros == 0,
        format!(
            "{in_omega} of {} unconditioned samples in Ω_r, {counterexamples} with zeros; {cond_with_zeros} of {} conditioned samples with zeros",
            opts.trials, opts.conditioned_trials
        ),
    );
    report.check(
        "conditioned_samples_in_event",
        cond_outside == 0,
        format!("{cond_outside} conditioned samples outside Ω_r"),
    );
    report.check(
        "log_probability_bound",
        probs.total.is_finite() && probs.total >= bound - 1e-9 * bound.abs().max(1.0),
        format!("log P(Ω_r) = {:.4}, −S = {:.4}, C′ = {:.4}", probs.total, -probs.big_s, probs.c_prime),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_is_always_a_hole() {
        let one = CoefficientSequence::explicit(vec![1.0]).unwrap();
        let rep = exp_hole_mc(&one, &EnsembleSpec::gaussian(1), &HoleOptions::new(vec![0.5, 1.0], 50)).unwrap();
        assert!(rep.column_f64("hole_root_finder").iter().all(|h| *h == 1.0));
        assert!(rep.get_check("hole_nesting").unwrap().passed);
    }

    #[test]
    fn rare_event_refused() {
        let err = exp_hole_mc(&CoefficientSequence::Gef, &EnsembleSpec::gaussian(1), &HoleOptions::new(vec![1.0, 3.0], 1000));
        assert!(matches!(err, Err(Error::RareEventInfeasible { r, .. }) if r == 3.0));
    }

    #[test]
    fn small_run_nests_and_agrees() {
        let rep = exp_hole_mc(
            &CoefficientSequence::Gef,
            &EnsembleSpec::gaussian(5),
            &HoleOptions::new(vec![0.25, 0.5, 0.75, 1.0], 2000),
        )
        .unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }

    #[test]
    fn conditioned_samples_are_zero_free() {
        let rep = exp_omega_soundness(&CoefficientSequence::Gef, &EnsembleSpec::gaussian(2), &OmegaOptions::new(2.0, 200, 50)).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }
}
