//! Real zeros of `Σ ±e^{−αk²} zᵏ` for `α ≥ log 3`.

use serde_json::json;

use super::{config_of, num, par_trials, ExperimentReport};
use crate::error::{invalid, Result};
use crate::growth::CoefficientSequence;
use crate::sampling::{sample, EnsembleKind, EnsembleSpec, SampleOptions};
use crate::zeros::find_zeros_disk;

#[derive(Debug, Clone, PartialEq)]
pub struct RealZerosOptions {
    pub alpha: f64,
    pub m_max: usize,
    /// Sign patterns run over every choice for the first `pattern_bits`
    /// coefficients; later coefficients are `+1`.
    pub pattern_bits: u32,
    /// `false` turns the run into an exploration without a verdict.
    pub expect_real: bool,
    pub tail_tol: f64,
}

impl RealZerosOptions {
    pub fn new(alpha: f64, m_max: usize, pattern_bits: u32) -> Self {
        Self {
            alpha,
            m_max,
            pattern_bits,
            expect_real: alpha >= 3f64.ln(),
            tail_tol: 1e-12,
        }
    }
}

/// Signs with bit `i` of `pattern` setting coefficient `i` to `−1`.
pub fn pattern_signs(pattern: u64, bits: u32) -> Vec<i8> {
    (0..bits).map(|i| if pattern >> i & 1 == 1 { -1 } else { 1 }).collect()
}

struct PatternResult {
    max_imag_ratio: f64,
    counts: Vec<usize>,
    nonreal: usize,
}

/// For each pattern: all zeros in `|z| ≤ e^{2α·m_max}` must satisfy
/// `|Im z| < 1e−7·|z|`, and `|z| ≤ e^{2αm}` must hold exactly `m` zeros.
pub fn exp_real_zeros(opts: &RealZerosOptions) -> Result<ExperimentReport> {
    if !(opts.alpha > 0.0) {
        return Err(invalid("alpha", "must be positive"));
    }
    if opts.m_max == 0 || opts.pattern_bits > 12 {
        return Err(invalid("pattern_bits", "need m_max ≥ 1 and at most 12 pattern bits"));
    }
    let seq = CoefficientSequence::gauss_squared(opts.alpha)?;
    let r_max = (2.0 * opts.alpha * opts.m_max as f64).exp();
    let config = config_of(vec![
        ("experiment", json!("realzeros")),
        ("alpha", json!(opts.alpha)),
        ("m_max", json!(opts.m_max)),
        ("pattern_bits", json!(opts.pattern_bits)),
        ("expect_real", json!(opts.expect_real)),
        ("tail_tol", json!(opts.tail_tol)),
    ]);
    let mut report = ExperimentReport::new("realzeros", 0, config, &["pattern", "m", "radius", "count", "max_imag_ratio"]);
    let n_patterns = 1u64 << opts.pattern_bits;
    let results = par_trials(n_patterns, |p| -> Result<PatternResult> {
        let ens = EnsembleSpec::new(
            EnsembleKind::FixedSigns {
                signs: pattern_signs(p, opts.pattern_bits),
            },
            0,
        );
        let s = sample(&seq, &ens, 0, &SampleOptions::new(r_max, opts.tail_tol))?;
        let zs = find_zeros_disk(&s, r_max)?;
        let ratios: Vec<f64> = zs.roots.iter().map(|r| r.z.im.abs() / r.z.norm()).collect();
        let counts = (1..=opts.m_max)
            .map(|m| zs.within((2.0 * opts.alpha * m as f64).exp()).count())
            .collect();
        Ok(PatternResult {
            max_imag_ratio: ratios.iter().copied().fold(0.0, f64::max),
            counts,
            nonreal: ratios.iter().filter(|x| **x >= 1e-7).count(),
        })
    });
    let mut worst: f64 = 0.0;
    let mut count_failures = 0usize;
    let mut nonreal_patterns = 0usize;
    for (p, res) in results.into_iter().enumerate() {
        let pr = res?;
        worst = worst.max(pr.max_imag_ratio);
        if pr.nonreal > 0 {
            nonreal_patterns += 1;
        }
        for (i, &c) in pr.counts.iter().enumerate() {
            let m = i + 1;
            if c != m {
                count_failures += 1;
            }
            report.push_row(vec![
                json!(p),
                json!(m),
                num((2.0 * opts.alpha * m as f64).exp()),
                json!(c),
                num(pr.max_imag_ratio),
            ]);
        }
    }
    report.set("patterns", n_patterns);
    report.set("max_imag_ratio", worst);
    report.set("patterns_with_nonreal_zeros", nonreal_patterns);
    report.set("count_mismatches", count_failures);
    if opts.expect_real {
        report.check(
            "all_zeros_real",
            nonreal_patterns == 0,
            format!("max |Im z|/|z| = {worst:.3e} over {n_patterns} patterns"),
        );
        report.check(
            "exactly_m_zeros",
            count_failures == 0,
            format!("{count_failures} (pattern, m) pairs without exactly m zeros in |z| ≤ e^(2αm)"),
        );
    } else {
        report.exploratory = true;
        report.note(format!(
            "α = {} is below log 3; {nonreal_patterns} of {n_patterns} patterns show nonreal zeros",
            opts.alpha
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_zero_in_first_disk() {
        let mut o = RealZerosOptions::new(1.1, 1, 3);
        o.expect_real = true;
        let rep = exp_real_zeros(&o).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }

    #[test]
    fn below_threshold_is_exploratory() {
        let rep = exp_real_zeros(&RealZerosOptions::new(0.3, 2, 0)).unwrap();
        assert_eq!(rep.passed(), None);
    }

    #[test]
    fn signs_from_bits() {
        assert_eq!(pattern_signs(0b101, 4), vec![-1, 1, -1, 1]);
    }
}
