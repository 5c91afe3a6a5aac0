//! Taylor coefficients of `exp(z²/2 + βz)` against their saddle-point
//! asymptotics `C_β (e/n)^{n/2} (e^{β√n} ± e^{−β√n})`.

use num_complex::Complex64;
use serde_json::json;

use super::{config_of, num, ExperimentReport};
use crate::error::{invalid, Result};
use crate::stats::{linear_fit, Summary};

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticsOptions {
    pub beta: Complex64,
    pub n_max: usize,
    /// The rate fit uses `n ≥ fit_from`.
    pub fit_from: usize,
}

impl AsymptoticsOptions {
    pub fn new(beta: Complex64, n_max: usize) -> Self {
        Self {
            beta,
            n_max,
            fit_from: n_max / 4,
        }
    }
}

/// `b_0, …, b_{n_max}` as `(u_n, L_n)` with `b_n = u_n e^{L_n}`, from
/// `(n+1) b_{n+1} = β b_n + b_{n−1}`. Consecutive terms share a scale, so
/// exact zeros stay exact.
pub fn taylor_coefficients(beta: Complex64, n_max: usize) -> Vec<(Complex64, f64)> {
    let mut out = Vec::with_capacity(n_max + 1);
    let (mut prev, mut cur, mut scale) = (Complex64::new(1.0, 0.0), beta, 0.0f64);
    out.push((prev, 0.0));
    if n_max >= 1 {
        out.push((cur, 0.0));
    }
    for n in 1..n_max {
        let next = (beta * cur + prev) / (n + 1) as f64;
        prev = cur;
        cur = next;
        let m = prev.norm().max(cur.norm());
        if m > 0.0 && !(1e-100..1e100).contains(&m) {
            prev /= m;
            cur /= m;
            scale += m.ln();
        }
        out.push((cur, scale));
    }
    out
}

fn log_abs((u, l): (Complex64, f64)) -> f64 {
    u.norm().ln() + l
}

/// Coefficient checks:
/// * β = 0: odd coefficients are exactly zero.
/// * real β: `R_n = log|b_{n−1}| + (n/2) log(n/e) − β√n` converges; the
///   exponent of `|R_{n+1} − R_n|` plus one (the rate of `R_n − R_∞`) lies
///   in `[−0.8, −0.3]` and `|R_{n_max} − R_∞| < 0.05`.
/// * imaginary β: `b_n ∈ iⁿℝ` exactly, and `|b_{n−1}|(n/e)^{n/2}` divided
///   by `|e^{β√n} − (−1)ⁿ e^{−β√n}|` settles to a constant.
pub fn exp_coeff_asymptotics(opts: &AsymptoticsOptions) -> Result<ExperimentReport> {
    if opts.n_max < 16 || opts.fit_from < 2 || opts.fit_from + 8 > opts.n_max {
        return Err(invalid("n_max", "need n_max ≥ 16 and at least 8 points past fit_from"));
    }
    let beta = opts.beta;
    let config = config_of(vec![
        ("experiment", json!("asymptotics")),
        ("beta_re", json!(beta.re)),
        ("beta_im", json!(beta.im)),
        ("n_max", json!(opts.n_max)),
        ("fit_from", json!(opts.fit_from)),
    ]);
    let mut report = ExperimentReport::new(
        "asymptotics",
        0,
        config,
        &["n", "re_b", "im_b", "log_abs_b", "residual"],
    );
    let b = taylor_coefficients(beta, opts.n_max);
    // R_n, built from b_{n−1}; the row of b_n carries R_{n+1}
    let residual = |n: usize| -> f64 {
        let nf = n as f64;
        log_abs(b[n - 1]) + 0.5 * nf * (nf.ln() - 1.0) - beta.re * nf.sqrt()
    };
    for (n, &(u, l)) in b.iter().enumerate() {
        let lab = log_abs((u, l));
        let v = u * l.exp();
        report.push_row(vec![
            json!(n),
            num(v.re),
            num(v.im),
            num(lab),
            num(residual(n + 1)),
        ]);
    }

    if beta == Complex64::new(0.0, 0.0) {
        let nonzero_odd = b.iter().skip(1).step_by(2).filter(|(u, _)| u.norm() != 0.0).count();
        report.set("nonzero_odd_coefficients", nonzero_odd);
        report.check(
            "odd_coefficients_vanish",
            nonzero_odd == 0,
            format!("{nonzero_odd} odd-index coefficients differ from 0"),
        );
        return Ok(report);
    }

    let ns: Vec<usize> = (opts.fit_from..opts.n_max).collect();
    if beta.im == 0.0 {
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = ns.iter().map(|&n| (residual(n + 1) - residual(n)).abs().ln()).collect();
        let (_, slope) = linear_fit(&xs, &ys);
        let exponent = slope + 1.0;
        let inv: Vec<f64> = ns.iter().map(|&n| 1.0 / (n as f64).sqrt()).collect();
        let rs: Vec<f64> = ns.iter().map(|&n| residual(n)).collect();
        let (r_inf, _) = linear_fit(&inv, &rs);
        let last = residual(opts.n_max);
        report.set("difference_slope", slope);
        report.set("fitted_exponent", exponent);
        report.set("r_infinity", r_inf);
        report.set("r_last", last);
        report.check(
            "rate_exponent",
            (-0.8..=-0.3).contains(&exponent),
            format!("R_n − R_∞ ~ n^{exponent:.4}"),
        );
        report.check(
            "residual_converged",
            (last - r_inf).abs() < 0.05,
            format!("|R_{} − R_∞| = {:.5}", opts.n_max, (last - r_inf).abs()),
        );
    } else if beta.re == 0.0 {
        let off_parity = b
            .iter()
            .enumerate()
            .filter(|(n, (u, _))| if n % 2 == 0 { u.im != 0.0 } else { u.re != 0.0 })
            .count();
        let shifted = spread_by_parity(&b, beta, &ns, true);
        let literal = spread_by_parity(&b, beta, &ns, false);
        let rel = |s: &Summary| s.std_dev / s.mean;
        report.set("off_parity_coefficients", off_parity);
        report.set("ratio_rel_spread", rel(&shifted));
        report.set("ratio_rel_spread_sign_as_printed", rel(&literal));
        report.set("c_beta_abs", shifted.mean);
        report.check(
            "parity_pattern",
            off_parity == 0,
            format!("{off_parity} coefficients outside iⁿℝ"),
        );
        report.check(
            "oscillation_matches",
            rel(&shifted) < 0.15 && rel(&shifted) < 0.5 * rel(&literal),
            format!(
                "relative spread of |b_(n−1)|(n/e)^(n/2)/|pattern|: {:.4} with (−1)^(n−1), {:.4} with (−1)^n",
                rel(&shifted),
                rel(&literal)
            ),
        );
        report.note("the oscillation factor pairs b_(n−1) with e^(β√n) + (−1)^(n−1) e^(−β√n); the (−1)^n alignment is reported for comparison");
    } else {
        report.exploratory = true;
        report.note("general complex β: coefficients and residuals are reported without a verdict");
    }
    Ok(report)
}

/// Ratio `|b_{n−1}|(n/e)^{n/2} / |e^{β√n} + ε_n e^{−β√n}|` over `ns`, with
/// `ε_n = (−1)^{n−1}` (`shifted`) or `(−1)ⁿ`, skipping near-zeros of the pattern.
fn spread_by_parity(b: &[(Complex64, f64)], beta: Complex64, ns: &[usize], shifted: bool) -> Summary {
    let ratios: Vec<f64> = ns
        .iter()
        .filter_map(|&n| {
            let nf = n as f64;
            let w = beta * nf.sqrt();
            let odd = (n % 2 == 1) ^ shifted;
            let eps = if odd { -1.0 } else { 1.0 };
            let pat = (w.exp() + eps * (-w).exp()).norm();
            (pat > 0.5).then(|| (log_abs(b[n - 1]) + 0.5 * nf * (nf.ln() - 1.0)).exp() / pat)
        })
        .collect();
    Summary::of(&ratios)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_coefficients() {
        let b = taylor_coefficients(Complex64::new(1.0, 0.0), 4);
        let v: Vec<f64> = b.iter().map(|(u, l)| u.re * l.exp()).collect();
        // e^{z²/2+z} = 1 + z + z² + 2z³/3 + 5z⁴/12 + …
        let want = [1.0, 1.0, 1.0, 2.0 / 3.0, 5.0 / 12.0];
        for (a, w) in v.iter().zip(want) {
            assert!((a - w).abs() < 1e-15);
        }
    }

    #[test]
    fn real_beta_oracle() {
        let rep = exp_coeff_asymptotics(&AsymptoticsOptions::new(Complex64::new(1.0, 0.0), 400)).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
        // 50-digit recurrence oracle
        assert!((rep.summary_f64("r_last").unwrap() + 1.5258718336052262).abs() < 1e-9);
    }

    #[test]
    fn zero_beta_and_imaginary_beta() {
        let rep = exp_coeff_asymptotics(&AsymptoticsOptions::new(Complex64::new(0.0, 0.0), 400)).unwrap();
        assert_eq!(rep.passed(), Some(true));
        let rep = exp_coeff_asymptotics(&AsymptoticsOptions::new(Complex64::new(0.0, 2.0), 400)).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }
}
