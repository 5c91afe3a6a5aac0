//! Empirical constant of the Turán-type inequality
//! `sup_J |p| ≤ (C m(J)/m(E))ⁿ sup_E |p|` for exponential polynomials.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use super::{config_of, num, par_trials, ExperimentReport};
use crate::error::{invalid, Result};
use crate::rng::{Purpose, Substream};

#[derive(Debug, Clone, PartialEq)]
pub struct TuranOptions {
    pub n_freq: usize,
    pub trials: u64,
    /// Subintervals making up `E`.
    pub pieces: usize,
    /// Frequencies are drawn from `[−freq_max, freq_max]`.
    pub freq_max: f64,
    pub grid: usize,
    /// Take `E = J` (every trial then gives `Ĉ = 1`).
    pub e_equals_j: bool,
}

impl TuranOptions {
    pub fn new(n_freq: usize, trials: u64) -> Self {
        Self {
            n_freq,
            trials,
            pieces: 3,
            freq_max: 5.0,
            grid: 4000,
            e_equals_j: false,
        }
    }
}

struct TuranTrial {
    sup_j: f64,
    sup_e: f64,
    m_j: f64,
    m_e: f64,
}

fn eval(freqs: &[f64], coeffs: &[Complex64], t: f64) -> f64 {
    freqs
        .iter()
        .zip(coeffs)
        .map(|(l, c)| c * Complex64::from_polar(1.0, l * t))
        .sum::<Complex64>()
        .norm()
}

/// Measure of a union of intervals.
fn union_measure(mut iv: Vec<(f64, f64)>) -> f64 {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            Some((ca, cb)) if a <= cb => cur = Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((a, b)) = cur {
        total += b - a;
    }
    total
}

fn run_trial(seed: u64, t: u64, opts: &TuranOptions) -> TuranTrial {
    let mut s = Substream::new(seed, Purpose::Auxiliary, t);
    s.seek(0);
    let mut freqs = Vec::with_capacity(opts.n_freq);
    let mut coeffs = Vec::with_capacity(opts.n_freq);
    for _ in 0..opts.n_freq {
        let (u, _) = s.pair();
        freqs.push(opts.freq_max * (2.0 * u - 1.0));
        let (a, b) = s.pair();
        coeffs.push(Complex64::from_polar((-a.ln()).sqrt(), 2.0 * PI * b));
    }
    let (u, v) = s.pair();
    let j0 = 10.0 * (2.0 * u - 1.0);
    let len = 0.5 + 1.5 * v;
    let pieces: Vec<(f64, f64)> = if opts.e_equals_j {
        vec![(j0, j0 + len)]
    } else {
        (0..opts.pieces)
            .map(|_| {
                let (u, v) = s.pair();
                let w = len * (0.02 + 0.18 * v);
                let a = j0 + (len - w) * u;
                (a, a + w)
            })
            .collect()
    };
    let per_piece = (opts.grid / pieces.len().max(1)).max(50);
    let mut sup_e: f64 = 0.0;
    for &(a, b) in &pieces {
        for i in 0..=per_piece {
            sup_e = sup_e.max(eval(&freqs, &coeffs, a + (b - a) * i as f64 / per_piece as f64));
        }
    }
    let mut sup_j = sup_e;
    for i in 0..=opts.grid {
        sup_j = sup_j.max(eval(&freqs, &coeffs, j0 + len * i as f64 / opts.grid as f64));
    }
    TuranTrial {
        sup_j,
        sup_e,
        m_j: len,
        m_e: union_measure(pieces),
    }
}

/// `Ĉ = (sup_J|p| / sup_E|p|)^{1/max(n−1,1)} · m(E)/m(J)` per trial, for
/// random `p = Σ c_j e^{iλ_j t}` with `n` terms, random `J` and random
/// `E ⊂ J` made of a few subintervals. The exponent counts the degree
/// `n − 1` of an `n`-term polynomial.
///
/// Diagnostic pass: every `Ĉ` is finite, and the maximum over all trials is
/// at most twice the maximum over the first half.
pub fn exp_turan_diagnostic(seed: u64, opts: &TuranOptions) -> Result<ExperimentReport> {
    if opts.n_freq == 0 || opts.trials < 2 || opts.grid < 10 || opts.pieces == 0 {
        return Err(invalid("n_freq", "need n_freq ≥ 1, trials ≥ 2, grid ≥ 10 and at least one piece"));
    }
    let config = config_of(vec![
        ("experiment", json!("turan")),
        ("n_freq", json!(opts.n_freq)),
        ("trials", json!(opts.trials)),
        ("pieces", json!(opts.pieces)),
        ("freq_max", json!(opts.freq_max)),
        ("grid", json!(opts.grid)),
        ("e_equals_j", json!(opts.e_equals_j)),
    ]);
    let mut report = ExperimentReport::new("turan", seed, config, &["trial", "sup_j", "sup_e", "m_j", "m_e", "c_hat"]);
    let exponent = opts.n_freq.saturating_sub(1).max(1) as f64;
    let results = par_trials(opts.trials, |t| run_trial(seed, t, opts));
    let mut c_hats = Vec::with_capacity(results.len());
    for (t, tr) in results.iter().enumerate() {
        let c = (tr.sup_j / tr.sup_e).powf(1.0 / exponent) * tr.m_e / tr.m_j;
        c_hats.push(c);
        report.push_row(vec![json!(t), num(tr.sup_j), num(tr.sup_e), num(tr.m_j), num(tr.m_e), num(c)]);
    }
    let half = c_hats.len() / 2;
    let max_all = c_hats.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let max_half = c_hats[..half].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    report.set("c_hat_max", num(max_all));
    report.set("c_hat_max_first_half", num(max_half));
    report.set("exponent", exponent);
    report.check(
        "c_hat_finite",
        c_hats.iter().all(|c| c.is_finite()),
        "every trial gives a finite constant",
    );
    report.check(
        "c_hat_stable",
        max_all <= 2.0 * max_half,
        format!("max Ĉ: {max_half:.4} over the first half, {max_all:.4} overall"),
    );
    Ok(report)
}
