//! Khinchin-type moment ratios for Rademacher linear and bilinear forms.

use std::f64::consts::PI;

use serde_json::json;

use super::{config_of, num, par_trials, ExperimentReport};
use crate::error::{invalid, Result};
use crate::rng::{Purpose, Substream};
use crate::sampling::EnsembleSpec;
use crate::stats::Summary;

#[derive(Debug, Clone, PartialEq)]
pub struct KhinchinOptions {
    pub p_list: Vec<f64>,
    pub dim: usize,
    pub trials: u64,
    /// Random unit vectors (and as many random unit matrices) tested.
    pub n_forms: usize,
}

impl KhinchinOptions {
    pub fn new(p_list: Vec<f64>, dim: usize, trials: u64) -> Self {
        Self {
            p_list,
            dim,
            trials,
            n_forms: 4,
        }
    }
}

/// `len` standard real Gaussians from substream `(seed, Vectors, form)`.
fn gaussian_vector(seed: u64, form: u64, len: usize) -> Vec<f64> {
    let mut s = Substream::new(seed, Purpose::Vectors, form);
    s.seek(0);
    (0..len)
        .map(|_| {
            let (u, v) = s.pair();
            (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
        })
        .collect()
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Per form, `(E|X|^p)^{1/p}` over `trials` Rademacher draws, for
/// `X = Σ a_k ξ_k` with `‖a‖ = 1` and `X = Σ_{k≠l} a_{kl} ξ_k ξ_l` with
/// `‖a‖_F = 1`.
///
/// Checks: at `p = 2` the linear second moment is 1 within 3 SE; for
/// `p > 2` the linear ratio over `√p` and the bilinear ratio over `p` stay
/// below 4.
pub fn exp_khinchin(ensemble: &EnsembleSpec, opts: &KhinchinOptions) -> Result<ExperimentReport> {
    if opts.dim < 2 || opts.trials < 2 || opts.n_forms == 0 || opts.p_list.is_empty() {
        return Err(invalid("dim", "need dim ≥ 2, trials ≥ 2, at least one form and one p"));
    }
    if opts.p_list.iter().any(|p| !(*p >= 1.0)) {
        return Err(invalid("p_list", "need p ≥ 1"));
    }
    let d = opts.dim;
    let config = config_of(vec![
        ("experiment", json!("khinchin")),
        ("ensemble", json!(ensemble.name())),
        ("p_list", json!(opts.p_list)),
        ("dim", json!(d)),
        ("trials", json!(opts.trials)),
        ("n_forms", json!(opts.n_forms)),
    ]);
    let mut report = ExperimentReport::new(
        "khinchin",
        ensemble.seed,
        config,
        &["form", "kind", "p", "ratio", "ratio_scaled", "second_moment", "second_moment_se"],
    );
    let mut vectors = Vec::new();
    let mut matrices = Vec::new();
    for f in 0..opts.n_forms as u64 {
        let mut a = gaussian_vector(ensemble.seed, 2 * f, d);
        normalize(&mut a);
        vectors.push(a);
        let mut m = gaussian_vector(ensemble.seed, 2 * f + 1, d * d);
        for k in 0..d {
            m[k * d + k] = 0.0;
        }
        normalize(&mut m);
        matrices.push(m);
    }
    // per trial: |X| for every linear form, then every bilinear form
    let values = par_trials(opts.trials, |t| -> Vec<f64> {
        let xi: Vec<f64> = ensemble.draw(t, d).iter().map(|x| x.re).collect();
        let lin = vectors.iter().map(|a| a.iter().zip(&xi).map(|(a, x)| a * x).sum::<f64>().abs());
        let bil = matrices.iter().map(|m| {
            let mut q = 0.0;
            for k in 0..d {
                let row: f64 = (0..d).map(|l| m[k * d + l] * xi[l]).sum();
                q += xi[k] * row;
            }
            q.abs()
        });
        lin.chain(bil).collect()
    });
    let nf = opts.n_forms;
    let mut worst_lin: f64 = 0.0;
    let mut worst_bil: f64 = 0.0;
    let mut p2_ok = true;
    let mut p2_detail = Vec::new();
    for j in 0..2 * nf {
        let kind = if j < nf { "linear" } else { "bilinear" };
        let xs: Vec<f64> = values.iter().map(|v| v[j]).collect();
        let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let sq_stats = Summary::of(&sq);
        if j < nf && opts.p_list.contains(&2.0) {
            let ok = sq_stats.within(1.0, 3.0);
            p2_ok &= ok;
            p2_detail.push(format!("{:.4}±{:.4}", sq_stats.mean, sq_stats.std_err));
        }
        for &p in &opts.p_list {
            let mom = xs.iter().map(|x| x.powf(p)).sum::<f64>() / xs.len() as f64;
            let ratio = mom.powf(1.0 / p);
            let scaled = if j < nf { ratio / p.sqrt() } else { ratio / p };
            if p > 2.0 {
                if j < nf {
                    worst_lin = worst_lin.max(scaled);
                } else {
                    worst_bil = worst_bil.max(scaled);
                }
            }
            report.push_row(vec![
                json!(j % nf),
                json!(kind),
                json!(p),
                num(ratio),
                num(scaled),
                num(sq_stats.mean),
                num(sq_stats.std_err),
            ]);
        }
    }
    report.set("c_linear", worst_lin);
    report.set("c_bilinear", worst_bil);
    if opts.p_list.contains(&2.0) {
        report.check(
            "p2_linear_unit",
            p2_ok,
            format!("E|Σaξ|² per form: {}", p2_detail.join(", ")),
        );
    }
    if opts.p_list.iter().any(|p| *p > 2.0) {
        report.check("linear_bounded", worst_lin <= 4.0, format!("max ratio/√p = {worst_lin:.4}"));
        report.check("bilinear_bounded", worst_bil <= 4.0, format!("max ratio/p = {worst_bil:.4}"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let rep = exp_khinchin(&EnsembleSpec::rademacher(9), &KhinchinOptions::new(vec![2.0, 4.0], 16, 2000)).unwrap();
        assert_eq!(rep.passed(), Some(true), "{:?}", rep.checks);
    }

    #[test]
    fn forms_are_unit() {
        let mut a = gaussian_vector(1, 0, 10);
        normalize(&mut a);
        assert!((a.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-14);
    }
}
