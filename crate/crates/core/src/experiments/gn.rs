//! `g_N(θ) = sin(2πθ)^{2N}`: tiny on `|θ| ≤ e^{−N}` yet with `∫|g_N|² ≥ c/N`,
//! so the log-integral bound cannot hold uniformly in the norm.

use std::f64::consts::PI;

use serde_json::json;

use super::{config_of, num, ExperimentReport};
use crate::error::{invalid, Result};

/// `∫₀¹ |g_N|² = binom(4N, 2N)/2^{4N}` as a reduced fraction.
pub fn gn_l2_exact(n: u32) -> Result<(u128, u128)> {
    if n == 0 || 4 * n > 124 {
        return Err(invalid("N", "exact fraction supported for 1 ≤ N ≤ 31"));
    }
    let m = 4 * n as u128;
    let k = 2 * n as u128;
    // C(m, k) built incrementally stays an integer at every step
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (m - i) / (i + 1);
    }
    let mut den: u128 = 1 << m;
    let mut num = c;
    while num.is_multiple_of(2) && den > 1 {
        num /= 2;
        den /= 2;
    }
    Ok((num, den))
}

/// Trapezoid value of `∫₀¹ sin(2πθ)^{4N} dθ`; exact with more than `4N` nodes.
fn gn_l2_quadrature(n: u32) -> f64 {
    let nodes = 8 * n as usize + 8;
    (0..nodes)
        .map(|k| (2.0 * PI * k as f64 / nodes as f64).sin().powi(4 * n as i32))
        .sum::<f64>()
        / nodes as f64
}

/// For each `N`: the exact `∫|g_N|²` and its quadrature cross-check, the
/// supremum on `|θ| ≤ e^{−N}` (at the endpoint once `2πe^{−N} < π/2`)
/// against `(2πe^{−N})^{2N}`, with `c₀ = −log sup / N²` and `c = N·∫|g_N|²`
/// reported.
pub fn exp_gn_sharpness(n_list: &[u32]) -> Result<ExperimentReport> {
    if n_list.is_empty() {
        return Err(invalid("N_list", "need at least one N"));
    }
    let config = config_of(vec![("experiment", json!("gn")), ("N_list", json!(n_list))]);
    let mut report = ExperimentReport::new(
        "gn",
        0,
        config,
        &["N", "l2_num", "l2_den", "l2", "l2_quadrature", "sup", "sup_bound", "c0", "c"],
    );
    let mut ok_l2 = true;
    let mut ok_sup = true;
    let mut c_min = f64::INFINITY;
    let mut c0_min = f64::INFINITY;
    for &n in n_list {
        let (num_, den) = gn_l2_exact(n)?;
        let l2 = num_ as f64 / den as f64;
        let quad = gn_l2_quadrature(n);
        let nf = n as f64;
        let theta = (-nf).exp();
        let x = 2.0 * PI * theta;
        let sup = if x >= PI / 2.0 { 1.0 } else { x.sin().powi(2 * n as i32) };
        // dense check that the endpoint is the maximum
        let grid_sup = (0..=1000)
            .map(|i| (2.0 * PI * theta * i as f64 / 1000.0).sin().abs().powi(2 * n as i32))
            .fold(0.0, f64::max);
        let bound = (2.0 * PI * theta).powi(2 * n as i32);
        let c0 = (0.0 - sup.ln()) / (nf * nf);
        let c = nf * l2;
        ok_l2 &= (quad - l2).abs() <= 1e-14 * l2.max(1.0);
        ok_sup &= sup <= bound && grid_sup <= sup * (1.0 + 1e-12);
        c_min = c_min.min(c);
        c0_min = c0_min.min(c0);
        report.push_row(vec![
            json!(n),
            json!(num_.to_string()),
            json!(den.to_string()),
            num(l2),
            num(quad),
            num(sup),
            num(bound),
            num(c0),
            num(c),
        ]);
    }
    report.set("c0_min", c0_min);
    report.set("c_min", c_min);
    report.check(
        "l2_identity",
        ok_l2,
        "∫|g_N|² equals binom(4N,2N)/2^(4N) by quadrature",
    );
    report.check(
        "sup_bound",
        ok_sup,
        "sup over |θ| ≤ e^(−N) stays below (2πe^(−N))^(2N)",
    );
    report.check("integral_lower_bound", c_min > 0.0, format!("min_N N·∫|g_N|² = {c_min:.6}"));
    Ok(report)
}
