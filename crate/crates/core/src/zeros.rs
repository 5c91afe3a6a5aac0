//! Zeros of a sampled series in a disk: simultaneous root iteration, the
//! argument principle and Jensen's formula, which check each other.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::poly::{aberth_roots, AberthOptions, ScaledPoly};
use crate::sampling::SeriesSample;

/// Relative width of the annulus around `|z| = r` whose roots are flagged.
pub const BOUNDARY_TOL: f64 = 1e-9;
/// Roots closer than this (relative to `r`) are merged into one cluster.
pub const CLUSTER_TOL: f64 = 1e-7;
/// `min |p|` on the circle below this (relative to `Σ|p_n|`) means a root
/// is too close to the contour for quadrature.
const BOUNDARY_EXCLUSION: f64 = 1e-10;
const AP_START_NODES: usize = 64;
const AP_MAX_NODES: usize = 1 << 20;
const JENSEN_START_NODES: usize = 256;
const JENSEN_MAX_NODES: usize = 1 << 20;
const JENSEN_CORRECT_NODES: usize = 1 << 14;
const JENSEN_TOL: f64 = 1e-8;
const PERTURBATIONS: [f64; 5] = [1.0 - 1e-6, 1.0 + 1e-6, 1.0 - 2e-6, 1.0 + 2e-6, 1.0 - 3e-6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    RootFinder,
    ArgumentPrinciple,
    Jensen,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::RootFinder => "root_finder",
            Method::ArgumentPrinciple => "argument_principle",
            Method::Jensen => "jensen",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub z: Complex64,
    pub multiplicity: usize,
}

/// Roots inside the closed disk `|z| ≤ radius`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub radius: f64,
    pub roots: Vec<Root>,
    pub method: Method,
    /// `max |f(z)|` over the roots, relative to `max |c_n| rⁿ`.
    pub residual: f64,
    /// Roots with `||z| − r| < BOUNDARY_TOL·r`; they are counted as inside.
    pub boundary_flags: Vec<Complex64>,
}

impl ZeroSet {
    pub fn empty(radius: f64) -> Self {
        Self {
            radius,
            roots: Vec::new(),
            method: Method::RootFinder,
            residual: 0.0,
            boundary_flags: Vec::new(),
        }
    }

    /// Number of zeros counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn has_multiple_roots(&self) -> bool {
        self.roots.iter().any(|r| r.multiplicity > 1)
    }

    /// Smallest root modulus, `None` if the set is empty.
    pub fn min_modulus(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.z.norm()).min_by(f64::total_cmp)
    }

    /// `Σ mult·log(r/|z|)`, the root side of Jensen's formula.
    pub fn jensen_sum(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| r.multiplicity as f64 * (self.radius / r.z.norm()).ln().max(0.0))
            .sum()
    }

    /// Roots restricted to a smaller disk.
    pub fn within(&self, r: f64) -> ZeroSet {
        let lim = r * (1.0 + BOUNDARY_TOL);
        ZeroSet {
            radius: r,
            roots: self.roots.iter().filter(|x| x.z.norm() <= lim).copied().collect(),
            method: self.method,
            residual: self.residual,
            boundary_flags: self
                .boundary_flags
                .iter()
                .filter(|z| (z.norm() - r).abs() < BOUNDARY_TOL * r)
                .copied()
                .collect(),
        }
    }

    /// `trial_id,re,im,modulus,multiplicity,method` rows.
    pub fn csv_rows(&self, trial_id: u64) -> Vec<String> {
        self.roots
            .iter()
            .map(|r| {
                format!(
                    "{trial_id},{:.17e},{:.17e},{:.17e},{},{}",
                    r.z.re,
                    r.z.im,
                    r.z.norm(),
                    r.multiplicity,
                    self.method
                )
            })
            .collect()
    }
}

pub const ZEROS_CSV_HEADER: &str = "trial_id,re,im,modulus,multiplicity,method";

/// `arg z` in `[0, 2π)`, with the origin assigned argument 0.
pub fn arg_0_2pi(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        return 0.0;
    }
    let a = z.arg();
    if a < 0.0 {
        let b = a + 2.0 * PI;
        if b >= 2.0 * PI {
            0.0
        } else {
            b
        }
    } else {
        a
    }
}

/// Rouché margin at `|z| = r`: `log min|truncation| − log(tail)`.
/// Positive means the truncation and the full series have the same zeros
/// count in the disk (up to the sampled-minimum estimate).
pub fn rouche_margin(sample: &SeriesSample, r: f64) -> f64 {
    if sample.tail_log_bound == f64::NEG_INFINITY {
        return f64::INFINITY;
    }
    let p = sample.scaled(r);
    let nodes = (8 * (p.degree() + 1)).max(256);
    p.log_scale + p.min_on_unit_circle(nodes).ln() - sample.tail_log_bound
}

/// All zeros of the truncation inside `|z| ≤ r`.
pub fn find_zeros_disk(sample: &SeriesSample, r: f64) -> Result<ZeroSet> {
    find_zeros_with(sample, r, AberthOptions::default())
}

pub fn find_zeros_with(sample: &SeriesSample, r: f64, opts: AberthOptions) -> Result<ZeroSet> {
    check_radius(r)?;
    sample.check_disk(r)?;
    let margin = rouche_margin(sample, r);
    if !(margin > 0.0) {
        let p = sample.scaled(r);
        return Err(Error::RoucheMarginUnverifiable {
            r,
            min_modulus: p.log_scale + p.min_on_unit_circle(256).ln(),
            tail: sample.tail_log_bound,
        });
    }
    let p = sample.scaled(r);
    if p.is_zero() {
        return Err(Error::NumericalFailure("identically zero truncation".into()));
    }
    let ws = aberth_roots(&p.coeffs, opts)?;
    Ok(collect_roots(&p, &ws, r))
}

fn collect_roots(p: &ScaledPoly, ws: &[Complex64], r: f64) -> ZeroSet {
    let lim = 1.0 + BOUNDARY_TOL;
    let mut inside: Vec<Complex64> = ws.iter().filter(|w| w.norm() <= lim).copied().collect();
    inside.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut roots: Vec<Root> = Vec::new();
    let mut used = vec![false; inside.len()];
    for i in 0..inside.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![inside[i]];
        for j in i + 1..inside.len() {
            if !used[j] && (inside[j] - inside[i]).norm() <= CLUSTER_TOL {
                used[j] = true;
                members.push(inside[j]);
            }
        }
        let centre = members.iter().sum::<Complex64>() / members.len() as f64;
        roots.push(Root {
            z: centre * r,
            multiplicity: members.len(),
        });
    }
    let residual = inside.iter().map(|w| p.eval(*w).norm()).fold(0.0, f64::max);
    let boundary_flags = roots
        .iter()
        .filter(|x| (x.z.norm() / r - 1.0).abs() < BOUNDARY_TOL)
        .map(|x| x.z)
        .collect();
    ZeroSet {
        radius: r,
        roots,
        method: Method::RootFinder,
        residual,
        boundary_flags,
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid("r", format!("radius must be a positive real, got {r}")));
    }
    Ok(())
}

/// Winding number of `p` around the unit circle, or `None` when a root sits
/// on the contour.
///
/// `(1/2π)∮ d arg p` is accumulated arc by arc. An arc is accepted when the
/// phase of `p` and the local rate `Im(w p'/p)` both move by less than π/4
/// across each half, otherwise it is split; a root at distance `d` from the
/// circle costs about `log₂(1/d)` extra levels near it instead of `1/d` nodes.
fn winding_number(p: &ScaledPoly) -> Option<usize> {
    let scale = p.abs_eval(1.0);
    let floor = BOUNDARY_EXCLUSION * scale;
    let arcs = AP_START_NODES.max(4 * (p.degree() + 1));
    let h = 2.0 * PI / arcs as f64;
    let node = |theta: f64| -> Option<(f64, Complex64, f64)> {
        let w = Complex64::from_polar(1.0, theta);
        let (v, dv) = p.eval_with_deriv(w);
        if v.norm() < floor {
            return None;
        }
        Some((theta, v, (w * dv / v).im))
    };
    let mut total = 0.0;
    let mut left = node(0.0)?;
    let first = left;
    let mut budget = AP_MAX_NODES;
    for k in 1..=arcs {
        let right = if k == arcs { (2.0 * PI, first.1, first.2) } else { node(k as f64 * h)? };
        total += arc_phase(&node, left, right, 0, &mut budget)?;
        left = right;
    }
    let value = total / (2.0 * PI);
    let rounded = value.round();
    ((value - rounded).abs() < 0.1 && rounded >= 0.0).then_some(rounded as usize)
}

type PhaseNode = (f64, Complex64, f64);

fn arc_phase(
    node: &impl Fn(f64) -> Option<PhaseNode>,
    a: PhaseNode,
    b: PhaseNode,
    depth: usize,
    budget: &mut usize,
) -> Option<f64> {
    let step = b.0 - a.0;
    let delta = (b.1 / a.1).arg();
    let calm = delta.abs() < PI / 4.0 && (a.2 * step).abs() < PI / 4.0 && (b.2 * step).abs() < PI / 4.0;
    if calm && depth > 0 {
        return Some(delta);
    }
    if depth >= 60 || *budget == 0 {
        return None;
    }
    *budget -= 1;
    let m = node(0.5 * (a.0 + b.0))?;
    Some(arc_phase(node, a, m, depth + 1, budget)? + arc_phase(node, m, b, depth + 1, budget)?)
}

/// Zeros of the truncation in `|z| ≤ r` by contour quadrature of `f'/f`.
///
/// If a root lies on the contour the radius is moved by a few parts in
/// 10⁶ before giving up.
pub fn argument_principle_count(sample: &SeriesSample, r: f64) -> Result<usize> {
    check_radius(r)?;
    sample.check_disk(r)?;
    if let Some(n) = winding_number(&sample.scaled(r)) {
        return Ok(n);
    }
    for f in PERTURBATIONS {
        let rr = r * f;
        if rr > sample.r_max {
            continue;
        }
        if let Some(n) = winding_number(&sample.scaled(rr)) {
            return Ok(n);
        }
    }
    Err(Error::BoundaryRootUnresolved(r))
}

/// `N_f(r) = ∫₀¹ log|f(re^{2πiθ})| dθ − log|f(0)|`, by the trapezoid rule
/// with node doubling.
///
/// A root close to the circle slows the plain rule down. Past
/// `JENSEN_CORRECT_NODES` the roots are located and each one's exact
/// trapezoid error `(1/N) log|1 − uᴺ|` is subtracted, where `u` is the
/// root over the radius (or its inverse, for roots outside).
pub fn jensen_n(sample: &SeriesSample, r: f64) -> Result<f64> {
    check_radius(r)?;
    sample.check_disk(r)?;
    let log_f0 = sample.log_abs_coeff(0);
    if log_f0 == f64::NEG_INFINITY {
        return Err(Error::ZeroAtOrigin);
    }
    let p = sample.scaled(r);
    let mean_log = |nodes: usize| -> f64 {
        (0..nodes)
            .map(|k| p.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / nodes as f64)).norm().ln())
            .sum::<f64>()
            / nodes as f64
    };
    let mut roots: Option<Vec<Complex64>> = None;
    let correction = |roots: &[Complex64], nodes: usize| -> f64 {
        roots
            .iter()
            .map(|w| {
                let m = w.norm();
                if m == 0.0 {
                    return 0.0;
                }
                let u = if m < 1.0 { *w } else { w.inv() };
                (Complex64::new(1.0, 0.0) - u.powu(nodes as u32)).norm().ln()
            })
            .sum::<f64>()
            / nodes as f64
    };
    let mut nodes = JENSEN_START_NODES.max(2 * (p.degree() + 1)).next_power_of_two();
    let mut prev = mean_log(nodes);
    while nodes < JENSEN_MAX_NODES {
        nodes *= 2;
        let mut next = mean_log(nodes);
        if !next.is_finite() {
            return Err(Error::BoundaryRootUnresolved(r));
        }
        if nodes >= JENSEN_CORRECT_NODES {
            if roots.is_none() {
                roots = Some(aberth_roots(&p.coeffs, AberthOptions::default())?);
                prev -= correction(roots.as_deref().unwrap(), nodes / 2);
            }
            next -= correction(roots.as_deref().unwrap(), nodes);
            if !next.is_finite() {
                return Err(Error::BoundaryRootUnresolved(r));
            }
        }
        if (next - prev).abs() < JENSEN_TOL {
            return Ok(p.log_scale + next - log_f0);
        }
        prev = next;
    }
    Err(Error::NumericalFailure(format!("Jensen quadrature did not settle at r = {r}")))
}

fn check_sector(alpha: f64, beta: f64) -> Result<()> {
    if !(0.0 <= alpha && alpha < beta && beta <= 2.0 * PI) {
        return Err(invalid("sector", format!("need 0 ≤ α < β ≤ 2π, got [{alpha}, {beta})")));
    }
    Ok(())
}

fn in_sector(z: Complex64, alpha: f64, beta: f64) -> bool {
    let a = arg_0_2pi(z);
    alpha <= a && a < beta
}

/// Zeros with `α ≤ arg z < β`, counted with multiplicity.
pub fn sector_count(zs: &ZeroSet, alpha: f64, beta: f64) -> Result<usize> {
    check_sector(alpha, beta)?;
    Ok(zs
        .roots
        .iter()
        .filter(|r| in_sector(r.z, alpha, beta))
        .map(|r| r.multiplicity)
        .sum())
}

/// Counts in `n_sectors` equal sectors starting at angle 0.
pub fn sector_histogram(zs: &ZeroSet, n_sectors: usize) -> Vec<usize> {
    let mut out = vec![0; n_sectors];
    for r in &zs.roots {
        let k = ((arg_0_2pi(r.z) / (2.0 * PI)) * n_sectors as f64).floor() as usize;
        out[k.min(n_sectors - 1)] += r.multiplicity;
    }
    out
}

/// Solutions of `f(z) = b` in `|z| ≤ r`.
pub fn value_solutions(sample: &SeriesSample, r: f64, b: Complex64) -> Result<ZeroSet> {
    find_zeros_disk(&sample.shifted(b), r)
}

/// `N(r, α, β) = ∫₀ʳ n(t, α, β)/t dt` over a log-spaced grid of `cells`
/// cells on `[r·e^{−span}, r]`; the sector count is a step function of `t`,
/// integrated exactly on each cell, with roots below the grid folded into
/// the first cell.
pub fn integrated_sector_n(
    sample: &SeriesSample,
    r: f64,
    alpha: f64,
    beta: f64,
    cells: usize,
) -> Result<f64> {
    check_sector(alpha, beta)?;
    if sample.log_abs_coeff(0) == f64::NEG_INFINITY {
        return Err(Error::ZeroAtOrigin);
    }
    let zs = find_zeros_disk(sample, r)?;
    Ok(integrate_sector_counts(&zs, alpha, beta, cells.max(1), 20.0))
}

fn integrate_sector_counts(zs: &ZeroSet, alpha: f64, beta: f64, cells: usize, span: f64) -> f64 {
    let r = zs.radius;
    let mut moduli: Vec<(f64, usize)> = zs
        .roots
        .iter()
        .filter(|x| in_sector(x.z, alpha, beta))
        .map(|x| (x.z.norm().min(r), x.multiplicity))
        .collect();
    moduli.sort_by(|a, b| a.0.total_cmp(&b.0));
    let grid: Vec<f64> = (0..=cells).map(|i| r * (-span * (1.0 - i as f64 / cells as f64)).exp()).collect();
    let mut total = 0.0;
    // roots below the first grid node: ∫_{|z|}^{t_0} dt/t each
    let mut below = 0usize;
    let mut idx = 0;
    while idx < moduli.len() && moduli[idx].0 < grid[0] {
        total += moduli[idx].1 as f64 * (grid[0] / moduli[idx].0).ln();
        below += moduli[idx].1;
        idx += 1;
    }
    let mut count = below;
    for w in grid.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        total += count as f64 * (t1 / t0).ln();
        while idx < moduli.len() && moduli[idx].0 <= t1 {
            let (m, k) = moduli[idx];
            total += k as f64 * (t1 / m).ln();
            count += k;
            idx += 1;
        }
    }
    total
}
