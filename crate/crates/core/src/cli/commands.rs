//! One function per subcommand: turn merged parameters into a report.

use num_complex::Complex64;
use serde_json::json;

use super::{CliError, Command, Outcome, Params, PlotKind};
use crate::covariance::{build_covariance, circulant_eigenvalues, det_sigma_lower_check, CircleConfiguration};
use crate::experiments::{self as ex, config_of, num, par_trials, sample_and_find, ExperimentReport};
use crate::growth::{growth_profile_with_eta, hayman_window_with_eta, CoefficientSequence, DEFAULT_ETA};
use crate::sampling::{sample, EnsembleSpec, SampleOptions};
use crate::zeros::argument_principle_count;

type Res = Result<Outcome, CliError>;

fn usage(key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("invalid value for `{key}`: {msg}"))
}

fn floats(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(key, format!("`{x}` is not a number"))))
        .collect()
}

fn ints(key: &str, text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| usage(key, format!("`{x}` is not a nonnegative integer"))))
        .collect()
}

/// `3`, `-2i`, `0.5-1.5i`, `1+i`.
pub(crate) fn parse_complex(text: &str) -> Option<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return s.parse().ok().map(|x| Complex64::new(x, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse().ok()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse().ok()?,
    };
    Some(Complex64::new(re, im))
}

fn complexes(key: &str, text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|x| parse_complex(x).ok_or_else(|| usage(key, format!("`{x}` is not a complex number"))))
        .collect()
}

fn positive(key: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(usage(key, format!("must be a positive real, got {x}")))
    }
}

/// Typed access to the merged parameters with per-command defaults.
struct Ctx<'a> {
    p: &'a Params,
}

impl Ctx<'_> {
    fn seed(&self) -> u64 {
        self.p.seed.unwrap_or(0)
    }

    fn trials(&self, default: u64) -> Result<u64, CliError> {
        match self.p.trials.unwrap_or(default) {
            0 => Err(usage("trials", "must be at least 1")),
            t => Ok(t),
        }
    }

    fn tol(&self) -> Result<f64, CliError> {
        let t = self.p.tol_tail.unwrap_or(1e-12);
        if t > 0.0 && t < 1.0 {
            Ok(t)
        } else {
            Err(usage("tol_tail", format!("must lie in (0, 1), got {t}")))
        }
    }

    /// `--seq`; `gamma` and `gauss2` without a parameter take `--alpha`.
    fn seq(&self, default: &str) -> Result<CoefficientSequence, CliError> {
        let text = self.p.seq.as_deref().unwrap_or(default);
        let bare = text.trim().to_ascii_lowercase();
        let text = if matches!(bare.as_str(), "gamma" | "gauss2" | "gausssquared") {
            let a = self.p.alpha.ok_or_else(|| usage("alpha", format!("`{bare}` needs --alpha or `{bare}:α`")))?;
            format!("{bare}:{a}")
        } else {
            text.to_string()
        };
        Ok(CoefficientSequence::parse(&text)?)
    }

    fn ensemble(&self, default: &str) -> Result<EnsembleSpec, CliError> {
        Ok(EnsembleSpec::parse(self.p.ensemble.as_deref().unwrap_or(default), self.seed())?)
    }

    fn r(&self, default: Option<f64>) -> Result<f64, CliError> {
        let r = self.p.r.or(default).ok_or_else(|| usage("r", "required"))?;
        positive("r", r)
    }

    /// `--r-grid`, else `--r` alone, else the default grid.
    fn r_grid(&self, default: &str) -> Result<Vec<f64>, CliError> {
        let grid = match (&self.p.r_grid, self.p.r) {
            (Some(g), _) => floats("r_grid", g)?,
            (None, Some(r)) => vec![r],
            (None, None) => floats("r_grid", default)?,
        };
        for &r in &grid {
            positive(if self.p.r_grid.is_some() { "r_grid" } else { "r" }, r)?;
        }
        Ok(grid)
    }

    fn eta(&self) -> f64 {
        self.p.eta.unwrap_or(DEFAULT_ETA)
    }
}

fn done(report: ExperimentReport, plot: Option<PlotKind>) -> Res {
    Ok(Outcome {
        report,
        plot,
        headline: Vec::new(),
    })
}

pub(crate) fn dispatch(cmd: Command, p: &Params) -> Res {
    let c = Ctx { p };
    match cmd {
        Command::Growth => growth(&c),
        Command::Sample => sample_cmd(&c),
        Command::Zeros => zeros(&c),
        Command::Hole => hole(&c),
        Command::Sectors => sectors(&c),
        Command::Concentration => concentration(&c),
        Command::Lacunary => {
            let mut o = ex::LacunaryOptions::new(p.k.unwrap_or(6));
            o.tail_tol = c.tol()?;
            done(ex::exp_lacunary_discrepancy(&o)?, None)
        }
        Command::Realzeros => {
            let mut o = ex::RealZerosOptions::new(p.alpha.unwrap_or(1.2), p.m_max.unwrap_or(3), p.pattern_bits.unwrap_or(10));
            o.tail_tol = c.tol()?;
            done(ex::exp_real_zeros(&o)?, None)
        }
        Command::Covariance => covariance(&c),
        Command::Moments => {
            let q = floats("q_list", p.q_list.as_deref().unwrap_or("1,2,3,4"))?;
            let w = p.width.unwrap_or(32);
            if w == 0 {
                return Err(usage("width", "must be at least 1"));
            }
            let o = ex::LogMomentOptions::new(ex::flat_profile(w), q, c.trials(1000)?);
            done(ex::exp_log_moments(&c.ensemble("rademacher")?, &o)?, None)
        }
        Command::Khinchin => {
            let pl = floats("p_list", p.p_list.as_deref().unwrap_or("2,4,8"))?;
            let o = ex::KhinchinOptions::new(pl, p.dim.unwrap_or(64), c.trials(10_000)?);
            done(ex::exp_khinchin(&c.ensemble("rademacher")?, &o)?, None)
        }
        Command::Turan => {
            let o = ex::TuranOptions::new(p.n_freq.unwrap_or(2), c.trials(1000)?);
            done(ex::exp_turan_diagnostic(c.seed(), &o)?, None)
        }
        Command::Kahane => {
            let radii = c.r_grid("0.5,0.9,0.99")?;
            let bs = complexes("b_list", p.b_list.as_deref().unwrap_or("0,1+1i"))?;
            let o = ex::KahaneOptions::harmonic(p.len.unwrap_or(200), radii, bs, c.trials(100)?);
            done(ex::exp_kahane_range(&c.ensemble("rademacher")?, &o)?, None)
        }
        Command::Counterexample => {
            let o = ex::CounterexampleOptions::new(c.trials(10_000)?, p.degree.unwrap_or(80));
            done(ex::exp_counterexample_r0(&c.ensemble("rademacher")?, &o)?, None)
        }
        Command::Asymptotics => {
            let text = p.beta.as_deref().unwrap_or("1");
            let beta = parse_complex(text).ok_or_else(|| usage("beta", format!("`{text}` is not a complex number")))?;
            let o = ex::AsymptoticsOptions::new(beta, p.n_max.unwrap_or(400));
            done(ex::exp_coeff_asymptotics(&o)?, None)
        }
        Command::Gn => {
            let ns = ints("n_list", p.n_list.as_deref().unwrap_or("1,5,10"))?;
            done(ex::exp_gn_sharpness(&ns)?, None)
        }
    }
}

fn growth(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let radii = c.r_grid("2")?;
    let eta = c.eta();
    let config = config_of(vec![
        ("experiment", json!("growth")),
        ("seq", json!(seq)),
        ("r_grid", json!(radii)),
        ("eta", json!(eta)),
    ]);
    let mut report = ExperimentReport::new(
        "growth",
        0,
        config,
        &["r", "log_sigma_sq", "s", "S", "n_count", "m", "delta", "S_over_r4", "hayman_window"],
    );
    let mut headline = Vec::new();
    let mut profiles = Vec::new();
    for &r in &radii {
        let g = growth_profile_with_eta(&seq, r, eta)?;
        let hay = hayman_window_with_eta(&seq, r, eta)?;
        headline.push(format!(
            "r = {r}: S = {:.6}, n = {}, m = {}, s = {:.6}, delta = {:.6}",
            g.big_s, g.n_count, g.m_weight, g.s, g.delta
        ));
        report.push_row(vec![
            json!(r),
            num(2.0 * g.log_sigma),
            num(g.s),
            num(g.big_s),
            json!(g.n_count),
            json!(g.m_weight),
            num(g.delta),
            num(g.big_s / r.powi(4)),
            json!(hay),
        ]);
        profiles.push(g);
    }
    report.set("profiles", &profiles);
    report.exploratory = true;
    Ok(Outcome {
        report,
        plot: Some(PlotKind::Growth),
        headline,
    })
}

fn sample_cmd(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let ens = c.ensemble("gaussian")?;
    let r = c.r(Some(2.0))?;
    let trials = c.trials(1)?;
    let opts = SampleOptions::new(r, c.tol()?);
    let config = config_of(vec![
        ("experiment", json!("sample")),
        ("seq", json!(seq)),
        ("ensemble", json!(ens.name())),
        ("r_max", json!(r)),
        ("tail_tol", json!(opts.tail_tol)),
        ("trials", json!(trials)),
    ]);
    let mut report = ExperimentReport::new("sample", ens.seed, config, &["trial", "n", "xi_re", "xi_im", "log_a"]);
    let samples = par_trials(trials, |t| sample(&seq, &ens, t, &opts));
    let mut degrees = Vec::new();
    for s in samples {
        let s = s?;
        for (n, (xi, la)) in s.xi.iter().zip(&s.log_a).enumerate() {
            report.push_row(vec![json!(s.trial), json!(n), json!(xi.re), json!(xi.im), num(*la)]);
        }
        degrees.push(json!({"trial": s.trial, "degree": s.degree, "tail_log_bound": s.tail_log_bound}));
    }
    report.set("truncations", degrees);
    report.exploratory = true;
    done(report, None)
}

fn zeros(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let ens = c.ensemble("gaussian")?;
    let r = c.r(Some(2.0))?;
    let trials = c.trials(1)?;
    let opts = SampleOptions::new(r, c.tol()?);
    let config = config_of(vec![
        ("experiment", json!("zeros")),
        ("seq", json!(seq)),
        ("ensemble", json!(ens.name())),
        ("r", json!(r)),
        ("tail_tol", json!(opts.tail_tol)),
        ("trials", json!(trials)),
    ]);
    let mut report = ExperimentReport::new(
        "zeros",
        ens.seed,
        config,
        &["trial_id", "re", "im", "modulus", "multiplicity", "method"],
    );
    let found = par_trials(trials, |t| -> crate::Result<_> {
        let (s, zs) = sample_and_find(&seq, &ens, t, &opts)?;
        let ap = argument_principle_count(&s, r)?;
        Ok((zs, ap))
    });
    let mut mismatches = Vec::new();
    let mut counts = Vec::new();
    for (t, res) in found.into_iter().enumerate() {
        let (zs, ap) = res?;
        for z in &zs.roots {
            report.push_row(vec![
                json!(t),
                json!(z.z.re),
                json!(z.z.im),
                json!(z.z.norm()),
                json!(z.multiplicity),
                json!(zs.method.to_string()),
            ]);
        }
        if zs.count() != ap {
            mismatches.push(t);
        }
        counts.push(json!({"trial": t, "root_finder": zs.count(), "argument_principle": ap}));
    }
    report.set("counts", counts);
    report.check(
        "counts_agree",
        mismatches.is_empty(),
        format!("root finder and argument principle disagree on {} of {trials} trials", mismatches.len()),
    );
    done(report, Some(PlotKind::Zeros(r)))
}

fn hole(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let ens = c.ensemble("gaussian")?;
    let mut o = ex::HoleOptions::new(c.r_grid("0.25,0.5,0.75,1")?, c.trials(10_000)?);
    o.tail_tol = c.tol()?;
    if let Some(text) = &c.p.reference {
        let v = floats("reference", text)?;
        if v.len() != 3 {
            return Err(usage("reference", "expected r,p,se"));
        }
        o.reference = Some(ex::HoleReference { r: v[0], p: v[1], se: v[2] });
    }
    done(ex::exp_hole_mc(&seq, &ens, &o)?, Some(PlotKind::Hole))
}

fn sectors(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let ens = c.ensemble("rademacher")?;
    let mut o = ex::EquidistributionOptions::new(c.r_grid("2,3,4")?, c.p.sectors.unwrap_or(8), c.trials(300)?);
    o.tail_tol = c.tol()?;
    if let Some(e) = c.p.epsilon {
        o.epsilon = e;
    }
    done(ex::exp_equidistribution(&seq, &ens, &o)?, Some(PlotKind::Sectors))
}

fn concentration(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let ens = c.ensemble("gaussian")?;
    let mut o = ex::ConcentrationOptions::new(c.r_grid("2,4,6")?, c.trials(500)?);
    o.tail_tol = c.tol()?;
    done(ex::exp_zero_concentration(&seq, &ens, &o)?, None)
}

/// Circulant eigenvalues against the dense matrix at equispaced points,
/// plus the determinant lower bound at a searched configuration.
fn covariance(c: &Ctx) -> Res {
    let seq = c.seq("gef")?;
    let r = c.r(Some(2.0))?;
    let n = c.p.points.unwrap_or(8);
    if n == 0 {
        return Err(usage("points", "must be at least 1"));
    }
    let attempts = c.trials(200)?;
    let config = config_of(vec![
        ("experiment", json!("covariance")),
        ("seq", json!(seq)),
        ("r", json!(r)),
        ("points", json!(n)),
        ("attempts", json!(attempts)),
    ]);
    let mut report = ExperimentReport::new(
        "covariance",
        c.seed(),
        config,
        &["index", "lambda_circulant", "lambda_dense", "rel_err"],
    );
    let mut circ = circulant_eigenvalues(&seq, r, n)?;
    circ.sort_by(f64::total_cmp);
    let sigma = build_covariance(&seq, &CircleConfiguration::equispaced(r, n)?)?;
    let dense = sigma.eigenvalues();
    let top = circ.iter().copied().fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (k, (a, b)) in circ.iter().zip(&dense).enumerate() {
        let rel = (a - b).abs() / top.max(f64::MIN_POSITIVE);
        worst = worst.max(rel);
        report.push_row(vec![json!(k), num(*a), num(*b), num(rel)]);
    }
    report.check(
        "circulant_matches_dense",
        worst <= 1e-9,
        format!("max |λ_circ − λ_dense| / λ_max = {worst:.3e}"),
    );
    report.check("psd", sigma.is_psd(), "dense covariance is positive semidefinite");
    match det_sigma_lower_check(&seq, r, attempts, c.seed()) {
        Ok(d) => {
            report.check(
                "det_lower_bound",
                d.ok,
                format!("log det Σ = {:.6} vs S(r) = {:.6} at n = {}", d.log_det, d.s_r, d.n),
            );
            report.set("det_sigma", d);
        }
        Err(e @ crate::Error::TooFewDominantTerms(_)) => report.note(format!("determinant check skipped: {e}")),
        Err(e) => return Err(e.into()),
    }
    done(report, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |s| parse_complex(s).unwrap();
        assert_eq!(c("3"), Complex64::new(3.0, 0.0));
        assert_eq!(c("-2i"), Complex64::new(0.0, -2.0));
        assert_eq!(c("0.5-1.5i"), Complex64::new(0.5, -1.5));
        assert_eq!(c("1+i"), Complex64::new(1.0, 1.0));
        assert_eq!(c("i"), Complex64::new(0.0, 1.0));
        assert_eq!(c("1e-3+2e+1i"), Complex64::new(1e-3, 20.0));
        assert!(parse_complex("1+2j").is_none());
    }
}
