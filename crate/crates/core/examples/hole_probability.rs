//! Monte Carlo hole probability of the Gaussian entire function next to the
//! growth-based bounds S + C√m log m and S − C n log S.
//!
//! cargo run --release --example hole_probability -- [trials]

use randfun::covariance::hole_bound_pair;
use randfun::experiments::{exp_hole_mc, HoleOptions};
use randfun::{CoefficientSequence, EnsembleSpec};

fn main() -> randfun::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let seq = CoefficientSequence::Gef;
    let opts = HoleOptions::new(vec![0.25, 0.5, 0.75, 1.0], trials);
    let rep = exp_hole_mc(&seq, &EnsembleSpec::gaussian(1), &opts)?;
    for c in &rep.checks {
        println!("[{}] {}: {}", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail);
    }
    println!("{}", serde_json::to_string_pretty(&rep.summary["per_radius"]).unwrap());

    // the bound pair only makes sense once several terms dominate
    for r in [3.0, 5.0, 8.0] {
        let b = hole_bound_pair(&seq, r, 1.0, 1.0)?;
        println!("r = {r}: {:.2} ≤ −log P ≤ {:.2}  (S = {:.2})", b.lower, b.upper, b.big_s);
    }
    Ok(())
}
