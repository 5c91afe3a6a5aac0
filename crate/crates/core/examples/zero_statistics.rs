//! Zero counts across many samples: concentration around s(r) for the
//! Gaussian ensemble, and angular equidistribution for random signs.
//!
//! cargo run --release --example zero_statistics

use randfun::experiments::{exp_equidistribution, exp_zero_concentration, ConcentrationOptions, EquidistributionOptions};
use randfun::{CoefficientSequence, EnsembleSpec};

fn main() -> randfun::Result<()> {
    let gef = CoefficientSequence::Gef;
    let conc = exp_zero_concentration(&gef, &EnsembleSpec::gaussian(5), &ConcentrationOptions::new(vec![2.0, 4.0], 200))?;
    let sect = exp_equidistribution(&gef, &EnsembleSpec::rademacher(5), &EquidistributionOptions::new(vec![2.0, 3.0, 4.0], 8, 100))?;
    for rep in [&conc, &sect] {
        println!("{}: passed = {:?}", rep.name, rep.passed());
        for c in &rep.checks {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}
