//! Three smaller studies: value distribution of a random series in the unit
//! disk, the smallest zero of Σ ±zⁿ/√n!, and the Taylor coefficients of
//! exp(z²/2 + βz) against their saddle-point asymptotics.
//!
//! cargo run --release --example unit_disk_and_limits

use randfun::experiments::{
    exp_coeff_asymptotics, exp_counterexample_r0, exp_kahane_range, AsymptoticsOptions, CounterexampleOptions,
    KahaneOptions,
};
use randfun::{Complex64, EnsembleSpec};

fn main() -> randfun::Result<()> {
    let kahane = KahaneOptions::harmonic(
        150,
        vec![0.5, 0.9, 0.99],
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)],
        20,
    );
    let reports = [
        exp_kahane_range(&EnsembleSpec::rademacher(4), &kahane)?,
        exp_counterexample_r0(&EnsembleSpec::rademacher(4), &CounterexampleOptions::new(2000, 60))?,
        exp_coeff_asymptotics(&AsymptoticsOptions::new(Complex64::new(1.0, 0.0), 400))?,
    ];
    for rep in &reports {
        println!("{}: passed = {:?}", rep.name, rep.passed());
        for c in &rep.checks {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    println!("r̂₀ = {:?}", reports[1].summary_f64("r0_hat"));
    Ok(())
}
