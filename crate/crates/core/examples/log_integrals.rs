//! Logarithmic integrals on the circle: moments of ∫|log|g||, the g_N
//! family that defeats a uniform bound, and the Khinchin and Turán tools.
//!
//! cargo run --release --example log_integrals

use randfun::experiments::{
    exp_gn_sharpness, exp_khinchin, exp_log_moments, exp_turan_diagnostic, flat_profile, gn_l2_exact, KhinchinOptions,
    LogMomentOptions, TuranOptions,
};
use randfun::EnsembleSpec;

fn main() -> randfun::Result<()> {
    let (num, den) = gn_l2_exact(5)?;
    println!("∫|g_5|² = {num}/{den}");
    let reports = [
        exp_gn_sharpness(&[1, 5, 10, 20])?,
        exp_log_moments(&EnsembleSpec::rademacher(1), &LogMomentOptions::new(flat_profile(32), vec![1.0, 2.0, 4.0], 300))?,
        exp_khinchin(&EnsembleSpec::rademacher(2), &KhinchinOptions::new(vec![2.0, 4.0, 8.0], 64, 5000))?,
        exp_turan_diagnostic(3, &TuranOptions::new(2, 500))?,
    ];
    for rep in &reports {
        println!("{}: passed = {:?}", rep.name, rep.passed());
        for c in &rep.checks {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    Ok(())
}
