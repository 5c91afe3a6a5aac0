//! Growth functionals of a few coefficient sequences, and the S(r)/r⁴ trend
//! of the Gaussian entire function toward e²/4.
//!
//! cargo run --release --example growth_functionals

use randfun::growth::{growth_profile, hayman_window, log_sigma_sq, s_log_deriv};
use randfun::CoefficientSequence;

fn main() -> randfun::Result<()> {
    let gef = CoefficientSequence::Gef;
    println!("{:>6} {:>12} {:>10} {:>12} {:>5} {:>7} {:>10}", "r", "log σ²", "s", "S", "n", "m", "S/r⁴");
    for r in [0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let p = growth_profile(&gef, r)?;
        println!(
            "{r:>6} {:>12.6} {:>10.4} {:>12.4} {:>5} {:>7} {:>10.6}",
            log_sigma_sq(&gef, r)?,
            s_log_deriv(&gef, r)?,
            p.big_s,
            p.n_count,
            p.m_weight,
            p.big_s / r.powi(4)
        );
    }
    println!("e²/4 = {:.6}", std::f64::consts::E.powi(2) / 4.0);

    for spec in ["gamma:0.5", "gauss2:1.1", "lacunary", "holeblocks:2,1.5,3"] {
        let seq = CoefficientSequence::parse(spec)?;
        let r = 3.0;
        let p = growth_profile(&seq, r)?;
        println!(
            "{:<22} r = {r}: S = {:.4}, N(r) = {:?}, hayman window {}",
            seq.label(),
            p.big_s,
            p.n_set,
            hayman_window(&seq, r)?
        );
    }
    Ok(())
}
