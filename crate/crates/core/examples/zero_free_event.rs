//! The explicit event that keeps the Gaussian entire function zero-free on
//! a disk: its exact probability, and samples drawn conditioned on it.
//!
//! cargo run --release --example zero_free_event

use randfun::sampling::{envelope_event_probability, sample_conditioned_on_omega, OmegaEvent};
use randfun::zeros::{argument_principle_count, find_zeros_disk};
use randfun::{CoefficientSequence, EnsembleSpec, SampleOptions};

fn main() -> randfun::Result<()> {
    let seq = CoefficientSequence::Gef;
    let r = 2.0;
    let p = envelope_event_probability(&seq, &EnsembleSpec::gaussian(0), r, None)?;
    println!(
        "r = {r}: log P = {:.2} = (i) {:.2} + (ii) {:.2} + (iii) {:.2} + (iv) {:.2}",
        p.total, p.log_p_i, p.log_p_ii, p.log_p_iii, p.log_p_iv
    );
    println!("−S(r) = {:.2}, realized C′ = {:.3}", -p.big_s, p.c_prime);

    let ev = OmegaEvent::new(&seq, r, None)?;
    let opts = SampleOptions::new(r, 1e-12);
    for trial in 0..5 {
        let s = sample_conditioned_on_omega(&seq, &ev, 42, trial, &opts)?;
        let zs = find_zeros_disk(&s, r)?;
        println!(
            "conditioned sample {trial}: in event {}, zeros {} / {}",
            ev.holds(&s),
            zs.count(),
            argument_principle_count(&s, r)?
        );
    }
    Ok(())
}
