//! Deterministic examples: real zeros of Σ ±e^{−αn²}zⁿ and the zero-count
//! jumps of a lacunary series across its exceptional windows.
//!
//! cargo run --release --example exceptional_examples

use randfun::experiments::{exp_lacunary_discrepancy, exp_real_zeros, lacunary_delta, LacunaryOptions, RealZerosOptions};

fn main() -> randfun::Result<()> {
    let rz = exp_real_zeros(&RealZerosOptions::new(1.1, 3, 10))?;
    println!("real zeros, α = 1.1, 1024 sign patterns: passed = {:?}", rz.passed());
    for c in &rz.checks {
        println!("  {}: {}", c.name, c.detail);
    }

    let k = 6;
    let lac = exp_lacunary_discrepancy(&LacunaryOptions::new(k))?;
    println!("lacunary, k = {k}, δ = {:.5}: passed = {:?}", lacunary_delta(k), lac.passed());
    for c in &lac.checks {
        println!("  {}: {}", c.name, c.detail);
    }
    Ok(())
}
