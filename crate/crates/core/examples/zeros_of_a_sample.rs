//! Draw one Gaussian entire function, locate its zeros in a disk and count
//! them three ways: root finder, argument principle and Jensen's formula.
//!
//! cargo run --release --example zeros_of_a_sample -- [seed]

use randfun::sampling::sample;
use randfun::zeros::{argument_principle_count, find_zeros_disk, jensen_n, sector_histogram};
use randfun::{CoefficientSequence, EnsembleSpec, SampleOptions};

fn main() -> randfun::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let r = 3.0;
    let s = sample(&CoefficientSequence::Gef, &EnsembleSpec::gaussian(seed), 0, &SampleOptions::new(r, 1e-12))?;
    println!("degree {} (log tail bound {:.2})", s.degree, s.tail_log_bound);

    let zs = find_zeros_disk(&s, r)?;
    for root in &zs.roots {
        println!("  z = {:+.6} {:+.6}i  |z| = {:.6}", root.z.re, root.z.im, root.z.norm());
    }
    println!("root finder: {} zeros (expected r² = {})", zs.count(), r * r);
    println!("argument principle: {}", argument_principle_count(&s, r)?);
    println!("Jensen N(r): quadrature {:.9}, from roots {:.9}", jensen_n(&s, r)?, zs.jensen_sum());
    println!("zeros per quarter: {:?}", sector_histogram(&zs, 4));
    Ok(())
}
