//! Covariance of the values at points of a circle: circulant eigenvalues,
//! the determinant lower bound, and the Vandermonde average.
//!
//! cargo run --release --example covariance_lemmas

use randfun::covariance::{
    build_covariance, circulant_eigenvalues, det_sigma_lower_check, vandermonde_average, vandermonde_grid_average,
    CircleConfiguration,
};
use randfun::CoefficientSequence;

fn main() -> randfun::Result<()> {
    let gef = CoefficientSequence::Gef;
    let (rho, n) = (1.0, 2);
    let lam = circulant_eigenvalues(&gef, rho, n)?;
    let dense = build_covariance(&gef, &CircleConfiguration::equispaced(rho, n)?)?.eigenvalues();
    println!("N = 2, ρ = 1: circulant {lam:?}, dense {dense:?}");
    println!("  2cosh 1 = {}, 2sinh 1 = {}", 2.0 * 1f64.cosh(), 2.0 * 1f64.sinh());

    for r in [2.0, 3.0] {
        let c = det_sigma_lower_check(&gef, r, 500, 3)?;
        println!("r = {r}: log det Σ = {:.4} ≥ S(r) = {:.4} at {} points: {}", c.log_det, c.s_r, c.n, c.ok);
    }

    let mc = vandermonde_average(&[1, 2, 3], 100_000, 11)?;
    let exact = vandermonde_grid_average(&[1, 2, 3], 5)?;
    println!("E|det A|² for columns 0..3: MC {:.3} ± {:.3}, grid {exact}", mc.mean, mc.std_err);
    Ok(())
}
