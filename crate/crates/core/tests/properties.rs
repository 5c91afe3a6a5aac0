//! Property tests for the growth, sampling, zero and covariance layers.

use std::f64::consts::PI;

use proptest::prelude::*;
use randfun::covariance::{build_covariance, circulant_eigenvalues, det_sigma_lower_check, CircleConfiguration};
use randfun::growth::{
    b_n, dominant_set, edelman_kostlan, growth_profile, log_sigma_sq, n_delta_set, s_log_deriv, sigma,
};
use randfun::sampling::sample;
use randfun::zeros::{argument_principle_count, find_zeros_disk, jensen_n};
use randfun::{CoefficientSequence, Complex64, EnsembleSpec, SampleOptions, SeriesSample, ZeroSet};

fn any_seq() -> impl Strategy<Value = CoefficientSequence> {
    prop_oneof![
        Just(CoefficientSequence::Gef),
        Just(CoefficientSequence::Lacunary),
        (0.3f64..2.0).prop_map(|a| CoefficientSequence::gamma_type(a).unwrap()),
        (0.2f64..2.0).prop_map(|a| CoefficientSequence::gauss_squared(a).unwrap()),
        prop::collection::vec(0.0f64..3.0, 1..12).prop_map(|v| CoefficientSequence::explicit(v).unwrap()),
    ]
}

/// Pairs each root of `a` with its nearest root in `b` after mapping.
fn max_displacement(a: &ZeroSet, b: &ZeroSet, map: impl Fn(Complex64) -> Complex64) -> f64 {
    a.roots
        .iter()
        .map(|x| {
            let y = map(x.z);
            b.roots.iter().map(|w| (w.z - y).norm()).fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn gef_sample(seed: u64, r: f64) -> SeriesSample {
    sample(&CoefficientSequence::Gef, &EnsembleSpec::gaussian(seed), 0, &SampleOptions::new(r, 1e-14)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn growth_monotone_in_r(seq in any_seq(), r1 in 0.05f64..6.0, f in 1.0f64..3.0) {
        let r2 = r1 * f;
        let (p1, p2) = (growth_profile(&seq, r1).unwrap(), growth_profile(&seq, r2).unwrap());
        prop_assert!(p1.n_count <= p2.n_count);
        prop_assert!(p1.m_weight <= p2.m_weight);
        prop_assert!(p1.big_s <= p2.big_s);
        prop_assert!(sigma(&seq, r1).unwrap() <= sigma(&seq, r2).unwrap());
    }

    #[test]
    fn n_delta_is_dominant_set_at_shifted_radius(seq in any_seq(), r in 0.2f64..5.0, d in 0.0f64..1.0) {
        // b_n(r e^{∓δ}) = b_n(r) ∓ δ
        prop_assert_eq!(n_delta_set(&seq, r, -d).unwrap(), dominant_set(&seq, r * (-d).exp()).unwrap());
        prop_assert_eq!(n_delta_set(&seq, r, d).unwrap(), dominant_set(&seq, r * d.exp()).unwrap());
    }

    #[test]
    fn b_n_membership(seq in any_seq(), r in 0.2f64..5.0, d in 0.01f64..1.0) {
        let set = n_delta_set(&seq, r, -d).unwrap();
        for n in set.iter().copied().filter(|&n| n > 0) {
            prop_assert!(b_n(&seq, n, r).unwrap() >= d - 1e-12);
        }
    }

    #[test]
    fn gef_closed_forms(r in 0.1f64..6.0) {
        let g = CoefficientSequence::Gef;
        prop_assert!((log_sigma_sq(&g, r).unwrap() - r * r).exp_m1().abs() < 1e-12);
        prop_assert!((s_log_deriv(&g, r).unwrap() - r * r).abs() < 1e-10 * (r * r).max(1.0));
    }

    #[test]
    fn edelman_kostlan_is_s(seq in any_seq(), r in 0.1f64..5.0) {
        let (a, b) = (edelman_kostlan(&seq, r).unwrap(), s_log_deriv(&seq, r).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) + 1e-300, "{} vs {}", a, b);
    }

    #[test]
    fn unimodular_draws(seed in any::<u64>(), trial in 0u64..1000) {
        for ens in [EnsembleSpec::rademacher(seed), EnsembleSpec::steinhaus(seed)] {
            for x in ens.draw(trial, 40) {
                prop_assert!((x.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn draws_reproducible(seed in any::<u64>(), trial in 0u64..1000, r in 0.5f64..4.0) {
        let seq = CoefficientSequence::Gef;
        let opts = SampleOptions::new(r, 1e-12);
        let a = sample(&seq, &EnsembleSpec::gaussian(seed), trial, &opts).unwrap();
        let b = sample(&seq, &EnsembleSpec::gaussian(seed), trial, &opts).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn roots_rotate_with_coefficients(seed in 0u64..10_000, phi in 0.0f64..(2.0 * PI)) {
        let r = 2.5;
        let s = gef_sample(seed, r);
        let mut t = s.clone();
        for (n, x) in t.xi.iter_mut().enumerate() {
            *x *= Complex64::from_polar(1.0, n as f64 * phi);
        }
        let (a, b) = (find_zeros_disk(&s, r).unwrap(), find_zeros_disk(&t, r).unwrap());
        prop_assert_eq!(a.count(), b.count());
        // f(e^{iφ}z) vanishes at e^{−iφ}w
        let d = max_displacement(&a, &b, |z| z * Complex64::from_polar(1.0, -phi));
        prop_assert!(d < 1e-9 * r, "displacement {}", d);
    }

    #[test]
    fn roots_scale_with_coefficients(seed in 0u64..10_000, t in 0.5f64..2.0) {
        let r = 2.5;
        let s = gef_sample(seed, r);
        let mut u = s.clone();
        for (n, la) in u.log_a.iter_mut().enumerate() {
            *la += n as f64 * t.ln();
        }
        u.r_max = r / t;
        let (a, b) = (find_zeros_disk(&s, r).unwrap(), find_zeros_disk(&u, r / t).unwrap());
        prop_assert_eq!(a.count(), b.count());
        let d = max_displacement(&a, &b, |z| z / t);
        prop_assert!(d < 1e-10 * r / t, "displacement {}", d);
    }

    #[test]
    fn three_counts_agree(seed in 0u64..100_000) {
        let s = gef_sample(seed, 2.0);
        let z = find_zeros_disk(&s, 2.0).unwrap();
        for r in [1.0, 2.0] {
            let inner = z.within(r);
            prop_assert_eq!(inner.count(), argument_principle_count(&s, r).unwrap());
            prop_assert!((jensen_n(&s, r).unwrap() - inner.jensen_sum()).abs() < 1e-6);
        }
    }

    #[test]
    fn covariance_rotation_invariant(
        angles in prop::collection::vec(0.0f64..(2.0 * PI), 2..7),
        rho in 0.3f64..3.0,
        phi in 0.0f64..(2.0 * PI),
    ) {
        let mut sorted = angles.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assume!(sorted.windows(2).all(|w| w[1] - w[0] > 1e-3));
        let cfg = CircleConfiguration::new(rho, angles).unwrap();
        let seq = CoefficientSequence::Gef;
        let a = build_covariance(&seq, &cfg).unwrap();
        let b = build_covariance(&seq, &cfg.rotated(phi)).unwrap();
        // angles are stored sorted in [0, 2π), so match points by position
        let turned = cfg.rotated(phi);
        let idx: Vec<usize> = cfg
            .angles
            .iter()
            .map(|x| {
                let target = Complex64::from_polar(1.0, x + phi);
                (0..turned.n_points())
                    .min_by(|&i, &j| {
                        let di = (Complex64::from_polar(1.0, turned.angles[i]) - target).norm();
                        let dj = (Complex64::from_polar(1.0, turned.angles[j]) - target).norm();
                        di.total_cmp(&dj)
                    })
                    .unwrap()
            })
            .collect();
        let scale = a.get(0, 0).norm();
        for j in 0..a.n() {
            for k in 0..a.n() {
                prop_assert!((a.get(j, k) - b.get(idx[j], idx[k])).norm() < 1e-12 * scale);
            }
        }
    }

    #[test]
    fn circulant_spectrum_matches_dense(
        n in prop::sample::select(vec![2usize, 4, 8, 16]),
        rho in 0.3f64..2.5,
        gamma in any::<bool>(),
    ) {
        let seq = if gamma { CoefficientSequence::gamma_type(0.5).unwrap() } else { CoefficientSequence::Gef };
        let mut c = circulant_eigenvalues(&seq, rho, n).unwrap();
        c.sort_by(f64::total_cmp);
        let d = build_covariance(&seq, &CircleConfiguration::equispaced(rho, n).unwrap()).unwrap().eigenvalues();
        for (x, y) in c.iter().zip(&d) {
            prop_assert!((x - y).abs() <= 1e-9 * c[n - 1]);
        }
    }

    #[test]
    fn projection_only_reduces_determinant(r in 1.0f64..1.9, seed in 0u64..1000) {
        let c = det_sigma_lower_check(&CoefficientSequence::Gef, r, 200, seed).unwrap();
        prop_assume!(c.n <= 6);
        prop_assert!(c.log_det >= c.log_det_projected - 1e-9, "{:?}", c);
    }
}

#[test]
fn gaussian_moments() {
    let ens = EnsembleSpec::gaussian(5);
    let n = 100_000;
    let xs: Vec<Complex64> = (0..n as u64).map(|t| ens.draw_one(t, 3)).collect();
    let mean: Complex64 = xs.iter().sum::<Complex64>() / n as f64;
    let second = xs.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
    let k = (n as f64).sqrt();
    assert!(mean.norm() < 4.0 / k, "{mean}");
    assert!((second - 1.0).abs() < 4.0 * 2f64.sqrt() / k, "{second}");
}

/// Fixed phases e^{iθ_n} on the coefficients leave the zero-count law alone.
#[test]
fn gaussian_phase_invariance() {
    let r = 2.0;
    let trials = 400u64;
    let ens = EnsembleSpec::gaussian(17);
    let opts = SampleOptions::new(r, 1e-12);
    let phase_sets: [fn(usize) -> f64; 4] = [|_| 0.0, |n| n as f64, |n| (n * n) as f64 * 0.7, |n| if n % 2 == 1 { PI } else { 0.0 }];
    for phase in phase_sets {
        let counts: Vec<f64> = (0..trials)
            .map(|t| {
                let mut s = sample(&CoefficientSequence::Gef, &ens, t, &opts).unwrap();
                for (n, x) in s.xi.iter_mut().enumerate() {
                    *x *= Complex64::from_polar(1.0, phase(n));
                }
                argument_principle_count(&s, r).unwrap() as f64
            })
            .collect();
        let mean = counts.iter().sum::<f64>() / trials as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (trials as f64 - 1.0);
        let se = (var / trials as f64).sqrt();
        assert!((mean - 4.0).abs() <= 3.0 * se, "mean {mean} ± {se}");
    }
}
