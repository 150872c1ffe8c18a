mod common;

use proptest::prelude::*;
use quasi1d::model::{erfcx, transverse_mode, EffectivePotential};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn closed_form_matches_radial_integral() {
    for eps in [5.0, 30.0, 100.0] {
        let u = EffectivePotential::new(eps).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=80 {
            let x = 0.25 * i as f64;
            let oracle = common::effective_interaction_integral(x, eps);
            worst = worst.max(((u.eval(x) - oracle) / oracle).abs());
        }
        assert!(worst < 1e-8, "ε = {eps}: relative deviation {worst:e}");
    }
}

#[test]
fn value_at_origin_and_half() {
    let u = EffectivePotential::new(30.0).unwrap();
    assert!((u.eval(0.0) - (15.0 * PI).sqrt()).abs() < 1e-12);
    assert!((u.eval(0.0) - 6.8647).abs() < 1e-4);
    let oracle = common::effective_interaction_integral(0.5, 30.0);
    assert!(((u.eval(0.5) - oracle) / oracle).abs() < 1e-8);
    assert!(((u.eval(10.0) - 0.1) / 0.1).abs() < 1e-3);
}

#[test]
fn scaling_identity_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let unit = EffectivePotential::new(1.0).unwrap();
    for _ in 0..100 {
        let eps: f64 = 10f64.powf(rng.gen_range(-1.0..3.0));
        let x: f64 = rng.gen_range(-30.0..30.0);
        let u = EffectivePotential::new(eps).unwrap();
        let lhs = u.eval(x);
        let rhs = eps.sqrt() * unit.eval(eps.sqrt() * x);
        assert!(((lhs - rhs) / rhs).abs() < 1e-12, "ε={eps} x={x}: {lhs} vs {rhs}");
    }
}

#[test]
fn monotone_bounded_and_coulombic() {
    for eps in [0.5, 5.0, 30.0, 100.0, 1e4] {
        let u = EffectivePotential::new(eps).unwrap();
        let peak = (eps * PI / 2.0).sqrt();
        let mut prev = u.eval(0.0);
        assert_eq!(prev, peak);
        let mut x = 1e-6;
        while x < 1e6 {
            let v = u.eval(x);
            assert!(v > 0.0 && v < prev && v.is_finite(), "ε={eps} x={x}");
            if (eps / 2.0).sqrt() * x >= 6.0 {
                assert!((x * v - 1.0).abs() <= 2.0 / (eps * x * x), "tail at ε={eps} x={x}");
            }
            prev = v;
            x *= 1.1;
        }
    }
}

#[test]
fn erfcx_does_not_overflow() {
    for t in [0.0, 1.0, 26.0, 30.0, 1e3, 1e6] {
        let v = erfcx(t);
        assert!(v.is_finite() && v > 0.0);
    }
    assert!((erfcx(1e6) * 1e6 * PI.sqrt() - 1.0).abs() < 1e-12);
}

#[test]
fn transverse_mode_normalization() {
    assert!((transverse_mode(0.0, 1.0).unwrap() - PI.powf(-0.25)).abs() < 1e-15);
    assert!((transverse_mode(0.0, 30.0).unwrap() - (30.0 / PI).powf(0.25)).abs() < 1e-14);
    let f = |z: f64| transverse_mode(z, 30.0).unwrap().powi(2);
    let norm = common::adaptive_simpson(&f, -3.0, 3.0, 1e-15);
    assert!((norm - 1.0).abs() < 1e-12);
    assert!(transverse_mode(0.0, 0.0).is_err());
}

proptest! {
    #[test]
    fn even_in_separation(x in -50.0f64..50.0, eps in 0.1f64..1e3) {
        let u = EffectivePotential::new(eps).unwrap();
        prop_assert_eq!(u.eval(x), u.eval(-x));
        prop_assert!(u.eval(x) <= u.peak());
    }
}
