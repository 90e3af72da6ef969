//! Quadrature against integrals with known values, and agreement between
//! independent routes to the same overlap.

use std::f64::consts::PI;

use indist_core::oracle::{frequency_overlap, integrate, time_overlap, time_overlap_direct, Domain};
use indist_core::{k_analytic, k_numeric, Lineshape, MixedPhotonState, QuadratureConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Case {
    f: Box<dyn Fn(f64) -> Complex64>,
    domain: Domain,
    exact: Complex64,
}

/// Shifted Gaussians under a carrier, Lorentzians, and exponentials on an
/// interval, with random parameters.
fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let c: f64 = rng.gen_range(-5.0..5.0);
    let s: f64 = 10f64.powf(rng.gen_range(-1.0..1.0));
    match rng.gen_range(0..3) {
        0 => {
            let k: f64 = rng.gen_range(0.0..3.0) / s;
            let exact = Complex64::from_polar(s * (2.0 * PI).sqrt() * (-0.5 * k * k * s * s).exp(), k * c);
            let f = move |x: f64| Complex64::from_polar((-0.5 * ((x - c) / s).powi(2)).exp(), k * x);
            Case {
                f: Box::new(f),
                domain: Domain::line_truncated(c, s),
                exact,
            }
        }
        1 => {
            let exact = Complex64::new(PI / s, 0.0);
            let f = move |x: f64| Complex64::new(1.0 / ((x - c).powi(2) + s * s), 0.0);
            Case {
                f: Box::new(f),
                domain: Domain::line_mapped(c, s),
                exact,
            }
        }
        _ => {
            let (a, b) = (c, c + rng.gen_range(0.1..10.0));
            let r: f64 = rng.gen_range(-3.0..3.0);
            let exact = Complex64::new(((r * b).exp() - (r * a).exp()) / r, 0.0);
            Case {
                f: Box::new(move |x: f64| Complex64::new((r * x).exp(), 0.0)),
                domain: Domain::Interval { a, b },
                exact,
            }
        }
    }
}

#[test]
fn error_estimates_are_honest() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = QuadratureConfig::default().with_rel_tol(1e-8);
    let mut honest = 0;
    for _ in 0..100 {
        let case = random_case(&mut rng);
        let q = integrate(&case.f, case.domain, &[], &cfg).unwrap();
        let err = (q.value - case.exact).norm();
        // the estimate cannot resolve below double-precision roundoff
        let floor = 8.0 * f64::EPSILON * case.exact.norm();
        if err <= 3.0 * q.error + floor {
            honest += 1;
        }
        assert!(err <= 1e-8 * case.exact.norm() + 1e-12, "{:?}: {err}", case.domain);
    }
    assert!(honest >= 99, "{honest}/100");
}

#[test]
fn time_and_frequency_routes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = QuadratureConfig::default().with_rel_tol(1e-10);
    for i in 0..100 {
        let w: f64 = 10f64.powf(rng.gen_range(-0.5..0.5));
        let ls = if i % 2 == 0 {
            Lineshape::lorentzian(w)
        } else {
            Lineshape::gaussian(w)
        }
        .unwrap();
        let wi: f64 = rng.gen_range(-2.0..2.0) * w;
        let wj: f64 = rng.gen_range(-2.0..2.0) * w;
        let t = time_overlap(&ls, wi, wj, 0.0, &cfg).unwrap().value;
        let f = frequency_overlap(&ls, wi, wj, &cfg).unwrap().value;
        assert!((t - f).norm() < 1e-8, "{ls:?} {wi} {wj}: {t} vs {f}");
        let tau: f64 = rng.gen_range(-2.0..2.0) / w;
        let a = time_overlap(&ls, wi, wj, tau, &cfg).unwrap().value;
        let b = time_overlap_direct(&ls, wi, wj, tau, &cfg).unwrap().value;
        assert!((a - b).norm() < 1e-8, "{ls:?} {wi} {wj} {tau}: {a} vs {b}");
    }
}

/// `|⟨ψ_ω|ψ_ω'⟩|²` is the closed-form pure-state overlap.
#[test]
fn pure_overlaps_match_closed_form() {
    let cfg = QuadratureConfig::default();
    for ls in [Lineshape::lorentzian(1.3).unwrap(), Lineshape::gaussian(0.7).unwrap()] {
        for d in [0.0, 0.4, 2.5] {
            let q = time_overlap(&ls, 0.2, 0.2 + d, 0.0, &cfg).unwrap().value.norm_sqr();
            assert!((q - ls.tl_overlap_sq(0.2, 0.2 + d)).abs() < 1e-10, "{ls:?} {d}");
        }
    }
}

#[test]
fn numeric_k_matches_closed_form() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-8);
    let states = [
        MixedPhotonState::lorentzian(1.0, 0.5, 0.0).unwrap(),
        MixedPhotonState::lorentzian(0.3, 2.0, 1.0).unwrap(),
        MixedPhotonState::gaussian(1.0, 3.0, 0.0).unwrap(),
        MixedPhotonState::gaussian(2.0, 0.0, -1.0).unwrap(),
    ];
    for s in &states {
        for tau in [0.0, 0.7, -2.0] {
            let n = k_numeric(s, tau, &cfg).unwrap();
            let a = k_analytic(s, tau).value;
            assert!(
                (n.value - a).abs() <= 1e-7,
                "{} tau={tau}: {} vs {a}",
                s.describe(),
                n.value
            );
            assert!((n.value - a).abs() <= 3.0 * n.error_estimate + 1e-12);
        }
    }
}
