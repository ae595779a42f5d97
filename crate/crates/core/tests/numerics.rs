use proptest::prelude::*;
use secant_core::bound::eval_g;
use secant_core::numerics::{find_root, integrate, QuadratureSpec, RootSpec};
use secant_core::Error;

fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

#[test]
fn whole_line_integral_matches_midpoint_oracle() {
    let f = |t: f64| (1.0 + t * t).sqrt() * t * t * (-t * t).exp();
    let oracle = midpoint(f, -12.0, 12.0, 1_000_000);
    let q = integrate(f, f64::NEG_INFINITY, f64::INFINITY, &QuadratureSpec::default()).unwrap();
    assert!((q.value - oracle).abs() < 1e-10, "{} vs {oracle}", q.value);
    let g = eval_g(1.0, &QuadratureSpec::default()).unwrap();
    assert!((g - oracle).abs() < 1e-10);
}

#[test]
fn root_examples() {
    let spec = RootSpec::default();
    let r = find_root(|x| x * x - 2.0, 1.0, 2.0, &spec).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-12);
    assert!(find_root(|x| x, -1.0, 1.0, &spec).unwrap().abs() < 1e-12);

    // plain bisection as an independent oracle
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid.cos() > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = find_root(f64::cos, 1.0, 2.0, &spec).unwrap();
    assert!((r - lo).abs() < 1e-12);
    assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn root_without_sign_change_is_rejected() {
    let err = find_root(|x| x * x + 1.0, -1.0, 1.0, &RootSpec::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidBracket { .. }));
}

#[test]
fn repeated_calls_are_bit_identical() {
    let spec = QuadratureSpec::default();
    let f = |t: f64| (2.0 + t * t).sqrt() * t * t * (-t * t).exp();
    let a = integrate(f, 0.0, f64::INFINITY, &spec).unwrap();
    let b = integrate(f, 0.0, f64::INFINITY, &spec).unwrap();
    assert_eq!(a.value.to_bits(), b.value.to_bits());
    let r1 = find_root(|x| x.exp() - 3.0, 0.0, 2.0, &RootSpec::default()).unwrap();
    let r2 = find_root(|x| x.exp() - 3.0, 0.0, 2.0, &RootSpec::default()).unwrap();
    assert_eq!(r1.to_bits(), r2.to_bits());
}

fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

proptest! {
    #[test]
    fn integration_is_linear(
        p in prop::collection::vec(-3.0f64..3.0, 1..6),
        q in prop::collection::vec(-3.0f64..3.0, 1..6),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        b in 0.1f64..3.0,
    ) {
        let spec = QuadratureSpec::default();
        let ip = integrate(|x| poly(&p, x), 0.0, b, &spec).unwrap().value;
        let iq = integrate(|x| poly(&q, x), 0.0, b, &spec).unwrap().value;
        let combined = integrate(|x| alpha * poly(&p, x) + beta * poly(&q, x), 0.0, b, &spec).unwrap().value;
        prop_assert!((combined - (alpha * ip + beta * iq)).abs() <= 10.0 * spec.abs_tol);
    }

    #[test]
    fn root_stays_in_bracket(shift in -0.9f64..0.9, lo in -5.0f64..-1.0, hi in 1.0f64..5.0) {
        let r = find_root(|x| (x - shift).powi(3) + 0.1 * (x - shift), lo, hi, &RootSpec::default()).unwrap();
        prop_assert!(r >= lo && r <= hi);
        prop_assert!((r - shift).abs() < 1e-9);
    }
}
