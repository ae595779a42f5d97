use secant_core::numerics::RootSpec;
use secant_core::radial::{eigenvalue_converged, ground_state};
use secant_core::{Potential, RadialProblem};

const AIRY_ZERO: f64 = 2.338_107_410_459_767;

fn converged(a: f64, potential: Potential) -> f64 {
    let problem = RadialProblem::with_auto_domain(a, potential, 4000).unwrap();
    eigenvalue_converged(&problem, &RootSpec::default()).unwrap().eigenvalue
}

#[test]
fn linear_potential_reaches_airy_zero() {
    let e = converged(1.0, Potential::power(1.0, 1.0));
    assert!((e - 2.33811).abs() < 5e-6, "{e}");
}

#[test]
fn oscillator_scaling_oracle() {
    let a = 0.2506;
    let e = converged(a, Potential::power(1.0, 2.0));
    assert!((e - 3.0 * a.sqrt()).abs() < 1e-8 * e, "{e}");
}

#[test]
fn scaling_covariance_on_fixed_grid() {
    let spec = RootSpec::default();
    for (a, u) in [(1.0, 1.0), (0.7, 2.0)] {
        let base = RadialProblem::new(a, Potential::power(1.0, u), 12.0, 3000).unwrap();
        let e = ground_state(&base, &spec).unwrap().eigenvalue;
        for lambda in [0.5, 2.0] {
            let scaled = RadialProblem::new(lambda * a, Potential::power(lambda, u), 12.0, 3000).unwrap();
            let el = ground_state(&scaled, &spec).unwrap().eigenvalue;
            assert!(
                (el - lambda * e).abs() <= 1e-10 * el,
                "λ={lambda}: {el} vs {}",
                lambda * e
            );
        }
    }
}

#[test]
fn power_law_scaling() {
    for p in [1.0, 2.0] {
        let e1 = converged(1.0, Potential::power(1.0, p));
        for (a, c) in [(0.3, 1.7), (2.0, 0.4)] {
            let direct = converged(a, Potential::power(c, p));
            let predicted = a.powf(p / (p + 2.0)) * c.powf(2.0 / (p + 2.0)) * e1;
            assert!(
                (direct - predicted).abs() <= 1e-7 * predicted,
                "P={p}: {direct} vs {predicted}"
            );
        }
    }
}

#[test]
fn ground_state_shape() {
    let problem = RadialProblem::with_auto_domain(1.0, Potential::power(1.0, 1.0), 4000).unwrap();
    let s = ground_state(&problem, &RootSpec::default()).unwrap();
    assert_eq!(s.node_count, 0);
    assert_eq!(s.u[0], 0.0);
    // trapezoid normalization
    let h = s.step();
    let n = s.u.len();
    let norm = h * (s.u.iter().map(|v| v * v).sum::<f64>() - 0.5 * (s.u[0].powi(2) + s.u[n - 1].powi(2)));
    assert!((norm - 1.0).abs() < 1e-8);
    let peak = s.u.iter().cloned().fold(0.0, f64::max);
    assert!(s.u.iter().all(|&v| v >= -1e-10 * peak));
    assert!((s.eigenvalue - AIRY_ZERO).abs() < 1e-5);
    let rq = problem.rayleigh_quotient(&s);
    assert!((rq - s.eigenvalue).abs() < 1e-6 * s.eigenvalue);
}

#[test]
fn custom_potential_matches_builtin() {
    let spec = RootSpec::default();
    let builtin = RadialProblem::new(1.0, Potential::RelativisticKinetic { mass: 1.0 }, 12.0, 3000).unwrap();
    let custom = RadialProblem::new(1.0, Potential::custom(|r| (1.0 + r * r).sqrt()), 12.0, 3000).unwrap();
    let a = ground_state(&builtin, &spec).unwrap().eigenvalue;
    let b = ground_state(&custom, &spec).unwrap().eigenvalue;
    assert_eq!(a.to_bits(), b.to_bits());
    assert!((a - 2.6640).abs() < 5e-5);
}
