use secant_core::bound::{oscillator_bound, oscillator_wavefunctions, BoundSettings};
use secant_core::momentum::{
    certify_hypotheses, eval_i, eval_w, fit_tail, sine_transform, sine_transform_default, w_profile, KGridSpec,
};
use secant_core::numerics::{integrate, QuadratureSpec, RootSpec};
use secant_core::radial::ground_state;
use secant_core::{Error, MomentumWavefunction, Potential, RadialProblem, RadialSolution};

const SQRT_PI: f64 = 1.772_453_850_905_516;

fn gaussian_source(r_max: f64, n: usize) -> RadialSolution {
    let norm = (4.0 / std::f64::consts::PI).powf(0.25);
    let grid: Vec<f64> = (0..n).map(|i| r_max * i as f64 / (n - 1) as f64).collect();
    let u = grid.iter().map(|r| norm * r * (-0.5 * r * r).exp()).collect();
    RadialSolution {
        eigenvalue: 3.0,
        grid,
        u,
        node_count: 0,
    }
}

fn linear_source() -> RadialSolution {
    let problem = RadialProblem::with_auto_domain(1.0, Potential::power(1.0, 1.0), 4000).unwrap();
    ground_state(&problem, &RootSpec::default()).unwrap()
}

/// Independent 4-point Lagrange interpolation of the source samples.
fn cubic_at(x: &[f64], y: &[f64], t: f64) -> f64 {
    let h = x[1] - x[0];
    let i = ((t - x[0]) / h).floor() as usize;
    let s = i.saturating_sub(1).min(x.len() - 4);
    (0..4)
        .map(|j| {
            let l: f64 = (0..4)
                .filter(|&m| m != j)
                .map(|m| (t - x[s + m]) / (x[s + j] - x[s + m]))
                .product();
            l * y[s + j]
        })
        .sum()
}

#[test]
fn gaussian_is_self_reciprocal() {
    let source = gaussian_source(12.0, 4801);
    let k: Vec<f64> = (0..=400).map(|i| i as f64 * 0.025).collect();
    let phi = sine_transform(&source, &k).unwrap();
    let norm = (4.0 / std::f64::consts::PI).powf(0.25);
    let worst = k
        .iter()
        .zip(&phi.phi)
        .map(|(&k, p)| (p - norm * k * (-0.5 * k * k).exp()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
    assert!(phi.tail.is_rapid());
}

#[test]
fn parseval_for_solved_state() {
    let source = linear_source();
    let phi = sine_transform_default(&source).unwrap();
    assert_eq!(phi.phi[0], 0.0);
    assert!((phi.norm() - 1.0).abs() < 1e-6, "{}", phi.norm());
}

#[test]
fn transform_matches_fine_trapezoid() {
    let source = linear_source();
    let phi = sine_transform(&source, &[0.5, 1.0, 2.0, 3.0, 4.0]).unwrap();
    let n = 1_000_000;
    let r_max = source.r_max();
    let h = r_max / n as f64;
    let sum: f64 = (1..n)
        .map(|i| {
            let r = i as f64 * h;
            (1.0 * r).sin() * cubic_at(&source.grid, &source.u, r)
        })
        .sum();
    let oracle = (2.0 / std::f64::consts::PI).sqrt() * h * sum;
    assert!((phi.phi[1] - oracle).abs() < 1e-7, "{} vs {oracle}", phi.phi[1]);
}

#[test]
fn round_trip_recovers_source() {
    let source = gaussian_source(12.0, 2401);
    let k = KGridSpec {
        linear_step: 0.01,
        linear_end: 20.0,
        ratio: 1.05,
        k_max: 20.0,
    }
    .build();
    let phi = sine_transform(&source, &k).unwrap();
    let worst = source
        .grid
        .iter()
        .zip(&source.u)
        .filter(|(r, _)| **r <= 6.0)
        .map(|(&r, &u)| (phi.inverse_at(r) - u).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-5, "{worst}");
}

#[test]
fn aliasing_is_rejected() {
    let source = gaussian_source(10.0, 101);
    let err = sine_transform(&source, &[1.0, 11.0]).unwrap_err();
    assert!(matches!(err, Error::AliasedTransform { .. }));
}

#[test]
fn tail_exponent_is_recovered() {
    let k: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.5).collect();
    let phi: Vec<f64> = k.iter().map(|k| k / (1.0 + k * k).powi(2)).collect();
    let fit = fit_tail(&k, &phi);
    assert!((fit.exponent - 3.0).abs() < 1e-3, "{fit:?}");
}

#[test]
fn coulomb_like_tail_diverges() {
    let k: Vec<f64> = (0..=2000).map(|i| i as f64 * 0.5).collect();
    let phi: Vec<f64> = k.iter().map(|k| k / (1.0 + k * k).powi(2)).collect();
    let phi = MomentumWavefunction::from_samples(k, phi).unwrap();
    let err = eval_w(f64::INFINITY, 1.0, 0.25, &phi).unwrap_err();
    assert!(matches!(err, Error::DivergentTail { .. }));
    // finite k stays defined
    assert!(eval_w(5.0, 1.0, 0.25, &phi).unwrap().is_finite());
}

fn gaussian_phi(beta: f64) -> MomentumWavefunction {
    let k: Vec<f64> = (0..=8000).map(|i| i as f64 * 0.0025).collect();
    MomentumWavefunction::gaussian(k, beta.sqrt()).unwrap()
}

#[test]
fn w_basic_values() {
    let phi = gaussian_phi(0.2506);
    assert_eq!(eval_w(0.0, 1.0, 0.2506, &phi).unwrap(), 0.0);
    // the four published digits leave W(∞) at about 1.7e-3 of its peak
    let profile = w_profile(1.0, 0.2506, &phi).unwrap();
    assert!(profile.w_infinity.abs() <= 2e-3 * profile.max());
    let solved = oscillator_bound(1.0, 1.0, &BoundSettings::default()).unwrap();
    let phi = gaussian_phi(solved.beta);
    let profile = w_profile(1.0, solved.beta, &phi).unwrap();
    assert!(
        profile.w_infinity.abs() <= 1e-8 * profile.max(),
        "{}",
        profile.w_infinity
    );
}

#[test]
fn tangent_slope_w_matches_gaussian_moments() {
    let (m, beta) = (1.0f64, 0.5f64);
    let w = beta.sqrt();
    let phi = gaussian_phi(beta);
    let got = eval_w(f64::INFINITY, m, beta, &phi).unwrap();

    // φ_s t = N t² e^{−w t²/2}; integrate the kinetic term by quadrature and
    // the polynomial terms by Gaussian moments.
    let n = (4.0 * w.powf(1.5) / SQRT_PI).sqrt();
    let a = 0.5 * w;
    let spec = QuadratureSpec::with_tolerance(1e-13);
    let root = integrate(
        |t| (m * m + t * t).sqrt() * t * t * (-a * t * t).exp(),
        0.0,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
    .value;
    let m2 = SQRT_PI / (4.0 * a.powf(1.5));
    let m4 = 3.0 * SQRT_PI / (8.0 * a.powf(2.5));
    let oracle = n * (root - m * m2 - beta * m4);
    assert!(got < 0.0);
    assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
}

#[test]
fn identity_for_equal_states() {
    let phi = gaussian_phi(0.3);
    let i = eval_i(&phi, &phi, 1.0, 0.3).unwrap();
    assert!(i.relative_disagreement() < 1e-6, "{i:?}");
    assert!((i.overlap - 1.0).abs() < 1e-8);
}

#[test]
fn inequality_integral_gives_energy_gap() {
    let settings = BoundSettings::default();
    for (m, gap, tol) in [(1.0, 2.6640 - 2.5019, 2e-3), (10.0, 10.6619 - 10.6539, 1e-3)] {
        let report = oscillator_bound(m, 1.0, &settings).unwrap();
        let (phi, phi_s) = oscillator_wavefunctions(m, 1.0, report.beta, &settings).unwrap();
        let i = eval_i(&phi, &phi_s, m, report.beta).unwrap();
        assert!(i.i_direct >= 0.0);
        assert!(i.relative_disagreement() < 1e-6, "m={m}: {i:?}");
        assert!((i.energy_gap() - gap).abs() < tol, "m={m}: {}", i.energy_gap());
    }
}

#[test]
fn mismatched_grids_are_rejected() {
    let a = gaussian_phi(0.3);
    let b = MomentumWavefunction::gaussian((0..=100).map(|i| i as f64 * 0.1).collect(), 0.5).unwrap();
    assert!(matches!(eval_i(&a, &b, 1.0, 0.3), Err(Error::GridMismatch(_))));
}

#[test]
fn certification_examples() {
    let g = gaussian_phi(1.0);
    assert!(certify_hypotheses(&g).passes());

    let k: Vec<f64> = (1..=3000).map(|i| i as f64 * 0.001).collect();
    let phi: Vec<f64> = k.iter().map(|k| k * (1.0 - k) * (-k * k).exp()).collect();
    let report = certify_hypotheses(&MomentumWavefunction::from_samples(k, phi).unwrap());
    assert!(!report.nodeless);

    let (phi, _) = oscillator_wavefunctions(1.0, 1.0, 0.2506, &BoundSettings::default()).unwrap();
    let report = certify_hypotheses(&phi);
    assert!(report.nodeless && report.phi_over_k_monotone, "{report:?}");
}

#[test]
fn flipped_sign_still_certifies() {
    let g = gaussian_phi(1.0);
    let flipped = MomentumWavefunction::from_samples(g.k_grid.clone(), g.phi.iter().map(|v| -v).collect()).unwrap();
    assert!(certify_hypotheses(&flipped).passes());
}
