//! The secant lower bound `E_s = m + ground(β p² + V) ≤ E`.
//!
//! `β` is fixed by `W(∞) = 0`. For the harmonic oscillator the comparison
//! ground state is Gaussian and the condition reduces to a scalar equation
//! in `γ = (m⁴ β / 4c)^{1/4}`; for a general power law `c r^P` the unit
//! problem `p² + r^P` is solved once and rescaled for every trial `β`.

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::momentum::{
    certify_hypotheses, eval_w, sine_transform_default, w_profile, CertificationReport, MomentumWavefunction, WCheck,
    W_TAIL_REQUIRED,
};
use crate::numerics::{find_root, integrate, QuadratureSpec, RootSpec};
use crate::radial::{eigenvalue_converged, ground_state, Potential, RadialProblem, DEFAULT_POINTS};

pub const MIN_MASS: f64 = 1e-3;
/// Relative distance from the ends of `(0, 1/(2m))` at which the `β` scan starts.
const BETA_EDGE: f64 = 1e-6;
/// Tolerance for the `W`-profile grid checks.
pub const W_CHECK_TOLERANCE: f64 = 1e-8;
const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "exponent")]
pub enum PotentialFamily {
    /// `c r²`
    Oscillator,
    /// `c r`
    Linear,
    /// `c r^P`
    Power(f64),
}

impl PotentialFamily {
    pub fn exponent(&self) -> f64 {
        match self {
            PotentialFamily::Oscillator => 2.0,
            PotentialFamily::Linear => 1.0,
            PotentialFamily::Power(p) => *p,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PotentialFamily::Oscillator => "oscillator".into(),
            PotentialFamily::Linear => "linear".into(),
            PotentialFamily::Power(p) => format!("power({p})"),
        }
    }

    fn is_quadratic(&self) -> bool {
        self.exponent() == 2.0
    }
}

/// `H = sqrt(m² + p²) + c r^P`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub m: f64,
    pub c: f64,
    pub family: PotentialFamily,
}

impl ProblemSpec {
    pub fn new(m: f64, c: f64, family: PotentialFamily) -> Result<Self> {
        let spec = Self { m, c, family };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        require(self.m > 0.0 && self.m.is_finite(), || {
            format!("mass must satisfy m > 0, got {}", self.m)
        })?;
        require(self.c > 0.0 && self.c.is_finite(), || {
            format!("coupling must satisfy c > 0, got {}", self.c)
        })?;
        let p = self.family.exponent();
        require(p > 0.0 && p.is_finite(), || {
            format!("power must satisfy P > 0 (finite, confining potential), got {p}")
        })?;
        if self.m < MIN_MASS {
            return Err(Error::MassTooSmall {
                m: self.m,
                min: MIN_MASS,
            });
        }
        Ok(())
    }

    /// Upper end of the admissible slope interval, `1/(2m)`.
    pub fn beta_max(&self) -> f64 {
        0.5 / self.m
    }
}

/// Numerical knobs shared by the bound computations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSettings {
    pub quadrature: QuadratureSpec,
    pub root: RootSpec,
    pub n_points: usize,
    /// Replace `W(∞)` by `W(k_cut)` on the general path. `None` (the default)
    /// is the actual secant condition.
    pub w_cutoff: Option<f64>,
}

impl Default for BoundSettings {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec {
                abs_tol: 1e-13,
                rel_tol: 1e-13,
                ..QuadratureSpec::default()
            },
            root: RootSpec::default(),
            n_points: DEFAULT_POINTS,
            w_cutoff: None,
        }
    }
}

impl BoundSettings {
    /// Overrides both quadrature and root tolerances.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.quadrature = QuadratureSpec::with_tolerance(tol);
        self.root = RootSpec::with_tolerance(tol);
        self
    }

    pub fn with_points(mut self, n_points: usize) -> Self {
        self.n_points = n_points;
        self
    }
}

/// Hypothesis and `W`-profile checks attached to a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub phi_s: CertificationReport,
    /// Semirelativistic `φ`; only available for the quadratic potential,
    /// where it solves a local momentum-space equation.
    pub phi: Option<CertificationReport>,
    pub w: WCheck,
}

impl Certification {
    pub fn nodeless(&self) -> bool {
        self.phi_s.nodeless && self.phi.is_none_or(|p| p.nodeless)
    }

    pub fn monotone(&self) -> bool {
        self.phi_s.phi_over_k_monotone && self.phi.is_none_or(|p| p.phi_over_k_monotone)
    }

    pub fn w_nonnegative(&self) -> bool {
        self.w.nonnegative && self.w.starts_at_zero
    }

    pub fn passes(&self) -> bool {
        self.nodeless() && self.monotone() && self.w.passes(W_CHECK_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub problem: ProblemSpec,
    /// Intercept of the comparison kinetic energy; always `m`.
    pub alpha: f64,
    pub beta: f64,
    /// Oscillator path only.
    pub gamma: Option<f64>,
    pub e_lower: f64,
    pub e_reference: Option<f64>,
    pub k_cross: f64,
    /// Ground eigenvalue of the unit problem `p² + r^P`.
    pub unit_eigenvalue: f64,
    pub certification: Certification,
}

impl BoundReport {
    pub fn with_reference(mut self, e: f64) -> Self {
        self.e_reference = Some(e);
        self
    }
}

/// `g(x) = ∫_{−∞}^{∞} sqrt(x + t²) e^{−t²} t² dt`.
pub fn eval_g(x: f64, spec: &QuadratureSpec) -> Result<f64> {
    require(x >= 0.0 && x.is_finite(), || format!("g(x) needs x ≥ 0, got {x}"))?;
    let half = integrate(
        |t| (x + t * t).sqrt() * (-t * t).exp() * t * t,
        0.0,
        f64::INFINITY,
        spec,
    )?;
    Ok(2.0 * half.value)
}

/// Right-hand side of `m³ = 6cγ² / ((2/(γ√π)) g(γ²) − 1)`.
pub fn recipe_mass_cubed(gamma: f64, c: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g = eval_g(gamma * gamma, spec)?;
    Ok(6.0 * c * gamma * gamma / (2.0 * g / (gamma * SQRT_PI) - 1.0))
}

/// Counts sign changes of `f` over `points`, returning the bracket of the
/// first one.
fn scan_sign_changes<F>(points: &[f64], mut f: F) -> Result<(usize, Option<(f64, f64)>)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut count = 0;
    let mut first = None;
    let mut prev = (points[0], f(points[0])?);
    for &x in &points[1..] {
        let fx = f(x)?;
        let changed = fx == 0.0 || fx.signum() != prev.1.signum();
        if changed && (fx != 0.0 || prev.1 != 0.0) {
            count += 1;
            if first.is_none() {
                first = Some((prev.0, x));
            }
        }
        prev = (x, fx);
    }
    Ok((count, first))
}

/// The `γ > 0` solving the oscillator recipe for `(m, c)`.
pub fn solve_gamma(m: f64, c: f64, settings: &BoundSettings) -> Result<f64> {
    ProblemSpec::new(m, c, PotentialFamily::Oscillator)?;
    let quad = settings.quadrature;
    let target = m.powi(3);
    let residual = |g: f64| -> Result<f64> { Ok(recipe_mass_cubed(g, c, &quad)? - target) };

    let mut lo = 1e-3;
    let mut hi = 1.0;
    let mut guard = 0;
    while residual(lo)? >= 0.0 {
        lo *= 0.5;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence {
                what: "γ bracket (lower end)",
                iterations: guard,
                estimate: lo,
            });
        }
    }
    guard = 0;
    while residual(hi)? <= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence {
                what: "γ bracket (upper end)",
                iterations: guard,
                estimate: hi,
            });
        }
    }

    const PER_OCTAVE: f64 = 8.0;
    let octaves = (hi / lo).log2();
    let n = (octaves * PER_OCTAVE).ceil().max(2.0) as usize;
    let points: Vec<f64> = (0..=n).map(|i| lo * (hi / lo).powf(i as f64 / n as f64)).collect();
    let (count, bracket) = scan_sign_changes(&points, residual)?;
    if count > 1 {
        return Err(Error::MultipleRoots { what: "γ", count });
    }
    let (a, b) = bracket.expect("endpoints have opposite signs");
    let mut failure = None;
    let gamma = find_root(
        |g| match residual(g) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        a,
        b,
        &settings.root,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(gamma),
    }
}

/// `k* = sqrt(1 − 2mβ)/β`, the second crossing of `sqrt(m² + k²)` and `m + βk²`.
pub fn crossing_point(m: f64, beta: f64) -> Result<f64> {
    require(m > 0.0, || format!("mass must satisfy m > 0, got {m}"))?;
    if !(beta > 0.0 && beta < 0.5 / m) {
        return Err(Error::InvalidBeta { beta, m });
    }
    Ok((1.0 - 2.0 * m * beta).sqrt() / beta)
}

/// `E_s = m + β^{P/(P+2)} c^{2/(P+2)} e₁(P)`.
pub fn lower_energy(problem: &ProblemSpec, beta: f64, unit_eigenvalue: f64) -> f64 {
    let p = problem.family.exponent();
    problem.m + beta.powf(p / (p + 2.0)) * problem.c.powf(2.0 / (p + 2.0)) * unit_eigenvalue
}

/// `φ` from `−c φ'' + sqrt(m² + k²) φ = E φ` and the Gaussian `φ_s` on the
/// same grid.
pub fn oscillator_wavefunctions(
    m: f64,
    c: f64,
    beta: f64,
    settings: &BoundSettings,
) -> Result<(MomentumWavefunction, MomentumWavefunction)> {
    let problem = RadialProblem::with_auto_domain(c, Potential::RelativisticKinetic { mass: m }, settings.n_points)?;
    let solution = ground_state(&problem, &settings.root)?;
    let phi = MomentumWavefunction::from_samples(solution.grid.clone(), solution.u)?;
    let phi_s = MomentumWavefunction::gaussian(solution.grid, (beta / c).sqrt())?;
    Ok((phi, phi_s))
}

fn certify(
    m: f64,
    beta: f64,
    phi_s: &MomentumWavefunction,
    phi: Option<&MomentumWavefunction>,
) -> Result<Certification> {
    let profile = w_profile(m, beta, phi_s)?;
    Ok(Certification {
        phi_s: certify_hypotheses(phi_s),
        phi: phi.map(certify_hypotheses),
        w: profile.check(W_CHECK_TOLERANCE),
    })
}

/// Closed oscillator recipe: solve for `γ`, then `β = 4cγ⁴/m⁴` and
/// `E_s = m + 3 sqrt(βc)`.
pub fn oscillator_bound(m: f64, c: f64, settings: &BoundSettings) -> Result<BoundReport> {
    let problem = ProblemSpec::new(m, c, PotentialFamily::Oscillator)?;
    let gamma = solve_gamma(m, c, settings)?;
    let beta = 4.0 * c * gamma.powi(4) / m.powi(4);
    let (phi, phi_s) = oscillator_wavefunctions(m, c, beta, settings)?;
    Ok(BoundReport {
        problem,
        alpha: m,
        beta,
        gamma: Some(gamma),
        e_lower: m + 3.0 * (beta * c).sqrt(),
        e_reference: None,
        k_cross: crossing_point(m, beta)?,
        unit_eigenvalue: 3.0,
        certification: certify(m, beta, &phi_s, Some(&phi))?,
    })
}

/// Unit-problem ground state `p² + r^P` and its momentum wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitProblem {
    pub exponent: f64,
    pub eigenvalue: f64,
    pub phi: MomentumWavefunction,
}

impl UnitProblem {
    pub fn solve(exponent: f64, settings: &BoundSettings) -> Result<Self> {
        require(exponent > 0.0 && exponent.is_finite(), || {
            format!("power must satisfy P > 0, got {exponent}")
        })?;
        let radial = RadialProblem::with_auto_domain(1.0, Potential::power(1.0, exponent), settings.n_points)?;
        let converged = eigenvalue_converged(&radial, &settings.root)?;
        let phi = sine_transform_default(&converged.solution)?;
        Ok(Self {
            exponent,
            eigenvalue: converged.eigenvalue,
            phi,
        })
    }

    /// Uses externally supplied momentum samples of the unit problem.
    pub fn from_samples(exponent: f64, eigenvalue: f64, phi: MomentumWavefunction) -> Result<Self> {
        require(exponent > 0.0 && exponent.is_finite(), || {
            format!("power must satisfy P > 0, got {exponent}")
        })?;
        Ok(Self {
            exponent,
            eigenvalue,
            phi,
        })
    }

    /// `φ_s` of `β p² + c r^P`.
    pub fn comparison_state(&self, beta: f64, c: f64) -> MomentumWavefunction {
        self.phi.rescaled((beta / c).powf(1.0 / (self.exponent + 2.0)))
    }
}

/// `W(∞)` (or `W(k_cut)`) as a function of `β` for the given unit problem.
pub fn w_condition(m: f64, c: f64, beta: f64, unit: &UnitProblem, cutoff: Option<f64>) -> Result<f64> {
    let phi_s = unit.comparison_state(beta, c);
    eval_w(cutoff.unwrap_or(f64::INFINITY), m, beta, &phi_s)
}

/// `β` from `W(∞) = 0` with a numerically solved comparison state.
pub fn general_power_bound(m: f64, c: f64, exponent: f64, settings: &BoundSettings) -> Result<BoundReport> {
    let family = if exponent == 2.0 {
        PotentialFamily::Oscillator
    } else if exponent == 1.0 {
        PotentialFamily::Linear
    } else {
        PotentialFamily::Power(exponent)
    };
    ProblemSpec::new(m, c, family)?;
    let unit = UnitProblem::solve(exponent, settings)?;
    power_bound_with_unit(m, c, &unit, settings)
}

/// [`general_power_bound`] for an already solved (or supplied) unit problem.
pub fn power_bound_with_unit(m: f64, c: f64, unit: &UnitProblem, settings: &BoundSettings) -> Result<BoundReport> {
    let family = match unit.exponent {
        2.0 => PotentialFamily::Oscillator,
        1.0 => PotentialFamily::Linear,
        p => PotentialFamily::Power(p),
    };
    let problem = ProblemSpec::new(m, c, family)?;
    if settings.w_cutoff.is_none() && !unit.phi.tail.is_rapid() && unit.phi.tail.exponent <= W_TAIL_REQUIRED {
        return Err(Error::DivergentTail {
            exponent: unit.phi.tail.exponent,
            required: W_TAIL_REQUIRED,
        });
    }
    let cutoff = settings.w_cutoff;
    let condition = |beta: f64| w_condition(m, c, beta, unit, cutoff);

    let beta_max = problem.beta_max();
    let mut fractions: Vec<f64> = (0..=24)
        .map(|i| BETA_EDGE * (0.5 / BETA_EDGE).powf(i as f64 / 24.0))
        .collect();
    fractions.extend((1..=24).map(|i| 0.5 + (0.5 - BETA_EDGE) * i as f64 / 24.0));
    let points: Vec<f64> = fractions.iter().map(|f| f * beta_max).collect();
    let (count, bracket) = scan_sign_changes(&points, condition)?;
    if count > 1 {
        return Err(Error::MultipleRoots { what: "β", count });
    }
    let Some((lo, hi)) = bracket else {
        let (lo, hi) = (points[0], points[points.len() - 1]);
        return Err(Error::InvalidBracket {
            lo,
            hi,
            f_lo: condition(lo)?,
            f_hi: condition(hi)?,
        });
    };

    let mut failure = None;
    let beta = find_root(
        |b| match condition(b) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        &settings.root,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }

    let phi_s = unit.comparison_state(beta, c);
    let phi = if problem.family.is_quadratic() {
        Some(oscillator_wavefunctions(m, c, beta, settings)?.0)
    } else {
        None
    };
    let certification = match cutoff {
        None => certify(m, beta, &phi_s, phi.as_ref())?,
        Some(k_cut) => {
            // Profile up to the cutoff only; the truncated condition is what
            // was solved.
            let mut cert = certify_truncated(m, beta, &phi_s, k_cut)?;
            cert.phi = phi.as_ref().map(certify_hypotheses);
            cert
        }
    };
    Ok(BoundReport {
        problem,
        alpha: m,
        beta,
        gamma: None,
        e_lower: lower_energy(&problem, beta, unit.eigenvalue),
        e_reference: None,
        k_cross: crossing_point(m, beta)?,
        unit_eigenvalue: unit.eigenvalue,
        certification,
    })
}

fn certify_truncated(m: f64, beta: f64, phi_s: &MomentumWavefunction, k_cut: f64) -> Result<Certification> {
    let mut profile = w_profile(m, beta, phi_s)?;
    let keep = profile.k_grid.partition_point(|&k| k <= k_cut);
    profile.k_grid.truncate(keep);
    profile.w.truncate(keep);
    profile.w_infinity = eval_w(k_cut, m, beta, phi_s)?;
    Ok(Certification {
        phi_s: certify_hypotheses(phi_s),
        phi: None,
        w: profile.check(W_CHECK_TOLERANCE),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_at_zero_is_one() {
        let g = eval_g(0.0, &BoundSettings::default().quadrature).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn g_rejects_negative_argument() {
        assert!(eval_g(-1.0, &QuadratureSpec::default()).is_err());
    }

    #[test]
    fn crossing_point_domain() {
        assert!(matches!(crossing_point(1.0, 0.5), Err(Error::InvalidBeta { .. })));
        assert!(matches!(crossing_point(1.0, 0.0), Err(Error::InvalidBeta { .. })));
        assert!(crossing_point(1.0, 0.5 - 1e-9).unwrap() < 1e-3);
    }

    #[test]
    fn tiny_mass_is_rejected() {
        let err = oscillator_bound(1e-4, 1.0, &BoundSettings::default()).unwrap_err();
        assert!(matches!(err, Error::MassTooSmall { .. }));
        let err = general_power_bound(0.0, 1.0, 1.0, &BoundSettings::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn non_positive_power_is_rejected() {
        assert!(general_power_bound(1.0, 1.0, -1.0, &BoundSettings::default()).is_err());
        assert!(general_power_bound(1.0, 1.0, 0.0, &BoundSettings::default()).is_err());
    }

    #[test]
    fn unit_mass_oscillator() {
        let r = oscillator_bound(1.0, 1.0, &BoundSettings::default()).unwrap();
        assert!((r.beta - 0.2506).abs() < 5e-5, "{}", r.beta);
        assert!((r.e_lower - 2.5019).abs() < 5e-5);
        assert!(r.beta > 0.0 && r.beta < 0.5);
        assert!(r.certification.passes(), "{:?}", r.certification);
    }
}
