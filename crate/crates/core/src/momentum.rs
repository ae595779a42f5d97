//! Momentum-space side of the secant construction.
//!
//! * [`sine_transform`] maps a reduced radial function `u(r)` to
//!   `φ(k) = sqrt(2/π) ∫ sin(kr) u(r) dr`;
//! * [`w_profile`] / [`eval_w`] accumulate the weighted kinetic-energy gap
//!   `W(k) = ∫_0^k (sqrt(m²+t²) − m − βt²) φ_s(t) t dt`;
//! * [`eval_i`] computes the inequality integral directly and after
//!   integration by parts, together with the overlap `∫ φ φ_s`;
//! * [`certify_hypotheses`] checks positivity and monotonicity of `φ(k)/k`.

use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::numerics::{integrate, samples, Limit, QuadratureSpec};
use crate::radial::RadialSolution;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Samples below this fraction of `max |φ|` are treated as numerical zero when
/// fitting the tail.
const TAIL_FLOOR: f64 = 1e-14;
/// A log-log fit this poor (RMS, in e-folds) means the last decade holds
/// round-off rather than a power law.
const TAIL_NOISE_RESIDUAL: f64 = 0.5;
/// Largest amplitude, relative to the peak, that may be read as round-off.
const NOISE_CEILING: f64 = 1e-10;
/// Minimum tail exponent (plus margin) for `W(∞)` to exist: the integrand
/// behaves like `t^{3-p}`.
pub const W_TAIL_REQUIRED: f64 = 4.0 + 0.2;

/// Layout of the momentum grid: uniform up to `linear_end`, then geometric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KGridSpec {
    pub linear_step: f64,
    pub linear_end: f64,
    pub ratio: f64,
    pub k_max: f64,
}

impl KGridSpec {
    /// Grid matched to a radial source on `[0, r_max]` with spacing `h`.
    ///
    /// The uniform step is `π / (8 r_max)`, a quarter of the spacing at which
    /// the samples still determine `φ`, so that local-cubic quadrature of `φ²`
    /// holds the norm to `1e-7`. `k_max` is capped at `1/h` so the transform
    /// never aliases.
    pub fn for_source(r_max: f64, h: f64) -> Self {
        Self {
            linear_step: std::f64::consts::PI / (8.0 * r_max),
            linear_end: 20.0,
            ratio: 1.05,
            k_max: (1.0 / h).min(1e3),
        }
    }

    pub fn build(&self) -> Vec<f64> {
        let end = self.linear_end.min(self.k_max);
        let n_lin = (end / self.linear_step).floor() as usize;
        let mut k: Vec<f64> = (0..=n_lin).map(|i| i as f64 * self.linear_step).collect();
        let mut last = *k.last().expect("grid starts at zero");
        while last * self.ratio <= self.k_max {
            last *= self.ratio;
            k.push(last);
        }
        k
    }
}

/// Algebraic model `φ(k) ≈ amplitude · k^(−exponent)` of the large-k tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// `f64::INFINITY` when the samples fall to numerical zero (faster than
    /// any power).
    pub exponent: f64,
    pub amplitude: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
}

impl TailFit {
    pub const RAPID: TailFit = TailFit {
        exponent: f64::INFINITY,
        amplitude: 0.0,
        residual: 0.0,
    };

    pub fn is_rapid(&self) -> bool {
        self.exponent.is_infinite()
    }

    fn eval(&self, k: f64) -> f64 {
        if self.is_rapid() {
            0.0
        } else {
            self.amplitude * k.powf(-self.exponent)
        }
    }

    fn scaled(&self, s: f64) -> TailFit {
        if self.is_rapid() {
            *self
        } else {
            TailFit {
                amplitude: self.amplitude * s.sqrt() * s.powf(-self.exponent),
                ..*self
            }
        }
    }
}

/// Least-squares fit of `ln|φ|` against `ln k` over the last decade of the grid.
///
/// A tail that changes sign or fits a power law badly is reported as
/// [`TailFit::RAPID`]: a genuine algebraic tail is smooth and of one sign.
pub fn fit_tail(k: &[f64], phi: &[f64]) -> TailFit {
    let peak = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let last = phi[phi.len() - 1];
    if peak == 0.0 || last.abs() <= TAIL_FLOOR * peak {
        return TailFit::RAPID;
    }
    let k_last = k[k.len() - 1];
    let pts: Vec<(f64, f64)> = k
        .iter()
        .zip(phi)
        .filter(|(&ki, &pi)| ki >= 0.1 * k_last && ki > 0.0 && pi.abs() > TAIL_FLOOR * peak)
        .map(|(&ki, &pi)| (ki.ln(), pi.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return TailFit::RAPID;
    }
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| {
        (a + (x - mx).powi(2), b + (x - mx) * (y - my))
    });
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let decade = k.partition_point(|&ki| ki < 0.1 * k_last);
    let one_sign = phi[decade..].iter().all(|v| v.signum() == last.signum() || *v == 0.0);
    if !one_sign || residual > TAIL_NOISE_RESIDUAL {
        return TailFit::RAPID;
    }
    TailFit {
        exponent: -slope,
        amplitude: intercept.exp().copysign(last),
        residual,
    }
}

/// `φ(k)` sampled on a sorted momentum grid starting at (or near) zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumWavefunction {
    pub k_grid: Vec<f64>,
    pub phi: Vec<f64>,
    pub tail: TailFit,
}

impl MomentumWavefunction {
    pub fn from_samples(k_grid: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        require(k_grid.len() == phi.len(), || {
            format!("{} momenta but {} samples", k_grid.len(), phi.len())
        })?;
        require(k_grid.len() >= 5, || "need at least five momentum samples".to_string())?;
        require(k_grid[0] >= 0.0, || "momenta must be non-negative".to_string())?;
        require(k_grid.windows(2).all(|w| w[1] > w[0]), || {
            "momentum grid must be strictly increasing".to_string()
        })?;
        require(phi.iter().all(|v| v.is_finite()), || {
            "φ samples must be finite".to_string()
        })?;
        let tail = fit_tail(&k_grid, &phi);
        Ok(Self { k_grid, phi, tail })
    }

    /// Normalized oscillator ground state `N k exp(−width k²/2)`.
    pub fn gaussian(k_grid: Vec<f64>, width: f64) -> Result<Self> {
        require(width > 0.0, || format!("Gaussian width must be positive, got {width}"))?;
        let norm = (4.0 * width.powf(1.5) / std::f64::consts::PI.sqrt()).sqrt();
        let phi = k_grid
            .iter()
            .map(|&k| norm * k * (-0.5 * width * k * k).exp())
            .collect();
        Self::from_samples(k_grid, phi)
    }

    /// `φ_s(k) = s^{1/2} φ(s k)`: the same state for a problem whose length
    /// scale is multiplied by `s`. Norm-preserving and exact on the samples.
    pub fn rescaled(&self, s: f64) -> Self {
        let root = s.sqrt();
        Self {
            k_grid: self.k_grid.iter().map(|k| k / s).collect(),
            phi: self.phi.iter().map(|p| p * root).collect(),
            tail: self.tail.scaled(s),
        }
    }

    pub fn k_last(&self) -> f64 {
        self.k_grid[self.k_grid.len() - 1]
    }

    /// Interpolated inside the grid, tail model beyond it.
    pub fn eval(&self, k: f64) -> f64 {
        if k > self.k_last() {
            self.tail.eval(k)
        } else {
            samples::interpolate(&self.k_grid, &self.phi, k)
        }
    }

    /// `∫ φ² dk` over the grid.
    pub fn norm(&self) -> f64 {
        samples::integral_with(&self.k_grid, &self.phi, |_, v| v * v)
    }

    /// Sine transform back to position space, `sqrt(2/π) ∫ sin(kr) φ(k) dk`.
    pub fn inverse_at(&self, r: f64) -> f64 {
        SQRT_2_OVER_PI * samples::sine_moment(&self.k_grid, &self.phi, r)
    }

    /// `φ(k)/k`, with the value at `k = 0` extrapolated as an even function
    /// of `k` from the next three samples.
    fn phi_over_k(&self) -> Vec<f64> {
        let mut g: Vec<f64> = self
            .k_grid
            .iter()
            .zip(&self.phi)
            .map(|(&k, &p)| if k == 0.0 { 0.0 } else { p / k })
            .collect();
        if self.k_grid[0] == 0.0 {
            let q: Vec<f64> = self.k_grid[1..4].iter().map(|k| k * k).collect();
            g[0] = (0..3)
                .map(|j| {
                    let l: f64 = (0..3).filter(|&m| m != j).map(|m| q[m] / (q[m] - q[j])).product();
                    l * g[j + 1]
                })
                .sum();
        }
        g
    }
}

/// `φ` on the default grid for `source`.
pub fn sine_transform_default(source: &RadialSolution) -> Result<MomentumWavefunction> {
    let grid = KGridSpec::for_source(source.r_max(), source.step()).build();
    sine_transform(source, &grid)
}

/// Radial sine transform of a normalized reduced wavefunction.
///
/// Evaluates the transform of the band-limited (cardinal) interpolant of the
/// samples, which for a uniform grid with `u(0) = u(r_max) = 0` is
/// `sqrt(2/π) h Σ u_j sin(k r_j)`. It is exactly norm-preserving on
/// `[0, π/h]` and adds no spurious algebraic tail at large `k`.
pub fn sine_transform(source: &RadialSolution, k_grid: &[f64]) -> Result<MomentumWavefunction> {
    let h = source.step();
    if let Some(&k) = k_grid.iter().find(|&&k| k * h > 1.0) {
        return Err(Error::AliasedTransform { k, h });
    }
    let n = source.u.len();
    let mut phi: Vec<f64> = k_grid
        .iter()
        .map(|&k| {
            let interior: f64 = source.grid[1..n - 1]
                .iter()
                .zip(&source.u[1..n - 1])
                .map(|(r, u)| (k * r).sin() * u)
                .sum();
            let ends =
                0.5 * ((k * source.grid[0]).sin() * source.u[0] + (k * source.grid[n - 1]).sin() * source.u[n - 1]);
            SQRT_2_OVER_PI * h * (interior + ends)
        })
        .collect();
    if fit_tail(k_grid, &phi).is_rapid() {
        suppress_noise(&mut phi);
    }
    MomentumWavefunction::from_samples(k_grid.to_vec(), phi)
}

/// Zeroes the round-off floor beyond a faster-than-algebraic tail.
///
/// Past the peak, the first sample that is below `NOISE_CEILING` of the peak
/// and has the wrong sign marks where round-off takes over; it and everything
/// after it are set to zero. Left in place, the floor would be amplified by
/// the `k³` weight of `W` at large `k`.
fn suppress_noise(phi: &mut [f64]) {
    let Some(top) = (0..phi.len()).max_by(|&a, &b| phi[a].abs().total_cmp(&phi[b].abs())) else {
        return;
    };
    let (peak, sign) = (phi[top].abs(), phi[top].signum());
    if peak == 0.0 {
        return;
    }
    if let Some(start) = phi[top..]
        .iter()
        .position(|v| v.abs() < NOISE_CEILING * peak && v.signum() != sign)
    {
        phi[top + start..].iter_mut().for_each(|v| *v = 0.0);
    }
}

/// `sqrt(m² + k²) − m − β k²`, free of cancellation at small `k`.
#[inline]
pub fn kinetic_gap(m: f64, beta: f64, k: f64) -> f64 {
    let k2 = k * k;
    k2 / (m.hypot(k) + m) - beta * k2
}

/// `∫_a^b t^(q−1) dt`, with `b = ∞` allowed for `q < 0`.
fn power_integral(q: f64, a: f64, b: f64) -> f64 {
    if q == 0.0 {
        (b / a).ln()
    } else {
        (b.powf(q) - a.powf(q)) / q
    }
}

/// `W` accumulated under the fitted tail `A t^{−p}` between `from` and `to`.
///
/// The gap is split as `t − m − βt² + m²/(sqrt(m²+t²) + t)`; the polynomial
/// part is integrated in closed form, leaving only a remainder that decays
/// like `t^{−p}` for quadrature.
fn tail_w(m: f64, beta: f64, tail: &TailFit, from: f64, to: Limit) -> Result<f64> {
    if tail.is_rapid() {
        return Ok(0.0);
    }
    let p = tail.exponent;
    let b = match to {
        Limit::Finite(b) => b,
        _ => f64::INFINITY,
    };
    let closed = power_integral(3.0 - p, from, b)
        - m * power_integral(2.0 - p, from, b)
        - beta * power_integral(4.0 - p, from, b);
    let spec = QuadratureSpec::with_tolerance(1e-12);
    let remainder = integrate(|t| m * m / (m.hypot(t) + t) * t.powf(1.0 - p), from, to, &spec)?.value;
    Ok(tail.amplitude * (closed + remainder))
}

fn check_secant_inputs(m: f64, beta: f64) -> Result<()> {
    require(m > 0.0 && m.is_finite(), || format!("mass must be positive, got {m}"))?;
    require(beta > 0.0 && beta.is_finite(), || {
        format!("β must be positive, got {beta}")
    })
}

/// `W(k)` at a single momentum; `k = f64::INFINITY` gives `W(∞)`.
pub fn eval_w(k: f64, m: f64, beta: f64, phi_s: &MomentumWavefunction) -> Result<f64> {
    check_secant_inputs(m, beta)?;
    require(k >= 0.0, || format!("k must be non-negative, got {k}"))?;
    if k == 0.0 {
        return Ok(0.0);
    }
    let x = &phi_s.k_grid;
    let g = |t: f64, p: f64| kinetic_gap(m, beta, t) * p * t;
    let cum = samples::cumulative_with(x, &phi_s.phi, g);
    let k_last = phi_s.k_last();
    if k.is_infinite() {
        if !phi_s.tail.is_rapid() && phi_s.tail.exponent <= W_TAIL_REQUIRED {
            return Err(Error::DivergentTail {
                exponent: phi_s.tail.exponent,
                required: W_TAIL_REQUIRED,
            });
        }
        return Ok(cum[cum.len() - 1] + tail_w(m, beta, &phi_s.tail, k_last, Limit::PosInfinity)?);
    }
    if k > k_last {
        return Ok(cum[cum.len() - 1] + tail_w(m, beta, &phi_s.tail, k_last, Limit::Finite(k))?);
    }
    Ok(samples::integral_to_with(x, &phi_s.phi, k, &cum, g))
}

/// `W(k)` over the whole grid of `φ_s` plus its limit at infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WProfile {
    pub k_grid: Vec<f64>,
    pub w: Vec<f64>,
    pub w_infinity: f64,
}

impl WProfile {
    pub fn max(&self) -> f64 {
        self.w.iter().copied().fold(self.w_infinity, f64::max)
    }

    /// `|W(∞)| / max W`.
    pub fn infinity_residual(&self) -> f64 {
        self.w_infinity.abs() / self.max()
    }

    /// Most negative value relative to `max W` (zero when nowhere negative).
    pub fn min_relative(&self) -> f64 {
        let peak = self.max();
        self.w
            .iter()
            .copied()
            .chain(std::iter::once(self.w_infinity))
            .fold(0.0f64, |acc, v| acc.min(v / peak))
    }

    pub fn is_nonnegative(&self, rel_tol: f64) -> bool {
        self.max() > 0.0 && self.min_relative() >= -rel_tol
    }

    /// Nondecreasing up to a single maximum, nonincreasing afterwards, with
    /// steps allowed to violate this by `rel_tol · max W`.
    pub fn is_unimodal(&self, rel_tol: f64) -> bool {
        let peak = self.max();
        let slack = rel_tol * peak;
        let top = self
            .w
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > self.w[best] { i } else { best });
        let rising = self.w[..=top].windows(2).all(|p| p[1] >= p[0] - slack);
        let falling = self.w[top..].windows(2).all(|p| p[1] <= p[0] + slack);
        rising && falling && self.w_infinity <= self.w[self.w.len() - 1] + slack
    }

    pub fn check(&self, rel_tol: f64) -> WCheck {
        WCheck {
            starts_at_zero: self.w[0] == 0.0,
            nonnegative: self.is_nonnegative(rel_tol),
            unimodal: self.is_unimodal(rel_tol),
            infinity_residual: self.infinity_residual(),
            min_relative: self.min_relative(),
        }
    }
}

/// Grid checks on a [`WProfile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WCheck {
    pub starts_at_zero: bool,
    pub nonnegative: bool,
    pub unimodal: bool,
    pub infinity_residual: f64,
    pub min_relative: f64,
}

impl WCheck {
    pub fn passes(&self, rel_tol: f64) -> bool {
        self.starts_at_zero && self.nonnegative && self.unimodal && self.infinity_residual <= rel_tol
    }
}

pub fn w_profile(m: f64, beta: f64, phi_s: &MomentumWavefunction) -> Result<WProfile> {
    check_secant_inputs(m, beta)?;
    let x = &phi_s.k_grid;
    let mut w = samples::cumulative_with(x, &phi_s.phi, |t, p| kinetic_gap(m, beta, t) * p * t);
    // leading zero is exact when the grid starts at the origin
    if x[0] == 0.0 {
        w[0] = 0.0;
    }
    let w_infinity = eval_w(f64::INFINITY, m, beta, phi_s)?;
    Ok(WProfile {
        k_grid: x.clone(),
        w,
        w_infinity,
    })
}

/// The two evaluations of the inequality integral and the overlap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityIntegral {
    pub i_direct: f64,
    pub i_by_parts: f64,
    pub overlap: f64,
}

impl InequalityIntegral {
    pub fn relative_disagreement(&self) -> f64 {
        (self.i_direct - self.i_by_parts).abs() / self.i_direct.abs().max(f64::MIN_POSITIVE)
    }

    /// `I / ∫φφ_s`, which equals `E − E_s` for exact eigenfunctions.
    pub fn energy_gap(&self) -> f64 {
        self.i_direct / self.overlap
    }
}

fn same_grid(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0))
}

/// `I = ∫ (sqrt(m²+k²) − m − βk²) φ φ_s dk`, directly and as
/// `[W φ/k] − ∫ W (φ/k)' dk`, plus the overlap `∫ φ φ_s dk`.
pub fn eval_i(
    phi: &MomentumWavefunction,
    phi_s: &MomentumWavefunction,
    m: f64,
    beta: f64,
) -> Result<InequalityIntegral> {
    check_secant_inputs(m, beta)?;
    if !same_grid(&phi.k_grid, &phi_s.k_grid) {
        return Err(Error::GridMismatch(format!(
            "φ has {} samples up to k = {}, φ_s has {} up to k = {}",
            phi.k_grid.len(),
            phi.k_last(),
            phi_s.k_grid.len(),
            phi_s.k_last()
        )));
    }
    let both_algebraic = !phi.tail.is_rapid() && !phi_s.tail.is_rapid();
    if both_algebraic {
        let decay = phi.tail.exponent + phi_s.tail.exponent - 2.0;
        if decay <= 1.2 {
            return Err(Error::DivergentTail {
                exponent: decay,
                required: 1.2,
            });
        }
    }
    let k = &phi.k_grid;
    let product: Vec<f64> = phi.phi.iter().zip(&phi_s.phi).map(|(a, b)| a * b).collect();
    let mut i_direct = samples::integral_with(k, &product, |t, v| kinetic_gap(m, beta, t) * v);
    let mut overlap = samples::integral(k, &product);
    if both_algebraic {
        let spec = QuadratureSpec::with_tolerance(1e-12);
        let k_last = phi.k_last();
        let tail = |t: f64| phi.tail.eval(t) * phi_s.tail.eval(t);
        i_direct += integrate(|t| kinetic_gap(m, beta, t) * tail(t), k_last, f64::INFINITY, &spec)?.value;
        overlap += integrate(tail, k_last, f64::INFINITY, &spec)?.value;
    }

    let w = samples::cumulative_with(k, &phi_s.phi, |t, p| kinetic_gap(m, beta, t) * p * t);
    let g = phi.phi_over_k();
    let dg = samples::derivative(k, &g, 5);
    let w_dg: Vec<f64> = w.iter().zip(&dg).map(|(a, b)| a * b).collect();
    let n = k.len();
    let boundary = w[n - 1] * g[n - 1];
    let i_by_parts = boundary - samples::integral(k, &w_dg);
    Ok(InequalityIntegral {
        i_direct,
        i_by_parts,
        overlap,
    })
}

/// Outcome of [`certify_hypotheses`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub nodeless: bool,
    pub phi_over_k_monotone: bool,
    /// Most negative `φ / max|φ|` after sign normalization.
    pub min_relative_value: f64,
    /// Largest `(φ/k)' / max|φ/k|`.
    pub max_relative_slope: f64,
}

impl CertificationReport {
    pub fn passes(&self) -> bool {
        self.nodeless && self.phi_over_k_monotone
    }
}

pub const NODE_TOLERANCE: f64 = 1e-10;
pub const MONOTONE_TOLERANCE: f64 = 1e-8;

/// Checks that `φ ≥ 0` and `φ(k)/k` is non-increasing on the grid.
pub fn certify_hypotheses(phi: &MomentumWavefunction) -> CertificationReport {
    let peak = phi.phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return CertificationReport {
            nodeless: false,
            phi_over_k_monotone: false,
            min_relative_value: 0.0,
            max_relative_slope: 0.0,
        };
    }
    let sign = phi
        .phi
        .iter()
        .find(|v| v.abs() > NODE_TOLERANCE * peak)
        .map_or(1.0, |v| v.signum());
    let min_relative_value = phi.phi.iter().fold(0.0f64, |m, v| m.min(sign * v / peak));

    let g: Vec<f64> = phi.phi_over_k().iter().map(|v| sign * v).collect();
    let g_peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slope = samples::derivative(&phi.k_grid, &g, 3);
    let max_relative_slope = slope.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v / g_peak));

    CertificationReport {
        nodeless: min_relative_value >= -NODE_TOLERANCE,
        phi_over_k_monotone: max_relative_slope <= MONOTONE_TOLERANCE,
        min_relative_value,
        max_relative_slope,
    }
}
