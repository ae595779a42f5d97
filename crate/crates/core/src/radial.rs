//! Ground states of `-a u'' + U(r) u = E u` on `[0, r_max]` with `u(0) = 0`.
//!
//! The eigenvalue is bracketed by Sturm node counting on the outward Numerov
//! solution and refined with Brent's method on the endpoint value `u(r_max)`.
//! The wavefunction is then assembled from an outward and an inward
//! integration joined at the outermost classical turning point, so the
//! forbidden-region tail decays instead of picking up the growing solution.

use std::fmt;
use std::sync::Arc;

use crate::error::{require, Error, Result};
use crate::numerics::{find_root, integrate, samples, QuadratureSpec, RootSpec};

pub const DEFAULT_POINTS: usize = 4000;
const MIN_POINTS: usize = 100;
const DOMAIN_FLOOR: f64 = 10.0;
const TURNING_POINT_FACTOR: f64 = 2.5;
/// WKB decay exponent required between the turning point and `r_max`.
const TAIL_ACTION: f64 = 36.0;
/// Largest `|u|` over the outer end of the grid, relative to `max |u|`.
const TAIL_LIMIT: f64 = 1e-8;
const RESCALE_ABOVE: f64 = 1e120;

/// Potential energy as a function of `r`.
#[derive(Clone)]
pub enum Potential {
    /// `coupling · r^exponent`
    Power {
        coupling: f64,
        exponent: f64,
    },
    /// `sqrt(mass² + r²)`, the kinetic term of the oscillator dual.
    RelativisticKinetic {
        mass: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Potential {
    pub fn power(coupling: f64, exponent: f64) -> Self {
        Potential::Power { coupling, exponent }
    }

    pub fn custom<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Potential::Custom(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Potential::Power { coupling, exponent } => coupling * r.powf(*exponent),
            Potential::RelativisticKinetic { mass } => mass.hypot(r),
            Potential::Custom(f) => f(r),
        }
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::Power { coupling, exponent } => {
                write!(f, "Power({coupling} r^{exponent})")
            }
            Potential::RelativisticKinetic { mass } => write!(f, "sqrt({mass}² + r²)"),
            Potential::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialProblem {
    /// Coefficient of `p²`.
    pub kinetic: f64,
    pub potential: Potential,
    pub r_max: f64,
    pub n_points: usize,
}

impl RadialProblem {
    pub fn new(kinetic: f64, potential: Potential, r_max: f64, n_points: usize) -> Result<Self> {
        let p = Self {
            kinetic,
            potential,
            r_max,
            n_points,
        };
        p.validate()?;
        Ok(p)
    }

    /// Picks `r_max` from a coarse estimate of the ground-state energy:
    /// `2.5 ×` the outermost turning point, floored at 10, and extended until
    /// the WKB decay exponent beyond the turning point reaches 36.
    pub fn with_auto_domain(kinetic: f64, potential: Potential, n_points: usize) -> Result<Self> {
        let r_max = auto_domain(kinetic, &potential, n_points)?;
        Self::new(kinetic, potential, r_max, n_points)
    }

    pub fn validate(&self) -> Result<()> {
        require(self.kinetic > 0.0 && self.kinetic.is_finite(), || {
            format!("kinetic coefficient must be positive, got {}", self.kinetic)
        })?;
        require(self.r_max > 0.0 && self.r_max.is_finite(), || {
            format!("r_max must be positive, got {}", self.r_max)
        })?;
        require(self.n_points >= MIN_POINTS, || {
            format!("n_points must be at least {MIN_POINTS}, got {}", self.n_points)
        })
    }

    pub fn step(&self) -> f64 {
        self.r_max / (self.n_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points).map(|i| i as f64 * h).collect()
    }

    fn sampled_potential(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points).map(|i| self.potential.eval(i as f64 * h)).collect()
    }

    /// Energy expectation `∫(a u'² + U u²) / ∫u²` of a solution on this grid.
    pub fn rayleigh_quotient(&self, solution: &RadialSolution) -> f64 {
        let r = &solution.grid;
        let u = &solution.u;
        let du = samples::derivative(r, u, 5);
        let kinetic: Vec<f64> = du.iter().map(|d| self.kinetic * d * d).collect();
        let potential: Vec<f64> = r
            .iter()
            .zip(u)
            .map(|(&ri, &ui)| self.potential.eval(ri) * ui * ui)
            .collect();
        let norm: Vec<f64> = u.iter().map(|v| v * v).collect();
        (samples::integral(r, &kinetic) + samples::integral(r, &potential)) / samples::integral(r, &norm)
    }
}

/// Normalized ground state on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub eigenvalue: f64,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub node_count: usize,
}

impl RadialSolution {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn r_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    /// Trapezoid norm `∫u² dr`.
    pub fn norm(&self) -> f64 {
        trapezoid_norm(&self.u, self.step())
    }
}

/// One refinement level of [`eigenvalue_converged`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridLevel {
    pub n_points: usize,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedEigenvalue {
    /// Richardson-extrapolated eigenvalue (fourth-order error model).
    pub eigenvalue: f64,
    pub history: Vec<GridLevel>,
    /// Solution on the finest grid.
    pub solution: RadialSolution,
}

struct Shot {
    nodes: usize,
    sign: f64,
    log_abs: f64,
}

struct Numerov<'a> {
    u_pot: &'a [f64],
    kinetic: f64,
    g: f64,
}

impl<'a> Numerov<'a> {
    fn new(problem: &RadialProblem, u_pot: &'a [f64]) -> Self {
        let h = problem.step();
        Self {
            u_pot,
            kinetic: problem.kinetic,
            g: h * h / 12.0,
        }
    }

    #[inline]
    fn coeff(&self, i: usize, e: f64) -> f64 {
        1.0 - self.g * (self.u_pot[i] - e) / self.kinetic
    }

    /// Outward integration over the full grid, tracking only what the
    /// eigenvalue search needs.
    fn shoot(&self, e: f64) -> Shot {
        let n = self.u_pot.len();
        let mut prev = 0.0;
        let mut cur = 1.0;
        let mut log_scale = 0.0;
        let mut nodes = 0;
        let mut c_prev = self.coeff(0, e);
        let mut c_cur = self.coeff(1, e);
        for i in 1..n - 1 {
            let c_next = self.coeff(i + 1, e);
            let next = ((12.0 - 10.0 * c_cur) * cur - c_prev * prev) / c_next;
            if next.signum() != cur.signum() && cur != 0.0 {
                nodes += 1;
            }
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE_ABOVE {
                prev /= RESCALE_ABOVE;
                cur /= RESCALE_ABOVE;
                log_scale += RESCALE_ABOVE.ln();
            }
            c_prev = c_cur;
            c_cur = c_next;
        }
        Shot {
            nodes,
            sign: if cur == 0.0 { 0.0 } else { cur.signum() },
            log_abs: cur.abs().ln() + log_scale,
        }
    }

    /// Continuous residual whose zero is the Dirichlet eigenvalue:
    /// sign(u_N)·ln(1 + |u_N|), evaluated without overflow.
    fn residual(&self, e: f64) -> f64 {
        let s = self.shoot(e);
        if s.sign == 0.0 {
            return 0.0;
        }
        let x = s.log_abs;
        let softplus = if x > 30.0 {
            x + (-x).exp().ln_1p()
        } else {
            x.exp().ln_1p()
        };
        s.sign * softplus
    }

    fn outward(&self, e: f64, upto: usize) -> Vec<f64> {
        let mut u = vec![0.0; upto + 1];
        u[1] = 1.0;
        for i in 1..upto {
            u[i + 1] =
                ((12.0 - 10.0 * self.coeff(i, e)) * u[i] - self.coeff(i - 1, e) * u[i - 1]) / self.coeff(i + 1, e);
            if u[i + 1].abs() > RESCALE_ABOVE {
                u[..=i + 1].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
            }
        }
        u
    }

    fn inward(&self, e: f64, from: usize) -> Vec<f64> {
        let n = self.u_pot.len();
        let mut u = vec![0.0; n];
        u[n - 2] = 1e-200;
        for i in (from + 1..n - 1).rev() {
            u[i - 1] =
                ((12.0 - 10.0 * self.coeff(i, e)) * u[i] - self.coeff(i + 1, e) * u[i + 1]) / self.coeff(i - 1, e);
            if u[i - 1].abs() > RESCALE_ABOVE {
                u[i - 1..].iter_mut().for_each(|v| *v /= RESCALE_ABOVE);
            }
        }
        u
    }
}

fn trapezoid_norm(u: &[f64], h: f64) -> f64 {
    let n = u.len();
    h * (u.iter().map(|v| v * v).sum::<f64>() - 0.5 * (u[0] * u[0] + u[n - 1] * u[n - 1]))
}

fn count_sign_changes(u: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in u {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                changes += 1;
            }
            last = v;
        }
    }
    changes
}

/// Brackets the ground state: `lo` has no nodes, `hi` exactly one.
fn bracket_ground(numerov: &Numerov<'_>, kinetic: f64, r_max: f64) -> Result<(f64, f64)> {
    let u_min = numerov.u_pot.iter().copied().fold(f64::INFINITY, f64::min);
    require(u_min.is_finite(), || "potential is not finite on the grid".to_string())?;
    let lo = u_min;
    if numerov.shoot(lo).nodes != 0 {
        return Err(Error::InvalidInput(
            "outward solution oscillates below the potential minimum".into(),
        ));
    }
    let mut step = kinetic * (std::f64::consts::PI / r_max).powi(2);
    let mut hi = lo + step;
    let mut tries = 0;
    while numerov.shoot(hi).nodes == 0 {
        step *= 2.0;
        hi = lo + step;
        tries += 1;
        if tries > 200 || !hi.is_finite() {
            return Err(Error::NonConvergence {
                what: "ground-state bracketing",
                iterations: tries,
                estimate: hi,
            });
        }
    }
    let mut lo = lo;
    let mut iters = 0;
    while numerov.shoot(hi).nodes > 1 {
        let mid = 0.5 * (lo + hi);
        if numerov.shoot(mid).nodes == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
        if iters > 200 {
            return Err(Error::NonConvergence {
                what: "node-count bisection",
                iterations: iters,
                estimate: hi - lo,
            });
        }
    }
    Ok((lo, hi))
}

fn solve_eigenvalue(problem: &RadialProblem, u_pot: &[f64], spec: &RootSpec) -> Result<f64> {
    let numerov = Numerov::new(problem, u_pot);
    let (lo, hi) = bracket_ground(&numerov, problem.kinetic, problem.r_max)?;
    find_root(|e| numerov.residual(e), lo, hi, spec)
}

/// Lowest eigenvalue and normalized nodeless wavefunction of `problem`.
pub fn ground_state(problem: &RadialProblem, spec: &RootSpec) -> Result<RadialSolution> {
    problem.validate()?;
    let u_pot = problem.sampled_potential();
    let e = solve_eigenvalue(problem, &u_pot, spec)?;
    let numerov = Numerov::new(problem, &u_pot);
    let n = problem.n_points;

    // Outermost classically allowed point; join there.
    let turning = u_pot.iter().rposition(|&v| v < e).unwrap_or(1);
    let join = turning.clamp(2, n - 3);
    let outward = numerov.outward(e, join);
    let inward = numerov.inward(e, join);
    if inward[join] == 0.0 || outward[join] == 0.0 {
        return Err(Error::NonConvergence {
            what: "wavefunction matching",
            iterations: 0,
            estimate: 0.0,
        });
    }
    let ratio = outward[join] / inward[join];
    let mut u: Vec<f64> = outward[..join]
        .iter()
        .copied()
        .chain(inward[join..].iter().map(|v| v * ratio))
        .collect();
    u[0] = 0.0;
    u[n - 1] = 0.0;

    let h = problem.step();
    let norm = trapezoid_norm(&u, h).sqrt();
    let first = u.iter().copied().find(|v| *v != 0.0).unwrap_or(1.0);
    let scale = first.signum() / norm;
    u.iter_mut().for_each(|v| *v *= scale);

    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail_len = (n / 50).max(2);
    let tail = u[n - 1 - tail_len..n - 1].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if tail > TAIL_LIMIT * peak {
        return Err(Error::DomainTooSmall {
            r_max: problem.r_max,
            tail_ratio: tail / peak,
            limit: TAIL_LIMIT,
        });
    }

    Ok(RadialSolution {
        eigenvalue: e,
        grid: problem.grid(),
        node_count: count_sign_changes(&u),
        u,
    })
}

/// Repeats [`ground_state`] on nested grids (interval count doubled each
/// time) until successive eigenvalues agree to `1e-8` relative.
pub fn eigenvalue_converged(problem: &RadialProblem, spec: &RootSpec) -> Result<ConvergedEigenvalue> {
    const MAX_DOUBLINGS: usize = 4;
    const REL_CHANGE: f64 = 1e-8;
    let mut current = ground_state(problem, spec)?;
    let mut history = vec![GridLevel {
        n_points: problem.n_points,
        eigenvalue: current.eigenvalue,
    }];
    let mut level = problem.clone();
    for _ in 0..MAX_DOUBLINGS {
        level.n_points = 2 * (level.n_points - 1) + 1;
        let finer = ground_state(&level, spec)?;
        history.push(GridLevel {
            n_points: level.n_points,
            eigenvalue: finer.eigenvalue,
        });
        let change = finer.eigenvalue - current.eigenvalue;
        current = finer;
        if change.abs() < REL_CHANGE * current.eigenvalue.abs().max(f64::MIN_POSITIVE) {
            return Ok(ConvergedEigenvalue {
                eigenvalue: current.eigenvalue + change / 15.0,
                history,
                solution: current,
            });
        }
    }
    let n = history.len();
    Err(Error::NonConvergence {
        what: "grid refinement",
        iterations: MAX_DOUBLINGS,
        estimate: (history[n - 1].eigenvalue - history[n - 2].eigenvalue).abs(),
    })
}

fn auto_domain(kinetic: f64, potential: &Potential, n_points: usize) -> Result<f64> {
    require(kinetic > 0.0, || {
        format!("kinetic coefficient must be positive, got {kinetic}")
    })?;
    let coarse_points = n_points.clamp(MIN_POINTS, 1000);
    let spec = RootSpec::with_tolerance(1e-8);
    let mut r0 = DOMAIN_FLOOR;
    let (energy, turning) = loop {
        let probe = RadialProblem::new(kinetic, potential.clone(), r0, coarse_points)?;
        let e = solve_eigenvalue(&probe, &probe.sampled_potential(), &spec)?;
        let turning = outermost_turning_point(potential, e, r0);
        if turning < 0.8 * r0 {
            break (e, turning);
        }
        r0 *= 2.0;
        if r0 > 1e8 {
            return Err(Error::InvalidInput(
                "potential does not confine: no classical turning point found".into(),
            ));
        }
    };

    let quad = QuadratureSpec::with_tolerance(1e-6);
    let action = |r: f64| -> Result<f64> {
        Ok(integrate(
            |s| ((potential.eval(s) - energy) / kinetic).max(0.0).sqrt(),
            turning,
            r,
            &quad,
        )?
        .value)
    };
    let mut needed = TURNING_POINT_FACTOR * turning;
    let mut guard = 0;
    while action(needed)? < TAIL_ACTION {
        needed *= 1.25;
        guard += 1;
        if guard > 200 {
            return Err(Error::InvalidInput(
                "potential does not confine: WKB tail never decays".into(),
            ));
        }
    }
    let floored = needed.max(DOMAIN_FLOOR);
    // Keep the Numerov recursion well-conditioned at the far end.
    let stable = |r: f64| {
        let h = r / (n_points.max(MIN_POINTS) - 1) as f64;
        h * h * (potential.eval(r) - energy) / (12.0 * kinetic) < 0.5
    };
    Ok(if stable(floored) { floored } else { needed })
}

fn outermost_turning_point(potential: &Potential, energy: f64, r_max: f64) -> f64 {
    const SAMPLES: usize = 4000;
    let h = r_max / SAMPLES as f64;
    (0..=SAMPLES)
        .rev()
        .map(|i| i as f64 * h)
        .find(|&r| potential.eval(r) < energy)
        .unwrap_or(0.0)
}
