//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Infinite limits are mapped onto a finite interval with
//! `t = a + u / (1 - u)`, `u ∈ [0, 1)`, so exponentially and algebraically
//! decaying tails need no hand-picked cutoff.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{require, Error, Result};

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.abs_tol > 0.0 && self.rel_tol > 0.0, || {
            format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )
        })?;
        require(self.max_subdivisions >= 1, || {
            "max_subdivisions must be at least 1".to_string()
        })
    }
}

/// An integration limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    PosInfinity,
    NegInfinity,
}

impl From<f64> for Limit {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            Limit::PosInfinity
        } else if x == f64::NEG_INFINITY {
            Limit::NegInfinity
        } else {
            Limit::Finite(x)
        }
    }
}

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error_estimate: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, &x) in XGK[..7].iter().enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { lo, hi, value, error }
}

fn adaptive<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    let first = kronrod15(&f, lo, hi);
    let mut total = first.value;
    let mut total_err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut subdivisions = 1;
    loop {
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if !total_err.is_finite() || !total.is_finite() {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature (non-finite integrand)",
                iterations: subdivisions,
                estimate: total_err,
            });
        }
        if total_err <= target {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                iterations: subdivisions,
                estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod15(&f, worst.lo, mid);
        let right = kronrod15(&f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error_estimate) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Quadrature { value, error_estimate })
}

/// Integrates `f` over `[a, b]`; either limit may be infinite.
pub fn integrate<F>(f: F, a: impl Into<Limit>, b: impl Into<Limit>, spec: &QuadratureSpec) -> Result<Quadrature>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    integrate_dyn(&f, a.into(), b.into(), spec)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: Limit, b: Limit, spec: &QuadratureSpec) -> Result<Quadrature> {
    match (a, b) {
        (Limit::Finite(a), Limit::Finite(b)) => {
            if a == b {
                return Ok(Quadrature {
                    value: 0.0,
                    error_estimate: 0.0,
                });
            }
            adaptive(f, a, b, spec)
        }
        (Limit::Finite(a), Limit::PosInfinity) => adaptive(
            |u: f64| {
                let w = 1.0 - u;
                let t = a + u / w;
                if t.is_finite() {
                    f(t) / (w * w)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            spec,
        ),
        (Limit::NegInfinity, Limit::Finite(b)) => adaptive(
            |u: f64| {
                let w = 1.0 - u;
                let t = b - u / w;
                if t.is_finite() {
                    f(t) / (w * w)
                } else {
                    0.0
                }
            },
            0.0,
            1.0,
            spec,
        ),
        (Limit::NegInfinity, Limit::PosInfinity) => {
            let left = integrate_dyn(f, Limit::NegInfinity, Limit::Finite(0.0), spec)?;
            let right = integrate_dyn(f, Limit::Finite(0.0), Limit::PosInfinity, spec)?;
            Ok(Quadrature {
                value: left.value + right.value,
                error_estimate: left.error_estimate + right.error_estimate,
            })
        }
        (a, b) => {
            // Reversed or degenerate infinite limits.
            match (a, b) {
                (Limit::PosInfinity, Limit::PosInfinity) | (Limit::NegInfinity, Limit::NegInfinity) => Ok(Quadrature {
                    value: 0.0,
                    error_estimate: 0.0,
                }),
                _ => integrate_dyn(f, b, a, spec).map(|q| Quadrature {
                    value: -q.value,
                    error_estimate: q.error_estimate,
                }),
            }
        }
    }
}
