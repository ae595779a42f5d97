//! Bracketed scalar root finding (Brent's method).

use crate::error::{require, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSpec {
    /// Relative bracket width at which iteration stops.
    pub x_tol: f64,
    /// Absolute residual at which iteration stops.
    pub f_tol: f64,
    pub max_iters: usize,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-12,
            max_iters: 200,
        }
    }
}

impl RootSpec {
    pub fn with_tolerance(tol: f64) -> Self {
        Self {
            x_tol: tol,
            f_tol: tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.x_tol > 0.0 && self.f_tol > 0.0, || {
            format!("root tolerances must be positive (x {}, f {})", self.x_tol, self.f_tol)
        })
    }
}

/// Finds a zero of `f` in `[lo, hi]`.
///
/// Inverse quadratic interpolation and secant steps are accepted only while
/// they shrink the bracket fast enough; otherwise the step bisects. The
/// returned abscissa always lies inside the initial bracket.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, spec: &RootSpec) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    spec.validate()?;
    require(lo.is_finite() && hi.is_finite(), || {
        format!("bracket [{lo}, {hi}] must be finite")
    })?;
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    let product = fa * fb;
    if product >= 0.0 || product.is_nan() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..spec.max_iters {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * spec.x_tol * b.abs().max(1.0);
        let half = 0.5 * (c - b);
        if fb.abs() <= spec.f_tol || half.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(half) };
        fb = f(b);
    }
    Err(Error::NonConvergence {
        what: "root finder",
        iterations: spec.max_iters,
        estimate: fb.abs(),
    })
}
