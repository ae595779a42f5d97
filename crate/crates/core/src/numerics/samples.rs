//! Calculus on sampled functions over sorted (possibly non-uniform) grids.
//!
//! Everything here works with the local cubic through the four samples
//! surrounding an interval, so interpolation, cumulative integration and
//! differentiation share one fourth-order model of the data.

const GL_NODES: [f64; 4] = [
    -0.861_136_311_594_052_6,
    -0.339_981_043_584_856_3,
    0.339_981_043_584_856_3,
    0.861_136_311_594_052_6,
];
const GL_WEIGHTS: [f64; 4] = [
    0.347_854_845_137_453_8,
    0.652_145_154_862_546_1,
    0.652_145_154_862_546_1,
    0.347_854_845_137_453_8,
];

/// First index of the four-point stencil serving interval `[x[i], x[i+1]]`.
fn stencil_start(i: usize, n: usize) -> usize {
    debug_assert!(n >= 4);
    i.saturating_sub(1).min(n - 4)
}

fn lagrange4(x: &[f64], y: &[f64], s: usize, t: f64) -> f64 {
    let xs = &x[s..s + 4];
    let ys = &y[s..s + 4];
    let mut acc = 0.0;
    for j in 0..4 {
        let mut l = 1.0;
        for m in 0..4 {
            if m != j {
                l *= (t - xs[m]) / (xs[j] - xs[m]);
            }
        }
        acc += ys[j] * l;
    }
    acc
}

/// Index `i` with `x[i] <= t < x[i+1]`, clamped to the valid interval range.
pub fn locate(x: &[f64], t: f64) -> usize {
    let p = x.partition_point(|&v| v <= t);
    p.saturating_sub(1).min(x.len() - 2)
}

/// Local-cubic interpolation of the samples at `t`.
///
/// Outside `[x[0], x[n-1]]` the end cubics extrapolate.
pub fn interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    assert!(n >= 2, "need at least two samples");
    let i = locate(x, t);
    if n < 4 {
        let w = (t - x[i]) / (x[i + 1] - x[i]);
        return y[i] * (1.0 - w) + y[i + 1] * w;
    }
    lagrange4(x, y, stencil_start(i, n), t)
}

/// Running integral of `g(t, ŷ(t))` where `ŷ` is the local-cubic model of the
/// samples; `out[i] = ∫_{x[0]}^{x[i]} g`.
///
/// Each interval is integrated with 4-point Gauss–Legendre, which is exact for
/// the cubic itself and fourth-order for smooth `g`.
pub fn cumulative_with<G>(x: &[f64], y: &[f64], g: G) -> Vec<f64>
where
    G: Fn(f64, f64) -> f64,
{
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    for i in 0..n - 1 {
        out[i + 1] = out[i] + interval_integral(x, y, i, x[i], x[i + 1], &g);
    }
    out
}

fn interval_integral<G>(x: &[f64], y: &[f64], i: usize, a: f64, b: f64, g: &G) -> f64
where
    G: Fn(f64, f64) -> f64,
{
    let n = x.len();
    let c = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (node, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let t = c + half * node;
        let yt = if n >= 4 {
            lagrange4(x, y, stencil_start(i, n), t)
        } else {
            let s = (t - x[i]) / (x[i + 1] - x[i]);
            y[i] * (1.0 - s) + y[i + 1] * s
        };
        acc += w * g(t, yt);
    }
    acc * half
}

/// `∫_{x[0]}^{t} g(s, ŷ(s)) ds` for `t` inside the grid.
pub fn integral_to_with<G>(x: &[f64], y: &[f64], t: f64, cumulative: &[f64], g: G) -> f64
where
    G: Fn(f64, f64) -> f64,
{
    let i = locate(x, t);
    if t <= x[0] {
        return 0.0;
    }
    if t >= x[x.len() - 1] {
        return cumulative[x.len() - 1];
    }
    cumulative[i] + interval_integral(x, y, i, x[i], t, &g)
}

/// Running integral of the samples themselves.
pub fn cumulative(x: &[f64], y: &[f64]) -> Vec<f64> {
    cumulative_with(x, y, |_, v| v)
}

/// Integral over the whole grid.
pub fn integral(x: &[f64], y: &[f64]) -> f64 {
    integral_with(x, y, |_, v| v)
}

pub fn integral_with<G>(x: &[f64], y: &[f64], g: G) -> f64
where
    G: Fn(f64, f64) -> f64,
{
    let n = x.len();
    (0..n.saturating_sub(1))
        .map(|i| interval_integral(x, y, i, x[i], x[i + 1], &g))
        .sum()
}

/// `∫ sin(ω t) ŷ(t) dt` over the grid.
///
/// Each interval gets enough Gauss–Legendre panels to resolve the phase
/// advance `ω Δt`, so the result is limited by the interpolant, not by the
/// oscillation.
pub fn sine_moment(x: &[f64], y: &[f64], omega: f64) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (x[i], x[i + 1]);
        let panels = ((omega.abs() * (b - a)) / 0.5).ceil().max(1.0) as usize;
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + width * p as f64;
            acc += interval_integral(x, y, i, lo, lo + width, &|t: f64, v: f64| (omega * t).sin() * v);
        }
    }
    acc
}

/// Derivative at every node from the Lagrange polynomial through a centred
/// stencil of `width` points (clamped at the ends).
pub fn derivative(x: &[f64], y: &[f64], width: usize) -> Vec<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    assert!(width >= 2 && n >= width, "stencil wider than grid");
    (0..n)
        .map(|i| {
            let s = i.saturating_sub(width / 2).min(n - width);
            let xs = &x[s..s + width];
            let t = x[i];
            let mut d = 0.0;
            for j in 0..width {
                // L_j'(t) = Σ_{m≠j} 1/(x_j-x_m) Π_{l≠j,m} (t-x_l)/(x_j-x_l)
                let mut lj = 0.0;
                for m in 0..width {
                    if m == j {
                        continue;
                    }
                    let mut prod = 1.0 / (xs[j] - xs[m]);
                    for l in 0..width {
                        if l != j && l != m {
                            prod *= (t - xs[l]) / (xs[j] - xs[l]);
                        }
                    }
                    lj += prod;
                }
                d += y[s + j] * lj;
            }
            d
        })
        .collect()
}
