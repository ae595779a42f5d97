use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} did not converge after {iterations} steps (last error estimate {estimate:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },

    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e} do not change sign")]
    InvalidBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("found {count} sign changes while bracketing {what}; the root is not unique")]
    MultipleRoots { what: &'static str, count: usize },

    #[error("domain r_max = {r_max} too small: tail amplitude ratio {tail_ratio:e} exceeds {limit:e}")]
    DomainTooSmall { r_max: f64, tail_ratio: f64, limit: f64 },

    #[error("aliased transform: k = {k} with grid spacing h = {h} gives k*h > 1")]
    AliasedTransform { k: f64, h: f64 },

    #[error("divergent momentum tail: fitted exponent {exponent} needs to exceed {required}")]
    DivergentTail { exponent: f64, required: f64 },

    #[error("beta = {beta} outside the secant interval (0, 1/(2m)) for m = {m}")]
    InvalidBeta { beta: f64, m: f64 },

    #[error("mass m = {m} is below the supported minimum {min}")]
    MassTooSmall { m: f64, min: f64 },

    #[error("no reference value available for mass m = {m}")]
    UnsupportedMass { m: f64 },

    #[error("momentum grids are incompatible: {0}")]
    GridMismatch(String),
}

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidInput(msg()))
    }
}
