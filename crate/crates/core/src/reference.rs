//! Reference eigenvalues for checking the lower bound.

use serde::{Deserialize, Serialize};

use crate::bound::BoundSettings;
use crate::error::{require, Error, Result};
use crate::radial::{eigenvalue_converged, GridLevel, Potential, RadialProblem};

/// Mass of the single cited linear-potential point, `2√2`.
pub const LINEAR_REFERENCE_MASS: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Ground-state energy of `sqrt(m² + p²) + r` at `m = 2√2` (Boukraa & Basdevant,
/// J. Math. Phys. 30, 1060 (1989)).
pub const LINEAR_REFERENCE_ENERGY: f64 = 4.080;
const LINEAR_MASS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceMethod {
    DualitySolve,
    CitedValue,
    Asymptote,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceResult {
    pub e: f64,
    pub method: ReferenceMethod,
    /// `ε₂(m c^{−1/3})`, the unit-coupling semirelativistic oscillator energy.
    pub epsilon2: Option<f64>,
    /// Grid-refinement history of the duality solve.
    #[serde(skip)]
    pub grid_report: Vec<GridLevel>,
}

/// `ε₂(μ)`: ground state of `p² + sqrt(μ² + r²)`, which is unitarily
/// equivalent to `sqrt(μ² + p²) + r²`.
pub fn epsilon2(mu: f64, settings: &BoundSettings) -> Result<(f64, Vec<GridLevel>)> {
    let problem = RadialProblem::with_auto_domain(1.0, Potential::RelativisticKinetic { mass: mu }, settings.n_points)?;
    let converged = eigenvalue_converged(&problem, &settings.root)?;
    Ok((converged.eigenvalue, converged.history))
}

/// `E = c^{1/3} ε₂(m c^{−1/3})` for `sqrt(m² + p²) + c r²`.
pub fn oscillator_reference(m: f64, c: f64, settings: &BoundSettings) -> Result<ReferenceResult> {
    require(m > 0.0 && m.is_finite(), || format!("mass must satisfy m > 0, got {m}"))?;
    require(c > 0.0 && c.is_finite(), || {
        format!("coupling must satisfy c > 0, got {c}")
    })?;
    let scale = c.cbrt();
    let (eps, grid_report) = epsilon2(m / scale, settings)?;
    Ok(ReferenceResult {
        e: scale * eps,
        method: ReferenceMethod::DualitySolve,
        epsilon2: Some(eps),
        grid_report,
    })
}

/// Cited ground-state energy for the linear potential; only `m = 2√2`
/// (relative tolerance `1e-6`) is available.
pub fn linear_reference(m: f64) -> Result<ReferenceResult> {
    if (m - LINEAR_REFERENCE_MASS).abs() <= LINEAR_MASS_TOLERANCE * LINEAR_REFERENCE_MASS {
        Ok(ReferenceResult {
            e: LINEAR_REFERENCE_ENERGY,
            method: ReferenceMethod::CitedValue,
            epsilon2: None,
            grid_report: Vec::new(),
        })
    } else {
        Err(Error::UnsupportedMass { m })
    }
}

/// Large-mass limit `m + 3 sqrt(c / 2m)` shared by upper and lower bounds.
pub fn asymptotic_energy(m: f64, c: f64) -> f64 {
    m + 3.0 * (c / (2.0 * m)).sqrt()
}
