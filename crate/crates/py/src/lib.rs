//! Python module `secant_bound`: lower bounds for the ground state of
//! `sqrt(m² + p²) + c r^P`, plus the solvers and checks behind them.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use secant_core::bound::{self, BoundSettings};
use secant_core::momentum::{self, InequalityIntegral};
use secant_core::numerics::RootSpec;
use secant_core::radial;
use secant_core::reference;
use secant_core::{CertificationReport, Error, Potential, RadialProblem};

create_exception!(secant_bound, SecantError, PyException);
create_exception!(secant_bound, DivergentTailError, SecantError);
create_exception!(secant_bound, NumericalError, SecantError);

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::InvalidInput(_)
        | Error::InvalidBeta { .. }
        | Error::MassTooSmall { .. }
        | Error::UnsupportedMass { .. } => PyValueError::new_err(msg),
        Error::DivergentTail { .. } => DivergentTailError::new_err(msg),
        _ => NumericalError::new_err(msg),
    }
}

fn settings(tol: Option<f64>, grid: Option<usize>, k_cutoff: Option<f64>) -> PyResult<BoundSettings> {
    let mut s = BoundSettings::default();
    if let Some(tol) = tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(PyValueError::new_err(format!("tol must lie in (0, 1), got {tol}")));
        }
        s = s.with_tolerance(tol);
    }
    if let Some(n) = grid {
        if n < 100 {
            return Err(PyValueError::new_err(format!("grid must be at least 100, got {n}")));
        }
        s = s.with_points(n);
    }
    s.w_cutoff = k_cutoff;
    Ok(s)
}

/// Lower bound for one problem, with its certification flags.
#[pyclass(frozen, get_all, module = "secant_bound")]
pub struct BoundReport {
    m: f64,
    c: f64,
    power: f64,
    potential: String,
    beta: f64,
    gamma: Option<f64>,
    e_lower: f64,
    e_reference: Option<f64>,
    k_cross: f64,
    unit_eigenvalue: f64,
    nodeless: bool,
    monotone: bool,
    w_nonnegative: bool,
    w_infinity_residual: f64,
    certified: bool,
    json: String,
}

impl From<bound::BoundReport> for BoundReport {
    fn from(r: bound::BoundReport) -> Self {
        let cert = &r.certification;
        Self {
            m: r.problem.m,
            c: r.problem.c,
            power: r.problem.family.exponent(),
            potential: r.problem.family.label(),
            beta: r.beta,
            gamma: r.gamma,
            e_lower: r.e_lower,
            e_reference: r.e_reference,
            k_cross: r.k_cross,
            unit_eigenvalue: r.unit_eigenvalue,
            nodeless: cert.nodeless(),
            monotone: cert.monotone(),
            w_nonnegative: cert.w_nonnegative(),
            w_infinity_residual: cert.w.infinity_residual,
            certified: cert.passes(),
            json: serde_json::to_string(&r).expect("report serializes"),
        }
    }
}

#[pymethods]
impl BoundReport {
    /// The full report, certification details included, as a JSON string.
    fn to_json(&self) -> String {
        self.json.clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "BoundReport(m={}, c={}, potential='{}', beta={:.6}, e_lower={:.6}, certified={})",
            self.m,
            self.c,
            self.potential,
            self.beta,
            self.e_lower,
            if self.certified { "True" } else { "False" }
        )
    }
}

/// Sampled radial momentum wavefunction `φ(k)`.
#[pyclass(frozen, module = "secant_bound")]
pub struct MomentumWavefunction {
    inner: secant_core::MomentumWavefunction,
}

#[pymethods]
impl MomentumWavefunction {
    #[new]
    fn new(k_grid: Vec<f64>, phi: Vec<f64>) -> PyResult<Self> {
        let inner = secant_core::MomentumWavefunction::from_samples(k_grid, phi).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Normalized `k exp(−width k²/2)` on the given grid.
    #[staticmethod]
    fn gaussian(k_grid: Vec<f64>, width: f64) -> PyResult<Self> {
        let inner = secant_core::MomentumWavefunction::gaussian(k_grid, width).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn k_grid(&self) -> Vec<f64> {
        self.inner.k_grid.clone()
    }

    #[getter]
    fn phi(&self) -> Vec<f64> {
        self.inner.phi.clone()
    }

    /// Fitted power-law tail exponent (`inf` for a rapidly decaying tail).
    #[getter]
    fn tail_exponent(&self) -> f64 {
        self.inner.tail.exponent
    }

    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    fn __call__(&self, k: f64) -> f64 {
        self.inner.eval(k)
    }

    fn __len__(&self) -> usize {
        self.inner.k_grid.len()
    }
}

#[pyfunction]
#[pyo3(signature = (m, c = 1.0, *, tol = None, grid = None))]
fn oscillator_bound(m: f64, c: f64, tol: Option<f64>, grid: Option<usize>) -> PyResult<BoundReport> {
    let s = settings(tol, grid, None)?;
    let r = bound::oscillator_bound(m, c, &s).map_err(to_py)?;
    let e = reference::oscillator_reference(m, c, &s).map_err(to_py)?.e;
    Ok(r.with_reference(e).into())
}

/// Bound for `c r^P` through the numerically solved comparison state.
#[pyfunction]
#[pyo3(signature = (m, power, c = 1.0, *, k_cutoff = None, tol = None, grid = None))]
fn power_bound(
    m: f64,
    power: f64,
    c: f64,
    k_cutoff: Option<f64>,
    tol: Option<f64>,
    grid: Option<usize>,
) -> PyResult<BoundReport> {
    let s = settings(tol, grid, k_cutoff)?;
    Ok(bound::general_power_bound(m, c, power, &s).map_err(to_py)?.into())
}

/// Bound for `c r^P` using caller-supplied samples of the unit comparison
/// state `φ₁` (the ground state of `p² + r^P`).
#[pyfunction]
#[pyo3(signature = (m, power, phi_unit, c = 1.0, *, k_cutoff = None))]
fn power_bound_from_samples(
    m: f64,
    power: f64,
    phi_unit: &MomentumWavefunction,
    c: f64,
    k_cutoff: Option<f64>,
) -> PyResult<BoundReport> {
    let s = settings(None, None, k_cutoff)?;
    let solved = bound::UnitProblem::solve(power, &s).map_err(to_py)?;
    let unit = bound::UnitProblem::from_samples(power, solved.eigenvalue, phi_unit.inner.clone()).map_err(to_py)?;
    Ok(bound::power_bound_with_unit(m, c, &unit, &s).map_err(to_py)?.into())
}

#[pyfunction]
#[pyo3(signature = (m, c = 1.0))]
fn solve_gamma(m: f64, c: f64) -> PyResult<f64> {
    bound::solve_gamma(m, c, &BoundSettings::default()).map_err(to_py)
}

#[pyfunction]
fn crossing_point(m: f64, beta: f64) -> PyResult<f64> {
    bound::crossing_point(m, beta).map_err(to_py)
}

/// Ground-state energy of `sqrt(m² + p²) + c r²` via the duality solve.
#[pyfunction]
#[pyo3(signature = (m, c = 1.0))]
fn oscillator_reference(m: f64, c: f64) -> PyResult<f64> {
    Ok(reference::oscillator_reference(m, c, &BoundSettings::default())
        .map_err(to_py)?
        .e)
}

#[pyfunction]
fn linear_reference(m: f64) -> PyResult<f64> {
    Ok(reference::linear_reference(m).map_err(to_py)?.e)
}

#[pyfunction]
#[pyo3(signature = (m, c = 1.0))]
fn asymptotic_energy(m: f64, c: f64) -> f64 {
    reference::asymptotic_energy(m, c)
}

/// Ground state of `a p² + c r^P`, returned as `(E, r, u)`.
#[pyfunction]
#[pyo3(signature = (a, power, c = 1.0, n_points = 4000))]
fn ground_state(a: f64, power: f64, c: f64, n_points: usize) -> PyResult<(f64, Vec<f64>, Vec<f64>)> {
    let problem = RadialProblem::with_auto_domain(a, Potential::power(c, power), n_points).map_err(to_py)?;
    let converged = radial::eigenvalue_converged(&problem, &RootSpec::default()).map_err(to_py)?;
    let s = converged.solution;
    Ok((converged.eigenvalue, s.grid, s.u))
}

/// Radial sine transform of `u(r)` sampled on a uniform grid from the origin.
#[pyfunction]
#[pyo3(signature = (r, u, k_grid = None))]
fn sine_transform(r: Vec<f64>, u: Vec<f64>, k_grid: Option<Vec<f64>>) -> PyResult<MomentumWavefunction> {
    if r.len() != u.len() {
        return Err(PyValueError::new_err(format!(
            "{} radii but {} samples",
            r.len(),
            u.len()
        )));
    }
    let source = secant_core::RadialSolution {
        eigenvalue: f64::NAN,
        grid: r,
        u,
        node_count: 0,
    };
    let inner = match k_grid {
        Some(k) => momentum::sine_transform(&source, &k),
        None => momentum::sine_transform_default(&source),
    }
    .map_err(to_py)?;
    Ok(MomentumWavefunction { inner })
}

/// Momentum-space ground states `(φ, φ_s)` of the oscillator problem at `β`.
#[pyfunction]
#[pyo3(signature = (m, beta, c = 1.0))]
fn oscillator_wavefunctions(m: f64, beta: f64, c: f64) -> PyResult<(MomentumWavefunction, MomentumWavefunction)> {
    let (phi, phi_s) = bound::oscillator_wavefunctions(m, c, beta, &BoundSettings::default()).map_err(to_py)?;
    Ok((
        MomentumWavefunction { inner: phi },
        MomentumWavefunction { inner: phi_s },
    ))
}

/// `W(k)`; pass `k = inf` for the secant condition.
#[pyfunction]
fn eval_w(k: f64, m: f64, beta: f64, phi_s: &MomentumWavefunction) -> PyResult<f64> {
    momentum::eval_w(k, m, beta, &phi_s.inner).map_err(to_py)
}

/// `(k_grid, W, W(∞))`.
#[pyfunction]
fn w_profile(m: f64, beta: f64, phi_s: &MomentumWavefunction) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let p = momentum::w_profile(m, beta, &phi_s.inner).map_err(to_py)?;
    Ok((p.k_grid, p.w, p.w_infinity))
}

/// Inequality integral as `{"i_direct", "i_by_parts", "overlap", "energy_gap"}`.
#[pyfunction]
fn eval_i(
    py: Python<'_>,
    phi: &MomentumWavefunction,
    phi_s: &MomentumWavefunction,
    m: f64,
    beta: f64,
) -> PyResult<Py<pyo3::types::PyDict>> {
    let i: InequalityIntegral = momentum::eval_i(&phi.inner, &phi_s.inner, m, beta).map_err(to_py)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("i_direct", i.i_direct)?;
    d.set_item("i_by_parts", i.i_by_parts)?;
    d.set_item("overlap", i.overlap)?;
    d.set_item("energy_gap", i.energy_gap())?;
    Ok(d.unbind())
}

/// Node-free and decreasing-`φ/k` checks as a dict.
#[pyfunction]
fn certify(py: Python<'_>, phi: &MomentumWavefunction) -> PyResult<Py<pyo3::types::PyDict>> {
    let r: CertificationReport = momentum::certify_hypotheses(&phi.inner);
    let d = pyo3::types::PyDict::new(py);
    d.set_item("nodeless", r.nodeless)?;
    d.set_item("phi_over_k_monotone", r.phi_over_k_monotone)?;
    d.set_item("min_relative_value", r.min_relative_value)?;
    d.set_item("max_relative_slope", r.max_relative_slope)?;
    d.set_item("passes", r.passes())?;
    Ok(d.unbind())
}

#[pymodule]
fn secant_bound(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("SecantError", py.get_type::<SecantError>())?;
    m.add("DivergentTailError", py.get_type::<DivergentTailError>())?;
    m.add("NumericalError", py.get_type::<NumericalError>())?;
    m.add_class::<BoundReport>()?;
    m.add_class::<MomentumWavefunction>()?;
    m.add_function(wrap_pyfunction!(oscillator_bound, m)?)?;
    m.add_function(wrap_pyfunction!(power_bound, m)?)?;
    m.add_function(wrap_pyfunction!(power_bound_from_samples, m)?)?;
    m.add_function(wrap_pyfunction!(solve_gamma, m)?)?;
    m.add_function(wrap_pyfunction!(crossing_point, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_reference, m)?)?;
    m.add_function(wrap_pyfunction!(linear_reference, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_energy, m)?)?;
    m.add_function(wrap_pyfunction!(ground_state, m)?)?;
    m.add_function(wrap_pyfunction!(sine_transform, m)?)?;
    m.add_function(wrap_pyfunction!(oscillator_wavefunctions, m)?)?;
    m.add_function(wrap_pyfunction!(eval_w, m)?)?;
    m.add_function(wrap_pyfunction!(w_profile, m)?)?;
    m.add_function(wrap_pyfunction!(eval_i, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
