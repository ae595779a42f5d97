//! Argument model, command dispatch and output formatting for the
//! `secant-bound` executable.
//!
//! Exit codes: 0 success, 2 invalid input, 3 divergent momentum tail,
//! 4 non-convergence or failed certification.

pub mod golden;

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use secant_core::bound::{
    general_power_bound, oscillator_bound, oscillator_wavefunctions, power_bound_with_unit, BoundSettings, UnitProblem,
};
use secant_core::momentum::{eval_i, WCheck};
use secant_core::record::{self, round_sig, OutputRecord};
use secant_core::reference::{linear_reference, oscillator_reference};
use secant_core::{BoundReport, CertificationReport, Error, MomentumWavefunction};

pub use golden::{PublishedRow, TABLE1};

/// Number of `k²` samples written by `figure1`.
pub const FIGURE_POINTS: usize = 501;
pub const FIGURE_K2_MAX: f64 = 25.0;

/// Limits for the `I = (E − E_s)·overlap` check in `verify`.
pub const IDENTITY_AGREEMENT: f64 = 1e-6;
pub const IDENTITY_GAP_TOLERANCE: f64 = 2e-3;

#[derive(Debug, Parser)]
#[command(
    name = "secant-bound",
    version,
    about = "Schrödinger secant lower bounds for sqrt(m² + p²) + c r^P"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound and duality reference for the oscillator `c r²`.
    Oscillator(PointArgs),
    /// Bound for the linear potential `c r`.
    Linear(LinearArgs),
    /// Bound for `c r^P` from a numerically solved comparison state.
    Power(PowerArgs),
    /// All ten benchmark rows (`c = 1`) next to the published values.
    Table1(CommonArgs),
    /// `K = sqrt(m² + k²)` and `S = m + βk²` against `k²`.
    Figure1(PointArgs),
    /// Hypothesis, `W`-profile and identity checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Quadrature and root-finding tolerance.
    #[arg(long, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Radial grid points.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mass: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub coupling: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct LinearArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Solve `W(k_cut) = 0` instead of `W(∞) = 0`.
    #[arg(long)]
    pub k_cutoff: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub power: f64,
    /// Solve `W(k_cut) = 0` instead of `W(∞) = 0`.
    #[arg(long)]
    pub k_cutoff: Option<f64>,
    /// CSV with columns `k,phi`: momentum wavefunction of `p² + r^P` to use in
    /// place of the computed one.
    #[arg(long)]
    pub phi_samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub power: f64,
}

/// A command failure together with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Invalid(String),
    Divergent(String),
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Divergent(_) => 3,
            Failure::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(s) | Failure::Divergent(s) | Failure::Numerical(s) => f.write_str(s),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidInput(_)
            | Error::InvalidBeta { .. }
            | Error::MassTooSmall { .. }
            | Error::UnsupportedMass { .. } => Failure::Invalid(msg),
            Error::DivergentTail { .. } => Failure::Divergent(msg),
            Error::NonConvergence { .. }
            | Error::InvalidBracket { .. }
            | Error::MultipleRoots { .. }
            | Error::DomainTooSmall { .. }
            | Error::AliasedTransform { .. }
            | Error::GridMismatch(_) => Failure::Numerical(msg),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn settings(common: &CommonArgs) -> Outcome<BoundSettings> {
    let mut s = BoundSettings::default();
    if let Some(tol) = common.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(invalid(format!("--tol must lie in (0, 1), got {tol}")));
        }
        s = s.with_tolerance(tol);
    }
    if let Some(n) = common.grid {
        if n < 100 {
            return Err(invalid(format!("--grid must be at least 100, got {n}")));
        }
        s = s.with_points(n);
    }
    Ok(s)
}

fn check_point(p: &PointArgs) -> Outcome<()> {
    if !(p.mass > 0.0 && p.mass.is_finite()) {
        return Err(invalid(format!("--mass must satisfy m > 0, got {}", p.mass)));
    }
    if !(p.coupling > 0.0 && p.coupling.is_finite()) {
        return Err(invalid(format!("--coupling must satisfy c > 0, got {}", p.coupling)));
    }
    Ok(())
}

fn check_cutoff(k_cutoff: Option<f64>) -> Outcome<()> {
    match k_cutoff {
        Some(k) if !(k > 0.0 && k.is_finite()) => Err(invalid(format!("--k-cutoff must be positive, got {k}"))),
        _ => Ok(()),
    }
}

/// Runs the parsed command, writing its report to `--out` or to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Outcome<()> {
    match &cli.command {
        Command::Oscillator(a) => {
            let rec = oscillator_record(a)?;
            emit(&a.common, &render_records(&[rec], a.common.format)?, stdout)
        }
        Command::Linear(a) => {
            let rec = power_record(&a.point, 1.0, a.k_cutoff, None)?;
            emit(&a.point.common, &render_records(&[rec], a.point.common.format)?, stdout)
        }
        Command::Power(a) => {
            let rec = power_record(&a.point, a.power, a.k_cutoff, a.phi_samples.as_deref())?;
            emit(&a.point.common, &render_records(&[rec], a.point.common.format)?, stdout)
        }
        Command::Table1(a) => {
            let (rows, failure) = table1(a)?;
            emit(a, &render_table1(&rows, a.format)?, stdout)?;
            match failure {
                Some(f) => Err(f),
                None => Ok(()),
            }
        }
        Command::Figure1(a) => {
            let rows = figure1(a)?;
            emit(&a.common, &render_figure(&rows, a.common.format)?, stdout)
        }
        Command::Verify(a) => {
            let report = verify(a)?;
            emit(&a.point.common, &render_verify(&report, a.point.common.format)?, stdout)?;
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Numerical("certification failed".into()))
            }
        }
    }
}

fn emit(common: &CommonArgs, text: &str, stdout: &mut dyn Write) -> Outcome<()> {
    match &common.out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Invalid(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Outcome<()> {
    File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn oscillator_record(a: &PointArgs) -> Outcome<OutputRecord> {
    check_point(a)?;
    let s = settings(&a.common)?;
    let bound = oscillator_bound(a.mass, a.coupling, &s)?;
    let reference = oscillator_reference(a.mass, a.coupling, &s)?;
    Ok(OutputRecord::from(&bound.with_reference(reference.e)))
}

fn read_phi_samples(path: &Path) -> Outcome<MomentumWavefunction> {
    #[derive(Deserialize)]
    struct Sample {
        k: f64,
        phi: f64,
    }
    let file = File::open(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let samples: Vec<Sample> = csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let (k, phi) = samples.into_iter().map(|s| (s.k, s.phi)).unzip();
    Ok(MomentumWavefunction::from_samples(k, phi)?)
}

fn power_bound(a: &PointArgs, power: f64, k_cutoff: Option<f64>, phi_samples: Option<&Path>) -> Outcome<BoundReport> {
    check_point(a)?;
    if !(power > 0.0 && power.is_finite()) {
        return Err(invalid(format!(
            "--power must satisfy P > 0 (Coulomb-like and singular potentials are not supported), got {power}"
        )));
    }
    check_cutoff(k_cutoff)?;
    let s = BoundSettings {
        w_cutoff: k_cutoff,
        ..settings(&a.common)?
    };
    Ok(match phi_samples {
        Some(path) => {
            let phi = read_phi_samples(path)?;
            let solved = UnitProblem::solve(power, &s)?;
            let unit = UnitProblem::from_samples(power, solved.eigenvalue, phi)?;
            power_bound_with_unit(a.mass, a.coupling, &unit, &s)?
        }
        None => general_power_bound(a.mass, a.coupling, power, &s)?,
    })
}

/// The cited linear-potential energy, when `(m, c, P)` is that point.
fn cited_linear(a: &PointArgs, power: f64) -> Option<f64> {
    if power == 1.0 && a.coupling == 1.0 {
        linear_reference(a.mass).ok().map(|r| r.e)
    } else {
        None
    }
}

pub fn power_record(
    a: &PointArgs,
    power: f64,
    k_cutoff: Option<f64>,
    phi_samples: Option<&Path>,
) -> Outcome<OutputRecord> {
    let bound = power_bound(a, power, k_cutoff, phi_samples)?;
    let reference = if power == 2.0 {
        Some(oscillator_reference(a.mass, a.coupling, &settings(&a.common)?)?.e)
    } else {
        cited_linear(a, power)
    };
    let bound = match reference {
        Some(e) => bound.with_reference(e),
        None => bound,
    };
    Ok(OutputRecord::from(&bound))
}

pub fn render_records(records: &[OutputRecord], format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            record::write_csv(records, &mut buf)?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
        Format::Json => record::to_json(records)? + "\n",
        Format::Table => record::to_table(records),
    })
}

/// A computed benchmark row beside its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub m: f64,
    pub c: f64,
    pub potential: String,
    pub beta: f64,
    pub gamma: Option<f64>,
    #[serde(rename = "E_lower")]
    pub e_lower: f64,
    #[serde(rename = "E_reference")]
    pub e_reference: Option<f64>,
    pub k_cross: f64,
    pub cert_nodeless: bool,
    pub cert_monotone: bool,
    #[serde(rename = "cert_W_nonneg")]
    pub cert_w_nonneg: bool,
    pub beta_published: f64,
    #[serde(rename = "E_lower_published")]
    pub e_lower_published: f64,
    #[serde(rename = "E_reference_published")]
    pub e_reference_published: f64,
    pub beta_deviation: f64,
    #[serde(rename = "E_lower_deviation")]
    pub e_lower_deviation: f64,
    #[serde(rename = "E_reference_deviation")]
    pub e_reference_deviation: Option<f64>,
}

impl Table1Row {
    fn new(rec: OutputRecord, published: &PublishedRow) -> Self {
        Self {
            beta_published: published.beta,
            e_lower_published: published.e_lower,
            e_reference_published: published.e_reference,
            beta_deviation: round_sig((rec.beta - published.beta).abs()),
            e_lower_deviation: round_sig((rec.e_lower - published.e_lower).abs()),
            e_reference_deviation: rec.e_reference.map(|e| round_sig((e - published.e_reference).abs())),
            m: rec.m,
            c: rec.c,
            potential: rec.potential,
            beta: rec.beta,
            gamma: rec.gamma,
            e_lower: rec.e_lower,
            e_reference: rec.e_reference,
            k_cross: rec.k_cross,
            cert_nodeless: rec.cert_nodeless,
            cert_monotone: rec.cert_monotone,
            cert_w_nonneg: rec.cert_w_nonneg,
        }
    }
}

/// Evaluates the rows concurrently; returns the successful rows in table
/// order and the first failure, if any.
pub fn table1(common: &CommonArgs) -> Outcome<(Vec<Table1Row>, Option<Failure>)> {
    let s = settings(common)?;
    let results: Vec<Outcome<Table1Row>> = TABLE1
        .par_iter()
        .map(|p| {
            let bound = oscillator_bound(p.m, 1.0, &s)?;
            let reference = oscillator_reference(p.m, 1.0, &s)?;
            Ok(Table1Row::new(
                OutputRecord::from(&bound.with_reference(reference.e)),
                p,
            ))
        })
        .collect();
    let mut rows = Vec::new();
    let mut failure = None;
    for (p, r) in TABLE1.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(f) => {
                failure.get_or_insert(Failure::Numerical(format!("row m = {}: {f}", p.m)));
            }
        }
    }
    Ok((rows, failure))
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

pub fn render_table1(rows: &[Table1Row], format: Format) -> Outcome<String> {
    Ok(match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| invalid(format!("csv: {e}")))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?).expect("csv output is UTF-8")
        }
        Format::Json => serde_json::to_string_pretty(rows).map_err(|e| invalid(format!("json: {e}")))? + "\n",
        Format::Table => {
            let mut cells = vec![[
                "m",
                "beta",
                "beta_pub",
                "E_lower",
                "E_lower_pub",
                "E_ref",
                "E_ref_pub",
                "k_cross",
                "certified",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()];
            for r in rows {
                cells.push(vec![
                    r.m.to_string(),
                    format!("{:.6}", r.beta),
                    r.beta_published.to_string(),
                    format!("{:.6}", r.e_lower),
                    r.e_lower_published.to_string(),
                    r.e_reference.map_or_else(|| "-".into(), |v| format!("{v:.6}")),
                    r.e_reference_published.to_string(),
                    format!("{:.6}", r.k_cross),
                    (r.cert_nodeless && r.cert_monotone && r.cert_w_nonneg).to_string(),
                ]);
            }
            record::render_table(&cells)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FigurePoint {
    pub k_squared: f64,
    #[serde(rename = "K")]
    pub kinetic: f64,
    #[serde(rename = "S")]
    pub secant: f64,
}

/// Both kinetic-energy curves on `k² ∈ [0, 25]` at the solved slope.
pub fn figure1(a: &PointArgs) -> Outcome<Vec<FigurePoint>> {
    check_point(a)?;
    let bound = oscillator_bound(a.mass, a.coupling, &settings(&a.common)?)?;
    Ok(figure_points(a.mass, bound.beta))
}

pub fn figure_points(m: f64, beta: f64) -> Vec<FigurePoint> {
    (0..FIGURE_POINTS)
        .map(|i| {
            let k2 = FIGURE_K2_MAX * i as f64 / (FIGURE_POINTS - 1) as f64;
            FigurePoint {
                k_squared: round_sig(k2),
                kinetic: round_sig((m * m + k2).sqrt()),
                secant: round_sig(m + beta * k2),
            }
        })
        .collect()
}

/// CSV unless JSON is requested; the plot data has no tabular text form.
pub fn render_figure(points: &[FigurePoint], format: Format) -> Outcome<String> {
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(points).map_err(|e| invalid(format!("json: {e}")))? + "\n");
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for p in points {
        w.serialize(p).map_err(|e| invalid(format!("csv: {e}")))?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| invalid(format!("csv: {e}")))?).expect("csv output is UTF-8"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub i_direct: f64,
    pub i_by_parts: f64,
    pub overlap: f64,
    /// `I / overlap`.
    pub energy_gap: f64,
    /// `E − E_s` from the reference and the bound.
    pub expected_gap: f64,
    pub relative_disagreement: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub m: f64,
    pub c: f64,
    pub power: f64,
    pub beta: f64,
    #[serde(rename = "E_lower")]
    pub e_lower: f64,
    #[serde(rename = "E_reference")]
    pub e_reference: Option<f64>,
    pub phi_s: CertificationReport,
    /// Only available for the oscillator, where `φ` solves an ODE.
    pub phi: Option<CertificationReport>,
    pub w: WCheck,
    pub identity: Option<IdentityCheck>,
    pub passed: bool,
}

pub fn verify(a: &VerifyArgs) -> Outcome<VerifyReport> {
    let p = &a.point;
    let s = settings(&p.common)?;
    let (bound, identity) = if a.power == 2.0 {
        check_point(p)?;
        let bound = oscillator_bound(p.mass, p.coupling, &s)?;
        let reference = oscillator_reference(p.mass, p.coupling, &s)?;
        let (phi, phi_s) = oscillator_wavefunctions(p.mass, p.coupling, bound.beta, &s)?;
        let i = eval_i(&phi, &phi_s, p.mass, bound.beta)?;
        let expected_gap = reference.e - bound.e_lower;
        let relative_disagreement = i.relative_disagreement();
        let passed = relative_disagreement <= IDENTITY_AGREEMENT
            && i.i_direct >= 0.0
            && (i.energy_gap() - expected_gap).abs() <= IDENTITY_GAP_TOLERANCE;
        let check = IdentityCheck {
            i_direct: i.i_direct,
            i_by_parts: i.i_by_parts,
            overlap: i.overlap,
            energy_gap: i.energy_gap(),
            expected_gap,
            relative_disagreement,
            passed,
        };
        (bound.with_reference(reference.e), Some(check))
    } else {
        let bound = power_bound(p, a.power, None, None)?;
        match cited_linear(p, a.power) {
            Some(e) => (bound.with_reference(e), None),
            None => (bound, None),
        }
    };
    let passed = bound.certification.passes() && identity.is_none_or(|i| i.passed);
    Ok(VerifyReport {
        m: p.mass,
        c: p.coupling,
        power: a.power,
        beta: bound.beta,
        e_lower: bound.e_lower,
        e_reference: bound.e_reference,
        phi_s: bound.certification.phi_s,
        phi: bound.certification.phi,
        w: bound.certification.w,
        identity,
        passed,
    })
}

fn cert_cells(report: Option<&CertificationReport>) -> (String, String) {
    match report {
        Some(r) => (r.nodeless.to_string(), r.phi_over_k_monotone.to_string()),
        None => ("unavailable".into(), "unavailable".into()),
    }
}

pub fn render_verify(r: &VerifyReport, format: Format) -> Outcome<String> {
    if format == Format::Json {
        return Ok(serde_json::to_string_pretty(r).map_err(|e| invalid(format!("json: {e}")))? + "\n");
    }
    let (phi_nodeless, phi_monotone) = cert_cells(r.phi.as_ref());
    let mut rows: Vec<(&str, String)> = vec![
        ("m", r.m.to_string()),
        ("c", r.c.to_string()),
        ("power", r.power.to_string()),
        ("beta", round_sig(r.beta).to_string()),
        ("E_lower", round_sig(r.e_lower).to_string()),
        ("E_reference", opt(r.e_reference.map(round_sig))),
        ("phi_s_nodeless", r.phi_s.nodeless.to_string()),
        ("phi_s_monotone", r.phi_s.phi_over_k_monotone.to_string()),
        ("phi_nodeless", phi_nodeless),
        ("phi_monotone", phi_monotone),
        ("W_starts_at_zero", r.w.starts_at_zero.to_string()),
        ("W_nonnegative", r.w.nonnegative.to_string()),
        ("W_unimodal", r.w.unimodal.to_string()),
        ("W_min_relative", format!("{:e}", r.w.min_relative)),
        ("W_infinity_residual", format!("{:e}", r.w.infinity_residual)),
    ];
    match &r.identity {
        Some(i) => rows.extend([
            ("I_direct", format!("{:e}", i.i_direct)),
            ("I_by_parts", format!("{:e}", i.i_by_parts)),
            ("I_relative_disagreement", format!("{:e}", i.relative_disagreement)),
            ("I_over_overlap", round_sig(i.energy_gap).to_string()),
            ("E_minus_E_lower", round_sig(i.expected_gap).to_string()),
            ("identity_passed", i.passed.to_string()),
        ]),
        None => rows.push(("identity", "unavailable".into())),
    }
    rows.push(("passed", r.passed.to_string()));
    Ok(match format {
        Format::Csv => {
            let mut out = String::from("check,value\n");
            for (k, v) in rows {
                out.push_str(&format!("{k},{v}\n"));
            }
            out
        }
        _ => record::render_table(
            &rows
                .into_iter()
                .map(|(k, v)| vec![k.to_string(), v])
                .collect::<Vec<_>>(),
        ),
    })
}
