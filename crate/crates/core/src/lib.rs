//! Schrödinger secant lower bounds for the ground state of
//! `H = sqrt(m² + p²) + V(r)`.
//!
//! The comparison operator `m + β p² + V` bounds `H` from below once `β` is
//! fixed by requiring the weighted kinetic-energy difference `W(k)` to vanish
//! at infinity. This crate provides the pieces needed to compute and check
//! such bounds:
//!
//! * [`numerics`]: adaptive quadrature, bracketed root finding, grid calculus;
//! * [`radial`]: Numerov shooting for ground states of `a p² + U(r)`;
//! * [`momentum`]: the radial sine transform, `W(k)`, the overlap identity and
//!   hypothesis certification;
//! * [`bound`]: `β`, `γ` and the lower bound itself;
//! * [`reference`]: reference eigenvalues (oscillator duality, cited values,
//!   large-mass asymptote);
//! * [`record`]: flat output records with CSV/JSON serialization.

pub mod bound;
pub mod error;
pub mod momentum;
pub mod numerics;
pub mod radial;
pub mod record;
pub mod reference;

pub use bound::{BoundReport, BoundSettings, Certification, PotentialFamily, ProblemSpec};
pub use error::{Error, Result};
pub use momentum::{CertificationReport, MomentumWavefunction, WProfile};
pub use radial::{Potential, RadialProblem, RadialSolution};
pub use reference::{ReferenceMethod, ReferenceResult};
