//! Radial ground states and symmetry-breaking certificates for the
//! dilation-invariant fourth-order problem
//!
//! ```text
//! Δ²u − λ div(|x|⁻² ∇u) = S |x|^{-β} |u|^{q-2} u   in ℝⁿ,  n ≥ 5.
//! ```
//!
//! Radial functions are handled through the Emden–Fowler substitution
//! `u(x) = |x|^{(4-n)/2} w(-log|x|)`, which turns every radial integral into
//! a constant-coefficient integral over the line.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod cli;
pub mod error;
pub mod format;
pub mod functional;
pub mod params;
pub mod profile;
pub mod quadrature;
pub mod solver;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use functional::{el_gradient, energy_breakdown, rayleigh_quotient, EnergyBreakdown};
pub use params::{make_params, ProblemParams};
pub use profile::{Grid, Profile};
pub use solver::{solve_radial, GroundState, SolverOptions};
pub use symmetry::{certify, SymmetryCertificate, Verdict};
pub use verify::IdentityReport;
