//! Exact sparse multivariate polynomials over ℚ(√3).
//!
//! Everything symbolic in the crate (constraint equations, Jacobians,
//! determinants, eliminations) lives in this ring.  The variable set is
//! fixed to `x, y, z, rho1, rho2, rho3, L`.

mod monomial;
mod poly;
mod resultant;
mod scalar;
mod stats;
mod text;

use thiserror::Error;

pub use monomial::{Monomial, Var, MAX_TOTAL_DEGREE, NUM_VARS};
pub use poly::MPoly;
pub use resultant::{bareiss_det, mat3_det, resultant, sylvester_matrix, Mat3};
pub use scalar::{Scalar, SQRT3_F64};
pub use stats::{poly_stats, poly_stats_for, PolyStats, VarGroup, BITSIZE_DEFINITION};
pub use text::{PolyJson, TermJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("{operand} operand has degree zero in {var}")]
    DegreeZero { operand: &'static str, var: Var },
    #[error("parse error: {0}")]
    Parse(String),
}
