//! High-precision numerics: ball arithmetic, analytic continuation of
//! Fuchsian equations, monodromy, the closed form near `t = 1` and the
//! Schwarz triangle map.

pub mod ball;
pub mod continuation;
pub mod elementary;
pub mod eval;
pub mod frobenius;
pub mod matrix;
pub mod monodromy;
pub mod ns;
pub mod triangle;

pub use ball::{Ball, CBall};
pub use continuation::{
    continue_solutions, monodromy, BasisTag, CRational, FundamentalMatrix, NumericOperator,
    PathPolyline,
};
pub use matrix::CMatrix;

use thiserror::Error;

use crate::exact::ExactError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision exhausted: radius {radius:e} exceeds {tolerance:e}; retry with more bits")]
    Precision { radius: f64, tolerance: f64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}
