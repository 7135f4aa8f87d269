//! Dyadic elimination of Taylor terms and the derivative estimator built on it.

mod coefficients;
mod estimator;
mod weights;

pub use coefficients::{kappa, EliminationTable, TaylorCoefficients};
pub use estimator::{richardson_derivative, richardson_derivative_in, RichardsonEstimate, Scalar, CONDITION_LIMIT};
pub use weights::DyadicWeights;
pub use twofloat::TwoFloat;
