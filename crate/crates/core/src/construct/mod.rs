//! Piecewise-affine approximants inside the ε-tube of an a.u. function and
//! the staged `(u, r)` decomposition.

mod affine;
mod decompose;
mod tube;

pub use affine::{piecewise_lipschitz_check, LipschitzCheck, PiecewiseAffine};
pub use decompose::{ur_decompose, Stage, Truncation, URDecomposition};
pub use tube::{build_lipschitz_approximant, verify_tube, tube_certificate, TailCertificate, TubeCheck};
