//! Numerical procedures for asymptotically uniform functions on sampled
//! trajectories.
//!
//! A function `f` on `[0, ∞)` is asymptotically uniform when for every
//! `ε > 0` there are `T ≥ 0` and `δ > 0` with `|f(t) − f(s)| < ε` for all
//! `s, t ≥ T`, `|t − s| ≤ δ`. Everything here works on finite windows and
//! reports verdicts as `Holds`, `Refuted` or `Inconclusive`.

pub mod construct;
pub mod detect;
pub mod error;
pub mod funcspace;
pub mod modulus;
pub mod richardson;

pub use detect::{Certificate, Property, Status, Verdict, Witness};
pub use error::{Error, Result};
pub use funcspace::{GalleryFunction, GalleryKind, PointTag, SampledFunction, TailWindow};
