//! Function representations: sampled grids, the example gallery, and
//! pointwise combinators.

mod combine;
mod gallery;
mod sampled;
mod window;

pub use combine::{combine, CombineOp, OuterMap};
pub use gallery::{gallery_eval, GalleryFunction, GalleryKind, GalleryLabels};
pub use sampled::{PointTag, SampledFunction};
pub use window::TailWindow;
