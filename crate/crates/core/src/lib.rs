//! Exact and numerical tools for T²-invariant Spin(7)-structures over
//! Calabi–Yau 3-folds.
//!
//! The pointwise algebra (forms, SU(3)- and Spin(7)-structures, torsion
//! systems) runs on exact rationals; discretized model checks run on `f64`.

pub mod error;
pub mod exterior;
pub mod json;
pub mod linalg;
pub mod model;
pub mod presets;
pub mod scalar;
pub mod random;
pub mod spin7;
pub mod su3;
pub mod topology;

pub use error::{Error, Result};
pub use exterior::{Form, Hodge, Metric, Orientation};
pub use linalg::Matrix;
pub use scalar::{q, Dual, Scalar, Q};
