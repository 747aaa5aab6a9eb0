//! Numerical laboratory for resolvent and spectral-projector estimates on
//! round spheres and hyperbolic space.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod scalar;
pub mod special;
pub mod jet;
pub mod windows;
pub mod sphere;
pub mod norm;
pub mod hyperbolic;
pub mod report;
pub mod experiments;

pub use error::{Error, Result};
pub use scalar::Real;

pub type QuadratureRule = special::QuadratureRule<f64>;
pub type QuadratureRuleF32 = special::QuadratureRule<f32>;
pub type GegenbauerParams = special::GegenbauerParams<f64>;
