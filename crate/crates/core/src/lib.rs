// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod duhamel;
pub mod equivariant;
pub mod error;
pub mod getzler;
pub mod multivector;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
