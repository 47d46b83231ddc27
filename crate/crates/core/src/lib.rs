// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod boundary;
pub mod error;
pub mod group;
pub mod patterson_sullivan;
pub mod quadrature;
pub mod quantization;
pub mod special;
pub mod support;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
