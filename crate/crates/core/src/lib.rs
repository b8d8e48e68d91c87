//! Zeros of Gaussian Weyl-Heisenberg functions.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod kernel;
pub mod mc;
pub mod plot;
pub mod quad;
pub mod simulate;
pub mod special;
pub mod window;
pub mod zeros;

pub use error::{Error, Result};
