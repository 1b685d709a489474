//! Fifth-order finite-difference WENO schemes (LOC, JS5 and UD5 weights) for
//! scalar conservation laws and the 1D/2D Euler equations.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod euler1d;
pub mod euler2d;
pub mod harness;
pub mod problems;
pub mod scalar;
pub mod stencil;
pub mod time;

pub use error::{Error, Result};
pub use stencil::{EpsilonPolicy, SchemeConfig, Variant};
