// NaN must fail these guards, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebras;
pub mod cli;
pub mod error;
pub mod io;
pub mod kernels;
pub mod projections;
pub mod quadrature;
pub mod specfun;
pub mod spectral;
pub mod symbols;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
