//! Neumann eigenvalue bounds for `-div(A grad f)` through A-quasiconformal
//! maps onto the unit disc, with a P1 finite-element verifier.

pub mod bounds;
pub mod cli;
pub mod dilatation;
pub mod error;
pub mod fem;
pub mod qcmaps;
pub mod quadrature;
pub mod special;

pub use error::{Error, Result};
