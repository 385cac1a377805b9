//! Simulator and verification suite for a porous-medium chemotaxis–fluid
//! system with regularized nonlinear diffusion.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod grid;
pub mod ledger;
pub mod linsolve;
pub mod model;
pub mod oracle;
pub mod run;
pub mod mollify;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
