//! LuGre and Dahl friction models under slow periodic inputs: simulation,
//! closed-form limit loops and convergence experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod geometry;
pub mod integrator;
pub mod interp;
pub mod lab;
pub mod model;
pub mod quadrature;
pub mod signal;

pub use error::{Error, Result};
