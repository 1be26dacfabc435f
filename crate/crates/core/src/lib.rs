//! Work extraction from a spin coupled to a bosonic bath and driven by short pulses.
//!
//! Closed-form kernels and work formulas, plus a brute-force finite-bath simulator
//! that checks them. Natural units: ħ = k_B = 1.

// `!(x > 0.0)` is the idiom used throughout to reject NaN along with the bound.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath_kernels;
pub mod cli;
pub mod disorder_ensemble;
pub mod error;
pub mod linalg;
pub mod optimize;
pub mod oracle;
pub mod pulse_algebra;
pub mod quadrature;
pub mod special_functions;
pub mod thermodynamics;
pub mod work_engine;

pub use error::{Error, Result};
