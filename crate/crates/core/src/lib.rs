//! Inexact proximal gradient methods with injected computational errors, and
//! evaluators for their convergence bounds.
//!
//! `no_std` with `alloc`; all linear algebra is dense `f64` via nalgebra.

#![no_std]
extern crate alloc;

pub mod bounds;
pub mod error;
pub mod error_models;
pub mod experiments;
pub mod linalg;
pub mod problem;
pub mod rng;
pub mod solver;
pub mod stepsize;

pub use error::{Error, Result};
pub use nalgebra::{DMatrix, DVector};
pub use problem::{CompositeProblem, L1Term, QuadraticSmooth, Scale, SmoothFn};
