//! Discrete-time quantum walks on the line.
//!
//! A walk is described site by site over a finite window together with a rule
//! for extending it to all of ℤ. The crate converts walks between the four
//! canonical typed forms by explicit sitewise intertwiners, factors them into
//! shift and coin, decides whether they are Szegedy walks by solving the
//! phase congruences on their coin parameters, and simulates them exactly on
//! finitely supported states.

// `!(x < tol)` is used on purpose so NaN residuals fail
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod angle;
pub mod canonical;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod format;
pub mod linalg;
pub mod szegedy;
pub mod walk;
pub mod zoo;

pub use angle::{Angle, CongruenceConstraint, Modulus, SolutionSet};
pub use error::{Error, Result};
pub use walk::{Amp, Coin2, Extension, PolarCoin, SiteBases, TypedClass, WalkSpec};
