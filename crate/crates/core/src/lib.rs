//! Exact and numeric tools for rank-one convex quadratic forms in linear
//! elasticity: acoustic tensors, their determinant polynomials, and
//! extremality checks for forms and nonnegative polynomials.

pub mod battery;
pub mod cli;
pub mod config;
pub mod elastic;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod lp;
pub mod poly;
pub mod rational;
pub mod sphere;
pub mod translation;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use poly::{HomoPoly, LinearSubstitution};
pub use rational::Rational;
