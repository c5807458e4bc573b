//! Numerical toolkit for partially overdetermined elliptic problems.
//!
//! Two independent halves:
//!
//! * a level-set shape optimizer that minimizes the Dirichlet energy of
//!   `-Δu = 1` over domains of prescribed area inside the box `(-1, 1)²`
//!   ([`geometry`], [`fem`], [`shapeopt`], [`overdet`]);
//! * exact evaluators for two explicit piecewise-radial solutions of
//!   `-Δu = f(u)` with constant `|∇u|` on a spherical piece of the boundary
//!   ([`radial`]).

// `!(x > y)` comparisons are used on purpose to reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fem;
pub mod geometry;
pub mod overdet;
pub mod par;
pub mod radial;
pub mod report;
pub mod shapeopt;

pub use error::{Error, Result};
