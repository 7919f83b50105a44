//! Solvers for one-dimensional diffusion with a time-dependent Dirac-delta sink
//! at the origin,
//!
//! ```text
//! ∂P/∂t = D ∂²P/∂x² − 2k(t) δ(x) P
//! ```
//!
//! The origin density `P(0,t)` is obtained from a Volterra equation with an Abel
//! kernel ([`volterra`]); the full field follows from it ([`field`]). Closed-form
//! propagators ([`analytic`]), Laplace-domain solutions with numerical inversion
//! ([`laplace`]) and a Crank–Nicolson finite-difference solver ([`fdoracle`])
//! provide independent cross-checks.

// NaN-rejecting guards are written as `!(x > 0.0)` on purpose
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod error;
pub mod fdoracle;
pub mod field;
pub mod laplace;
pub mod model;
pub mod quad;
pub mod specfun;
pub mod volterra;

pub use error::{Error, Result};
pub use model::{InitialCondition, Problem, SinkModel, SpaceGrid, TimeGrid};
