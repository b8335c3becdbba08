//! Numerical tools for intersections of real quadrics.
//!
//! * [`forms`]: symmetric forms, the evaluation map `E(v) = (w(v, v))_w`,
//!   inertia, W-orthogonality and W-independence.
//! * [`admissibility`]: covering-net certificates and Monte Carlo estimates of
//!   m-admissibility, an instance generator and the closed-form constants.
//! * [`solver`]: constructive solution of `E(v) = t` with a continuation fallback.
//! * [`tangent`]: the tuple map θ, its Jacobian, tangent lifts and tangent spaces.
//! * [`connect`]: verified piecewise-linear paths on the nonsingular zero locus.
//! * [`cli`]: JSON formats and the command-line front end.

pub mod admissibility;
pub mod cli;
pub mod connect;
pub mod error;
pub mod forms;
mod linalg;
pub mod seed;
pub mod solver;
pub mod tangent;

pub use error::{Error, Result};
pub use forms::{EvalVector, FormSpace, Signature, SymmetricForm};
