//! Electrodynamics with a preferred frame: triangular Lorentz kinematics,
//! field algebra, exact plane-wave solutions and a finite-difference solver
//! for the preferred-frame field equations.

// `!(x > 0.0)` rejects NaN on purpose; index loops follow tensor notation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod exec;
pub mod fdtd;
pub mod field;
pub mod kinematics;
pub mod planewave;
pub mod sum;

pub use error::{Error, Result};
pub use exec::Exec;

/// Absolute tolerance for algebraic identities on O(1) quantities.
pub const IDENTITY_TOL: f64 = 1e-12;
