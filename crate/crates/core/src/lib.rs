//! Set-valued metric projections in finite-dimensional normed spaces.
//!
//! The crate computes distances, minimizer sets and near-minimizer sets of
//! convex bodies under `ℓ_p`, polyhedral and sup-direct-sum norms, estimates
//! strong and uniform proximinality moduli, checks ball-intersection
//! properties, and lifts everything to step functions in `L_p([0,1], X)`.

pub mod bochner;
pub mod convex_solver;
pub mod error;
pub mod normed_space;
pub mod projection;
pub mod properties;
pub mod scenarios;

pub use error::{Error, Result};
