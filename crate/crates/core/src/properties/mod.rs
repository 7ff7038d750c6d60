//! Estimators and checkers for proximinality properties.
//!
//! Moduli live on a grid of resolution [`GRID`]. Excesses are exact vertex
//! programs when the norm and the body are polyhedral and the coefficient
//! dimension is at most four; otherwise they are sampled lower bounds, so the
//! derived moduli are upper bounds and are flagged as such.

mod continuity;
mod identity;
mod intersection;
mod strong;
mod uniform;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::normed_space::Vector;

pub use continuity::{continuity_sweep, projection_continuity_probe, ContinuityProbe};
pub use identity::{half_ball_residual, IdentityResidual};
pub use intersection::{three_two_ip_check, three_two_ip_check_seeded, IPVerdict, IpCounterexample, Triple};
pub use strong::{
    enlargement_gap, lz_falsifier, strong_prox_excess, strong_prox_excess_report, strong_prox_modulus,
    strong_prox_modulus_with, ExcessReport,
};
pub use uniform::{uniform_prox_modulus, SamplingBudget};

pub(crate) use strong::{check_epsilon, ExcessContext};

/// Resolution of every reported modulus.
pub const GRID: f64 = 1e-4;

/// Margin used for the strict inequalities in the uniform definition.
pub const STRICT_MARGIN: f64 = 1e-6;

/// Which way a reported modulus can be wrong.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Computed from exact excesses; correct up to the grid.
    Exact,
    /// Sampling can only miss bad points, so the true modulus may be smaller.
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x: Vector,
    pub y: Option<Vector>,
    pub achieved_excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    pub epsilon: f64,
    pub radius_r: Option<f64>,
    pub delta: f64,
    pub worst_witness: Witness,
    pub samples_used: usize,
    pub bound: Bound,
    /// The search hit its upper limit without finding a violation.
    pub capped: bool,
}

/// Largest grid point strictly below `v` (never negative).
pub(crate) fn grid_below(v: f64) -> f64 {
    let k = (v / GRID).ceil() - 1.0;
    k.max(0.0) * GRID
}

/// Largest δ tried by modulus searches before reporting `capped`.
const DELTA_CAP: f64 = 1e3;

/// Largest grid δ with `excess(δ) ≤ ε`, assuming `excess` is nondecreasing.
///
/// Doubles from one grid step, then bisects. Returns the δ, the payload of the
/// last accepted evaluation and whether the cap was reached.
pub(crate) fn grid_search<T, F>(epsilon: f64, mut excess: F) -> Result<(f64, T, bool)>
where
    F: FnMut(f64) -> Result<(f64, T)>,
{
    let max_k = (DELTA_CAP / GRID) as u64;
    let mut eval = |k: u64| excess(k as f64 * GRID);
    let mut lo = 0u64;
    let mut lo_payload = eval(0)?.1;
    let mut hi = 1u64;
    loop {
        let (v, payload) = eval(hi)?;
        if v > epsilon {
            break;
        }
        lo = hi;
        lo_payload = payload;
        if hi >= max_k {
            return Ok((lo as f64 * GRID, lo_payload, true));
        }
        hi = (hi * 2).min(max_k);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let (v, payload) = eval(mid)?;
        if v > epsilon {
            hi = mid;
        } else {
            lo = mid;
            lo_payload = payload;
        }
    }
    Ok((lo as f64 * GRID, lo_payload, false))
}
