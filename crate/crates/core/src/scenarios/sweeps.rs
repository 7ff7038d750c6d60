//! Seeded sweeps over random instances, shared by the builtins and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bochner::{
    average, common_refinement, dist_lifted_ball, dist_lifted_subspace, dist_to_projection_set, lp_distance, lp_norm,
    pointwise_ball_projection, LpIndex, Method, Piece, StepFunction,
};
use crate::error::Result;
use crate::normed_space::{NormSpec, Vector};
use crate::projection::ConvexBody;
use crate::properties::half_ball_residual;

/// Shape of the random lifted instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepShape {
    pub count: usize,
    pub max_dim: usize,
    pub max_pieces: usize,
    pub exponents: Vec<LpIndex>,
}

impl Default for SweepShape {
    fn default() -> Self {
        Self { count: 200, max_dim: 3, max_pieces: 6, exponents: vec![LpIndex::ONE, LpIndex::TWO, LpIndex::INFINITY] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiftKind {
    Subspace,
    Ball,
    ProjectionSet,
    BallProjectionSet,
}

/// One random instance with both methods evaluated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSample {
    pub index: usize,
    pub dim: usize,
    pub pieces: usize,
    pub p: LpIndex,
    pub formula: f64,
    pub direct: f64,
}

impl LiftSample {
    pub fn gap(&self) -> f64 {
        (self.formula - self.direct).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub samples: Vec<LiftSample>,
}

impl SweepOutcome {
    pub fn max_gap(&self) -> f64 {
        self.samples.iter().map(LiftSample::gap).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&LiftSample> {
        self.samples.iter().max_by(|a, b| a.gap().total_cmp(&b.gap()).then(b.index.cmp(&a.index)))
    }

    pub fn violations(&self, tol: f64) -> usize {
        self.samples.iter().filter(|s| s.gap() > tol).count()
    }
}

pub(crate) fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub(crate) fn random_vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vector {
    Vector::from_vec_unchecked((0..dim).map(|_| rng.gen_range(-scale..scale)).collect())
}

pub(crate) fn random_norm(rng: &mut ChaCha8Rng, dim: usize) -> NormSpec {
    match rng.gen_range(0..4) {
        0 => NormSpec::l1(dim),
        1 => NormSpec::euclidean(dim),
        2 => NormSpec::linf(dim),
        _ => NormSpec::Lp { dim, p: 3.0 },
    }
}

/// A subspace of dimension `1..dim` (the whole line when `dim = 1`).
pub(crate) fn random_subspace(rng: &mut ChaCha8Rng, dim: usize) -> ConvexBody {
    loop {
        let k = if dim == 1 { 1 } else { rng.gen_range(1..dim) };
        let basis: Vec<Vector> = (0..k).map(|_| random_vector(rng, dim, 1.0)).collect();
        if let Ok(body) = ConvexBody::subspace(basis) {
            return body;
        }
    }
}

pub(crate) fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let rest: f64 = w[..k - 1].iter().sum();
    w[k - 1] = 1.0 - rest;
    w
}

pub(crate) fn random_step(rng: &mut ChaCha8Rng, dim: usize, k: usize, scale: f64) -> StepFunction {
    let pieces = random_weights(rng, k).into_iter().map(|w| Piece { w, x: random_vector(rng, dim, scale) }).collect();
    StepFunction::new(pieces).expect("weights sum to one")
}

/// Step function with values in `Y`, or in `B_Y` when `ball` is set.
pub(crate) fn random_step_in(rng: &mut ChaCha8Rng, y: &ConvexBody, n: &NormSpec, k: usize, ball: bool) -> StepFunction {
    let pieces = random_weights(rng, k).into_iter().map(|w| Piece { w, x: random_point_in(rng, y, n, ball) }).collect();
    StepFunction::new(pieces).expect("weights sum to one")
}

pub(crate) fn random_point_in(rng: &mut ChaCha8Rng, y: &ConvexBody, n: &NormSpec, ball: bool) -> Vector {
    let basis = y.basis().expect("subspace body");
    let mut z = vec![0.0; n.dim()];
    for b in basis {
        let c: f64 = rng.gen_range(-2.0..2.0);
        for (zi, bi) in z.iter_mut().zip(b.iter()) {
            *zi += c * bi;
        }
    }
    let len = n.eval(&z);
    let radius = match y {
        ConvexBody::SubspaceBall { radius, .. } => *radius,
        _ => 1.0,
    };
    if ball && len > 0.0 {
        let target = radius * rng.gen::<f64>() * (1.0 - 1e-9);
        z.iter_mut().for_each(|v| *v *= target / len);
    }
    Vector::from_vec_unchecked(z)
}

fn lift_sample(kind: LiftKind, shape: &SweepShape, seed: u64, index: usize) -> Result<LiftSample> {
    let mut rng = stream(seed, index);
    let dim = rng.gen_range(1..=shape.max_dim.max(1));
    let k = rng.gen_range(1..=shape.max_pieces.max(1));
    let p = shape.exponents[rng.gen_range(0..shape.exponents.len())];
    let n = random_norm(&mut rng, dim);
    let y = random_subspace(&mut rng, dim);
    let (formula, direct) = match kind {
        LiftKind::Subspace => {
            let f = random_step(&mut rng, dim, k, 3.0);
            (
                dist_lifted_subspace(&f, &y, &n, p, Method::Formula)?,
                dist_lifted_subspace(&f, &y, &n, p, Method::Direct)?,
            )
        }
        LiftKind::Ball => {
            let f = random_step(&mut rng, dim, k, 3.0);
            (dist_lifted_ball(&f, &y, &n, p, Method::Formula)?, dist_lifted_ball(&f, &y, &n, p, Method::Direct)?)
        }
        LiftKind::ProjectionSet | LiftKind::BallProjectionSet => {
            let ball = kind == LiftKind::BallProjectionSet;
            let f = random_step_in(&mut rng, &y, &n, k, ball);
            let kg = rng.gen_range(1..=shape.max_pieces.max(1));
            let g = random_step(&mut rng, dim, kg, 3.0);
            (
                dist_to_projection_set(&f, &g, &y, &n, p, ball, Method::Formula)?,
                dist_to_projection_set(&f, &g, &y, &n, p, ball, Method::Direct)?,
            )
        }
    };
    Ok(LiftSample { index, dim, pieces: k, p, formula, direct })
}

/// Evaluates formula and direct method on `shape.count` random instances.
pub fn lift_sweep(kind: LiftKind, shape: &SweepShape, seed: u64) -> Result<SweepOutcome> {
    let samples = (0..shape.count).into_par_iter().map(|i| lift_sample(kind, shape, seed, i)).collect::<Result<_>>()?;
    Ok(SweepOutcome { samples })
}

/// Largest `‖avg(g)‖ - ‖g‖_p` over random `g` and the given exponents (≤ 0 when Jensen holds).
pub fn jensen_sweep(count: usize, exponents: &[LpIndex], seed: u64) -> Result<f64> {
    let worst: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let dim = rng.gen_range(1..=3);
            let k = rng.gen_range(1..=6);
            let n = random_norm(&mut rng, dim);
            let g = random_step(&mut rng, dim, k, 3.0);
            let avg = n.eval(average(&g).as_slice());
            exponents
                .iter()
                .map(|&p| Ok(avg - lp_norm(&g, p, &n)?))
                .try_fold(f64::NEG_INFINITY, |m, v: Result<f64>| Ok(m.max(v?)))
        })
        .collect::<Result<_>>()?;
    Ok(worst.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// Largest change of any lifted distance after refining with a random partition.
pub fn refinement_sweep(count: usize, seed: u64) -> Result<f64> {
    let drifts: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let dim = rng.gen_range(1..=3);
            let n = random_norm(&mut rng, dim);
            let y = random_subspace(&mut rng, dim);
            let p = [LpIndex::ONE, LpIndex::TWO, LpIndex::INFINITY][rng.gen_range(0..3)];
            let (kf, ko) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
            let f = random_step(&mut rng, dim, kf, 3.0);
            let other = random_step(&mut rng, dim, ko, 1.0);
            let (fr, _) = common_refinement(&f, &other)?;
            let mut drift: f64 = 0.0;
            drift = drift.max((lp_norm(&f, p, &n)? - lp_norm(&fr, p, &n)?).abs());
            for m in [Method::Formula, Method::Direct] {
                drift = drift
                    .max((dist_lifted_subspace(&f, &y, &n, p, m)? - dist_lifted_subspace(&fr, &y, &n, p, m)?).abs());
                drift = drift.max((dist_lifted_ball(&f, &y, &n, p, m)? - dist_lifted_ball(&fr, &y, &n, p, m)?).abs());
            }
            Ok(drift)
        })
        .collect::<Result<_>>()?;
    Ok(drifts.into_iter().fold(0.0, f64::max))
}

/// Largest `|‖f - h‖_p - d(f, B_{L_p(I,Y)})|` with `h` the pointwise ball projection of `f`.
pub fn pointwise_ball_sweep(shape: &SweepShape, seed: u64) -> Result<SweepOutcome> {
    let samples = (0..shape.count)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream(seed, index);
            let dim = rng.gen_range(1..=shape.max_dim.max(1));
            let k = rng.gen_range(1..=shape.max_pieces.max(1));
            let p = shape.exponents[rng.gen_range(0..shape.exponents.len())];
            let n = random_norm(&mut rng, dim);
            let y = random_subspace(&mut rng, dim);
            let f = random_step(&mut rng, dim, k, 3.0);
            let h = pointwise_ball_projection(&f, &y, &n)?;
            Ok(LiftSample {
                index,
                dim,
                pieces: k,
                p,
                formula: lp_distance(&f, &h, p, &n)?,
                direct: dist_lifted_ball(&f, &y, &n, p, Method::Direct)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SweepOutcome { samples })
}

/// Identity residuals on random pairs `x ∈ X`, `y ∈ Y` (or `y ∈ B_Y` for subspace balls).
pub fn half_ball_sweep(y: &ConvexBody, n: &NormSpec, count: usize, seed: u64) -> Result<Vec<(Vector, Vector, f64)>> {
    let ball = matches!(y, ConvexBody::SubspaceBall { .. });
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, i);
            let x = random_vector(&mut rng, n.dim(), 3.0);
            let yv = random_point_in(&mut rng, y, n, ball);
            let r = half_ball_residual(y, n, &x, &yv)?;
            Ok((x, yv, r.residual))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subspace_sweep_agrees() {
        let shape = SweepShape { count: 30, ..Default::default() };
        let out = lift_sweep(LiftKind::Subspace, &shape, 1).unwrap();
        assert!(out.max_gap() <= 1e-6, "{:?}", out.worst());
    }

    #[test]
    fn projection_set_sweep_agrees() {
        let shape = SweepShape { count: 30, exponents: vec![LpIndex::ONE, LpIndex::TWO], ..Default::default() };
        let out = lift_sweep(LiftKind::ProjectionSet, &shape, 2).unwrap();
        assert!(out.max_gap() <= 1e-5, "{:?}", out.worst());
    }

    #[test]
    fn jensen_holds() {
        let exps =
            [LpIndex::ONE, LpIndex::new(1.5).unwrap(), LpIndex::TWO, LpIndex::new(4.0).unwrap(), LpIndex::INFINITY];
        assert!(jensen_sweep(50, &exps, 3).unwrap() <= 1e-12);
    }

    #[test]
    fn refinement_is_invisible() {
        assert!(refinement_sweep(20, 4).unwrap() <= 1e-9);
    }
}
