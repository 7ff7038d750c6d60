#![allow(dead_code)]

use proxilab::bochner::{LpIndex, Piece, StepFunction};
use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vector(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> Vector {
    Vector::new((0..dim).map(|_| rng.gen_range(-scale..scale)).collect()).unwrap()
}

pub fn norm(rng: &mut ChaCha8Rng, dim: usize) -> NormSpec {
    match rng.gen_range(0..4) {
        0 => NormSpec::l1(dim),
        1 => NormSpec::euclidean(dim),
        2 => NormSpec::linf(dim),
        _ => NormSpec::lp(dim, 3.0).unwrap(),
    }
}

/// A proper subspace with a random basis.
pub fn subspace(rng: &mut ChaCha8Rng, dim: usize) -> ConvexBody {
    let k = rng.gen_range(1..dim.max(2));
    let basis = (0..k).map(|_| vector(rng, dim, 1.0)).collect();
    ConvexBody::subspace(basis).unwrap()
}

pub fn weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut cuts: Vec<f64> = (0..k - 1).map(|_| rng.gen_range(0.05..0.95)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut w = Vec::with_capacity(k);
    let mut prev = 0.0;
    for c in cuts {
        w.push((c - prev).max(1e-3));
        prev = c;
    }
    w.push(1.0 - w.iter().sum::<f64>());
    w
}

pub fn step(rng: &mut ChaCha8Rng, dim: usize, k: usize, scale: f64) -> StepFunction {
    let w = weights(rng, k);
    StepFunction::new(w.into_iter().map(|w| Piece { w, x: vector(rng, dim, scale) }).collect()).unwrap()
}

/// A step function whose values lie in the span of `basis`, scaled into the ball of radius `within` if given.
pub fn step_in(rng: &mut ChaCha8Rng, body: &ConvexBody, n: &NormSpec, k: usize, within: Option<f64>) -> StepFunction {
    let basis = body.basis().unwrap();
    let w = weights(rng, k);
    let pieces = w
        .into_iter()
        .map(|w| {
            let mut z = vec![0.0; n.dim()];
            for b in basis {
                let c: f64 = rng.gen_range(-2.0..2.0);
                for (zi, bi) in z.iter_mut().zip(b.iter()) {
                    *zi += c * bi;
                }
            }
            let mut x = Vector::new(z).unwrap();
            if let Some(r) = within {
                let len = proxilab::normed_space::norm_eval(&x, n).unwrap();
                let target = r * rng.gen::<f64>();
                if len > 0.0 {
                    x = x.scaled(target / len);
                }
            }
            Piece { w, x }
        })
        .collect();
    StepFunction::new(pieces).unwrap()
}

pub fn exponent(rng: &mut ChaCha8Rng, choices: &[f64]) -> LpIndex {
    LpIndex::new(choices[rng.gen_range(0..choices.len())]).unwrap()
}
