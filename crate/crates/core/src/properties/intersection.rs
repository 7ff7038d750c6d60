use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convex_solver::{convex_feasibility, Ball};
use crate::error::{check_dim, Error, Result};
use crate::normed_space::{NormSpec, Vector};

/// Triple slack above which an infeasible triple counts as a counterexample.
const COUNTEREXAMPLE_SLACK: f64 = 1e-6;
const PAIRWISE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triple {
    pub centers: [Vector; 3],
    pub radii: [f64; 3],
}

impl Triple {
    fn balls(&self) -> Vec<Ball> {
        self.centers.iter().zip(self.radii).map(|(c, r)| Ball::new(c.clone(), r)).collect()
    }

    fn pairwise_intersecting(&self, n: &NormSpec) -> bool {
        (0..3).all(|i| {
            (i + 1..3).all(|j| {
                n.eval_diff(self.centers[i].as_slice(), self.centers[j].as_slice())
                    <= self.radii[i] + self.radii[j] + PAIRWISE_TOL
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpCounterexample {
    pub centers: Vec<Vector>,
    pub radii: Vec<f64>,
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IPVerdict {
    pub holds_on_samples: bool,
    pub counterexample: Option<IpCounterexample>,
    pub trials_run: usize,
}

/// Tests whether pairwise intersecting triples of balls have a common point.
pub fn three_two_ip_check(n: &NormSpec, trials: usize, seed: u64) -> Result<IPVerdict> {
    three_two_ip_check_seeded(n, trials, seed, &[])
}

/// As [`three_two_ip_check`], examining the given triples before the random ones.
pub fn three_two_ip_check_seeded(n: &NormSpec, trials: usize, seed: u64, seeded: &[Triple]) -> Result<IPVerdict> {
    n.validate()?;
    if trials == 0 && seeded.is_empty() {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    for t in seeded {
        for (c, r) in t.centers.iter().zip(t.radii) {
            check_dim(n.dim(), c.dim())?;
            if r.is_nan() || r < 0.0 {
                return Err(Error::InvalidInput(format!("negative radius {r}")));
            }
        }
        if !t.pairwise_intersecting(n) {
            return Err(Error::InvalidInput("seeded triple is not pairwise intersecting".into()));
        }
    }
    let random: Vec<Triple> = (0..trials).map(|i| random_triple(n, seed, i as u64)).collect();
    let all: Vec<&Triple> = seeded.iter().chain(&random).collect();
    let slacks: Vec<f64> =
        all.par_iter().map(|t| Ok(convex_feasibility(&t.balls(), None, n)?.slack)).collect::<Result<_>>()?;
    for (t, &slack) in all.iter().zip(&slacks) {
        if slack > COUNTEREXAMPLE_SLACK && confirm(t, n)? {
            return Ok(IPVerdict {
                holds_on_samples: false,
                counterexample: Some(IpCounterexample { centers: t.centers.to_vec(), radii: t.radii.to_vec(), slack }),
                trials_run: all.len(),
            });
        }
    }
    Ok(IPVerdict { holds_on_samples: true, counterexample: None, trials_run: all.len() })
}

/// Independent re-check with the balls in reverse order.
fn confirm(t: &Triple, n: &NormSpec) -> Result<bool> {
    let mut balls = t.balls();
    balls.reverse();
    let again = convex_feasibility(&balls, None, n)?;
    Ok(t.pairwise_intersecting(n) && again.slack > COUNTEREXAMPLE_SLACK)
}

/// Even trials scale the radii until the farthest pair just touches; odd
/// trials resample until every pair meets.
fn random_triple(n: &NormSpec, seed: u64, index: u64) -> Triple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let dim = n.dim();
    let draw = |rng: &mut ChaCha8Rng| -> Triple {
        let mut point = || Vector::from_vec_unchecked((0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let centers = [point(), point(), point()];
        let radii = [rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0), rng.gen_range(0.1..2.0)];
        Triple { centers, radii }
    };
    if index % 2 == 1 {
        for _ in 0..1000 {
            let t = draw(&mut rng);
            if t.pairwise_intersecting(n) {
                return t;
            }
        }
    }
    let mut t = draw(&mut rng);
    let mut scale: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let gap = n.eval_diff(t.centers[i].as_slice(), t.centers[j].as_slice());
            scale = scale.max(gap / (t.radii[i] + t.radii[j]));
        }
    }
    for r in &mut t.radii {
        *r *= scale;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_triangle_is_a_counterexample() {
        let h = 3f64.sqrt();
        let t = Triple {
            centers: [Vector::from([0.0, 0.0]), Vector::from([2.0, 0.0]), Vector::from([1.0, h])],
            radii: [1.0; 3],
        };
        let v = three_two_ip_check_seeded(&NormSpec::euclidean(2), 5, 1, &[t]).unwrap();
        assert!(!v.holds_on_samples);
        let ce = v.counterexample.unwrap();
        assert!((ce.slack - (2.0 / h - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn linf_plane_holds() {
        let v = three_two_ip_check(&NormSpec::linf(2), 200, 7).unwrap();
        assert!(v.holds_on_samples);
        assert_eq!(v.trials_run, 200);
    }

    #[test]
    fn random_triples_pairwise_intersect() {
        let n = NormSpec::euclidean(3);
        for i in 0..50 {
            assert!(random_triple(&n, 3, i).pairwise_intersecting(&n));
        }
    }
}
