mod common;

use proptest::prelude::*;
use proxilab::bochner::{average, common_refinement, dist_lifted_subspace, lp_distance, lp_norm, LpIndex, Method};
use proxilab::convex_solver::{convex_feasibility, solve_lp, Ball, HPolytope, LinearProgram};
use proxilab::normed_space::{norm_eval, NormSpec, Vector};
use proxilab::projection::{distance, project, ConvexBody};
use proxilab::properties::strong_prox_excess;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn norm_axioms(seed in any::<u64>(), dim in 1usize..5, t in -5.0f64..5.0) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let x = common::vector(&mut rng, dim, 3.0);
        let y = common::vector(&mut rng, dim, 3.0);
        let nx = norm_eval(&x, &n).unwrap();
        let ny = norm_eval(&y, &n).unwrap();
        prop_assert!(nx >= 0.0);
        prop_assert!(norm_eval(&(&x + &y), &n).unwrap() <= nx + ny + 1e-12);
        prop_assert!((norm_eval(&x.scaled(t), &n).unwrap() - t.abs() * nx).abs() <= 1e-9 * (1.0 + nx));
        prop_assert_eq!(norm_eval(&Vector::zeros(dim), &n).unwrap(), 0.0);
    }

    #[test]
    fn lp_duality_certificate(seed in any::<u64>(), dim in 1usize..5, extra in 0usize..5) {
        let mut rng = common::rng(seed);
        let mut p = HPolytope::cube(dim, -1.0, 1.0);
        for _ in 0..extra {
            let a = common::vector(&mut rng, dim, 1.0);
            p.push(a, 0.5).unwrap();
        }
        let c = common::vector(&mut rng, dim, 1.0);
        let sol = solve_lp(&LinearProgram::new(c.clone(), p.clone())).unwrap();
        prop_assert!(p.contains(&sol.point, 1e-9));
        prop_assert!((c.dot(&sol.point) - sol.value).abs() <= 1e-9);
        let mut residual = c.as_slice().to_vec();
        let mut dual_value = 0.0;
        for (lambda, row) in sol.multipliers.iter().zip(p.rows()) {
            prop_assert!(*lambda >= -1e-9);
            for (r, a) in residual.iter_mut().zip(row.normal.iter()) {
                *r += lambda * a;
            }
            dual_value -= lambda * row.offset;
        }
        prop_assert!(residual.iter().all(|r| r.abs() <= 1e-8), "{:?}", residual);
        prop_assert!((dual_value - sol.value).abs() <= 1e-8);
    }

    #[test]
    fn projections_certify_the_distance(seed in any::<u64>(), dim in 2usize..4) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let body = if seed % 2 == 0 { common::subspace(&mut rng, dim) } else { ConvexBody::norm_ball(1.5).unwrap() };
        let x = common::vector(&mut rng, dim, 4.0);
        let r = project(&x, &body, &n).unwrap();
        prop_assert!((r.distance - distance(&x, &body, &n).unwrap()).abs() <= 1e-7);
        if r.minimizers.is_exact() {
            for p in r.minimizers.points() {
                prop_assert!(body.contains(p, &n, 1e-6).unwrap());
                prop_assert!((norm_eval(&(&x - p), &n).unwrap() - r.distance).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn subspace_distance_is_translation_invariant_and_homogeneous(seed in any::<u64>(), dim in 2usize..4, t in -3.0f64..3.0) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let y = common::subspace(&mut rng, dim);
        let x = common::vector(&mut rng, dim, 2.0);
        let d = distance(&x, &y, &n).unwrap();
        let shift = y.basis().unwrap()[0].scaled(t);
        prop_assert!((distance(&(&x + &shift), &y, &n).unwrap() - d).abs() <= 1e-7 * (1.0 + d));
        prop_assert!((distance(&x.scaled(t), &y, &n).unwrap() - t.abs() * d).abs() <= 1e-7 * (1.0 + d));
    }

    #[test]
    fn feasibility_is_monotone_in_the_radii(seed in any::<u64>(), dim in 1usize..4, grow in 0.0f64..1.0) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let balls: Vec<Ball> = (0..3).map(|_| Ball::new(common::vector(&mut rng, dim, 2.0), 1.5)).collect();
        let bigger: Vec<Ball> = balls.iter().map(|b| Ball::new(b.center.clone(), b.radius + grow)).collect();
        let small = convex_feasibility(&balls, None, &n).unwrap();
        let large = convex_feasibility(&bigger, None, &n).unwrap();
        prop_assert!(large.slack <= small.slack + 1e-7);
        prop_assert!(!small.feasible || large.feasible);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn excess_is_monotone_in_delta(seed in any::<u64>(), d1 in 0.0f64..0.5, d2 in 0.0f64..0.5) {
        let mut rng = common::rng(seed);
        let n = if seed % 2 == 0 { NormSpec::linf(3) } else { NormSpec::l1(3) };
        let y = common::subspace(&mut rng, 3);
        let x = common::vector(&mut rng, 3, 2.0);
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let e_lo = strong_prox_excess(&y, &n, &x, lo).unwrap();
        let e_hi = strong_prox_excess(&y, &n, &x, hi).unwrap();
        prop_assert!(e_lo <= e_hi + 1e-7, "{} > {}", e_lo, e_hi);
    }

    #[test]
    fn jensen_average_inequality(seed in any::<u64>(), dim in 1usize..4, k in 1usize..7) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let g = common::step(&mut rng, dim, k, 3.0);
        let avg = norm_eval(&average(&g), &n).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            prop_assert!(avg <= lp_norm(&g, LpIndex::new(p).unwrap(), &n).unwrap() + 1e-12);
        }
    }

    #[test]
    fn lp_norm_is_monotone_in_p(seed in any::<u64>(), dim in 1usize..4, k in 1usize..7) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let g = common::step(&mut rng, dim, k, 3.0);
        let values: Vec<f64> = [1.0, 1.5, 2.0, 4.0, f64::INFINITY]
            .iter()
            .map(|&p| lp_norm(&g, LpIndex::new(p).unwrap(), &n).unwrap())
            .collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1] + 1e-12), "{:?}", values);
    }

    #[test]
    fn refinement_invariance(seed in any::<u64>(), dim in 2usize..4, k in 1usize..5, j in 1usize..5) {
        let mut rng = common::rng(seed);
        let n = common::norm(&mut rng, dim);
        let y = common::subspace(&mut rng, dim);
        let f = common::step(&mut rng, dim, k, 3.0);
        let g = common::step(&mut rng, dim, j, 3.0);
        let p = common::exponent(&mut rng, &[1.0, 2.0, 3.0, f64::INFINITY]);
        let (rf, rg) = common_refinement(&f, &g).unwrap();
        prop_assert!((lp_norm(&rf, p, &n).unwrap() - lp_norm(&f, p, &n).unwrap()).abs() <= 1e-9);
        prop_assert!((lp_distance(&rf, &rg, p, &n).unwrap() - lp_distance(&f, &g, p, &n).unwrap()).abs() <= 1e-9);
        for method in [Method::Formula, Method::Direct] {
            let a = dist_lifted_subspace(&f, &y, &n, p, method).unwrap();
            let b = dist_lifted_subspace(&rf, &y, &n, p, method).unwrap();
            prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a), "{:?}: {} vs {}", method, a, b);
        }
    }
}
