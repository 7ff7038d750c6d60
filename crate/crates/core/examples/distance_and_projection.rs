//! Distances and metric projections onto subspaces, balls and polytopes.
//!
//! Run with `cargo run --example distance_and_projection`.

use proxilab::convex_solver::HPolytope;
use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::{distance, project, ConvexBody, MinimizerSet};
use proxilab::Result;

fn describe(set: &MinimizerSet) -> String {
    match set {
        MinimizerSet::Singleton(p) => format!("the single point {:?}", p.as_slice()),
        MinimizerSet::Face(f) => {
            format!("the polytope with vertices {:?}", f.vertices().iter().map(Vector::as_slice).collect::<Vec<_>>())
        }
        MinimizerSet::Sampled { points, coverage_radius } => {
            format!("a sampled set of {} points (coverage {coverage_radius:.2e})", points.len())
        }
    }
}

fn main() -> Result<()> {
    let x = Vector::from([2.0, 0.0]);
    let disk = ConvexBody::norm_ball(1.0)?;
    let r = project(&x, &disk, &NormSpec::euclidean(2))?;
    println!("disk:      d = {:.6}, P(x) is {}", r.distance, describe(&r.minimizers));

    let axis = ConvexBody::coordinate_subspace(2, &[0])?;
    let r = project(&Vector::from([0.0, 1.0]), &axis, &NormSpec::linf(2))?;
    println!("l_inf axis: d = {:.6}, P(x) is {}", r.distance, describe(&r.minimizers));

    let square = ConvexBody::polytope(HPolytope::cube(2, -1.0, 1.0));
    for n in [NormSpec::l1(2), NormSpec::euclidean(2), NormSpec::linf(2)] {
        let d = distance(&Vector::from([3.0, 2.0]), &square, &n)?;
        println!("square, {n:?}: d((3,2)) = {d:.6}");
    }
    Ok(())
}
