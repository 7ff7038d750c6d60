//! Linear programs with dual certificates, vertex enumeration and optimal faces.

use proxilab::convex_solver::{enumerate_optimal_face, enumerate_vertices, solve_lp, HPolytope, LinearProgram};
use proxilab::normed_space::{unit_ball_hrep, NormSpec, Vector};
use proxilab::Result;

fn main() -> Result<()> {
    let cube = HPolytope::cube(3, 0.0, 1.0);
    let lp = LinearProgram::new(Vector::from([-1.0, -2.0, 0.0]), cube.clone());
    let sol = solve_lp(&lp)?;
    println!("min value {:.3} at {:?}", sol.value, sol.point.as_slice());
    println!("multipliers {:?}", sol.multipliers);
    // The third coordinate is free, so the optimum is an edge.
    let face = enumerate_optimal_face(&lp)?;
    println!("optimal face has {} vertices", face.vertices().len());

    let cross = unit_ball_hrep(&NormSpec::l1(3))?;
    println!("l1 unit ball: {} facets, {} vertices", cross.rows().len(), enumerate_vertices(&cross)?.vertices().len());
    Ok(())
}
