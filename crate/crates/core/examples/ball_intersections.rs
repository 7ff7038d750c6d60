//! Common points of norm balls and the 3.2 intersection property.

use proxilab::convex_solver::{convex_feasibility, Ball};
use proxilab::normed_space::{NormSpec, Vector};
use proxilab::properties::{three_two_ip_check, three_two_ip_check_seeded, Triple};
use proxilab::Result;

fn main() -> Result<()> {
    let h = 3f64.sqrt();
    let centers = [Vector::from([0.0, 0.0]), Vector::from([2.0, 0.0]), Vector::from([1.0, h])];
    let balls: Vec<Ball> = centers.iter().map(|c| Ball::new(c.clone(), 1.0)).collect();
    for n in [NormSpec::euclidean(2), NormSpec::linf(2)] {
        let f = convex_feasibility(&balls, None, &n)?;
        println!("{n:?}: feasible = {}, slack = {:.6}", f.feasible, f.slack);
    }

    let triangle = Triple { centers, radii: [1.0; 3] };
    let v = three_two_ip_check_seeded(&NormSpec::euclidean(2), 10, 0, &[triangle])?;
    println!(
        "Euclidean plane: holds = {}, counterexample slack = {:?}",
        v.holds_on_samples,
        v.counterexample.map(|c| c.slack)
    );
    for n in [NormSpec::linf(3), NormSpec::l1(2)] {
        let v = three_two_ip_check(&n, 500, 1)?;
        println!("{n:?}: holds on {} triples = {}", v.trials_run, v.holds_on_samples);
    }
    Ok(())
}
