//! Points close to `x` along the ray towards its projection that stay far from `P_C(x)`.

use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::{distance_to_projection_set, ConvexBody};
use proxilab::properties::lz_falsifier;
use proxilab::Result;

fn main() -> Result<()> {
    let disk = ConvexBody::norm_ball(1.0)?;
    let n = NormSpec::euclidean(2);
    let x = Vector::from([2.0, 0.0]);
    for alpha in [1.0, 1.5, 2.0] {
        match lz_falsifier(&disk, &n, &x, alpha, 0.5)? {
            Some(w) => println!(
                "alpha = {alpha}: witness {:?} at distance {:.6} from P(x)",
                w.as_slice(),
                distance_to_projection_set(&w, &x, &disk, &n)?
            ),
            None => println!("alpha = {alpha}: no witness"),
        }
    }
    Ok(())
}
