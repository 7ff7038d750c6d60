//! Strong proximinality: excess of near sets over the projection and the modulus `δ(ε)`.

use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use proxilab::properties::{strong_prox_excess, strong_prox_modulus};
use proxilab::Result;

fn main() -> Result<()> {
    let disk = ConvexBody::norm_ball(1.0)?;
    let n = NormSpec::euclidean(2);
    let x = Vector::from([2.0, 0.0]);
    for delta in [0.01, 0.1, 0.21] {
        let e = strong_prox_excess(&disk, &n, &x, delta)?;
        println!("disk: excess({delta}) = {e:.6}, closed form {:.6}", (delta + delta * delta / 2.0).sqrt());
    }
    let m = strong_prox_modulus(&disk, &n, &x, 0.5)?;
    println!("disk: delta(0.5) = {} ({:?})", m.delta, m.bound);

    let plane = ConvexBody::coordinate_subspace(3, &[0, 1])?;
    let m = strong_prox_modulus(&plane, &NormSpec::linf(3), &Vector::from([0.5, -0.25, 1.0]), 0.3)?;
    println!("l_inf M-ideal: delta(0.3) = {} ({:?})", m.delta, m.bound);
    Ok(())
}
