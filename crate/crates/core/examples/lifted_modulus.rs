//! Strong-proximinality moduli of `L_p(I, C)` at constant functions.

use proxilab::bochner::{lifted_modulus_check, LpIndex};
use proxilab::normed_space::{NormSpec, Vector};
use proxilab::projection::ConvexBody;
use proxilab::Result;

fn main() -> Result<()> {
    let plane = ConvexBody::coordinate_subspace(3, &[0, 1])?;
    let x = Vector::from([0.5, -0.25, 1.0]);
    for pieces in [1, 2, 4] {
        let m = lifted_modulus_check(&plane, &NormSpec::linf(3), &x, 0.3, LpIndex::ONE, pieces)?;
        println!("l_inf M-ideal, p = 1, {pieces} pieces: base {}, lifted {}", m.base_delta, m.lifted_delta);
    }
    let disk = ConvexBody::norm_ball(1.0)?;
    let m = lifted_modulus_check(&disk, &NormSpec::euclidean(2), &Vector::from([2.0, 0.0]), 0.5, LpIndex::TWO, 2)?;
    println!("disk, p = 2, 2 pieces: base {}, lifted {}", m.base_delta, m.lifted_delta);
    Ok(())
}
