//! The zero-momentum sector of Hm holds a single protected ray per even N:
//! a power of the helicity pair creator, with alternating binomial coefficients.

use symprot::protect::verify_pair_uniqueness;
use symprot::CertificationConfig;

fn main() -> symprot::Result<()> {
    let cfg = CertificationConfig::default();
    for m in [1, 2] {
        for n in [2, 4, 6] {
            let r = verify_pair_uniqueness(m, n, &cfg)?;
            println!(
                "m = {m}, N = {n}: {} ray(s), overlap {:.12}, law {:?}, unique {}, coefficients match {}",
                r.rays_found, r.overlap, r.binomial_law, r.unique, r.coefficients_match
            );
        }
    }
    Ok(())
}
