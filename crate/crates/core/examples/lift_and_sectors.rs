//! Lifts a single-photon scatterer to N photons and shows the block structure
//! the rotation symmetry imposes on the lifted matrix.

use symprot::linalg::{commutator_norm, unitarity_defect};
use symprot::{FockBasis, ModeSpace, ScatterSampler, Unitarity};

fn main() -> symprot::Result<()> {
    let space = ModeSpace::hm(1)?;
    let s = ScatterSampler::new(1, Unitarity::Unitary).sample(&space)?;
    for n in 1..=4 {
        let basis = FockBasis::new(space.clone(), n)?;
        let lifted = basis.lift(s.matrix())?;
        let jz = basis.lift_jz();
        let sizes: Vec<String> = basis.sector_split().iter().map(|(m, idx)| format!("{m:+}:{}", idx.len())).collect();
        println!(
            "N = {n}: dim {:>3}, [S, Jz] {:.1e}, unitarity defect {:.1e}, sectors {}",
            basis.len(),
            commutator_norm(lifted.matrix(), jz.matrix()),
            unitarity_defect(lifted.matrix()),
            sizes.join(" ")
        );
    }
    Ok(())
}
