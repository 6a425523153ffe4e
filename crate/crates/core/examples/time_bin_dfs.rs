//! A qudit spread over time bins on a protected carrier survives any static
//! scatterer, and loses coherence once the scatterer drifts between bins.

use symprot::dfs::{drift_experiment, transmit, TimeBinQudit};
use symprot::{CertificationConfig, ScatterSampler, StateRecipe, Unitarity};

fn main() -> symprot::Result<()> {
    let cfg = CertificationConfig::default();
    let carrier = StateRecipe::parse("pair:m=1,N=4", 1)?;
    let qudit = TimeBinQudit::uniform(carrier, 4, &cfg)?;
    let space = qudit.carrier_state().basis().space().clone();

    let mut sampler = ScatterSampler::new(7, Unitarity::Subunitary);
    for k in 0..3 {
        let s = sampler.sample(&space)?;
        let out = transmit(&qudit, &s)?;
        println!(
            "static scatterer {k}: success {:.4e}, fidelity {:.12}, |det|^4 {:.4e}",
            out.success_probability,
            out.fidelity,
            s.block_determinant(0).norm_sqr().powi(2)
        );
    }

    let s1 = sampler.sample(&space)?;
    let s2 = sampler.sample(&space)?;
    println!("drifting scatterer: fidelity {:.6}", drift_experiment(&qudit, &s1, &s2)?);
    Ok(())
}
