//! Certifies every named two-photon state against random lossy scatterers.

use symprot::{certify, CertificationConfig, NamedState, StateRecipe};

fn main() -> symprot::Result<()> {
    let cfg = CertificationConfig::default().with_samples(32);
    println!("{:<6} {:<14} {:>3} {:>14}  verdict", "name", "space", "tau", "worst residual");
    for named in NamedState::ALL {
        let recipe = StateRecipe::Named { state: named, m: 1 };
        let state = recipe.build()?;
        let report = certify(&state, &cfg)?;
        println!(
            "{:<6} {:<14} {:>+3} {:>14.3e}  {:?}",
            named.name(),
            state.basis().space().to_string(),
            named.tau().sign(),
            report.worst_residual,
            report.verdict
        );
    }
    Ok(())
}
