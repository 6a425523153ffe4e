//! Slater rank of two-photon states, and factoring a rank-two state into
//! the product of two single-photon creators.

use symprot::entangle::{analyze, product_state, single_product_factors, TwoPhotonMatrix, DEFAULT_RANK_TOL};
use symprot::{NamedState, StateRecipe};

fn main() -> symprot::Result<()> {
    for named in NamedState::ALL {
        let state = StateRecipe::Named { state: named, m: 1 }.build()?;
        let report = analyze(&state)?;
        let sigma: Vec<String> = report.singular_values.iter().map(|s| format!("{s:.4}")).collect();
        println!(
            "{:<5} rank {}  single product {:<5}  sigma [{}]",
            named.name(),
            report.slater_rank,
            report.is_single_product,
            sigma.join(", ")
        );
    }

    let psi3 = StateRecipe::parse("psi3", 1)?.build()?;
    let c = TwoPhotonMatrix::from_state(&psi3)?;
    if let Some((u, v)) = single_product_factors(&c, DEFAULT_RANK_TOL) {
        let rebuilt = product_state(psi3.basis().space(), &u, &v)?;
        println!("\npsi3 rebuilt from two creators, overlap {:.12}", rebuilt.overlap(&psi3)?);
    }
    Ok(())
}
