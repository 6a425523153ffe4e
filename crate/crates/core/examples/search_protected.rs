//! Searches a Fock space for every protected ray, sector by sector.
//!
//! Usage: `search_protected [space] [photons]`, e.g. `search_protected hm:1 4`.

use symprot::{find_protected, CertificationConfig, ModeSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let space: ModeSpace = args.next().unwrap_or_else(|| "h0".into()).parse()?;
    let n: usize = args.next().map(|a| a.parse()).transpose()?.unwrap_or(3);

    let result = find_protected(&space, n, &CertificationConfig::default(), None)?;
    println!("{} protected rays on {space} with N = {n} ({} search samples)", result.rays.len(), result.search_samples);
    for (k, ray) in result.rays.iter().enumerate() {
        let tau = ray.mirror_tau.map_or("none".to_string(), |t| format!("{:+}", t.sign()));
        println!("\nray {k}: m_tot = {}, tau = {tau}, residual {:.1e}", ray.m_tot, ray.worst_residual);
        print!("{}", ray.state);
    }
    for sub in &result.subspaces {
        println!("\nprotected subspace: m_tot = {}, dim = {}", sub.m_tot, sub.basis.len());
    }
    Ok(())
}
