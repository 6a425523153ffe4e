use symprot::modes::Tau;
use symprot::protect::{find_protected, verify_pair_uniqueness, CertificationConfig};
use symprot::states::{count_protected, pair_binomial_coefficients, pair_power_monomials};
use symprot::{ModeSpace, SpaceKind, StateRecipe};

#[test]
fn h0_rays_are_the_mirror_fock_states() {
    let cfg = CertificationConfig::default();
    for n in 1..=6 {
        let result = find_protected(&ModeSpace::h0(), n, &cfg, None).unwrap();
        assert_eq!(result.rays.len(), n + 1, "N={n}");
        let count = count_protected(SpaceKind::H0, n);
        let symmetric = result.rays.iter().filter(|r| r.mirror_tau == Some(Tau::Symmetric)).count();
        let antisymmetric = result.rays.iter().filter(|r| r.mirror_tau == Some(Tau::Antisymmetric)).count();
        assert_eq!((symmetric, antisymmetric), (count.symmetric, count.antisymmetric));
        // each ray is exactly one |ns, na>' with parity (-1)^na
        for na in 0..=n {
            let expected = StateRecipe::MirrorFock { ns: n - na, na }.build().unwrap();
            let hits: Vec<_> = result.rays.iter().filter(|r| r.state.overlap(&expected).unwrap() > 1.0 - 1e-9).collect();
            assert_eq!(hits.len(), 1, "N={n} na={na}");
            let tau = if na % 2 == 0 { Tau::Symmetric } else { Tau::Antisymmetric };
            assert_eq!(hits[0].mirror_tau, Some(tau));
        }
    }
}

#[test]
fn hm_has_one_ray_for_even_and_none_for_odd() {
    let cfg = CertificationConfig::default();
    for m in [1, 2] {
        let space = ModeSpace::hm(m).unwrap();
        for n in 1..=6usize {
            let result = find_protected(&space, n, &cfg, None).unwrap();
            assert!(result.subspaces.is_empty());
            if n % 2 == 1 {
                assert!(result.rays.is_empty(), "m={m} N={n}");
                continue;
            }
            assert_eq!(result.rays.len(), 1, "m={m} N={n}");
            let ray = &result.rays[0];
            assert_eq!(ray.m_tot, 0);
            let expected = StateRecipe::PairPower { m: m as u32, pairs: n / 2 }.build().unwrap();
            assert!(ray.state.overlap(&expected).unwrap() > 1.0 - 1e-9);
            let tau = if (n / 2) % 2 == 0 { Tau::Symmetric } else { Tau::Antisymmetric };
            assert_eq!(ray.mirror_tau, Some(tau));
        }
    }
}

#[test]
fn rays_have_definite_sector_and_zero_sector_rays_have_parity() {
    let cfg = CertificationConfig::default();
    for (space, n) in [(ModeSpace::hm(1).unwrap(), 4), ("h0+hm:1".parse().unwrap(), 3)] {
        let result = find_protected(&space, n, &cfg, None).unwrap();
        for ray in &result.rays {
            assert_eq!(ray.state.m_tot(1e-9), Some(ray.m_tot));
            if ray.m_tot == 0 {
                assert!(ray.mirror_tau.is_some());
            }
            assert!(ray.state.is_normalized());
        }
    }
}

#[test]
fn composite_space_search_finds_products() {
    // h0 + hm:1 with 3 photons: mirror Fock states with 3 photons, plus one
    // photon in h0 times the protected pair
    let space: ModeSpace = "h0+hm:1".parse().unwrap();
    let result = find_protected(&space, 3, &CertificationConfig::default(), None).unwrap();
    assert_eq!(result.rays.len(), 4 + 2);
    let product = StateRecipe::parse("mirrorfock:ns=0,na=1*pair:m=1,N=2", 1).unwrap().build().unwrap();
    assert!(result.rays.iter().any(|r| r.state.overlap(&product).unwrap() > 1.0 - 1e-9));
}

#[test]
fn pair_uniqueness_and_coefficient_law() {
    let cfg = CertificationConfig::default();
    for m in [1, 2] {
        for n in [2, 4, 6] {
            let report = verify_pair_uniqueness(m, n, &cfg).unwrap();
            assert!(report.unique, "{report:?}");
            assert!(report.coefficients_match, "{report:?}");
            assert!(report.overlap > 1.0 - 1e-9);
        }
    }
    assert_eq!(verify_pair_uniqueness(2, 2, &cfg).unwrap().binomial_law, vec![1, -1]);
}

#[test]
fn expansion_against_independent_binomials() {
    // Pascal's triangle as the oracle
    let mut row: Vec<i128> = vec![1];
    for k in 0..=12usize {
        let law: Vec<i128> = row.iter().enumerate().map(|(l, c)| if l % 2 == 0 { *c } else { -c }).collect();
        assert_eq!(pair_binomial_coefficients(k), law);
        let expanded: Vec<i128> = pair_power_monomials(k).into_iter().map(|(_, c)| c).collect();
        assert_eq!(expanded, law);
        let mut next = vec![1; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
}
