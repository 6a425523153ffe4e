//! Certification of symmetry protection and the search for protected rays.
//!
//! A state is protected when it is an eigenvector of every postselected
//! cylindrically symmetric scattering matrix. [`certify`] tests this against a
//! batch of random subunitary samples; [`find_protected`] intersects the
//! eigenspaces of successive random samples until the common eigenvectors stop
//! changing, then certifies the survivors on fresh samples.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState, FockStateRecord, DEFAULT_N_MAX};
use crate::linalg::{eigenspaces, embed_columns, fix_phase, intersect, principal_block, CMatrix, CVector, C64};
use crate::modes::{ModeSpace, SpaceKind, Tau};
use crate::scatter::{ScatterSampler, SymmetricScattering, Unitarity, DEFAULT_GENERICITY_FLOOR};
use crate::states::{monomial_coefficients, pair_binomial_coefficients, pair_power_monomials, StateRecipe};

/// Offset mixed into the seed for the certification stage of a search, so the
/// rays are confirmed on samples the search never saw.
const CERTIFY_SEED_OFFSET: u64 = 0x5EED_CE57;

/// Amplitude residual below which a ray counts as a mirror eigenvector.
const MIRROR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct CertificationConfig {
    pub n_samples: usize,
    pub residual_tol: f64,
    pub cluster_tol: f64,
    pub seed: u64,
    /// Upper bound on the number of samples the search may draw before giving up.
    pub max_search_samples: usize,
    pub genericity_floor: f64,
    pub n_max: usize,
}

impl Default for CertificationConfig {
    fn default() -> Self {
        Self {
            n_samples: 64,
            residual_tol: 1e-10,
            cluster_tol: 1e-8,
            seed: 0,
            max_search_samples: 32,
            genericity_floor: DEFAULT_GENERICITY_FLOOR,
            n_max: DEFAULT_N_MAX,
        }
    }
}

impl CertificationConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, n_samples: usize) -> Self {
        self.n_samples = n_samples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 3 {
            return Err(Error::InvalidArgument(format!("at least 3 samples are needed, got {}", self.n_samples)));
        }
        if !(self.residual_tol > 0.0 && self.cluster_tol > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        if self.max_search_samples < 3 {
            return Err(Error::InvalidArgument("the search needs at least 3 samples".into()));
        }
        Ok(())
    }

    fn sampler(&self, seed: u64, unitarity: Unitarity) -> Result<ScatterSampler> {
        ScatterSampler::new(seed, unitarity).with_genericity_floor(self.genericity_floor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Protected,
    NotProtected,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProtectionReport {
    pub verdict: Verdict,
    pub worst_residual: f64,
    pub residuals: Vec<f64>,
    pub eigenvalues: Vec<C64>,
    pub witness_sample_index: Option<usize>,
}

impl ProtectionReport {
    pub fn is_protected(&self) -> bool {
        self.verdict == Verdict::Protected
    }
}

/// Certifies `state` on `cfg.n_samples` random subunitary symmetric samples.
pub fn certify(state: &FockState, cfg: &CertificationConfig) -> Result<ProtectionReport> {
    cfg.validate()?;
    let samples = cfg.sampler(cfg.seed, Unitarity::Subunitary)?.sample_many(state.basis().space(), cfg.n_samples)?;
    certify_against(state, &samples, cfg.residual_tol)
}

/// Certifies `state` against an explicit list of scattering matrices.
pub fn certify_against(state: &FockState, samples: &[SymmetricScattering], residual_tol: f64) -> Result<ProtectionReport> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm()));
    }
    let mut residuals = Vec::with_capacity(samples.len());
    let mut eigenvalues = Vec::with_capacity(samples.len());
    for s in samples {
        let (lambda, r) = eigen_residual(state, s)?;
        residuals.push(r);
        eigenvalues.push(lambda);
    }
    let (witness, worst) = residuals
        .iter()
        .copied()
        .enumerate()
        .fold((None, 0.0), |(wi, wr), (i, r)| if wi.is_none() || r > wr { (Some(i), r) } else { (wi, wr) });
    let verdict = if worst < residual_tol { Verdict::Protected } else { Verdict::NotProtected };
    Ok(ProtectionReport {
        verdict,
        worst_residual: worst,
        residuals,
        eigenvalues,
        witness_sample_index: if verdict == Verdict::NotProtected { witness } else { None },
    })
}

/// `lambda = <psi|S psi>` and `|S psi - lambda psi|`.
pub fn eigen_residual(state: &FockState, s: &SymmetricScattering) -> Result<(C64, f64)> {
    if s.space() != state.basis().space() {
        return Err(Error::InvalidSpace(format!("state on {} scattered by a matrix on {}", state.basis().space(), s.space())));
    }
    let lifted = state.basis().lift(s.matrix())?;
    let psi = state.amplitudes();
    let phi = lifted.matrix() * psi;
    let lambda = psi.dotc(&phi);
    Ok((lambda, (phi - psi * lambda).norm()))
}

#[derive(Debug, Clone)]
pub struct ProtectedRay {
    pub state: FockState,
    pub m_tot: i64,
    pub mirror_tau: Option<Tau>,
    pub worst_residual: f64,
}

impl Serialize for ProtectedRay {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            state: FockStateRecord,
            m_tot: i64,
            tau: Option<Tau>,
            worst_residual: f64,
            #[serde(skip)]
            _p: std::marker::PhantomData<&'a ()>,
        }
        Wire {
            state: self.state.to_record(),
            m_tot: self.m_tot,
            tau: self.mirror_tau,
            worst_residual: self.worst_residual,
            _p: std::marker::PhantomData,
        }
        .serialize(s)
    }
}

/// A protected subspace of dimension above one: every sample acts on it as a scalar.
#[derive(Debug, Clone)]
pub struct ProtectedSubspace {
    pub m_tot: i64,
    pub basis: Vec<FockState>,
}

impl Serialize for ProtectedSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            m_tot: i64,
            dim: usize,
            basis: Vec<FockStateRecord>,
        }
        Wire { m_tot: self.m_tot, dim: self.basis.len(), basis: self.basis.iter().map(FockState::to_record).collect() }.serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub space: ModeSpace,
    pub n_photons: usize,
    pub sector: Option<i64>,
    pub search_samples: usize,
    pub rays: Vec<ProtectedRay>,
    pub subspaces: Vec<ProtectedSubspace>,
}

/// Finds every protected ray (and protected subspace) of the `n`-photon space,
/// optionally restricted to one `m_tot` sector.
pub fn find_protected(space: &ModeSpace, n: usize, cfg: &CertificationConfig, sector: Option<i64>) -> Result<SearchResult> {
    cfg.validate()?;
    let basis = FockBasis::with_limit(space.clone(), n, cfg.n_max)?;
    let sectors: Vec<(i64, Vec<usize>)> = basis
        .sector_split()
        .into_iter()
        .filter(|(m, _)| sector.map_or(true, |s| s == *m))
        .collect();

    // candidates[k]: orthonormal columns in sector-k coordinates
    let mut candidates: Vec<Vec<CMatrix>> = sectors.iter().map(|(_, idx)| vec![CMatrix::identity(idx.len(), idx.len())]).collect();
    let mut sampler = cfg.sampler(cfg.seed, Unitarity::Unitary)?;
    let mut used = 0;
    let mut unchanged_streak = 0;
    let mut attempts = 0;
    while unchanged_streak < 1 || used < 3 {
        if used >= cfg.max_search_samples {
            return Err(Error::Inconclusive { samples: used });
        }
        attempts += 1;
        if attempts > 10 * cfg.max_search_samples {
            return Err(Error::SamplingFailed { attempts });
        }
        let s = sampler.sample(space)?;
        let lifted = basis.lift(s.matrix())?.into_matrix();
        let mut refined = Vec::with_capacity(sectors.len());
        let mut defective = false;
        for ((_, idx), current) in sectors.iter().zip(&candidates) {
            let block = principal_block(&lifted, idx);
            match eigenspaces(&block, cfg.cluster_tol) {
                Ok(spaces) => {
                    let mut next = Vec::new();
                    for c in current {
                        for e in &spaces {
                            let common = intersect(c, &e.basis, cfg.cluster_tol);
                            if common.ncols() > 0 {
                                next.push(common);
                            }
                        }
                    }
                    refined.push(next);
                }
                Err(Error::Defective) => {
                    defective = true;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        if defective {
            continue;
        }
        used += 1;
        let dims = |c: &Vec<Vec<CMatrix>>| -> Vec<Vec<usize>> { c.iter().map(|v| v.iter().map(|m| m.ncols()).collect()).collect() };
        if used > 1 && dims(&refined) == dims(&candidates) {
            unchanged_streak += 1;
        } else {
            unchanged_streak = 0;
        }
        candidates = refined;
    }

    let check = cfg.sampler(cfg.seed.wrapping_add(CERTIFY_SEED_OFFSET), Unitarity::Subunitary)?.sample_many(space, cfg.n_samples)?;
    let lifted_checks: Vec<CMatrix> = check.iter().map(|s| basis.lift(s.matrix()).map(|l| l.into_matrix())).collect::<Result<_>>()?;
    let mirror = basis.lift_mirror().into_matrix();

    let mut rays = Vec::new();
    let mut subspaces = Vec::new();
    for ((m_tot, idx), cands) in sectors.iter().zip(candidates) {
        for c in cands {
            let full = embed_columns(&c, idx, basis.len());
            let worst = scalar_defect(&full, &lifted_checks);
            if worst >= cfg.residual_tol {
                continue;
            }
            if full.ncols() == 1 {
                let mut v: CVector = full.column(0).into_owned();
                fix_phase(&mut v);
                let mirror_tau = mirror_eigenvalue(&mirror, &v);
                rays.push(ProtectedRay { state: FockState::new(basis.clone(), v)?, m_tot: *m_tot, mirror_tau, worst_residual: worst });
            } else {
                let states = (0..full.ncols())
                    .map(|k| {
                        let mut v: CVector = full.column(k).into_owned();
                        fix_phase(&mut v);
                        FockState::new(basis.clone(), v)
                    })
                    .collect::<Result<Vec<_>>>()?;
                subspaces.push(ProtectedSubspace { m_tot: *m_tot, basis: states });
            }
        }
    }
    Ok(SearchResult { space: space.clone(), n_photons: n, sector, search_samples: used, rays, subspaces })
}

/// Largest deviation, over samples, of each operator from a scalar on the column span of `p`.
fn scalar_defect(p: &CMatrix, lifted: &[CMatrix]) -> f64 {
    let k = p.ncols();
    lifted
        .iter()
        .map(|m| {
            let mp = m * p;
            let compressed = p.adjoint() * &mp;
            let scalar = compressed.trace() / k as f64;
            (mp - p * scalar).norm()
        })
        .fold(0.0, f64::max)
}

fn mirror_eigenvalue(mirror: &CMatrix, v: &CVector) -> Option<Tau> {
    let mv = mirror * v;
    [Tau::Symmetric, Tau::Antisymmetric]
        .into_iter()
        .find(|t| (&mv - v * C64::new(t.sign() as f64, 0.0)).norm() < MIRROR_TOL)
}

#[derive(Debug, Clone, Serialize)]
pub struct UniquenessReport {
    pub m: u32,
    pub n_photons: usize,
    pub rays_found: usize,
    pub overlap: f64,
    /// `(-1)^l C(K, l)` from the closed-form law.
    pub binomial_law: Vec<i128>,
    /// The same coefficients obtained by expanding the pair power in integers.
    pub expanded: Vec<i128>,
    /// Monomial coefficients of the found ray divided by the `l = 0` one.
    pub found_ratios: Vec<f64>,
    pub unique: bool,
    pub coefficients_match: bool,
}

/// Checks that the `m_tot = 0` sector of `Hm(m)` with `n` photons holds exactly
/// one protected ray, that it is the pair power, and that its helicity-basis
/// coefficients follow the alternating binomial law.
pub fn verify_pair_uniqueness(m: u32, n: usize, cfg: &CertificationConfig) -> Result<UniquenessReport> {
    if n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("the pair law needs an even photon number, got {n}")));
    }
    let space = ModeSpace::new(SpaceKind::Hm(m))?;
    let search = find_protected(&space, n, cfg, Some(0))?;
    let pairs = n / 2;
    let expected = StateRecipe::PairPower { m, pairs }.build_with_limit(cfg.n_max)?;
    let binomial_law = pair_binomial_coefficients(pairs);
    let expanded: Vec<i128> = pair_power_monomials(pairs).into_iter().map(|(_, c)| c).collect();

    let (overlap, found_ratios) = match search.rays.first() {
        Some(ray) => {
            let overlap = ray.state.overlap(&expected)?;
            let coeffs = monomial_coefficients(&ray.state);
            let lookup = |l: usize| -> C64 {
                let occ = crate::fock::Occupation::new(vec![(pairs - l) as u32, l as u32, (pairs - l) as u32, l as u32]);
                coeffs.iter().find(|(o, _)| *o == occ).map(|(_, c)| *c).unwrap_or_default()
            };
            let x0 = lookup(0);
            let ratios = (0..=pairs).map(|l| if x0.norm() > 0.0 { (lookup(l) / x0).re } else { f64::NAN }).collect();
            (overlap, ratios)
        }
        None => (0.0, Vec::new()),
    };
    let unique = search.rays.len() == 1 && search.subspaces.is_empty() && overlap > 1.0 - 1e-9;
    let ratios_ok = found_ratios.len() == binomial_law.len()
        && found_ratios.iter().zip(&binomial_law).all(|(r, &b)| (r - b as f64).abs() < 1e-9 * (b.abs() as f64).max(1.0));
    Ok(UniquenessReport {
        m,
        n_photons: n,
        rays_found: search.rays.len(),
        overlap,
        coefficients_match: expanded == binomial_law && ratios_ok,
        binomial_law,
        expanded,
        found_ratios,
        unique,
    })
}
