//! Single-photon scattering matrices compatible with cylindrical symmetry.
//!
//! On `H0` every compatible matrix has the form `[[alpha, beta], [beta, alpha]]`.
//! On `Hm` it is block diagonal, `S_m` acting on `(m,+), (m,-)` and
//! `S_-m = X S_m X` on `(-m,+), (-m,-)` with `X` the 2x2 flip.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, commutator_norm, max_singular_value, unitarity_defect, CMatrix, CVector, C64};
use crate::modes::{ModeSpace, SpaceKind, Tau};

/// Tolerance for all structural checks on single-particle matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
pub const DEFAULT_GENERICITY_FLOOR: f64 = 1e-3;
pub const MAX_SAMPLE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unitarity {
    Unitary,
    Subunitary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricScattering {
    space: ModeSpace,
    matrix: CMatrix,
    unitarity: Unitarity,
}

impl SymmetricScattering {
    /// Wraps a matrix after checking symmetry and contractivity.
    pub fn new(space: ModeSpace, matrix: CMatrix) -> Result<Self> {
        let report = validate(&matrix, &space)?;
        if !report.ok {
            return Err(Error::InvalidArgument(format!(
                "matrix is not a symmetric contraction on {space}: {report:?}"
            )));
        }
        let unitarity = if unitarity_defect(&matrix) < SYMMETRY_TOL {
            Unitarity::Unitary
        } else {
            Unitarity::Subunitary
        };
        Ok(Self { space, matrix, unitarity })
    }

    /// `[[alpha, beta], [beta, alpha]]` on `H0`.
    pub fn h0(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(ModeSpace::h0(), CMatrix::from_row_slice(2, 2, &[alpha, beta, beta, alpha]))
    }

    /// `S_m = [[eta, zeta], [epsilon, gamma]]` on `Hm(m)`, mirrored onto `-m`.
    pub fn hm(m: i32, eta: C64, zeta: C64, epsilon: C64, gamma: C64) -> Result<Self> {
        let space = ModeSpace::hm(m)?;
        let block = CMatrix::from_row_slice(2, 2, &[eta, zeta, epsilon, gamma]);
        Self::new(space.clone(), assemble(&space, &[block]))
    }

    /// Builds the full matrix from per-block 2x2 data: the whole matrix on `H0`
    /// blocks, `S_m` on `Hm` blocks.
    pub fn from_blocks(space: ModeSpace, blocks: &[CMatrix]) -> Result<Self> {
        if blocks.len() != space.blocks().len() {
            return Err(Error::DimensionMismatch { expected: space.blocks().len(), found: blocks.len() });
        }
        let matrix = assemble(&space, blocks);
        Self::new(space, matrix)
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn unitarity(&self) -> Unitarity {
        self.unitarity
    }

    /// The 2x2 generator of block `b`: the full `H0` matrix, or `S_m`.
    pub fn block_matrix(&self, b: usize) -> CMatrix {
        let o = self.space.block_offsets()[b];
        self.matrix.view((o, o), (2, 2)).into_owned()
    }

    /// `(alpha, beta)` of an `H0` block.
    pub fn h0_params(&self, b: usize) -> Option<(C64, C64)> {
        match self.space.blocks()[b] {
            SpaceKind::H0 => {
                let s = self.block_matrix(b);
                Some((s[(0, 0)], s[(0, 1)]))
            }
            SpaceKind::Hm(_) => None,
        }
    }

    /// `alpha^2 - beta^2` on `H0`, `det S_m = eta gamma - zeta epsilon` on `Hm`.
    pub fn block_determinant(&self, b: usize) -> C64 {
        det2(&self.block_matrix(b))
    }

    /// Block determinant of a single-block space.
    pub fn determinant(&self) -> C64 {
        self.block_determinant(0)
    }

    /// Same matrix multiplied by a scalar; fails if the result stops being a contraction.
    pub fn scaled(&self, factor: C64) -> Result<Self> {
        Self::new(self.space.clone(), &self.matrix * factor)
    }

    /// Eigenmodes per block.
    ///
    /// `H0` blocks yield the mirror eigenmodes `(1, tau)/sqrt2` with `s_tau = alpha + tau beta`.
    /// `Hm` blocks yield the two eigenvalues of `S_m`, each with one eigenvector
    /// in the `m` half and its flipped partner in the `-m` half.
    pub fn eigen_modes(&self, floor: f64) -> Result<Vec<EigenMode>> {
        let dim = self.space.dim();
        let mut out = Vec::new();
        for (b, (kind, offset)) in self.space.blocks().iter().zip(self.space.block_offsets()).enumerate() {
            let block = self.block_matrix(b);
            match kind {
                SpaceKind::H0 => {
                    let (alpha, beta) = (block[(0, 0)], block[(0, 1)]);
                    if (2.0 * beta).norm() <= floor {
                        return Err(Error::NonGeneric(format!("|s+ - s-| = {:e} in block {b}", (2.0 * beta).norm())));
                    }
                    let h = std::f64::consts::FRAC_1_SQRT_2;
                    for tau in [Tau::Symmetric, Tau::Antisymmetric] {
                        let t = tau.sign() as f64;
                        let mut v = CVector::zeros(dim);
                        v[offset] = c64(h, 0.0);
                        v[offset + 1] = c64(t * h, 0.0);
                        out.push(EigenMode { block: b, value: alpha + beta * t, tau: Some(tau), vectors: vec![v] });
                    }
                }
                SpaceKind::Hm(_) => {
                    let (nu_plus, nu_minus) = eig2(&block);
                    if (nu_plus - nu_minus).norm() <= floor {
                        return Err(Error::NonGeneric(format!(
                            "degenerate S_m spectrum (gap {:e}) in block {b}",
                            (nu_plus - nu_minus).norm()
                        )));
                    }
                    for nu in [nu_plus, nu_minus] {
                        let v = eigvec2(&block, nu);
                        let mut upper = CVector::zeros(dim);
                        let mut lower = CVector::zeros(dim);
                        upper[offset] = v[0];
                        upper[offset + 1] = v[1];
                        // S_-m = X S_m X, so X v is the partner eigenvector.
                        lower[offset + 2] = v[1];
                        lower[offset + 3] = v[0];
                        out.push(EigenMode { block: b, value: nu, tau: None, vectors: vec![upper, lower] });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// One eigenvalue of a symmetric scattering matrix with its eigenvectors in the full mode space.
#[derive(Debug, Clone)]
pub struct EigenMode {
    pub block: usize,
    pub value: C64,
    pub tau: Option<Tau>,
    pub vectors: Vec<CVector>,
}

fn assemble(space: &ModeSpace, blocks: &[CMatrix]) -> CMatrix {
    let mut m = CMatrix::zeros(space.dim(), space.dim());
    for ((kind, o), block) in space.blocks().iter().zip(space.block_offsets()).zip(blocks) {
        for i in 0..2 {
            for j in 0..2 {
                m[(o + i, o + j)] = block[(i, j)];
                if let SpaceKind::Hm(_) = kind {
                    m[(o + 2 + i, o + 2 + j)] = block[(1 - i, 1 - j)];
                }
            }
        }
    }
    m
}

fn det2(m: &CMatrix) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

fn eig2(m: &CMatrix) -> (C64, C64) {
    let tr = m[(0, 0)] + m[(1, 1)];
    let disc = (tr * tr - 4.0 * det2(m)).sqrt();
    ((tr + disc) * 0.5, (tr - disc) * 0.5)
}

fn eigvec2(m: &CMatrix, nu: C64) -> [C64; 2] {
    // Two candidate null vectors of (m - nu I); keep the better conditioned one.
    let a = [m[(0, 1)], nu - m[(0, 0)]];
    let b = [nu - m[(1, 1)], m[(1, 0)]];
    let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let nb = (b[0].norm_sqr() + b[1].norm_sqr()).sqrt();
    let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
    if n == 0.0 {
        // m = nu I on this block; cannot happen for a generic sample
        return [c64(1.0, 0.0), c64(0.0, 0.0)];
    }
    [v[0] / n, v[1] / n]
}

/// Residuals of the symmetry and contractivity conditions.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub jz_commutator: f64,
    pub mirror_commutator: f64,
    pub shape_residual: f64,
    pub sigma_max_excess: f64,
    pub ok: bool,
}

pub fn validate(matrix: &CMatrix, space: &ModeSpace) -> Result<ValidationReport> {
    let dim = space.dim();
    if matrix.nrows() != dim || matrix.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: matrix.nrows().max(matrix.ncols()) });
    }
    let jz_commutator = commutator_norm(matrix, space.jz_matrix());
    let mirror_commutator = commutator_norm(matrix, space.mirror_matrix());

    // Distance to the allowed pattern: zero outside the diagonal blocks, then the
    // per-block constraints.
    let offsets = space.block_offsets();
    let mut inside = vec![vec![false; dim]; dim];
    let mut shape_sq = 0.0;
    for (kind, &o) in space.blocks().iter().zip(&offsets) {
        match kind {
            SpaceKind::H0 => {
                for i in 0..2 {
                    for j in 0..2 {
                        inside[o + i][o + j] = true;
                    }
                }
                shape_sq += (matrix[(o, o)] - matrix[(o + 1, o + 1)]).norm_sqr() / 2.0;
                shape_sq += (matrix[(o, o + 1)] - matrix[(o + 1, o)]).norm_sqr() / 2.0;
            }
            SpaceKind::Hm(_) => {
                for i in 0..2 {
                    for j in 0..2 {
                        inside[o + i][o + j] = true;
                        inside[o + 2 + i][o + 2 + j] = true;
                        let upper = matrix[(o + i, o + j)];
                        let lower = matrix[(o + 3 - i, o + 3 - j)];
                        shape_sq += (upper - lower).norm_sqr() / 2.0;
                    }
                }
            }
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if !inside[i][j] {
                shape_sq += matrix[(i, j)].norm_sqr();
            }
        }
    }
    let shape_residual = shape_sq.sqrt();
    let sigma_max_excess = max_singular_value(matrix) - 1.0;
    let ok = jz_commutator <= SYMMETRY_TOL
        && mirror_commutator <= SYMMETRY_TOL
        && shape_residual <= SYMMETRY_TOL
        && sigma_max_excess <= SYMMETRY_TOL;
    Ok(ValidationReport { jz_commutator, mirror_commutator, shape_residual, sigma_max_excess, ok })
}

/// Seeded source of generic symmetric scattering matrices.
///
/// Free parameters are complex Gaussian. `Unitary` samples use uniform phases
/// `s_+ = e^{i t1}, s_- = e^{i t2}` on `H0` and a Haar-random `S_m` on `Hm`.
/// `Subunitary` samples are rescaled per block to a largest singular value drawn
/// uniformly from `(floor, 1)`. Samples whose block determinant or eigenvalue gap
/// falls below the genericity floor are redrawn.
#[derive(Debug, Clone)]
pub struct ScatterSampler {
    seed: u64,
    unitarity: Unitarity,
    genericity_floor: f64,
    rng: ChaCha8Rng,
}

impl ScatterSampler {
    pub fn new(seed: u64, unitarity: Unitarity) -> Self {
        Self {
            seed,
            unitarity,
            genericity_floor: DEFAULT_GENERICITY_FLOOR,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_genericity_floor(mut self, floor: f64) -> Result<Self> {
        if !(floor > 0.0 && floor < 1.0) {
            return Err(Error::InvalidArgument(format!("genericity floor must lie in (0, 1), got {floor}")));
        }
        self.genericity_floor = floor;
        Ok(self)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn unitarity(&self) -> Unitarity {
        self.unitarity
    }

    pub fn genericity_floor(&self) -> f64 {
        self.genericity_floor
    }

    pub fn sample(&mut self, space: &ModeSpace) -> Result<SymmetricScattering> {
        let blocks = space
            .blocks()
            .iter()
            .map(|kind| self.sample_block(*kind))
            .collect::<Result<Vec<_>>>()?;
        let matrix = assemble(space, &blocks);
        let unitarity = self.unitarity;
        Ok(SymmetricScattering { space: space.clone(), matrix, unitarity })
    }

    pub fn sample_many(&mut self, space: &ModeSpace, count: usize) -> Result<Vec<SymmetricScattering>> {
        (0..count).map(|_| self.sample(space)).collect()
    }

    fn sample_block(&mut self, kind: SpaceKind) -> Result<CMatrix> {
        let floor = self.genericity_floor;
        for _ in 0..MAX_SAMPLE_ATTEMPTS {
            let block = match (kind, self.unitarity) {
                (SpaceKind::H0, Unitarity::Unitary) => {
                    let s_plus = C64::from_polar(1.0, self.rng.gen_range(0.0..2.0 * PI));
                    let s_minus = C64::from_polar(1.0, self.rng.gen_range(0.0..2.0 * PI));
                    let (alpha, beta) = ((s_plus + s_minus) * 0.5, (s_plus - s_minus) * 0.5);
                    CMatrix::from_row_slice(2, 2, &[alpha, beta, beta, alpha])
                }
                (SpaceKind::H0, Unitarity::Subunitary) => {
                    let (alpha, beta) = (self.gaussian(), self.gaussian());
                    let raw = CMatrix::from_row_slice(2, 2, &[alpha, beta, beta, alpha]);
                    self.shrink(raw)
                }
                (SpaceKind::Hm(_), Unitarity::Unitary) => self.haar2(),
                (SpaceKind::Hm(_), Unitarity::Subunitary) => {
                    let entries: Vec<C64> = (0..4).map(|_| self.gaussian()).collect();
                    self.shrink(CMatrix::from_row_slice(2, 2, &entries))
                }
            };
            let (a, b) = eig2(&block);
            if det2(&block).norm() > floor && (a - b).norm() > floor {
                return Ok(block);
            }
        }
        Err(Error::SamplingFailed { attempts: MAX_SAMPLE_ATTEMPTS })
    }

    fn gaussian(&mut self) -> C64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn shrink(&mut self, raw: CMatrix) -> CMatrix {
        let sigma = max_singular_value(&raw);
        let target = self.rng.gen_range(self.genericity_floor..1.0);
        raw * C64::new(target / sigma, 0.0)
    }

    /// Haar unitary via Gram-Schmidt on a Ginibre matrix (positive diagonal of R).
    fn haar2(&mut self) -> CMatrix {
        let z: Vec<C64> = (0..4).map(|_| self.gaussian()).collect();
        let c0 = [z[0], z[2]];
        let c1 = [z[1], z[3]];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        let q0 = [c0[0] / n0, c0[1] / n0];
        let proj = q0[0].conj() * c1[0] + q0[1].conj() * c1[1];
        let r1 = [c1[0] - proj * q0[0], c1[1] - proj * q0[1]];
        let n1 = (r1[0].norm_sqr() + r1[1].norm_sqr()).sqrt();
        let q1 = [r1[0] / n1, r1[1] / n1];
        CMatrix::from_row_slice(2, 2, &[q0[0], q1[0], q0[1], q1[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flip_residual(s: &SymmetricScattering) -> f64 {
        let m = s.matrix();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((m[(i, j)] - m[(3 - i, 3 - j)]).norm());
            }
        }
        worst
    }

    #[test]
    fn unitary_h0_sample_has_symmetric_form() {
        let mut sampler = ScatterSampler::new(7, Unitarity::Unitary);
        let s = sampler.sample(&ModeSpace::h0()).unwrap();
        assert!(unitarity_defect(s.matrix()) < 1e-12);
        let m = s.matrix();
        assert_eq!(m[(0, 0)], m[(1, 1)]);
        assert_eq!(m[(0, 1)], m[(1, 0)]);
        assert_eq!(s.unitarity(), Unitarity::Unitary);
    }

    #[test]
    fn subunitary_hm_sample_is_a_mirrored_contraction() {
        let mut sampler = ScatterSampler::new(11, Unitarity::Subunitary);
        let s = sampler.sample(&ModeSpace::hm(1).unwrap()).unwrap();
        assert!(max_singular_value(s.matrix()) <= 1.0);
        assert_eq!(flip_residual(&s), 0.0);
    }

    #[test]
    fn same_seed_same_matrices() {
        let space = ModeSpace::hm(3).unwrap();
        for unitarity in [Unitarity::Unitary, Unitarity::Subunitary] {
            let a = ScatterSampler::new(42, unitarity).sample_many(&space, 5).unwrap();
            let b = ScatterSampler::new(42, unitarity).sample_many(&space, 5).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn identity_is_valid_on_h0() {
        let r = validate(&CMatrix::identity(2, 2), &ModeSpace::h0()).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn antisymmetric_off_diagonal_breaks_mirror_symmetry() {
        let (alpha, beta) = (c64(0.3, 0.1), c64(0.2, -0.4));
        let s = CMatrix::from_row_slice(2, 2, &[alpha, beta, -beta, alpha]);
        let r = validate(&s, &ModeSpace::h0()).unwrap();
        assert!(!r.ok);
        // [S, M_y] = [[2 beta, 0], [0, -2 beta]]
        assert!((r.mirror_commutator - 2.0 * 2f64.sqrt() * beta.norm()).abs() < 1e-15);
        assert_eq!(r.jz_commutator, 0.0);
    }

    #[test]
    fn diagonal_helicity_flip_matrix_is_valid_on_hm() {
        let d = CMatrix::from_diagonal(&CVector::from_vec(vec![c64(1.0, 0.0), c64(-1.0, 0.0), c64(-1.0, 0.0), c64(1.0, 0.0)]));
        let r = validate(&d, &ModeSpace::hm(1).unwrap()).unwrap();
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn validate_rejects_wrong_dimension() {
        assert!(matches!(
            validate(&CMatrix::identity(3, 3), &ModeSpace::h0()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn h0_eigenmodes_are_mirror_modes() {
        let (alpha, beta) = (c64(0.4, 0.2), c64(-0.1, 0.3));
        let s = SymmetricScattering::h0(alpha, beta).unwrap();
        let modes = s.eigen_modes(DEFAULT_GENERICITY_FLOOR).unwrap();
        assert_eq!(modes.len(), 2);
        assert!((modes[0].value - (alpha + beta)).norm() < 1e-15);
        assert!((modes[1].value - (alpha - beta)).norm() < 1e-15);
        for mode in &modes {
            let v = &mode.vectors[0];
            assert!((s.matrix() * v - v * mode.value).norm() < 1e-15);
        }
    }

    #[test]
    fn identity_on_hm_is_degenerate() {
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let s = SymmetricScattering::hm(1, one, zero, zero, one).unwrap();
        assert!(matches!(s.eigen_modes(DEFAULT_GENERICITY_FLOOR), Err(Error::NonGeneric(_))));
    }

    #[test]
    fn hm_eigenvalue_product_is_block_determinant() {
        let mut sampler = ScatterSampler::new(3, Unitarity::Subunitary);
        let space = ModeSpace::hm(2).unwrap();
        for _ in 0..50 {
            let s = sampler.sample(&space).unwrap();
            let modes = s.eigen_modes(DEFAULT_GENERICITY_FLOOR).unwrap();
            assert!((modes[0].value * modes[1].value - s.determinant()).norm() < 1e-12);
            for mode in &modes {
                for v in &mode.vectors {
                    assert!((s.matrix() * v - v * mode.value).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn every_sample_validates() {
        let spaces: Vec<ModeSpace> = ["h0", "hm:1", "hm:4", "h0+hm:2"].iter().map(|s| s.parse().unwrap()).collect();
        for unitarity in [Unitarity::Unitary, Unitarity::Subunitary] {
            let mut sampler = ScatterSampler::new(99, unitarity);
            for space in &spaces {
                for _ in 0..2500 {
                    let s = sampler.sample(space).unwrap();
                    let r = validate(s.matrix(), space).unwrap();
                    assert!(r.ok, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn mirror_partner_blocks_share_spectrum() {
        let mut sampler = ScatterSampler::new(5, Unitarity::Subunitary);
        let s = sampler.sample(&ModeSpace::hm(1).unwrap()).unwrap();
        let upper = s.matrix().view((0, 0), (2, 2)).into_owned();
        let lower = s.matrix().view((2, 2), (2, 2)).into_owned();
        let (a, b) = eig2(&upper);
        let (c, d) = eig2(&lower);
        let same = ((a - c).norm() < 1e-12 && (b - d).norm() < 1e-12) || ((a - d).norm() < 1e-12 && (b - c).norm() < 1e-12);
        assert!(same);
    }

    #[test]
    fn floor_bounds_are_checked() {
        assert!(ScatterSampler::new(0, Unitarity::Unitary).with_genericity_floor(0.0).is_err());
        assert!(ScatterSampler::new(0, Unitarity::Unitary).with_genericity_floor(1.5).is_err());
    }
}
