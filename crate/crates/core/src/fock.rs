//! N-photon Fock spaces over a [`ModeSpace`] and second quantization of
//! single-particle matrices.
//!
//! Basis order: occupation vectors in lexicographically decreasing order, so
//! `H0, N = 2` is `|2,0>, |1,1>, |0,2>` and `Hm, N = 2` lists
//! `|2,0,0,0>, |1,1,0,0>, |1,0,1,0>, |1,0,0,1>, |0,2,0,0>, ...`.
//! Serialized amplitude vectors always refer to this order.
//!
//! A single-particle matrix `S` acts on creation operators as
//! `a_j^dag -> sum_i S_ij a_i^dag`. Expanding the product of `N` such sums and
//! collecting equal monomials gives
//! `<n'|S|n> = Per(S[n', n]) / sqrt(prod_i n_i! prod_j n'_j!)`,
//! where `S[n', n]` repeats row `i` of `S` `n'_i` times and column `j` `n_j` times.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, fix_phase, CMatrix, CVector, C64};
use crate::modes::ModeSpace;
use crate::permanent::permanent;

pub const DEFAULT_N_MAX: usize = 10;

/// Tolerance on `||psi|| = 1` for the normalized flag.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: Vec<u32>) -> Self {
        Self(counts)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    /// `m_tot = sum_i n_i m_i`.
    pub fn m_tot(&self, space: &ModeSpace) -> i64 {
        self.0
            .iter()
            .zip(space.labels())
            .map(|(&n, l)| n as i64 * l.m as i64)
            .sum()
    }

    /// `prod_i n_i!` as a float.
    pub fn factorial_product(&self) -> f64 {
        self.0.iter().map(|&n| factorial(n as u64) as f64).product()
    }

    /// Mode indices with multiplicity, e.g. `|2,0,1>` gives `[0, 0, 2]`.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &n)| std::iter::repeat(i).take(n as usize))
            .collect()
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "|{}\u{27e9}", parts.join(","))
    }
}

pub(crate) fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

#[derive(Debug, Clone)]
pub struct FockBasis {
    space: ModeSpace,
    n_photons: usize,
    states: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.n_photons == other.n_photons && self.space == other.space
    }
}

impl FockBasis {
    pub fn new(space: ModeSpace, n_photons: usize) -> Result<Self> {
        Self::with_limit(space, n_photons, DEFAULT_N_MAX)
    }

    pub fn with_limit(space: ModeSpace, n_photons: usize, n_max: usize) -> Result<Self> {
        if n_photons > n_max {
            return Err(Error::PhotonLimit { n: n_photons, max: n_max });
        }
        let mut states = Vec::new();
        let mut current = vec![0u32; space.dim()];
        enumerate(&mut current, 0, n_photons as u32, &mut states);
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Ok(Self { space, n_photons, states, index })
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn n_photons(&self) -> usize {
        self.n_photons
    }

    pub fn states(&self) -> &[Occupation] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, occ: &Occupation) -> Option<usize> {
        self.index.get(occ).copied()
    }

    /// Basis indices grouped by total angular momentum.
    pub fn sector_split(&self) -> BTreeMap<i64, Vec<usize>> {
        let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            sectors.entry(s.m_tot(&self.space)).or_default().push(i);
        }
        sectors
    }

    /// Second quantization of a single-particle matrix on this basis.
    pub fn lift(&self, s: &CMatrix) -> Result<LiftedOperator> {
        let m = self.space.dim();
        if s.nrows() != m || s.ncols() != m {
            return Err(Error::DimensionMismatch { expected: m, found: s.nrows().max(s.ncols()) });
        }
        let dim = self.len();
        let n = self.n_photons;
        let modes: Vec<Vec<usize>> = self.states.iter().map(Occupation::mode_list).collect();
        let norms: Vec<f64> = self.states.iter().map(|o| o.factorial_product().sqrt()).collect();
        let mut out = CMatrix::zeros(dim, dim);
        let mut sub = CMatrix::zeros(n, n);
        for col in 0..dim {
            for row in 0..dim {
                for (a, &i) in modes[row].iter().enumerate() {
                    for (b, &j) in modes[col].iter().enumerate() {
                        sub[(a, b)] = s[(i, j)];
                    }
                }
                out[(row, col)] = permanent(&sub) / (norms[row] * norms[col]);
            }
        }
        Ok(LiftedOperator { basis: self.clone(), matrix: out })
    }

    /// Lifted `J_z`: diagonal with the `m_tot` of every basis state.
    pub fn lift_jz(&self) -> LiftedOperator {
        let d = CVector::from_iterator(self.len(), self.states.iter().map(|s| c64(s.m_tot(&self.space) as f64, 0.0)));
        LiftedOperator { basis: self.clone(), matrix: CMatrix::from_diagonal(&d) }
    }

    /// Lifted `M_y`: the permutation of occupation vectors induced by the mode permutation.
    pub fn lift_mirror(&self) -> LiftedOperator {
        let perm = self.space.mirror_permutation();
        let dim = self.len();
        let mut out = CMatrix::zeros(dim, dim);
        for (col, occ) in self.states.iter().enumerate() {
            let mut image = vec![0u32; perm.len()];
            for (i, &n) in occ.counts().iter().enumerate() {
                image[perm[i]] = n;
            }
            let row = self.index[&Occupation(image)];
            out[(row, col)] = c64(1.0, 0.0);
        }
        LiftedOperator { basis: self.clone(), matrix: out }
    }

    /// Diagonal projector onto the states whose photons all sit in `sub_modes`.
    pub fn postselect_projector(&self, sub_modes: &[usize]) -> Result<LiftedOperator> {
        if sub_modes.is_empty() && self.n_photons > 0 {
            return Err(Error::InvalidArgument("empty postselection mode set with N > 0".into()));
        }
        if let Some(&bad) = sub_modes.iter().find(|&&i| i >= self.space.dim()) {
            return Err(Error::InvalidArgument(format!("mode index {bad} outside {}", self.space)));
        }
        let d = CVector::from_iterator(
            self.len(),
            self.states.iter().map(|occ| {
                let inside = occ.counts().iter().enumerate().all(|(i, &n)| n == 0 || sub_modes.contains(&i));
                c64(if inside { 1.0 } else { 0.0 }, 0.0)
            }),
        );
        Ok(LiftedOperator { basis: self.clone(), matrix: CMatrix::from_diagonal(&d) })
    }
}

fn enumerate(current: &mut Vec<u32>, mode: usize, remaining: u32, out: &mut Vec<Occupation>) {
    if mode + 1 == current.len() {
        current[mode] = remaining;
        out.push(Occupation(current.clone()));
        current[mode] = 0;
        return;
    }
    for c in (0..=remaining).rev() {
        current[mode] = c;
        enumerate(current, mode + 1, remaining - c, out);
    }
    current[mode] = 0;
}

/// A dense operator on a Fock basis.
#[derive(Debug, Clone)]
pub struct LiftedOperator {
    basis: FockBasis,
    matrix: CMatrix,
}

impl LiftedOperator {
    pub fn new(basis: FockBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != basis.len() || matrix.ncols() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: matrix.nrows() });
        }
        Ok(Self { basis, matrix })
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn apply(&self, state: &FockState) -> Result<FockState> {
        if state.basis != self.basis {
            return Err(Error::InvalidArgument("state and operator live on different Fock bases".into()));
        }
        Ok(FockState { basis: self.basis.clone(), amplitudes: &self.matrix * &state.amplitudes })
    }

    /// `P S P^dag` for a postselection projector `P`.
    pub fn postselected(&self, projector: &LiftedOperator) -> Result<LiftedOperator> {
        if projector.basis != self.basis {
            return Err(Error::InvalidArgument("projector and operator live on different Fock bases".into()));
        }
        let p = &projector.matrix;
        Ok(LiftedOperator { basis: self.basis.clone(), matrix: p * &self.matrix * p.adjoint() })
    }
}

/// A pure N-photon state as amplitudes over a [`FockBasis`].
#[derive(Debug, Clone)]
pub struct FockState {
    basis: FockBasis,
    amplitudes: CVector,
}

impl FockState {
    pub fn new(basis: FockBasis, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: amplitudes.len() });
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn basis_state(basis: FockBasis, occ: &Occupation) -> Result<Self> {
        let i = basis
            .index_of(occ)
            .ok_or_else(|| Error::InvalidArgument(format!("{occ} is not in the {} photon basis", basis.n_photons())))?;
        let mut amplitudes = CVector::zeros(basis.len());
        amplitudes[i] = c64(1.0, 0.0);
        Ok(Self { basis, amplitudes })
    }

    /// Builds a state from `(occupation, amplitude)` pairs; unlisted states get zero.
    pub fn from_terms(basis: FockBasis, terms: &[(Vec<u32>, C64)]) -> Result<Self> {
        let mut amplitudes = CVector::zeros(basis.len());
        for (counts, a) in terms {
            let occ = Occupation::new(counts.clone());
            let i = basis
                .index_of(&occ)
                .ok_or_else(|| Error::InvalidArgument(format!("{occ} is not in the basis")))?;
            amplitudes[i] += *a;
        }
        Self::new(basis, amplitudes)
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, occ: &Occupation) -> Option<C64> {
        self.basis.index_of(occ).map(|i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(Self { basis: self.basis.clone(), amplitudes: &self.amplitudes / c64(n, 0.0) })
    }

    /// Global phase fixed so the first significant amplitude is real positive.
    pub fn with_fixed_phase(&self) -> Self {
        let mut amplitudes = self.amplitudes.clone();
        fix_phase(&mut amplitudes);
        Self { basis: self.basis.clone(), amplitudes }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &FockState) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::InvalidArgument("states live on different Fock bases".into()));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|<self|other>|` for normalized states.
    pub fn overlap(&self, other: &FockState) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// The total angular momentum if every populated basis state shares it.
    pub fn m_tot(&self, tol: f64) -> Option<i64> {
        let mut value = None;
        for (occ, a) in self.basis.states.iter().zip(self.amplitudes.iter()) {
            if a.norm() > tol {
                let m = occ.m_tot(&self.basis.space);
                match value {
                    None => value = Some(m),
                    Some(v) if v != m => return None,
                    _ => {}
                }
            }
        }
        value
    }

    pub fn to_record(&self) -> FockStateRecord {
        FockStateRecord {
            space: self.basis.space.clone(),
            n: self.basis.n_photons,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn from_record(record: FockStateRecord, n_max: usize) -> Result<Self> {
        let basis = FockBasis::with_limit(record.space, record.n, n_max)?;
        let amplitudes = CVector::from_iterator(record.amplitudes.len(), record.amplitudes.iter().map(|p| c64(p[0], p[1])));
        Self::new(basis, amplitudes)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_record())?)
    }

    pub fn from_json(s: &str, n_max: usize) -> Result<Self> {
        Self::from_record(serde_json::from_str(s)?, n_max)
    }

    /// Rows of `(ket, amplitude)` for populated basis states.
    pub fn terms(&self, tol: f64) -> Vec<(&Occupation, C64)> {
        self.basis
            .states
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(_, a)| a.norm() > tol)
            .map(|(o, a)| (o, *a))
            .collect()
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (occ, a) in self.terms(1e-12) {
            // avoid printing -0.000000
            let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
            writeln!(f, "  {:<16} {:>+.6} {:>+.6}i", occ.to_string(), clean(a.re), clean(a.im))?;
        }
        Ok(())
    }
}

/// On-disk form of a [`FockState`]: `{"space": "hm:1", "n": 2, "amplitudes": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FockStateRecord {
    pub space: ModeSpace,
    pub n: usize,
    pub amplitudes: Vec<[f64; 2]>,
}
