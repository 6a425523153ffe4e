//! Closed-form catalog of named two-photon states and the protected families.
//!
//! * `MirrorFock { ns, na }`: `(a_s^dag)^ns (a_a^dag)^na / sqrt(ns! na!) |0>` on `H0`
//!   with mirror modes `a_s/a^dag = (a_+^dag +- a_-^dag)/sqrt2`.
//! * `PairPower { m, pairs }`: `(a_{m,+}^dag a_{-m,+}^dag - a_{m,-}^dag a_{-m,-}^dag)^pairs |0>` on `Hm(m)`.
//! * `Named`: the two-photon mirror eigenstates of `H0` and of the `m_tot = 0` sector of `Hm`.
//! * `Product`: factors on disjoint blocks, living on the direct sum of their spaces.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{factorial, FockBasis, FockState, Occupation, DEFAULT_N_MAX};
use crate::linalg::{c64, CVector, C64};
use crate::modes::{ModeSpace, SpaceKind, Tau};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedState {
    Phi1,
    Phi2,
    Phi3,
    S1,
    S2,
    Psi1,
    Psi2,
    Psi3,
    Psi4,
}

impl NamedState {
    pub const ALL: [NamedState; 9] = [
        NamedState::Phi1,
        NamedState::Phi2,
        NamedState::Phi3,
        NamedState::S1,
        NamedState::S2,
        NamedState::Psi1,
        NamedState::Psi2,
        NamedState::Psi3,
        NamedState::Psi4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedState::Phi1 => "phi1",
            NamedState::Phi2 => "phi2",
            NamedState::Phi3 => "phi3",
            NamedState::S1 => "s1",
            NamedState::S2 => "s2",
            NamedState::Psi1 => "psi1",
            NamedState::Psi2 => "psi2",
            NamedState::Psi3 => "psi3",
            NamedState::Psi4 => "psi4",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// True for the states defined on `H0`.
    pub fn on_h0(self) -> bool {
        matches!(self, NamedState::Phi1 | NamedState::Phi2 | NamedState::Phi3 | NamedState::S1 | NamedState::S2)
    }

    /// Whether symmetry alone guarantees invariance of this state.
    pub fn is_protected(self) -> bool {
        matches!(self, NamedState::Phi3 | NamedState::S1 | NamedState::S2 | NamedState::Psi4)
    }

    pub fn tau(self) -> Tau {
        match self {
            NamedState::Phi3 | NamedState::Psi4 => Tau::Antisymmetric,
            _ => Tau::Symmetric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateRecipe {
    MirrorFock { ns: usize, na: usize },
    PairPower { m: u32, pairs: usize },
    Named { state: NamedState, m: u32 },
    Product(Vec<StateRecipe>),
}

impl StateRecipe {
    /// Parses `phi3`, `psi4`, `psi4:m=2`, `pair:m=1,N=4`, `mirrorfock:ns=2,na=1`,
    /// or a `*`-separated product of those. `default_m` fills in `psi` states
    /// written without an explicit `m`.
    pub fn parse(text: &str, default_m: u32) -> Result<Self> {
        let factors: Vec<&str> = text.split('*').map(str::trim).collect();
        if factors.len() > 1 {
            let parts = factors.iter().map(|f| Self::parse(f, default_m)).collect::<Result<Vec<_>>>()?;
            let recipe = StateRecipe::Product(parts);
            recipe.space()?;
            return Ok(recipe);
        }
        let text = text.trim().to_ascii_lowercase();
        let (head, args) = match text.split_once(':') {
            Some((h, a)) => (h.to_string(), parse_args(a)?),
            None => (text.clone(), BTreeMap::new()),
        };
        let arg = |key: &str| -> Result<usize> {
            args.get(key)
                .copied()
                .ok_or_else(|| Error::InvalidRecipe(format!("'{text}' is missing {key}=")))
        };
        let check_keys = |allowed: &[&str]| -> Result<()> {
            match args.keys().find(|k| !allowed.contains(&k.as_str())) {
                Some(k) => Err(Error::InvalidRecipe(format!("unexpected parameter '{k}' in '{text}'"))),
                None => Ok(()),
            }
        };
        let recipe = match head.as_str() {
            "pair" => {
                check_keys(&["m", "n"])?;
                let n = arg("n")?;
                if n % 2 != 0 {
                    return Err(Error::InvalidRecipe(format!("pair states need an even photon number, got {n}")));
                }
                StateRecipe::PairPower { m: arg("m")? as u32, pairs: n / 2 }
            }
            "mirrorfock" => {
                check_keys(&["ns", "na"])?;
                StateRecipe::MirrorFock { ns: arg("ns")?, na: arg("na")? }
            }
            name => {
                let state = NamedState::from_name(name)
                    .ok_or_else(|| Error::InvalidRecipe(format!("unknown state '{name}'")))?;
                check_keys(&["m"])?;
                let m = if state.on_h0() {
                    0
                } else {
                    args.get("m").map(|&m| m as u32).unwrap_or(default_m)
                };
                StateRecipe::Named { state, m }
            }
        };
        recipe.space()?;
        Ok(recipe)
    }

    pub fn n_photons(&self) -> usize {
        match self {
            StateRecipe::MirrorFock { ns, na } => ns + na,
            StateRecipe::PairPower { pairs, .. } => 2 * pairs,
            StateRecipe::Named { .. } => 2,
            StateRecipe::Product(parts) => parts.iter().map(StateRecipe::n_photons).sum(),
        }
    }

    fn blocks(&self) -> Result<Vec<SpaceKind>> {
        match self {
            StateRecipe::MirrorFock { .. } => Ok(vec![SpaceKind::H0]),
            StateRecipe::PairPower { m, .. } | StateRecipe::Named { m, .. } => {
                if matches!(self, StateRecipe::Named { state, .. } if state.on_h0()) {
                    return Ok(vec![SpaceKind::H0]);
                }
                if *m == 0 {
                    return Err(Error::InvalidRecipe(format!("{self} needs m >= 1")));
                }
                Ok(vec![SpaceKind::Hm(*m)])
            }
            StateRecipe::Product(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidRecipe("empty product".into()));
                }
                let mut all = Vec::new();
                for p in parts {
                    all.extend(p.blocks()?);
                }
                Ok(all)
            }
        }
    }

    /// The mode space the state lives on.
    pub fn space(&self) -> Result<ModeSpace> {
        let blocks = self.blocks()?;
        ModeSpace::direct_sum(&blocks).map_err(|e| Error::InvalidRecipe(format!("{self}: factors must act on disjoint blocks ({e})")))
    }

    pub fn build(&self) -> Result<FockState> {
        self.build_with_limit(DEFAULT_N_MAX)
    }

    pub fn build_with_limit(&self, n_max: usize) -> Result<FockState> {
        let space = self.space()?;
        let basis = FockBasis::with_limit(space, self.n_photons(), n_max)?;
        let state = match self {
            StateRecipe::MirrorFock { ns, na } => {
                let h = std::f64::consts::FRAC_1_SQRT_2;
                let mut poly = CreationPolynomial::vacuum(2);
                for _ in 0..*ns {
                    poly = poly.times_linear(&[c64(h, 0.0), c64(h, 0.0)]);
                }
                for _ in 0..*na {
                    poly = poly.times_linear(&[c64(h, 0.0), c64(-h, 0.0)]);
                }
                let scale = ((factorial(*ns as u64) * factorial(*na as u64)) as f64).sqrt();
                poly.to_state(basis, 1.0 / scale)?
            }
            StateRecipe::PairPower { pairs, .. } => {
                let mut amplitudes = CVector::zeros(basis.len());
                for (occ, coeff) in pair_power_monomials(*pairs) {
                    let i = basis.index_of(&occ).expect("pair monomial inside Hm basis");
                    // (a^dag)^n |0> = sqrt(n!) |n>
                    amplitudes[i] = c64(coeff as f64 * occ.factorial_product().sqrt(), 0.0);
                }
                FockState::new(basis, amplitudes)?.normalized()?
            }
            StateRecipe::Named { state, .. } => named_state(*state, basis)?,
            StateRecipe::Product(parts) => {
                let factors = parts.iter().map(|p| p.build_with_limit(n_max)).collect::<Result<Vec<_>>>()?;
                product_state(basis, &factors)?
            }
        };
        Ok(state)
    }

    /// Mirror eigenvalue implied by the construction.
    pub fn mirror_parity(&self) -> Tau {
        match self {
            StateRecipe::MirrorFock { na, .. } => Tau::from_sign(if na % 2 == 0 { 1 } else { -1 }),
            StateRecipe::PairPower { pairs, .. } => Tau::from_sign(if pairs % 2 == 0 { 1 } else { -1 }),
            StateRecipe::Named { state, .. } => state.tau(),
            StateRecipe::Product(parts) => parts.iter().fold(Tau::Symmetric, |t, p| t.times(p.mirror_parity())),
        }
    }

    /// Whether the construction is protected by symmetry alone.
    pub fn is_protected(&self) -> bool {
        match self {
            StateRecipe::MirrorFock { .. } | StateRecipe::PairPower { .. } => true,
            StateRecipe::Named { state, .. } => state.is_protected(),
            StateRecipe::Product(parts) => parts.iter().all(StateRecipe::is_protected),
        }
    }
}

impl fmt::Display for StateRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateRecipe::MirrorFock { ns, na } => write!(f, "mirrorfock:ns={ns},na={na}"),
            StateRecipe::PairPower { m, pairs } => write!(f, "pair:m={m},N={}", 2 * pairs),
            StateRecipe::Named { state, m } if state.on_h0() => write!(f, "{}", state.name()),
            StateRecipe::Named { state, m } => write!(f, "{}:m={m}", state.name()),
            StateRecipe::Product(parts) => {
                let s: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", s.join("*"))
            }
        }
    }
}

impl Serialize for StateRecipe {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_args(text: &str) -> Result<BTreeMap<String, usize>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidRecipe(format!("expected key=value, got '{part}'")))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidRecipe(format!("'{part}' is not a non-negative integer")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn named_state(state: NamedState, basis: FockBasis) -> Result<FockState> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let r = |x: f64| c64(x, 0.0);
    let terms: Vec<(Vec<u32>, C64)> = match state {
        NamedState::Phi1 => vec![(vec![1, 1], r(1.0))],
        NamedState::Phi2 => vec![(vec![2, 0], r(h)), (vec![0, 2], r(h))],
        NamedState::Phi3 => vec![(vec![2, 0], r(h)), (vec![0, 2], r(-h))],
        NamedState::S1 => vec![(vec![2, 0], r(0.5)), (vec![1, 1], r(h)), (vec![0, 2], r(0.5))],
        NamedState::S2 => vec![(vec![2, 0], r(0.5)), (vec![1, 1], r(-h)), (vec![0, 2], r(0.5))],
        NamedState::Psi1 => vec![(vec![1, 0, 0, 1], r(1.0))],
        NamedState::Psi2 => vec![(vec![0, 1, 1, 0], r(1.0))],
        NamedState::Psi3 => vec![(vec![1, 0, 1, 0], r(h)), (vec![0, 1, 0, 1], r(h))],
        NamedState::Psi4 => vec![(vec![1, 0, 1, 0], r(h)), (vec![0, 1, 0, 1], r(-h))],
    };
    FockState::from_terms(basis, &terms)
}

fn product_state(basis: FockBasis, factors: &[FockState]) -> Result<FockState> {
    let dims: Vec<usize> = factors.iter().map(|f| f.basis().space().dim()).collect();
    let mut amplitudes = CVector::zeros(basis.len());
    for (i, occ) in basis.states().iter().enumerate() {
        let mut offset = 0;
        let mut amp = c64(1.0, 0.0);
        for (factor, &d) in factors.iter().zip(&dims) {
            let part = Occupation::new(occ.counts()[offset..offset + d].to_vec());
            offset += d;
            match factor.amplitude(&part) {
                Some(a) if part.total() == factor.basis().n_photons() => amp *= a,
                _ => {
                    amp = c64(0.0, 0.0);
                    break;
                }
            }
        }
        amplitudes[i] = amp;
    }
    FockState::new(basis, amplitudes)
}

/// A polynomial in commuting creation operators, keyed by exponent vectors.
#[derive(Debug, Clone)]
pub struct CreationPolynomial {
    terms: BTreeMap<Vec<u32>, C64>,
}

impl CreationPolynomial {
    pub fn vacuum(modes: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; modes], c64(1.0, 0.0));
        Self { terms }
    }

    /// Multiplies by `sum_i coeffs[i] a_i^dag`.
    pub fn times_linear(&self, coeffs: &[C64]) -> Self {
        let mut terms: BTreeMap<Vec<u32>, C64> = BTreeMap::new();
        for (exps, c) in &self.terms {
            for (i, &k) in coeffs.iter().enumerate() {
                if k == c64(0.0, 0.0) {
                    continue;
                }
                let mut e = exps.clone();
                e[i] += 1;
                *terms.entry(e).or_insert(c64(0.0, 0.0)) += c * k;
            }
        }
        Self { terms }
    }

    /// Applies the polynomial to the vacuum, scaled by `scale`.
    pub fn to_state(&self, basis: FockBasis, scale: f64) -> Result<FockState> {
        let mut amplitudes = CVector::zeros(basis.len());
        for (exps, c) in &self.terms {
            let occ = Occupation::new(exps.clone());
            let i = basis
                .index_of(&occ)
                .ok_or_else(|| Error::InvalidArgument(format!("{occ} outside the target basis")))?;
            amplitudes[i] += c * occ.factorial_product().sqrt() * scale;
        }
        FockState::new(basis, amplitudes)
    }
}

/// Exact monomial coefficients of `(a_{m,+} a_{-m,+} - a_{m,-} a_{-m,-})^pairs` obtained
/// by repeated multiplication, keyed by exponent vector in `Hm` mode order.
pub fn pair_power_monomials(pairs: usize) -> Vec<(Occupation, i128)> {
    let mut poly: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
    poly.insert(vec![0; 4], 1);
    for _ in 0..pairs {
        let mut next: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (e, c) in &poly {
            let mut plus = e.clone();
            plus[0] += 1;
            plus[2] += 1;
            *next.entry(plus).or_insert(0) += c;
            let mut minus = e.clone();
            minus[1] += 1;
            minus[3] += 1;
            *next.entry(minus).or_insert(0) -= c;
        }
        poly = next;
    }
    let mut out: Vec<(Occupation, i128)> = poly.into_iter().filter(|(_, c)| *c != 0).map(|(e, c)| (Occupation::new(e), c)).collect();
    // order by the number l of minus-helicity pairs
    out.sort_by_key(|(o, _)| o.counts()[1]);
    out
}

/// `x_l = (-1)^l C(K, l)` for `l = 0..=K`: the helicity-basis monomial coefficients
/// of the unique protected `2K`-photon state on `Hm`.
pub fn pair_binomial_coefficients(pairs: usize) -> Vec<i128> {
    let mut out = Vec::with_capacity(pairs + 1);
    let mut c: i128 = 1;
    for l in 0..=pairs {
        out.push(if l % 2 == 0 { c } else { -c });
        c = c * (pairs - l) as i128 / (l as i128 + 1);
    }
    out
}

/// Monomial coefficients `amplitude / sqrt(prod n!)` of a state.
pub fn monomial_coefficients(state: &FockState) -> Vec<(Occupation, C64)> {
    state
        .basis()
        .states()
        .iter()
        .zip(state.amplitudes().iter())
        .map(|(o, a)| (o.clone(), a / o.factorial_product().sqrt()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProtectedCount {
    pub symmetric: usize,
    pub antisymmetric: usize,
    pub total: usize,
}

/// Number of protected rays with `n` photons on a single block, split by mirror parity.
///
/// On `H0` these are the `n + 1` mirror Fock states; on `Hm` only the pair power
/// exists, and only for even `n`.
pub fn count_protected(kind: SpaceKind, n: usize) -> ProtectedCount {
    match kind {
        SpaceKind::H0 => {
            let (symmetric, antisymmetric) = if n % 2 == 1 { ((n + 1) / 2, (n + 1) / 2) } else { (n / 2 + 1, n / 2) };
            ProtectedCount { symmetric, antisymmetric, total: n + 1 }
        }
        SpaceKind::Hm(_) => {
            if n % 2 == 1 {
                ProtectedCount { symmetric: 0, antisymmetric: 0, total: 0 }
            } else if (n / 2) % 2 == 0 {
                ProtectedCount { symmetric: 1, antisymmetric: 0, total: 1 }
            } else {
                ProtectedCount { symmetric: 0, antisymmetric: 1, total: 1 }
            }
        }
    }
}
