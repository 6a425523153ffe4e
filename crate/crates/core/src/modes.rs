//! Single-photon mode spaces labelled by angular momentum `m` and helicity.
//!
//! Two block types exist: `H0` spanned by `(0,+), (0,-)` and `Hm(m)` spanned by
//! `(m,+), (m,-), (-m,+), (-m,-)`, always in that order. Blocks with distinct
//! `|m|` can be stacked into a direct sum; no cylindrically symmetric scatterer
//! couples them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> i32 {
        match self {
            Helicity::Plus => 1,
            Helicity::Minus => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeLabel {
    pub m: i32,
    pub helicity: Helicity,
}

impl ModeLabel {
    pub fn new(m: i32, helicity: Helicity) -> Self {
        Self { m, helicity }
    }

    /// Image under the mirror `M_y`: both `m` and the helicity change sign.
    pub fn mirrored(self) -> Self {
        Self::new(-self.m, self.helicity.flipped())
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = if self.helicity == Helicity::Plus { '+' } else { '-' };
        write!(f, "({},{})", self.m, h)
    }
}

/// Mirror eigenvalue `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tau {
    Symmetric,
    Antisymmetric,
}

impl Tau {
    pub fn from_sign(sign: i32) -> Self {
        if sign >= 0 {
            Tau::Symmetric
        } else {
            Tau::Antisymmetric
        }
    }

    pub fn sign(self) -> i32 {
        match self {
            Tau::Symmetric => 1,
            Tau::Antisymmetric => -1,
        }
    }

    pub fn times(self, other: Tau) -> Tau {
        Tau::from_sign(self.sign() * other.sign())
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i32(self.sign())
    }
}

/// One symmetry-adapted block of modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    H0,
    Hm(u32),
}

impl SpaceKind {
    pub fn dim(self) -> usize {
        match self {
            SpaceKind::H0 => 2,
            SpaceKind::Hm(_) => 4,
        }
    }

    pub fn abs_m(self) -> u32 {
        match self {
            SpaceKind::H0 => 0,
            SpaceKind::Hm(m) => m,
        }
    }

    fn labels(self) -> Vec<ModeLabel> {
        use Helicity::*;
        match self {
            SpaceKind::H0 => vec![ModeLabel::new(0, Plus), ModeLabel::new(0, Minus)],
            SpaceKind::Hm(m) => {
                let m = m as i32;
                vec![
                    ModeLabel::new(m, Plus),
                    ModeLabel::new(m, Minus),
                    ModeLabel::new(-m, Plus),
                    ModeLabel::new(-m, Minus),
                ]
            }
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceKind::H0 => write!(f, "h0"),
            SpaceKind::Hm(m) => write!(f, "hm:{m}"),
        }
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        if s == "h0" {
            return Ok(SpaceKind::H0);
        }
        let m = s
            .strip_prefix("hm:")
            .ok_or_else(|| Error::InvalidSpace(format!("unknown space '{s}' (expected h0 or hm:<m>)")))?;
        let m: i64 = m
            .parse()
            .map_err(|_| Error::InvalidSpace(format!("bad angular momentum in '{s}'")))?;
        if m <= 0 {
            return Err(Error::InvalidSpace(format!("hm requires m >= 1, got {m}; use h0 for m = 0")));
        }
        Ok(SpaceKind::Hm(m as u32))
    }
}

/// An ordered registry of modes together with `J_z` and `M_y` on them.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpace {
    blocks: Vec<SpaceKind>,
    labels: Vec<ModeLabel>,
    mirror_perm: Vec<usize>,
    jz: CMatrix,
    mirror: CMatrix,
}

impl ModeSpace {
    pub fn new(kind: SpaceKind) -> Result<Self> {
        Self::direct_sum(&[kind])
    }

    pub fn h0() -> Self {
        Self::new(SpaceKind::H0).expect("h0 is always valid")
    }

    pub fn hm(m: i32) -> Result<Self> {
        if m <= 0 {
            return Err(Error::InvalidSpace(format!("hm requires m >= 1, got {m}; use h0 for m = 0")));
        }
        Self::new(SpaceKind::Hm(m as u32))
    }

    /// Direct sum of blocks with pairwise distinct `|m|`.
    pub fn direct_sum(blocks: &[SpaceKind]) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidSpace("empty mode space".into()));
        }
        for (i, a) in blocks.iter().enumerate() {
            if let SpaceKind::Hm(0) = a {
                return Err(Error::InvalidSpace("hm requires m >= 1; use h0 for m = 0".into()));
            }
            if blocks[..i].iter().any(|b| b.abs_m() == a.abs_m()) {
                return Err(Error::InvalidSpace(format!("block {a} appears twice")));
            }
        }
        let labels: Vec<ModeLabel> = blocks.iter().flat_map(|b| b.labels()).collect();
        let dim = labels.len();
        let mirror_perm: Vec<usize> = labels
            .iter()
            .map(|l| {
                let image = l.mirrored();
                labels.iter().position(|x| *x == image).expect("blocks are mirror closed")
            })
            .collect();
        let jz = CMatrix::from_fn(dim, dim, |i, j| if i == j { c64(labels[i].m as f64, 0.0) } else { c64(0.0, 0.0) });
        let mirror = CMatrix::from_fn(dim, dim, |i, j| if mirror_perm[j] == i { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        Ok(Self { blocks: blocks.to_vec(), labels, mirror_perm, jz, mirror })
    }

    /// The single block kind, or `None` for a direct sum.
    pub fn kind(&self) -> Option<SpaceKind> {
        match self.blocks.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn blocks(&self) -> &[SpaceKind] {
        &self.blocks
    }

    /// First mode index of every block.
    pub fn block_offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.dim();
                Some(start)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn jz_matrix(&self) -> &CMatrix {
        &self.jz
    }

    pub fn mirror_matrix(&self) -> &CMatrix {
        &self.mirror
    }

    /// Mode `i` is sent to mode `mirror_permutation()[i]` by `M_y`.
    pub fn mirror_permutation(&self) -> &[usize] {
        &self.mirror_perm
    }

    /// Unitary whose columns are the mirror eigenmodes `(1, 1)/sqrt2` and `(1, -1)/sqrt2` of `H0`.
    ///
    /// Only defined on `H0`; on `Hm` the mirror does not commute with `J_z`.
    pub fn mirror_eigenbasis(&self) -> Result<CMatrix> {
        if self.kind() != Some(SpaceKind::H0) {
            return Err(Error::InvalidSpace(format!(
                "mirror eigenbasis requires h0; M_y and J_z do not commute on {self}"
            )));
        }
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Ok(CMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)]))
    }
}

impl fmt::Display for ModeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for ModeSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let blocks = s.split('+').map(SpaceKind::from_str).collect::<Result<Vec<_>>>()?;
        Self::direct_sum(&blocks)
    }
}

impl Serialize for ModeSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ModeSpace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
