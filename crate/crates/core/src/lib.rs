//! Postselected multiphoton scattering on cylindrically symmetric linear
//! scatterers, and the search for states every such scatterer leaves invariant.

pub mod cli;
pub mod dfs;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod modes;
pub mod permanent;
pub mod protect;
pub mod scatter;
pub mod states;

pub use error::{Error, Result};
pub use fock::{FockBasis, FockState, LiftedOperator, Occupation};
pub use modes::{Helicity, ModeLabel, ModeSpace, SpaceKind, Tau};
pub use scatter::{ScatterSampler, SymmetricScattering, Unitarity};
pub use protect::{certify, find_protected, CertificationConfig, ProtectionReport, Verdict};
pub use states::{NamedState, StateRecipe};
