//! Slater rank of two-photon states.
//!
//! A two-photon state is `sum_ij C_ij a_i^dag a_j^dag |0>` with `C` complex
//! symmetric. The Takagi factorization `C = U diag(sigma) U^T` gives the
//! Slater rank. A state is a single product `A_u^dag A_v^dag |0>` of two
//! (possibly non-orthogonal) creation operators exactly when the rank is at
//! most two, since `u v^T + v u^T = sigma1 x x^T + sigma2 y y^T` for
//! `u, v = (sqrt(sigma1) x +- i sqrt(sigma2) y) / sqrt2`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState, Occupation};
use crate::linalg::{c64, CMatrix, CVector};
use crate::modes::ModeSpace;
use crate::states::CreationPolynomial;

pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TwoPhotonMatrix {
    space: ModeSpace,
    c: CMatrix,
}

impl TwoPhotonMatrix {
    /// Builds `C` from a two-photon state: `C_ii = amp(2 at i) / sqrt2`,
    /// `C_ij = C_ji = amp(1 at i, 1 at j) / 2`.
    pub fn from_state(state: &FockState) -> Result<Self> {
        let basis = state.basis();
        if basis.n_photons() != 2 {
            return Err(Error::InvalidArgument(format!("two-photon state expected, got N = {}", basis.n_photons())));
        }
        let m = basis.space().dim();
        let mut c = CMatrix::zeros(m, m);
        for (occ, amp) in basis.states().iter().zip(state.amplitudes().iter()) {
            match occ.mode_list().as_slice() {
                [i, j] if i == j => c[(*i, *i)] = amp / std::f64::consts::SQRT_2,
                [i, j] => {
                    c[(*i, *j)] = amp / 2.0;
                    c[(*j, *i)] = amp / 2.0;
                }
                _ => unreachable!("two-photon occupation"),
            }
        }
        Ok(Self { space: basis.space().clone(), c })
    }

    /// Symmetrizes `c` on construction.
    pub fn new(space: ModeSpace, c: CMatrix) -> Result<Self> {
        if c.nrows() != space.dim() || c.ncols() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: c.nrows() });
        }
        if c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let c = (&c + c.transpose()) * c64(0.5, 0.0);
        Ok(Self { space, c })
    }

    pub fn space(&self) -> &ModeSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.c
    }

    /// The state `sum_ij C_ij a_i^dag a_j^dag |0>` (not renormalized).
    pub fn to_state(&self) -> Result<FockState> {
        let basis = FockBasis::new(self.space.clone(), 2)?;
        let mut amplitudes = CVector::zeros(basis.len());
        for (k, occ) in basis.states().iter().enumerate() {
            amplitudes[k] = match occ.mode_list().as_slice() {
                [i, j] if i == j => self.c[(*i, *i)] * std::f64::consts::SQRT_2,
                [i, j] => self.c[(*i, *j)] * 2.0,
                _ => unreachable!("two-photon occupation"),
            };
        }
        FockState::new(basis, amplitudes)
    }
}

/// `C = U diag(sigma) U^T` with `U` unitary and `sigma` sorted descending.
#[derive(Debug, Clone)]
pub struct Takagi {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
}

impl Takagi {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.sigma.len();
        let d = CMatrix::from_fn(n, n, |i, j| if i == j { c64(self.sigma[i], 0.0) } else { c64(0.0, 0.0) });
        &self.u * d * self.u.transpose()
    }
}

/// Takagi factorization through the real symmetric embedding
/// `[[A, B], [B, -A]]` of `C = A + iB`: an eigenvector `[x; y]` with eigenvalue
/// `sigma > 0` gives the Takagi vector `x + iy`. Vectors for vanishing values
/// are conjugated null vectors of `C`.
pub fn takagi(c: &TwoPhotonMatrix, rank_tol: f64) -> Takagi {
    let n = c.c.nrows();
    let a = c.c.map(|z| z.re);
    let b = c.c.map(|z| z.im);
    let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
    embed.view_mut((0, 0), (n, n)).copy_from(&a);
    embed.view_mut((0, n), (n, n)).copy_from(&b);
    embed.view_mut((n, 0), (n, n)).copy_from(&b);
    embed.view_mut((n, n), (n, n)).copy_from(&(-&a));
    let eig = SymmetricEigen::new(embed);

    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let rank = order.iter().take(n).filter(|&&k| eig.eigenvalues[k] > rank_tol).count();

    let mut sigma = Vec::with_capacity(n);
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    for &k in order.iter().take(rank) {
        let v = eig.eigenvectors.column(k);
        sigma.push(eig.eigenvalues[k]);
        cols.push(CVector::from_fn(n, |i, _| c64(v[i], v[n + i])));
    }
    if rank < n {
        let svd = c.c.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested v_t");
        let mut by_value: Vec<usize> = (0..n).collect();
        by_value.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
        for &k in by_value.iter().take(n - rank) {
            // row k of V^dag is w^dag for a null vector w; the Takagi vector is conj(w)
            cols.push(v_t.row(k).transpose());
            sigma.push(svd.singular_values[k].max(0.0));
        }
    }
    let u = if n == 0 { CMatrix::zeros(0, 0) } else { CMatrix::from_columns(&cols) };
    Takagi { u, sigma }
}

#[derive(Debug, Clone, Serialize)]
pub struct SlaterReport {
    pub slater_rank: usize,
    pub singular_values: Vec<f64>,
    pub is_single_product: bool,
    pub reconstruction_error: f64,
}

pub fn slater_report(c: &TwoPhotonMatrix, rank_tol: f64) -> SlaterReport {
    let t = takagi(c, rank_tol);
    let slater_rank = t.sigma.iter().filter(|&&s| s > rank_tol).count();
    SlaterReport {
        slater_rank,
        reconstruction_error: (t.reconstruct() - &c.c).norm(),
        singular_values: t.sigma,
        is_single_product: slater_rank <= 2,
    }
}

pub fn analyze(state: &FockState) -> Result<SlaterReport> {
    Ok(slater_report(&TwoPhotonMatrix::from_state(state)?, DEFAULT_RANK_TOL))
}

/// Mode vectors `u, v` with `C = u v^T + v u^T`, so the state equals
/// `2 A_u^dag A_v^dag |0>` with `A_u^dag = sum_i u_i a_i^dag`. `None` when the
/// Slater rank exceeds two.
pub fn single_product_factors(c: &TwoPhotonMatrix, rank_tol: f64) -> Option<(CVector, CVector)> {
    let t = takagi(c, rank_tol);
    let rank = t.sigma.iter().filter(|&&s| s > rank_tol).count();
    if rank > 2 {
        return None;
    }
    let n = c.c.nrows();
    let scaled = |k: usize| -> CVector {
        if k < rank {
            t.u.column(k) * c64(t.sigma[k].sqrt(), 0.0)
        } else {
            CVector::zeros(n)
        }
    };
    let (x, y) = (scaled(0), scaled(1));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let iy = &y * c64(0.0, 1.0);
    Some(((&x + &iy) * c64(h, 0.0), (&x - &iy) * c64(h, 0.0)))
}

/// `2 A_u^dag A_v^dag |0>` on the two-photon space of `space`.
pub fn product_state(space: &ModeSpace, u: &CVector, v: &CVector) -> Result<FockState> {
    let basis = FockBasis::new(space.clone(), 2)?;
    let poly = CreationPolynomial::vacuum(space.dim())
        .times_linear(u.as_slice())
        .times_linear(v.as_slice());
    poly.to_state(basis, 2.0)
}

/// Convenience for `(a_i^dag)^2 |0>`-style occupation inputs.
pub fn occupation_state(space: &ModeSpace, counts: Vec<u32>) -> Result<FockState> {
    let occ = Occupation::new(counts);
    FockState::basis_state(FockBasis::new(space.clone(), occ.total())?, &occ)
}
