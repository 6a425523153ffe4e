//! Dense complex linear algebra shared by the scattering, Fock and search code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Amplitudes below this fraction of the largest one are ignored when fixing the phase of a ray.
pub const PHASE_REFERENCE_FLOOR: f64 = 1e-6;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Frobenius norm of `AB - BA`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// Frobenius norm of `A^dagger A - I`.
pub fn unitarity_defect(a: &CMatrix) -> f64 {
    let n = a.ncols();
    (a.adjoint() * a - CMatrix::identity(n, n)).norm()
}

pub fn max_singular_value(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().iter().cloned().fold(0.0, f64::max)
}

/// Principal submatrix on the given index set.
pub fn principal_block(m: &CMatrix, indices: &[usize]) -> CMatrix {
    CMatrix::from_fn(indices.len(), indices.len(), |i, j| m[(indices[i], indices[j])])
}

/// Embeds columns defined on `indices` into the full space of dimension `dim`.
pub fn embed_columns(basis: &CMatrix, indices: &[usize], dim: usize) -> CMatrix {
    let mut out = CMatrix::zeros(dim, basis.ncols());
    for (row, &idx) in indices.iter().enumerate() {
        for col in 0..basis.ncols() {
            out[(idx, col)] = basis[(row, col)];
        }
    }
    out
}

/// Orthonormal basis (as columns) of the space of vectors `v` with `|M v| <= tol`.
pub fn null_space(m: &CMatrix, tol: f64) -> CMatrix {
    let n = m.ncols();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let mut cols = Vec::new();
    for k in 0..v_t.nrows() {
        if svd.singular_values[k] <= tol {
            cols.push(v_t.row(k).adjoint());
        }
    }
    if cols.is_empty() {
        return CMatrix::zeros(n, 0);
    }
    CMatrix::from_columns(&cols)
}

/// An eigenvalue cluster with an orthonormal basis of its eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: C64,
    pub basis: CMatrix,
}

impl Eigenspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }
}

/// Groups eigenvalues whose single-linkage distance is below `tol`.
pub fn cluster_values(values: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (values[i] - values[j]).norm() < tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// Eigenvalues of a square complex matrix, read off its Schur form.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 100_000)
        .ok_or_else(|| Error::NonGeneric("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Eigenspaces of `m` with eigenvalues grouped at `cluster_tol`.
///
/// Each basis is the numerical null space of `m - mu I` for the cluster mean `mu`.
/// Fails with [`Error::Defective`] when the eigenspace dimensions do not add up
/// to the matrix size.
pub fn eigenspaces(m: &CMatrix, cluster_tol: f64) -> Result<Vec<Eigenspace>> {
    let n = m.nrows();
    let values = eigenvalues(m)?;
    let clusters = cluster_values(&values, cluster_tol);
    let mut spaces = Vec::with_capacity(clusters.len());
    let mut total = 0;
    for group in clusters {
        let mean = group.iter().map(|&i| values[i]).sum::<C64>() / group.len() as f64;
        let shifted = m - CMatrix::identity(n, n) * mean;
        let basis = null_space(&shifted, 0.5 * cluster_tol);
        if basis.ncols() != group.len() {
            return Err(Error::Defective);
        }
        total += basis.ncols();
        spaces.push(Eigenspace { value: mean, basis });
    }
    if total != n {
        return Err(Error::Defective);
    }
    Ok(spaces)
}

/// Intersection of two subspaces given by orthonormal columns.
///
/// Directions whose principal-angle cosine exceeds `1 - tol` are kept.
pub fn intersect(a: &CMatrix, b: &CMatrix, tol: f64) -> CMatrix {
    let dim = a.nrows();
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMatrix::zeros(dim, 0);
    }
    let overlap = a.adjoint() * b;
    let svd = overlap.svd(true, false);
    let u = svd.u.expect("requested u");
    let mut cols = Vec::new();
    for k in 0..svd.singular_values.len() {
        if svd.singular_values[k] > 1.0 - tol {
            cols.push(a * u.column(k));
        }
    }
    if cols.is_empty() {
        return CMatrix::zeros(dim, 0);
    }
    CMatrix::from_columns(&cols)
}

/// Rotates the global phase so the first significant amplitude is real and positive.
pub fn fix_phase(v: &mut CVector) {
    let largest = v.iter().map(|a| a.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return;
    }
    if let Some(first) = v.iter().find(|a| a.norm() > PHASE_REFERENCE_FLOOR * largest) {
        let phase = first.conj() / first.norm();
        *v *= phase;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[C64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_column_slice(values))
    }

    #[test]
    fn clustering_is_single_linkage() {
        let vals = [c64(0.0, 0.0), c64(1e-9, 0.0), c64(2e-9, 0.0), c64(1.0, 0.0)];
        let groups = cluster_values(&vals, 1.5e-9);
        assert_eq!(groups, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn eigenspaces_of_rotated_diagonal() {
        let d = diag(&[c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 1.0), c64(-1.0, 0.0)]);
        // a fixed unitary: normalized DFT
        let n = 4;
        let f = CMatrix::from_fn(n, n, |i, j| {
            C64::from_polar(0.5, 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
        });
        let m = &f * d * f.adjoint();
        let spaces = eigenspaces(&m, 1e-8).unwrap();
        let mut dims: Vec<usize> = spaces.iter().map(Eigenspace::dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2]);
        for s in &spaces {
            let residual = (&m * &s.basis - &s.basis * s.value).norm();
            assert!(residual < 1e-12, "{residual}");
        }
    }

    #[test]
    fn jordan_block_is_defective() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c64(1.0, 0.0);
        assert!(matches!(eigenspaces(&m, 1e-8), Err(Error::Defective)));
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let e = |i: usize| CVector::from_fn(3, |k, _| if k == i { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let a = CMatrix::from_columns(&[e(0), e(1)]);
        let b = CMatrix::from_columns(&[e(1), e(2)]);
        let i = intersect(&a, &b, 1e-8);
        assert_eq!(i.ncols(), 1);
        assert!((i[(1, 0)].norm() - 1.0).abs() < 1e-14);
        let c = CMatrix::from_columns(&[e(2)]);
        assert_eq!(intersect(&a, &c, 1e-8).ncols(), 0);
    }

    #[test]
    fn phase_fix_makes_first_amplitude_positive() {
        let mut v = CVector::from_vec(vec![c64(0.0, 0.0), c64(0.0, -0.6), c64(0.8, 0.0)]);
        fix_phase(&mut v);
        assert!(v[1].im.abs() < 1e-15 && v[1].re > 0.0);
        assert!((v[2] - c64(0.0, 0.8)).norm() < 1e-15);
    }
}
