//! Oracles shared by the integration tests. Nothing here calls the permanent
//! or lift code of the library.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symprot::linalg::{c64, CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Haar-ish unitary from Gram-Schmidt on a random matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = random_matrix(rng, n);
    let mut q = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut v = a.column(j).into_owned();
        for k in 0..j {
            let qk = q.column(k).into_owned();
            let p = qk.dotc(&v);
            v -= qk * p;
        }
        let norm = v.norm();
        q.set_column(j, &(v / c64(norm, 0.0)));
    }
    q
}

/// Permanent as the sum over all permutations.
pub fn naive_permanent(a: &CMatrix) -> C64 {
    fn rec(a: &CMatrix, row: usize, used: &mut Vec<bool>) -> C64 {
        let n = a.nrows();
        if row == n {
            return c64(1.0, 0.0);
        }
        let mut total = c64(0.0, 0.0);
        for col in 0..n {
            if !used[col] {
                used[col] = true;
                total += a[(row, col)] * rec(a, row + 1, used);
                used[col] = false;
            }
        }
        total
    }
    rec(a, 0, &mut vec![false; a.nrows()])
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// All occupation vectors of `n` photons in `modes` modes, in no particular order.
pub fn occupations(modes: usize, n: u32) -> Vec<Vec<u32>> {
    if modes == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for k in 0..=n {
        for mut rest in occupations(modes - 1, n - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

type Poly = BTreeMap<Vec<u32>, C64>;

fn times_linear(p: &Poly, coeffs: &[C64]) -> Poly {
    let mut out = Poly::new();
    for (e, c) in p {
        for (i, k) in coeffs.iter().enumerate() {
            let mut e2 = e.clone();
            e2[i] += 1;
            *out.entry(e2).or_insert(c64(0.0, 0.0)) += c * k;
        }
    }
    out
}

/// `S|n> = prod_j (sum_i S_ij a_i^dag)^{n_j} / sqrt(n_j!) |0>` expanded as a
/// polynomial, returned as `(output occupation, amplitude)` pairs.
pub fn scatter_fock_state(s: &CMatrix, input: &[u32]) -> Vec<(Vec<u32>, C64)> {
    let m = s.nrows();
    let mut poly = Poly::new();
    poly.insert(vec![0; m], c64(1.0, 0.0));
    let mut norm = 1.0;
    for (j, &nj) in input.iter().enumerate() {
        let col: Vec<C64> = (0..m).map(|i| s[(i, j)]).collect();
        for _ in 0..nj {
            poly = times_linear(&poly, &col);
        }
        norm *= factorial(nj).sqrt();
    }
    poly.into_iter()
        .map(|(e, c)| {
            let out_norm: f64 = e.iter().map(|&k| factorial(k).sqrt()).product();
            (e, c * out_norm / norm)
        })
        .collect()
}
