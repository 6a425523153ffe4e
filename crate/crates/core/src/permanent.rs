//! Matrix permanents by Ryser's inclusion-exclusion formula.
//!
//! `Per(A) = (-1)^n sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij`, with the column
//! subsets visited in Gray-code order so each step adds or removes one column
//! from the running row sums. Cost is `O(2^n n)`.

use crate::linalg::{CMatrix, C64};

/// Largest order accepted; the subset counter is a `u64`.
pub const MAX_ORDER: usize = 40;

pub fn permanent(a: &CMatrix) -> C64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "permanent of a non-square matrix");
    assert!(n <= MAX_ORDER, "permanent order {n} exceeds {MAX_ORDER}");
    match n {
        0 => return C64::new(1.0, 0.0),
        1 => return a[(0, 0)],
        2 => return a[(0, 0)] * a[(1, 1)] + a[(0, 1)] * a[(1, 0)],
        _ => {}
    }

    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u64 = 0;
    for k in 1..(1u64 << n) {
        let col = k.trailing_zeros() as usize;
        gray ^= 1 << col;
        if gray & (1 << col) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += a[(i, col)];
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= a[(i, col)];
            }
        }
        let prod: C64 = row_sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if n % 2 == 1 {
        -total
    } else {
        total
    }
}
