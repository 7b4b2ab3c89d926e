use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{ext_gcd, HnfResult};
use crate::error::{Error, Result};
use crate::matrix::{full_rank_minor_gcd, IntMatrix};

/// Column reduction state. Every column operation `E` applied to `h` is
/// mirrored as the row operation `E⁻¹` on `u`, so `A = h·u` throughout.
struct ColumnReducer {
    h: IntMatrix,
    u: IntMatrix,
    negative_det: bool,
}

impl ColumnReducer {
    /// Replaces columns `j`, `c` so that row `r` holds `gcd(h[r][j], h[r][c])`
    /// in column `c` and zero in column `j`.
    fn merge_into(&mut self, r: usize, j: usize, c: usize) {
        let a = self.h[(r, j)].clone();
        let b = self.h[(r, c)].clone();
        let (g, x, y) = ext_gcd(&a, &b);
        let (a_g, b_g) = (&a / &g, &b / &g);
        for i in 0..self.h.rows() {
            let hj = self.h[(i, j)].clone();
            let hc = self.h[(i, c)].clone();
            self.h[(i, j)] = &b_g * &hj - &a_g * &hc;
            self.h[(i, c)] = &x * &hj + &y * &hc;
        }
        // inverse of [[b/g, x], [-a/g, y]] is [[y, -x], [a/g, b/g]]
        for l in 0..self.u.cols() {
            let uj = self.u[(j, l)].clone();
            let uc = self.u[(c, l)].clone();
            self.u[(j, l)] = &y * &uj - &x * &uc;
            self.u[(c, l)] = &a_g * &uj + &b_g * &uc;
        }
    }

    fn negate_column(&mut self, c: usize) {
        for i in 0..self.h.rows() {
            let v = -std::mem::take(&mut self.h[(i, c)]);
            self.h[(i, c)] = v;
        }
        for l in 0..self.u.cols() {
            let v = -std::mem::take(&mut self.u[(c, l)]);
            self.u[(c, l)] = v;
        }
        self.negative_det = !self.negative_det;
    }

    /// `col_dst -= q · col_src`.
    fn subtract_column(&mut self, src: usize, dst: usize, q: &BigInt) {
        for i in 0..self.h.rows() {
            let d = q * &self.h[(i, src)];
            self.h[(i, dst)] -= d;
        }
        for l in 0..self.u.cols() {
            let d = q * &self.u[(dst, l)];
            self.u[(src, l)] += d;
        }
    }
}

/// Hermite normal form `A = H·U` of a `k × n` matrix with `k ≤ n`.
///
/// Rows are processed bottom-up. Each row's entries left of the current
/// pivot boundary are gathered into one column by extended-gcd column
/// operations, the pivot is made positive, and the entries to its right
/// are reduced modulo the pivot. Rows with nothing left of the boundary
/// receive no pivot.
pub fn hnf(a: &IntMatrix) -> Result<HnfResult> {
    let (k, n) = a.shape();
    if k > n {
        return Err(Error::domain(format!("k must not exceed n (matrix is {k}x{n})")));
    }
    let mut red = ColumnReducer {
        h: a.clone(),
        u: IntMatrix::identity(n),
        negative_det: false,
    };
    // columns 0..boundary are still free; boundary..n hold pivots of lower rows
    let mut boundary = n;
    for r in (0..k).rev() {
        if boundary == 0 {
            break;
        }
        let c = boundary - 1;
        for j in (0..c).rev() {
            if !red.h[(r, j)].is_zero() {
                red.merge_into(r, j, c);
            }
        }
        if red.h[(r, c)].is_zero() {
            continue;
        }
        if red.h[(r, c)].is_negative() {
            red.negate_column(c);
        }
        let pivot = red.h[(r, c)].clone();
        for j in c + 1..n {
            let q = red.h[(r, j)].div_floor(&pivot);
            if !q.is_zero() {
                red.subtract_column(c, j, &q);
            }
        }
        boundary = c;
    }
    Ok(HnfResult {
        h: red.h,
        u: red.u,
        det_u: if red.negative_det { -1 } else { 1 },
    })
}

/// Checks the shape conditions of a right-justified Hermite normal form.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let (k, n) = h.shape();
    let mut boundary = n;
    for r in (0..k).rev() {
        let Some(last) = (0..boundary).rev().find(|&j| !h[(r, j)].is_zero()) else {
            continue;
        };
        if last != boundary - 1 || (0..last).any(|j| !h[(r, j)].is_zero()) {
            return false;
        }
        let pivot = &h[(r, last)];
        if !pivot.is_positive() {
            return false;
        }
        if (last + 1..n).any(|j| h[(r, j)].is_negative() || &h[(r, j)] >= pivot) {
            return false;
        }
        boundary = last;
    }
    true
}

/// Whether the Hermite normal form of `a` is the block `[O | I_k]`.
pub fn is_trivial_hnf(a: &IntMatrix) -> Result<bool> {
    let res = hnf(a)?;
    Ok(res.h == IntMatrix::trailing_identity(a.rows(), a.cols()))
}

/// Extends a unimodular `k × n` matrix to an `n × n` matrix of determinant
/// ±1 whose last `k` rows are `a`.
///
/// When the Hermite form is `[O | I_k]`, `A = [O | I_k]·U` says precisely
/// that `A` is the last `k` rows of `U`, so `U` is the completion.
pub fn complete_to_gl(a: &IntMatrix) -> Result<IntMatrix> {
    let (k, n) = a.shape();
    let gcd = full_rank_minor_gcd(a)?;
    if !gcd.is_one() {
        return Err(Error::NotUnimodular { gcd });
    }
    if k == n {
        return Ok(a.clone());
    }
    let res = hnf(a)?;
    debug_assert_eq!(res.h, IntMatrix::trailing_identity(k, n));
    Ok(res.u)
}
