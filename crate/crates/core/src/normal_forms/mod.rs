//! Hermite and Smith normal forms of wide integer matrices, and completion
//! of unimodular matrices to elements of GL_n(Z).

mod hermite;
mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use hermite::{complete_to_gl, hnf, is_hnf, is_trivial_hnf};
pub use smith::snf;

use crate::matrix::IntMatrix;

/// `A = H·U` with `H` in Hermite normal form and `U` unimodular.
///
/// `H` is right-justified: for a matrix of rank `r` its nonzero columns are
/// the last `r`, pivot columns increase with the row index, entries left of
/// a pivot vanish and entries right of a pivot lie in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HnfResult {
    #[serde(rename = "H")]
    pub h: IntMatrix,
    #[serde(rename = "U")]
    pub u: IntMatrix,
    /// Determinant of `U`, either 1 or -1.
    #[serde(rename = "detU")]
    pub det_u: i32,
}

impl HnfResult {
    /// Number of pivots, i.e. the rank of `A`.
    pub fn rank(&self) -> usize {
        self.h.cols() - (0..self.h.cols()).take_while(|&j| column_is_zero(&self.h, j)).count()
    }
}

/// `L·A·R = S` with `L`, `R` unimodular and `S` zero except for the
/// bottom-right diagonal block `diag(d_1, ..., d_r)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    #[serde(rename = "S")]
    pub s: IntMatrix,
    #[serde(serialize_with = "crate::serde_util::bigints_as_strings")]
    pub invariants: Vec<BigInt>,
    #[serde(rename = "L")]
    pub l: IntMatrix,
    #[serde(rename = "R")]
    pub r: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }
}

fn column_is_zero(m: &IntMatrix, j: usize) -> bool {
    (0..m.rows()).all(|i| m[(i, j)].is_zero())
}

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b) ≥ 0` and
/// `a·x + b·y = g`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut x0, mut x1) = (BigInt::one(), BigInt::zero());
    let (mut y0, mut y1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_mod_floor(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let x = &x0 - &q * &x1;
        x0 = std::mem::replace(&mut x1, x);
        let y = &y0 - &q * &y1;
        y0 = std::mem::replace(&mut y1, y);
    }
    if r0.is_negative() {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}
