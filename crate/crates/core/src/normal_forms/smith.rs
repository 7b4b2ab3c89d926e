use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{ext_gcd, SnfResult};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Bezout coefficients `(g, x, y)` with `x·a + y·b = g`, taking `x = ±1, y = 0`
/// whenever `a | b` so the entries other than `b` are left alone.
fn coefficients(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if !a.is_zero() && b.is_multiple_of(a) {
        (a.abs(), a.signum(), BigInt::zero())
    } else {
        ext_gcd(a, b)
    }
}

/// Two-sided elimination state with `s = l·A·r` maintained throughout.
struct Diagonalizer {
    s: IntMatrix,
    l: IntMatrix,
    r: IntMatrix,
}

impl Diagonalizer {
    /// Row operation on rows `p`, `q` leaving `gcd` at `(p, col)` and zero at `(q, col)`.
    fn merge_rows(&mut self, p: usize, q: usize, col: usize) {
        let a = self.s[(p, col)].clone();
        let b = self.s[(q, col)].clone();
        let (g, x, y) = coefficients(&a, &b);
        let (a_g, b_g) = (&a / &g, &b / &g);
        for m in [&mut self.s, &mut self.l] {
            for j in 0..m.cols() {
                let vp = m[(p, j)].clone();
                let vq = m[(q, j)].clone();
                m[(p, j)] = &x * &vp + &y * &vq;
                m[(q, j)] = &a_g * &vq - &b_g * &vp;
            }
        }
    }

    /// Column operation on columns `p`, `q` leaving `gcd` at `(row, p)` and zero at `(row, q)`.
    fn merge_cols(&mut self, p: usize, q: usize, row: usize) {
        let a = self.s[(row, p)].clone();
        let b = self.s[(row, q)].clone();
        let (g, x, y) = coefficients(&a, &b);
        let (a_g, b_g) = (&a / &g, &b / &g);
        for m in [&mut self.s, &mut self.r] {
            for i in 0..m.rows() {
                let vp = m[(i, p)].clone();
                let vq = m[(i, q)].clone();
                m[(i, p)] = &x * &vp + &y * &vq;
                m[(i, q)] = &a_g * &vq - &b_g * &vp;
            }
        }
    }

    fn add_col(&mut self, src: usize, dst: usize, factor: &BigInt) {
        for m in [&mut self.s, &mut self.r] {
            for i in 0..m.rows() {
                let d = factor * &m[(i, src)];
                m[(i, dst)] += d;
            }
        }
    }

    fn negate_row(&mut self, p: usize) {
        for m in [&mut self.s, &mut self.l] {
            for j in 0..m.cols() {
                let v = -std::mem::take(&mut m[(p, j)]);
                m[(p, j)] = v;
            }
        }
    }

    /// Reduces to a diagonal in the top-left corner and returns the rank.
    fn diagonalize(&mut self) -> usize {
        let (k, n) = self.s.shape();
        for t in 0..k.min(n) {
            let pivot = (t..k)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !self.s[(i, j)].is_zero())
                .min_by(|&a, &b| self.s[a].abs().cmp(&self.s[b].abs()));
            let Some((pi, pj)) = pivot else {
                return t;
            };
            self.s.swap_rows(t, pi);
            self.l.swap_rows(t, pi);
            self.s.swap_cols(t, pj);
            self.r.swap_cols(t, pj);
            loop {
                for i in t + 1..k {
                    if !self.s[(i, t)].is_zero() {
                        self.merge_rows(t, i, t);
                    }
                }
                for j in t + 1..n {
                    if !self.s[(t, j)].is_zero() {
                        self.merge_cols(t, j, t);
                    }
                }
                if (t + 1..k).all(|i| self.s[(i, t)].is_zero()) {
                    break;
                }
            }
            if self.s[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
        k.min(n)
    }

    /// Turns `diag(a, b)` at positions `p < q` into `diag(gcd, lcm)`.
    fn fix_pair(&mut self, p: usize, q: usize) {
        let one = BigInt::from(1);
        self.add_col(q, p, &one);
        self.merge_rows(p, q, p);
        // now [[g, y·b], [0, lcm]] with g | y·b
        let q_factor = -(&self.s[(p, q)] / &self.s[(p, p)]);
        self.add_col(p, q, &q_factor);
        if self.s[(q, q)].is_negative() {
            self.negate_row(q);
        }
    }
}

/// Smith normal form `L·A·R = S` of a `k × n` matrix with `k ≤ n`.
///
/// The invariant factors `d_1 | d_2 | ... | d_r` sit on the diagonal of the
/// bottom-right `r × r` block of `S`, so a unimodular input yields `[O | I_k]`.
pub fn snf(a: &IntMatrix) -> Result<SnfResult> {
    let (k, n) = a.shape();
    if k > n {
        return Err(Error::domain(format!("k must not exceed n (matrix is {k}x{n})")));
    }
    let mut d = Diagonalizer {
        s: a.clone(),
        l: IntMatrix::identity(k),
        r: IntMatrix::identity(n),
    };
    let rank = d.diagonalize();
    for p in 0..rank {
        for q in p + 1..rank {
            if !d.s[(q, q)].is_multiple_of(&d.s[(p, p)]) {
                d.fix_pair(p, q);
            }
        }
    }
    let invariants: Vec<BigInt> = (0..rank).map(|i| d.s[(i, i)].clone()).collect();

    // Move the diagonal block to the bottom-right corner.
    let row_perm: Vec<usize> = (rank..k).chain(0..rank).collect();
    let col_perm: Vec<usize> = (rank..n).chain(0..rank).collect();
    let l = d.l.submatrix(&row_perm, &(0..k).collect::<Vec<_>>());
    let r = d.r.submatrix(&(0..n).collect::<Vec<_>>(), &col_perm);
    let s = d.s.submatrix(&row_perm, &col_perm);
    Ok(SnfResult {
        s,
        invariants,
        l,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::minor_gcd;
    use num_traits::One;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows.iter().map(|r| r.to_vec())).unwrap()
    }

    fn check(a: &IntMatrix) -> SnfResult {
        let res = snf(a).unwrap();
        let las = res.l.mul(a).unwrap().mul(&res.r).unwrap();
        assert_eq!(las, res.s);
        assert!(res.l.determinant().unwrap().abs().is_one());
        assert!(res.r.determinant().unwrap().abs().is_one());
        let mut prod = BigInt::one();
        for (t, d) in res.invariants.iter().enumerate() {
            assert!(d.is_positive());
            if t + 1 < res.invariants.len() {
                assert!(res.invariants[t + 1].is_multiple_of(d));
            }
            prod *= d;
            assert_eq!(prod, minor_gcd(a, t + 1).unwrap());
        }
        res
    }

    #[test]
    fn equal_magnitude_pivots_terminate() {
        for rows in [
            vec![vec![2, -2, 4], vec![-2, 2, 6]],
            vec![vec![3, 3, 3], vec![-3, 3, 0]],
            vec![vec![-2, 2], vec![2, 2]],
            vec![vec![6, -6, 6], vec![6, 6, -6], vec![-6, 6, 6]],
        ] {
            check(&IntMatrix::from_rows(rows).unwrap());
        }
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn examples() {
        let res = check(&m(&[&[4, 6]]));
        assert_eq!(res.invariants, big(&[2]));
        assert_eq!(res.s, m(&[&[0, 2]]));

        let res = check(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(res.invariants, big(&[1, 6]));
        assert_eq!(res.s, m(&[&[1, 0], &[0, 6]]));

        let res = check(&m(&[&[2, 3]]));
        assert_eq!(res.s, m(&[&[0, 1]]));
    }

    #[test]
    fn divisibility_fix_up() {
        let res = check(&m(&[&[4, 0, 0], &[0, 6, 0]]));
        assert_eq!(res.invariants, big(&[2, 12]));
        assert_eq!(res.s, m(&[&[0, 2, 0], &[0, 0, 12]]));
        let res = check(&m(&[&[6, 0, 0], &[0, 10, 0], &[0, 0, 15]]));
        assert_eq!(res.invariants, big(&[1, 30, 30]));
    }

    #[test]
    fn rank_deficient() {
        let res = check(&m(&[&[2, 4, 6], &[1, 2, 3]]));
        assert_eq!(res.invariants, big(&[1]));
        assert_eq!(res.s, m(&[&[0, 0, 0], &[0, 0, 1]]));
        let res = check(&m(&[&[0, 0], &[0, 0]]));
        assert!(res.invariants.is_empty());
        assert!(res.s.is_zero());
    }

    #[test]
    fn unimodular_gives_trailing_identity() {
        let a = m(&[&[1, 2, 3], &[4, 5, 7]]);
        assert_eq!(check(&a).s, IntMatrix::trailing_identity(2, 3));
    }

    #[test]
    fn tall_rejected() {
        assert!(snf(&m(&[&[1], &[2]])).is_err());
    }
}
