//! Dense matrices of arbitrary-precision integers, their minors, and the
//! unimodularity test based on the gcd of full-rank minors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dense `rows × cols` integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::domain(format!(
                "a {rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from a list of rows; every row must have the same length.
    pub fn from_rows<T, R>(rows: R) -> Result<Self>
    where
        T: Into<BigInt>,
        R: IntoIterator,
        R::Item: IntoIterator<Item = T>,
    {
        let mut entries = Vec::new();
        let mut nrows = 0;
        let mut ncols = None;
        for row in rows {
            let before = entries.len();
            entries.extend(row.into_iter().map(Into::into));
            let width = entries.len() - before;
            match ncols {
                None => ncols = Some(width),
                Some(c) if c != width => {
                    return Err(Error::domain(format!(
                        "row {nrows} has {width} entries, expected {c}"
                    )))
                }
                _ => {}
            }
            nrows += 1;
        }
        IntMatrix::new(nrows, ncols.unwrap_or(0), entries)
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        IntMatrix::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// The `k × n` block `[O | I_k]`: `n - k` zero columns followed by the identity.
    pub fn trailing_identity(k: usize, n: usize) -> Self {
        assert!(k <= n);
        let mut m = IntMatrix::zeros(k, n);
        for i in 0..k {
            m[(i, n - k + i)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::domain(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// The submatrix at the intersection of the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self[(i, j)].clone()))
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::domain(format!(
                "determinant needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(bareiss_determinant(self.entries.clone(), self.rows))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

/// Writes the matrix in the plain-text matrix file format: a `rows cols`
/// header followed by one line per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Serializes as a list of rows whose entries are decimal strings, so that
/// JSON consumers never truncate large values to 53 bits.
impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(deserializer)?;
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.parse::<BigInt>().map_err(de::Error::custom))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        IntMatrix::from_rows(parsed).map_err(de::Error::custom)
    }
}

/// Fraction-free Gaussian elimination on a row-major `n × n` matrix.
fn bareiss_determinant(mut a: Vec<BigInt>, n: usize) -> BigInt {
    match n {
        1 => return a.swap_remove(0),
        2 => return &a[0] * &a[3] - &a[1] * &a[2],
        _ => {}
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = !sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let v = (&pivot * &a[i * n + j] - &lead * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
        }
        prev = pivot;
    }
    let det = a.swap_remove(n * n - 1);
    if sign {
        -det
    } else {
        det
    }
}

/// Lexicographic enumeration of the `t`-element subsets of `0..n`.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, t: usize) -> Self {
        let current = (t <= n).then(|| (0..t).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let t = out.len();
        let mut idx = out.clone();
        let mut i = t;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if idx[i] < self.n - t + i {
                idx[i] += 1;
                for j in i + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                self.current = Some(idx);
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: usize, t: usize) -> u128 {
    if t > n {
        return 0;
    }
    let t = t.min(n - t);
    (0..t).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `t × t` minors of a matrix.
///
/// `values` is ordered with row subsets outermost and column subsets
/// innermost, each enumerated lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorSet {
    pub order: usize,
    #[serde(serialize_with = "crate::serde_util::bigints_as_strings")]
    pub values: Vec<BigInt>,
}

fn check_order(a: &IntMatrix, t: usize) -> Result<()> {
    let max = a.rows.min(a.cols);
    if t == 0 || t > max {
        return Err(Error::domain(format!(
            "minor order must lie in [1, {max}], got {t}"
        )));
    }
    Ok(())
}

fn check_wide(a: &IntMatrix) -> Result<()> {
    if a.rows > a.cols {
        return Err(Error::domain(format!(
            "k must not exceed n (matrix is {}x{})",
            a.rows, a.cols
        )));
    }
    Ok(())
}

pub fn minors(a: &IntMatrix, t: usize) -> Result<MinorSet> {
    check_order(a, t)?;
    let mut values = Vec::with_capacity(binomial(a.rows, t) as usize * binomial(a.cols, t) as usize);
    for rows in Combinations::new(a.rows, t) {
        for cols in Combinations::new(a.cols, t) {
            let sub = a.submatrix(&rows, &cols);
            values.push(bareiss_determinant(sub.entries, t));
        }
    }
    Ok(MinorSet { order: t, values })
}

/// gcd of all `t × t` minors; stops early once the running gcd is 1.
pub fn minor_gcd(a: &IntMatrix, t: usize) -> Result<BigInt> {
    check_order(a, t)?;
    let mut g = BigInt::zero();
    for rows in Combinations::new(a.rows, t) {
        for cols in Combinations::new(a.cols, t) {
            let sub = a.submatrix(&rows, &cols);
            g = g.gcd(&bareiss_determinant(sub.entries, t));
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

/// gcd of the absolute values of all `k × k` minors of a `k × n` matrix.
/// Zero exactly when the matrix has rank below `k`.
pub fn full_rank_minor_gcd(a: &IntMatrix) -> Result<BigInt> {
    check_wide(a)?;
    if a.rows == 1 {
        let mut g = BigInt::zero();
        for x in &a.entries {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        return Ok(g);
    }
    minor_gcd(a, a.rows)
}

/// Whether the matrix extends to an `n × n` matrix of determinant ±1,
/// decided by coprimality of the full-rank minors.
pub fn is_unimodular(a: &IntMatrix) -> Result<bool> {
    Ok(full_rank_minor_gcd(a)?.is_one())
}
