//! Riemann zeta at integers `j ≥ 2` with a rigorous absolute error bound.
//!
//! `ζ(j) = Σ_{m<M} m^-j + Σ_{m≥M} m^-j`, where the tail is summed by
//! Euler–Maclaurin:
//!
//! ```text
//! Σ_{m≥M} m^-j = M^(1-j)/(j-1) + M^-j/2
//!              + Σ_{i≥1} B_{2i}/(2i)! · j(j+1)…(j+2i-2) · M^(1-j-2i)
//! ```
//!
//! All derivatives of `x^-j` have constant sign and are monotone, so the
//! remainder after any number of correction terms is bounded in absolute
//! value by the first omitted term.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::fixed::{Fixed, ULP};
use crate::error::{Error, Result};

/// Smallest tolerance accepted internally.
pub(crate) const MIN_INTERNAL_TOL: f64 = 1e-50;

const MAX_CORRECTIONS: usize = 60;

/// Head length used before switching to the Euler–Maclaurin tail.
pub(crate) fn head_length(j: u32) -> u64 {
    u64::from(j).max(20)
}

/// `ζ(j)` together with the truncation parameters that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaValue {
    pub j: u32,
    pub value: Fixed,
    pub abs_error_bound: f64,
    /// `M`: terms `m < M` are summed directly, the rest by Euler–Maclaurin.
    pub cutoff: u64,
    /// Number of Bernoulli correction terms kept.
    pub corrections: usize,
}

/// `B_0, B_2, B_4, ...` as exact rationals.
fn even_bernoulli() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let top = 2 * (MAX_CORRECTIONS + 1);
        let mut b: Vec<BigRational> = Vec::with_capacity(top + 1);
        b.push(BigRational::one());
        for m in 1..=top {
            // B_m = -1/(m+1) Σ_{i<m} C(m+1, i) B_i
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (i, bi) in b.iter().enumerate() {
                acc += bi * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(m + 1 - i) / BigInt::from(i + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b.into_iter().step_by(2).collect()
    })
}

fn check_tol(tol: f64, min: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if tol < min {
        return Err(Error::domain(format!(
            "tolerance {tol:e} is below the supported minimum {min:e}"
        )));
    }
    Ok(())
}

/// `ζ(j)` to absolute error at most `tol`.
pub fn zeta(j: u32, tol: f64) -> Result<ZetaValue> {
    check_tol(tol, super::MIN_TOL)?;
    zeta_internal(j, tol)
}

pub(crate) fn zeta_internal(j: u32, tol: f64) -> Result<ZetaValue> {
    if j < 2 {
        return Err(Error::domain(format!(
            "zeta needs j >= 2, got {j} (pole at 1)"
        )));
    }
    check_tol(tol, MIN_INTERNAL_TOL)?;
    let big_m = head_length(j);
    let mut ulps = 0u64;

    let one = BigInt::one();
    let mut value = Fixed::zero();
    for m in 1..big_m {
        value = &value + &Fixed::from_ratio(&one, &BigInt::from(m).pow(j));
        ulps += 1;
    }

    let m_big = BigInt::from(big_m);
    let m_pow = m_big.pow(j);
    // M^(1-j)/(j-1) + M^-j/2
    let integral = BigRational::new(m_big.clone(), &m_pow * BigInt::from(j - 1));
    let half = BigRational::new(one.clone(), &m_pow * 2u32);
    value = &value + &Fixed::from_rational(&(integral + half));
    ulps += 1;

    let bern = even_bernoulli();
    let tol_rational = BigRational::from_float(tol / 2.0).expect("finite tolerance");
    let jj = BigInt::from(j);
    let mut rising = jj.clone(); // j(j+1)…(j+2i-2)
    let mut factorial = BigInt::from(2u32); // (2i)!
    let mut m_power = &m_pow * &m_big; // M^(j+2i-1)
    let mut corrections = 0;
    let mut prev_abs: Option<BigRational> = None;
    let remainder = loop {
        let i = corrections + 1;
        if i > MAX_CORRECTIONS {
            return Err(Error::domain(format!(
                "zeta({j}) cannot reach tolerance {tol:e}"
            )));
        }
        let term = &bern[i] * BigRational::new(rising.clone(), &factorial * &m_power);
        let abs = term.abs();
        if abs <= tol_rational {
            break abs;
        }
        if prev_abs.as_ref().is_some_and(|p| &abs >= p) {
            return Err(Error::domain(format!(
                "zeta({j}) cannot reach tolerance {tol:e}"
            )));
        }
        value = &value + &Fixed::from_rational(&term);
        ulps += 1;
        corrections = i;
        prev_abs = Some(abs);
        // advance to i + 1
        let a = &jj + BigInt::from(2 * i - 1);
        rising = rising * &a * (a + 1u32);
        factorial *= BigInt::from((2 * i + 1) * (2 * i + 2));
        m_power = m_power * &m_big * &m_big;
    };
    let abs_error_bound = remainder.to_f64().unwrap_or(f64::INFINITY) + ulps as f64 * ULP;
    Ok(ZetaValue {
        j,
        value,
        abs_error_bound,
        cutoff: big_m,
        corrections,
    })
}
