//! Natural densities of unimodular integer matrices.
//!
//! The density of `k × n` unimodular matrices is `∏_{j=n-k+1}^{n} 1/ζ(j)`
//! for `k < n` and zero for square matrices. Restricting attention to a
//! finite set of primes gives exact rational local densities, computed
//! here from full-rank counts over prime fields.

mod fixed;
mod zeta;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub use fixed::{Fixed, DISPLAY_DIGITS, FRAC_DIGITS};
pub use zeta::{zeta, ZetaValue};

use crate::error::{Error, Result};
use fixed::{DISPLAY_ROUNDING, ULP};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Smallest tolerance accepted by the public evaluation routines.
pub const MIN_TOL: f64 = 1e-25;

/// Truncation parameters of one zeta evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaTerms {
    pub j: u32,
    pub cutoff: u64,
    pub corrections: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncationTerms {
    pub zeta: Vec<ZetaTerms>,
    /// Last index `J` kept in an infinite product, when one was truncated.
    pub product_cutoff: Option<u32>,
    /// Bound on the omitted tail of the infinite product.
    pub tail_bound: f64,
}

/// A density value with a rigorous bound on `|value - true density|`.
///
/// `k` and `n` are set for finite shapes; limit densities only carry the
/// codimension `n - k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub k: Option<u32>,
    pub n: Option<u32>,
    pub codimension: u32,
    pub value: Fixed,
    pub abs_error_bound: f64,
    pub terms: TruncationTerms,
}

impl DensityReport {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn check_dims(k: u32, n: u32) -> Result<()> {
    if k == 0 || n == 0 {
        return Err(Error::domain(format!("dimensions must be positive, got k={k}, n={n}")));
    }
    if k > n {
        return Err(Error::domain(format!("k must not exceed n (got k={k}, n={n})")));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if tol < MIN_TOL {
        return Err(Error::domain(format!(
            "tolerance {tol:e} is below the supported minimum {MIN_TOL:e}"
        )));
    }
    Ok(())
}

/// `∏_{j ∈ range} 1/ζ(j)`, each zeta evaluated to `factor_tol`. Returns the
/// product, a bound on its error, and the per-factor truncation terms.
fn inverse_zeta_product(
    range: std::ops::RangeInclusive<u32>,
    factor_tol: f64,
) -> Result<(Fixed, f64, Vec<ZetaTerms>)> {
    let mut product = Fixed::one();
    let mut delta_sum = 0.0;
    let mut ulps = 0u64;
    let mut terms = Vec::new();
    for j in range {
        let z = zeta::zeta_internal(j, factor_tol)?;
        let approx = z.value.to_f64();
        let eps = z.abs_error_bound;
        // |1/ζ - 1/ζ̃| = |ζ̃ - ζ| / (ζ ζ̃) with ζ ≥ ζ̃ - ε
        delta_sum += eps / ((approx - eps) * approx) + ULP;
        product = product.mul(&z.value.recip());
        ulps += 1;
        terms.push(ZetaTerms {
            j,
            cutoff: z.cutoff,
            corrections: z.corrections,
        });
    }
    // factors lie in (0, 1], so |∏ã - ∏a| ≤ ∏(1 + δ) - 1 ≤ exp(Σδ) - 1
    let bound = delta_sum.exp_m1() + ulps as f64 * ULP;
    Ok((product, bound, terms))
}

/// The density `d_{k,n}` of `k × n` unimodular integer matrices.
pub fn density_exact(k: u32, n: u32, tol: f64) -> Result<DensityReport> {
    check_dims(k, n)?;
    check_tol(tol)?;
    let empty = TruncationTerms {
        zeta: Vec::new(),
        product_cutoff: None,
        tail_bound: 0.0,
    };
    if k == n {
        return Ok(DensityReport {
            k: Some(k),
            n: Some(n),
            codimension: 0,
            value: Fixed::zero(),
            abs_error_bound: 0.0,
            terms: empty,
        });
    }
    let factor_tol = (tol / (4.0 * f64::from(k))).max(zeta::MIN_INTERNAL_TOL);
    let (value, bound, zeta_terms) = inverse_zeta_product(n - k + 1..=n, factor_tol)?;
    let abs_error_bound = bound + DISPLAY_ROUNDING;
    debug_assert!(abs_error_bound <= tol);
    Ok(DensityReport {
        k: Some(k),
        n: Some(n),
        codimension: n - k,
        value,
        abs_error_bound,
        terms: TruncationTerms {
            zeta: zeta_terms,
            ..empty
        },
    })
}

/// Cutoff `J` for the infinite product defining the limit density of
/// codimension `d`.
pub fn limit_cutoff(d: u32, tol: f64) -> u32 {
    let bits = (1.0 / tol).log2().ceil().max(0.0) as u32;
    40.max(bits + 2).max(d)
}

/// The limit `d_d = ∏_{j>d} 1/ζ(j)` of `d_{n-d,n}` as `n → ∞`.
///
/// The product is truncated at `J`; since `ζ(j) - 1 < 2^(1-j)` for
/// `j ≥ 3`, the omitted factors change the value by at most `2^(1-J)`.
pub fn density_limit(d: u32, tol: f64) -> Result<DensityReport> {
    if d == 0 {
        return Err(Error::domain("codimension d must be at least 1"));
    }
    check_tol(tol)?;
    let cutoff = limit_cutoff(d, tol);
    let tail_bound = 2f64.powi(1 - cutoff as i32);
    let count = cutoff - d;
    let (value, bound, zeta_terms) = if count == 0 {
        (Fixed::one(), 0.0, Vec::new())
    } else {
        let factor_tol = (tol / (4.0 * f64::from(count))).max(zeta::MIN_INTERNAL_TOL);
        inverse_zeta_product(d + 1..=cutoff, factor_tol)?
    };
    let abs_error_bound = bound + tail_bound + DISPLAY_ROUNDING;
    debug_assert!(abs_error_bound <= tol);
    Ok(DensityReport {
        k: None,
        n: None,
        codimension: d,
        value,
        abs_error_bound,
        terms: TruncationTerms {
            zeta: zeta_terms,
            product_cutoff: Some(cutoff),
            tail_bound,
        },
    })
}

/// Deterministic trial division.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d <= p / d {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&p| is_prime(p)).take(count).collect()
}

/// A nonempty, strictly increasing list of primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new(primes: Vec<u64>) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::domain("prime set must be nonempty"));
        }
        if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        if primes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::domain("primes must be listed in strictly increasing order"));
        }
        Ok(PrimeSet(primes))
    }

    pub fn single(p: u64) -> Result<Self> {
        PrimeSet::new(vec![p])
    }

    pub fn primes(&self) -> &[u64] {
        &self.0
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::domain(format!("{p} is not prime")))
    }
}

/// Number of full-rank `k × n` matrices over `Z/pZ`: `∏_{j<k} (p^n - p^j)`.
pub fn count_full_rank_mod_p(p: u64, k: u32, n: u32) -> Result<BigInt> {
    check_prime(p)?;
    check_dims(k, n)?;
    let p = BigInt::from(p);
    let pn = p.pow(n);
    Ok((0..k).map(|j| &pn - p.pow(j)).product())
}

/// Density of matrices whose full-rank-minor gcd is coprime to every prime
/// in `primes`: `∏_{p} |F_p| / p^{kn}`.
pub fn local_density(primes: &PrimeSet, k: u32, n: u32) -> Result<Rational> {
    check_dims(k, n)?;
    let mut out = Rational::one();
    for &p in primes.primes() {
        let count = count_full_rank_mod_p(p, k, n)?;
        out *= Rational::new(count, BigInt::from(p).pow(k * n));
    }
    Ok(out)
}

/// Density of matrices whose full-rank-minor gcd is divisible by `p`.
pub fn divisibility_defect(p: u64, k: u32, n: u32) -> Result<Rational> {
    let local = local_density(&PrimeSet::single(p)?, k, n)?;
    Ok(Rational::one() - local)
}

/// `Σ_{j=n-k+1}^{n} p^-j`, the first upper bound on the divisibility defect.
pub fn defect_series_bound(p: u64, k: u32, n: u32) -> Rational {
    let p = BigInt::from(p);
    (n - k + 1..=n)
        .map(|j| Rational::new(BigInt::one(), p.pow(j)))
        .fold(Rational::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn prime_set_validation() {
        assert!(PrimeSet::new(vec![]).is_err());
        assert!(PrimeSet::new(vec![2, 4]).is_err());
        assert!(PrimeSet::new(vec![3, 2]).is_err());
        assert!(PrimeSet::new(vec![2, 2]).is_err());
        assert!(PrimeSet::new(vec![2, 3, 5]).is_ok());
    }

    #[test]
    fn full_rank_counts() {
        assert_eq!(count_full_rank_mod_p(2, 1, 2).unwrap(), BigInt::from(3));
        assert_eq!(count_full_rank_mod_p(2, 2, 2).unwrap(), BigInt::from(6));
        assert_eq!(count_full_rank_mod_p(3, 1, 1).unwrap(), BigInt::from(2));
        assert!(count_full_rank_mod_p(4, 1, 2).is_err());
        assert!(count_full_rank_mod_p(2, 3, 2).is_err());
    }

    #[test]
    fn local_density_examples() {
        let two = PrimeSet::single(2).unwrap();
        let two_three = PrimeSet::new(vec![2, 3]).unwrap();
        assert_eq!(local_density(&two, 1, 2).unwrap(), r(3, 4));
        assert_eq!(local_density(&two_three, 1, 2).unwrap(), r(2, 3));
        assert_eq!(local_density(&two, 2, 3).unwrap(), r(21, 32));
        assert_eq!(
            local_density(&two, 2, 3).unwrap(),
            Rational::new(count_full_rank_mod_p(2, 2, 3).unwrap(), BigInt::from(64))
        );
    }

    #[test]
    fn defect_examples() {
        assert_eq!(divisibility_defect(2, 1, 2).unwrap(), r(1, 4));
        assert_eq!(divisibility_defect(3, 1, 2).unwrap(), r(1, 9));
        assert_eq!(divisibility_defect(2, 2, 3).unwrap(), r(11, 32));
        assert!(divisibility_defect(9, 1, 2).is_err());
    }

    #[test]
    fn square_density_is_zero() {
        for n in 1..6 {
            let rep = density_exact(n, n, 1e-12).unwrap();
            assert!(rep.value.is_zero());
            assert_eq!(rep.abs_error_bound, 0.0);
        }
    }

    #[test]
    fn argument_errors() {
        assert!(density_exact(3, 2, 1e-12).is_err());
        assert!(density_exact(0, 2, 1e-12).is_err());
        assert!(density_exact(1, 2, 0.0).is_err());
        assert!(density_limit(0, 1e-10).is_err());
    }

    #[test]
    fn limit_cutoff_rule() {
        assert_eq!(limit_cutoff(1, 1e-10), 40);
        assert_eq!(limit_cutoff(1, 1e-15), 52);
        assert_eq!(limit_cutoff(100, 1e-10), 100);
        let rep = density_limit(100, 1e-10).unwrap();
        assert_eq!(rep.value, Fixed::one());
        assert!(rep.abs_error_bound <= 1e-10);
    }
}
