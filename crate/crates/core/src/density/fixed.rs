//! Fixed-point decimals backed by a big integer.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Fractional decimal digits carried internally.
pub const FRAC_DIGITS: u32 = 80;

/// Digits kept when a value is printed or serialized.
pub const DISPLAY_DIGITS: usize = 32;

/// One unit in the last internal place, as an error-bound contribution.
pub const ULP: f64 = 1e-80;

/// Rounding error introduced by printing at `DISPLAY_DIGITS`.
pub const DISPLAY_ROUNDING: f64 = 0.5e-32;

fn scale() -> BigInt {
    BigInt::from(10u32).pow(FRAC_DIGITS)
}

/// A real number `mantissa · 10^-FRAC_DIGITS`. Every lossy operation
/// rounds toward negative infinity and costs at most one unit in the
/// last place.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fixed {
    mantissa: BigInt,
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed {
            mantissa: BigInt::zero(),
        }
    }

    pub fn one() -> Self {
        Fixed { mantissa: scale() }
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Fixed {
            mantissa: v.into() * scale(),
        }
    }

    /// `floor(num / den)` at the working precision.
    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Fixed {
            mantissa: (num * scale()).div_floor(den),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Fixed::from_ratio(r.numer(), r.denom())
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn mul(&self, rhs: &Fixed) -> Fixed {
        Fixed {
            mantissa: (&self.mantissa * &rhs.mantissa).div_floor(&scale()),
        }
    }

    pub fn recip(&self) -> Fixed {
        assert!(!self.is_zero(), "reciprocal of zero");
        let s = scale();
        Fixed {
            mantissa: (&s * &s).div_floor(&self.mantissa),
        }
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.mantissa.clone(), scale())
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Decimal representation rounded half-up to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.min(FRAC_DIGITS as usize);
        let drop = BigInt::from(10u32).pow(FRAC_DIGITS - digits as u32);
        let neg = self.mantissa.is_negative();
        let abs = self.mantissa.abs();
        let (q, r) = abs.div_rem(&drop);
        let q = if r * 2u32 >= drop { q + 1u32 } else { q };
        let unit = BigInt::from(10u32).pow(digits as u32);
        let (int, frac) = q.div_rem(&unit);
        let sign = if neg && !(int.is_zero() && frac.is_zero()) { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}", frac = frac.to_string())
        }
    }
}

impl std::ops::Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        Fixed {
            mantissa: &self.mantissa + &rhs.mantissa,
        }
    }
}

impl std::ops::Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        Fixed {
            mantissa: &self.mantissa - &rhs.mantissa,
        }
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(f.precision().unwrap_or(DISPLAY_DIGITS)))
    }
}

impl Serialize for Fixed {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.to_decimal(DISPLAY_DIGITS))
    }
}
