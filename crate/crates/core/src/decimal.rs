//! Fixed-point decimals over big integers, used where irrational values need
//! many correct digits.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `mant / 10^scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decimal {
    mant: BigInt,
    scale: usize,
}

fn pow10(k: usize) -> BigInt {
    num_traits::pow(BigInt::from(10), k)
}

impl Decimal {
    pub fn scale(&self) -> usize {
        self.scale
    }

    /// Largest decimal with `scale` digits not above `r`.
    pub fn from_rational_floor(r: &BigRational, scale: usize) -> Decimal {
        let num = r.numer() * pow10(scale);
        Decimal {
            mant: num.div_floor(r.denom()),
            scale,
        }
    }

    /// Smallest decimal with `scale` digits not below `r`.
    pub fn from_rational_ceil(r: &BigRational, scale: usize) -> Decimal {
        let num = r.numer() * pow10(scale);
        Decimal {
            mant: num.div_ceil(r.denom()),
            scale,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), pow10(self.scale))
    }

    /// Floor of the `k`-th root of a non-negative decimal, at the same scale.
    pub fn nth_root(&self, k: u32) -> Decimal {
        assert!(!self.mant.is_negative(), "root of a negative decimal");
        let widened = &self.mant * pow10(self.scale * (k as usize - 1));
        Decimal {
            mant: widened.nth_root(k),
            scale: self.scale,
        }
    }

    /// Keeps `scale` fractional digits, truncating toward negative infinity.
    pub fn rescale(&self, scale: usize) -> Decimal {
        let mant = match scale.cmp(&self.scale) {
            Ordering::Less => self.mant.div_floor(&pow10(self.scale - scale)),
            Ordering::Equal => self.mant.clone(),
            Ordering::Greater => &self.mant * pow10(scale - self.scale),
        };
        Decimal { mant, scale }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = self.mant.abs().to_string();
        let digits = format!("{digits:0>width$}", width = self.scale + 1);
        let (int, frac) = digits.split_at(digits.len() - self.scale);
        if self.mant.sign() == Sign::Minus {
            f.write_str("-")?;
        }
        if frac.is_empty() {
            write!(f, "{int}")
        } else {
            write!(f, "{int}.{frac}")
        }
    }
}

/// Floor of `sqrt(r)` at the given scale.
pub fn sqrt_floor(r: &BigRational, scale: usize) -> Decimal {
    let d = Decimal::from_rational_floor(r, 2 * scale);
    Decimal {
        mant: if d.mant.is_zero() { d.mant } else { d.mant.sqrt() },
        scale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn rounding_directions() {
        assert_eq!(Decimal::from_rational_floor(&rat(1, 3), 4).to_string(), "0.3333");
        assert_eq!(Decimal::from_rational_ceil(&rat(1, 3), 4).to_string(), "0.3334");
        assert_eq!(Decimal::from_rational_floor(&rat(-1, 3), 2).to_string(), "-0.34");
        assert_eq!(Decimal::from_rational_floor(&rat(5, 1), 0).to_string(), "5");
        assert_eq!(Decimal::from_rational_floor(&rat(1, 200), 3).to_string(), "0.005");
    }

    #[test]
    fn roots() {
        assert_eq!(sqrt_floor(&rat(2, 1), 10).to_string(), "1.4142135623");
        let eight = Decimal::from_rational_floor(&rat(8, 1), 6);
        assert_eq!(eight.nth_root(3).to_string(), "2.000000");
        let two = Decimal::from_rational_floor(&rat(2, 1), 12);
        assert_eq!(two.nth_root(7).to_string(), "1.104089513673");
        assert_eq!(two.rescale(3).to_string(), "2.000");
    }
}
