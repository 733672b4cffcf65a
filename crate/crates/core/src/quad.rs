//! Exact arithmetic in the quadratic field generated by `sqrt(85)`, which
//! contains the dominant growth rate of chains.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal::{sqrt_floor, Decimal};

const D: i64 = 85;

/// `a + b sqrt(85)` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
}

fn ri(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl QuadSurd {
    pub fn new(a: BigRational, b: BigRational) -> QuadSurd {
        QuadSurd { a, b }
    }

    pub fn from_rational(a: BigRational) -> QuadSurd {
        QuadSurd { a, b: BigRational::zero() }
    }

    pub fn from_int(a: i64) -> QuadSurd {
        QuadSurd::from_rational(ri(a))
    }

    /// `(11 + sqrt 85) / 2`, the larger root of `x^2 - 11x + 9`.
    pub fn lambda() -> QuadSurd {
        QuadSurd::new(BigRational::new(11.into(), 2.into()), BigRational::new(1.into(), 2.into()))
    }

    /// `(11 - sqrt 85) / 2`.
    pub fn lambda_bar() -> QuadSurd {
        QuadSurd::lambda().conj()
    }

    pub fn conj(&self) -> QuadSurd {
        QuadSurd::new(self.a.clone(), -self.b.clone())
    }

    /// `a^2 - 85 b^2`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - ri(D) * &self.b * &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn recip(&self) -> QuadSurd {
        let n = self.norm();
        assert!(!n.is_zero(), "division by zero in the quadratic field");
        QuadSurd::new(&self.a / &n, -&self.b / &n)
    }

    pub fn pow(&self, mut k: u32) -> QuadSurd {
        let mut base = self.clone();
        let mut acc = QuadSurd::from_int(1);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Exact sign of the real number `a + b sqrt(85)`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with 85 b^2.
        let lhs = &self.a * &self.a;
        let rhs = ri(D) * &self.b * &self.b;
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn cmp_value(&self, other: &QuadSurd) -> Ordering {
        (self - other).signum()
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        (self - &QuadSurd::from_rational(r.clone())).signum()
    }

    /// The value rounded down to `scale` fractional digits.
    pub fn to_decimal(&self, scale: usize) -> Decimal {
        // Enough guard digits that the error of sqrt(85) scaled by |b| stays
        // below one unit in the last place.
        let b_digits = self.b.abs().ceil().to_integer().to_string().len();
        let guard = scale + b_digits + 10;
        let root = sqrt_floor(&ri(D), guard).to_rational();
        let lo = &self.a + &self.b * &root;
        let hi = &self.a + &self.b * (root + BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), guard)));
        let v = if self.b.is_negative() { hi } else { lo };
        Decimal::from_rational_floor(&v, scale)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(85)", self.a, self.b)
    }
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: &QuadSurd) -> QuadSurd {
        QuadSurd::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: &QuadSurd) -> QuadSurd {
        QuadSurd::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: &QuadSurd) -> QuadSurd {
        QuadSurd::new(
            &self.a * &o.a + ri(D) * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}

impl Div for &QuadSurd {
    type Output = QuadSurd;
    fn div(self, o: &QuadSurd) -> QuadSurd {
        self * &o.recip()
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd::new(-self.a.clone(), -self.b.clone())
    }
}

impl Mul<&BigRational> for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, r: &BigRational) -> QuadSurd {
        QuadSurd::new(&self.a * r, &self.b * r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_is_a_root() {
        let l = QuadSurd::lambda();
        let p = &(&(&l * &l) - &(&l * &QuadSurd::from_int(11).a)) + &QuadSurd::from_int(9);
        assert!(p.is_zero());
        let lb = QuadSurd::lambda_bar();
        assert_eq!(&l * &lb, QuadSurd::from_int(9));
        assert_eq!(&l + &lb, QuadSurd::from_int(11));
    }

    #[test]
    fn decimal_value() {
        assert_eq!(QuadSurd::lambda().to_decimal(13).to_string(), "10.1097722286464");
        assert_eq!(QuadSurd::lambda_bar().to_decimal(6).to_string(), "0.890227");
        let neg = &QuadSurd::from_int(0) - &QuadSurd::lambda();
        assert_eq!(neg.to_decimal(3).to_string(), "-10.110");
    }

    #[test]
    fn signs() {
        assert_eq!(QuadSurd::lambda_bar().signum(), Ordering::Greater);
        let x = QuadSurd::new(ri(-10), ri(1));
        assert_eq!(x.signum(), Ordering::Less);
        let y = QuadSurd::new(ri(10), ri(-1));
        assert_eq!(y.signum(), Ordering::Greater);
        assert_eq!(QuadSurd::from_int(0).signum(), Ordering::Equal);
    }
}
