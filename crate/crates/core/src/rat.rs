use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use malachite_base::num::arithmetic::traits::{Abs, Pow, Reciprocal};
use malachite_base::num::basic::traits::{One, Zero};
use malachite_q::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Always reduced with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Rational);

impl Rat {
    pub const fn zero() -> Self {
        Rat(Rational::ZERO)
    }

    pub const fn one() -> Self {
        Rat(Rational::ONE)
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(Rational::from_signeds(num, den))
    }

    pub fn int(n: i64) -> Self {
        Rat(Rational::from(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == Rational::ZERO
    }

    pub fn is_one(&self) -> bool {
        self.0 == Rational::ONE
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Rational::ZERO
    }

    pub fn is_integer(&self) -> bool {
        self.0.denominator_ref() == &malachite_nz::natural::Natural::ONE
    }

    /// Returns the value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        let n = i64::try_from(self.0.numerator_ref()).ok()?;
        Some(if self.is_negative() { -n } else { n })
    }

    /// Numerator and denominator, when both fit in `i64`.
    pub fn parts(&self) -> Option<(i64, i64)> {
        let n = i64::try_from(self.0.numerator_ref()).ok()?;
        let d = i64::try_from(self.0.denominator_ref()).ok()?;
        Some((if self.is_negative() { -n } else { n }, d))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat((&self.0).reciprocal())
    }

    pub fn abs(&self) -> Self {
        Rat((&self.0).abs())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e >= 0 {
            Rat((&self.0).pow(e as u64))
        } else {
            self.recip().pow(-e)
        }
    }

    pub fn numer_abs_bits(&self) -> u64 {
        self.0.numerator_ref().significant_bits_u64()
    }

    pub fn inner(&self) -> &Rational {
        &self.0
    }
}

trait Bits {
    fn significant_bits_u64(&self) -> u64;
}

impl Bits for malachite_nz::natural::Natural {
    fn significant_bits_u64(&self) -> u64 {
        use malachite_base::num::logic::traits::SignificantBits;
        self.significant_bits()
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::int(n as i64)
    }
}

impl From<usize> for Rat {
    fn from(n: usize) -> Self {
        Rat::int(n as i64)
    }
}

impl From<Rational> for Rat {
    fn from(q: Rational) -> Self {
        Rat(q)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseRatError(s.to_string());
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let parse_int = |x: &str| -> Result<malachite_nz::integer::Integer, ParseRatError> {
            if x.is_empty() || x.starts_with('+') && x.len() == 1 {
                return Err(err());
            }
            malachite_nz::integer::Integer::from_str(x.strip_prefix('+').unwrap_or(x)).map_err(|_| err())
        };
        let n = parse_int(num)?;
        let d = match den {
            Some(d) => parse_int(d)?,
            None => malachite_nz::integer::Integer::ONE,
        };
        if d == malachite_nz::integer::Integer::ZERO {
            return Err(err());
        }
        Ok(Rat(Rational::from_integers(n, d)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(Rat::int)
                .ok_or_else(|| serde::de::Error::custom("rationals must be integers or \"p/q\" strings")),
            _ => Err(serde::de::Error::custom("expected a rational")),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $f(self, o: &Rat) -> Rat {
                Rat((&self.0).$f(&o.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $f(self, o: Rat) -> Rat {
                Rat(self.0.$f(o.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $f(self, o: &Rat) -> Rat {
                Rat(self.0.$f(&o.0))
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $f(self, o: Rat) -> Rat {
                Rat((&self.0).$f(o.0))
            }
        }
        impl $atr<&Rat> for Rat {
            fn $af(&mut self, o: &Rat) {
                self.0.$af(&o.0)
            }
        }
        impl $atr<Rat> for Rat {
            fn $af(&mut self, o: Rat) {
                self.0.$af(o.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div<&Rat> for &Rat {
    type Output = Rat;
    fn div(self, o: &Rat) -> Rat {
        assert!(!o.is_zero(), "division by zero");
        Rat(&self.0 / &o.0)
    }
}

impl Div<Rat> for Rat {
    type Output = Rat;
    fn div(self, o: Rat) -> Rat {
        &self / &o
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(it: I) -> Rat {
        it.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(it: I) -> Rat {
        it.fold(Rat::zero(), |a, b| a + b)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(it: I) -> Rat {
        it.fold(Rat::one(), |a, b| a * b)
    }
}

/// Shorthand for building rationals in tests and tables.
pub fn q(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}
