//! Exact rationals with an inline fast path for word-sized values.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::AlgebraError;

/// An exact rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are kept inline;
/// everything else falls back to a `BigRational`. The representation is
/// canonical, so structural equality is numeric equality.
#[derive(Clone)]
pub enum Scalar {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Small(0, 1)
    }

    pub fn one() -> Self {
        Scalar::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Small(n, 1)
    }

    /// Builds `num/den`, normalizing sign and common factors.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        if n == 0 {
            return Scalar::zero();
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    /// Canonicalizes a big rational, demoting to the inline form when possible.
    pub fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(r),
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Scalar::Small(n, _) => BigInt::from(*n),
            Scalar::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Scalar::Small(_, d) => BigInt::from(*d),
            Scalar::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Small(_, d) => *d == 1,
            Scalar::Big(r) => r.is_integer(),
        }
    }

    pub fn signum(&self) -> i32 {
        match self {
            Scalar::Small(n, _) => n.signum() as i32,
            Scalar::Big(r) => match r.numer().sign() {
                Sign::Minus => -1,
                Sign::NoSign => 0,
                Sign::Plus => 1,
            },
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        match self {
            Scalar::Small(0, _) => panic!("inverse of zero"),
            Scalar::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Scalar::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            None
        } else {
            Some(self * &other.recip())
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return match a.checked_add(*c) {
                        Some(s) => Scalar::Small(s, 1),
                        None => Self::from_i128(*a as i128 + *c as i128, 1),
                    };
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * d + c * b, b * d)
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return match a.checked_mul(*c) {
                        Some(p) => Scalar::Small(p, 1),
                        None => Self::from_i128(*a as i128 * *c as i128, 1),
                    };
                }
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar::Small(m, *d),
                None => Self::from_big(-self.to_big()),
            },
            Scalar::Big(r) => Self::from_big(-r.clone()),
        }
    }

    /// Least common multiple of denominators and gcd of numerators over a list.
    pub fn integer_content(values: &[Scalar]) -> (BigInt, BigInt) {
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for v in values {
            if v.is_zero() {
                continue;
            }
            den = den.lcm(&v.denom());
            num = num.gcd(&v.numer());
        }
        (num, den)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => a == c && b == d,
            (Scalar::Big(x), Scalar::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Scalar::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_ref(b));
forward_binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
forward_binop!(Mul, mul, |a, b| a.mul_ref(b));
forward_binop!(Div, div, |a, b| a.mul_ref(&b.recip()));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = self.add_ref(&rhs.neg_ref());
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = self.mul_ref(rhs);
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::from_int(n as i64)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::from_bigint(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_big(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = AlgebraError;

    /// Accepts integers and `p/q` fractions, with optional sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || AlgebraError::Parse(format!("not a rational number: {s:?}"));
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = den.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::from_big(BigRational::new(n, d)))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(Scalar::from_int(n)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}
