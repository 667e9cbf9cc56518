//! Exact rationals, Fibonacci numbers (extended to small negative indices)
//! and the oriented distance on the scaled circle.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};

/// Exact fraction, always kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return domain("zero denominator");
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// `num / den` for machine integers; `den` must be non-zero.
    pub fn ratio(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> Rational {
        Rational(self.0.floor())
    }

    /// Fractional part in `[0, 1)`, also for negative values.
    pub fn fract(&self) -> Rational {
        Rational(&self.0 - self.0.floor())
    }

    /// Display-precision approximation; never used for decisions.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The value as `k / den` for the given `den`, if `den` is a multiple of
    /// this fraction's denominator.
    pub fn scaled_to(&self, den: u64) -> Option<BigInt> {
        let (q, r) = BigInt::from(den).div_rem(self.denom());
        r.is_zero().then(|| self.numer() * q)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts `p/q`, integers, and decimal literals (`0.2` parses as `1/5`).
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Number(s.to_string());
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            return Rational::new(p, q).map_err(|_| bad());
        }
        if let Some((int, frac)) = s.split_once('.') {
            let (negative, int) = match int.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, int.strip_prefix('+').unwrap_or(int)),
            };
            let digits_ok = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
            if (int.is_empty() && frac.is_empty()) || !digits_ok(int) || !digits_ok(frac) {
                return Err(bad());
            }
            let mut digits = String::with_capacity(int.len() + frac.len());
            digits.push_str(int);
            digits.push_str(frac);
            let mut num: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().map_err(|_| bad())?
            };
            if negative {
                num = -num;
            }
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Rational::new(num, den);
        }
        let v: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(v))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);
forward_binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Fibonacci number `F_k` for `k >= -2`, with `F_1 = F_2 = 1` and the
/// recursion continued downward (`F_0 = 0`, `F_-1 = 1`, `F_-2 = -1`).
pub fn fib(k: i64) -> Result<BigInt> {
    if k < -2 {
        return domain(format!("fibonacci index {k} < -2"));
    }
    let (mut a, mut b) = (BigInt::from(-1), BigInt::one()); // F_-2, F_-1
    for _ in -2..k {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    Ok(a)
}

/// Fast path of [`fib`]; `None` when `k < -2` or the value overflows `i128`.
pub fn fib_checked(k: i64) -> Option<i128> {
    if k < -2 {
        return None;
    }
    let (mut a, mut b) = (-1i128, 1i128);
    for _ in -2..k {
        let next = a.checked_add(b)?;
        a = std::mem::replace(&mut b, next);
    }
    Some(a)
}

/// `F_k` as `u64` for `0 <= k <= 93`.
pub(crate) fn fib_u64(k: u32) -> u64 {
    fib_checked(k as i64)
        .and_then(|v| u64::try_from(v).ok())
        .expect("fibonacci index out of u64 range")
}

/// The unique `m >= 3` with `F_m <= n < F_{m+1}`.
pub fn fib_index(n: u64) -> Result<u32> {
    if n < 2 {
        return domain(format!("fib_index needs n >= 2, got {n}"));
    }
    let (mut m, mut f, mut next) = (3u32, 2u64, 3u64);
    while next <= n {
        let after = f.checked_add(next);
        m += 1;
        f = next;
        match after {
            Some(v) => next = v,
            None => break,
        }
    }
    Ok(m)
}

/// If `n = F_m` for some `m >= 3`, returns `m`.
pub fn fibonacci_position(n: u64) -> Option<u32> {
    let m = fib_index(n).ok()?;
    (fib_u64(m) == n).then_some(m)
}

/// Oriented distance from `a` to `b` on the circle of circumference `n`;
/// equals `n` when `a == b`.
pub fn torus_distance(a: u64, b: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return domain("torus modulus must be positive");
    }
    if a >= n || b >= n {
        return domain(format!("points {a}, {b} not in [0, {n})"));
    }
    Ok(cyclic_distance(a, b, n))
}

#[inline]
pub(crate) fn cyclic_distance(a: u64, b: u64, n: u64) -> u64 {
    match b.cmp(&a) {
        Ordering::Greater => b - a,
        Ordering::Less => n - a + b,
        Ordering::Equal => n,
    }
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> Result<u64> {
    let g = a.gcd(&b);
    (a / g)
        .checked_mul(b)
        .ok_or_else(|| Error::Domain(format!("common denominator of {a} and {b} overflows")))
}

pub(crate) fn to_u64(v: &BigInt, what: &str) -> Result<u64> {
    v.to_u64()
        .ok_or_else(|| Error::Domain(format!("{what} {v} does not fit in 64 bits")))
}
