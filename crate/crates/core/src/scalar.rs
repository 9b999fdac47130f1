//! Exact scalars `a + b·√d` with `a, b ∈ ℚ` and a square-free radicand `d`.
//!
//! A value carries at most one radical. Binary operations between values with
//! two different nonzero radicals are rejected; the `checked_*` methods report
//! that as [`Error::RadicalMismatch`] while the operator impls panic.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    rad: BigRational,
    // 0 iff `rad == 0`; otherwise square-free and >= 2
    radicand: u64,
}

/// Splits `n = s² · d` with `d` square-free.
fn square_free_split(mut n: u64) -> (u64, u64) {
    let (mut square, mut free) = (1u64, 1u64);
    let mut p = 2u64;
    while (p as u128) * (p as u128) * (p as u128) <= n as u128 {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    // every prime factor left exceeds the cube root, so at most two remain
    if n > 1 {
        let r = n.isqrt();
        if r * r == n {
            square *= r;
        } else {
            free *= n;
        }
    }
    (square, free)
}

fn merge_radicands(x: u64, y: u64) -> Result<u64> {
    match (x, y) {
        (0, d) | (d, 0) => Ok(d),
        (a, b) if a == b => Ok(a),
        (a, b) => Err(Error::RadicalMismatch(a, b)),
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar { rat: q, rad: BigRational::zero(), radicand: 0 }
    }

    /// Builds `a + b·√d`, pulling square factors out of `d`.
    pub fn with_radical(a: BigRational, b: BigRational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Scalar::from_rational(a);
        }
        let (s, free) = square_free_split(d);
        let b = b * BigRational::from_integer(BigInt::from(s));
        if free == 1 {
            Scalar::from_rational(a + b)
        } else {
            Scalar { rat: a, rad: b, radicand: free }
        }
    }

    /// Exact square root of a non-negative rational.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::NegativeRadicand);
        }
        if q.is_zero() {
            return Ok(Scalar::zero());
        }
        // √(p/r) = √(p·r) / r
        let prod = q.numer() * q.denom();
        let prod = prod
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter(format!("radicand {prod} too large")))?;
        let coef = BigRational::new(BigInt::one(), q.denom().clone());
        Ok(Scalar::with_radical(BigRational::zero(), coef, prod))
    }

    /// Exact square root of a rational-valued scalar.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.is_rational() {
            return Err(Error::InvalidParameter("square root of an irrational scalar".into()));
        }
        Scalar::sqrt_rational(&self.rat)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn radical_part(&self) -> &BigRational {
        &self.rad
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.radicand == 0
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.rat)
    }

    /// Exact sign of `a + b√d` as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.rad);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let a2 = &self.rat * &self.rat;
        let b2d = &self.rad * &self.rad * BigRational::from_integer(BigInt::from(self.radicand));
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        let d = merge_radicands(self.radicand, other.radicand)?;
        Ok(Scalar::normalized(&self.rat + &other.rat, &self.rad + &other.rad, d))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        let d = merge_radicands(self.radicand, other.radicand)?;
        Ok(Scalar::normalized(&self.rat - &other.rat, &self.rad - &other.rad, d))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        let d = merge_radicands(self.radicand, other.radicand)?;
        let dq = BigRational::from_integer(BigInt::from(d));
        let rat = &self.rat * &other.rat + &self.rad * &other.rad * dq;
        let rad = &self.rat * &other.rad + &self.rad * &other.rat;
        Ok(Scalar::normalized(rat, rad, d))
    }

    pub fn checked_inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = BigRational::from_integer(BigInt::from(self.radicand));
        let norm = &self.rat * &self.rat - &self.rad * &self.rad * d;
        Ok(Scalar::normalized(&self.rat / &norm, -(&self.rad / &norm), self.radicand))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.checked_inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        (0..e).fold(Scalar::one(), |acc, _| &acc * self)
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.radicand == 0 {
            return a;
        }
        a + self.rad.to_f64().unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
    }

    fn normalized(rat: BigRational, rad: BigRational, d: u64) -> Scalar {
        if rad.is_zero() {
            Scalar::from_rational(rat)
        } else {
            Scalar { rat, rad, radicand: d }
        }
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
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

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_integer(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.checked_sub(other).ok()?;
        Some(diff.signum().cmp(&0))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
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

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { rat: -self.rat, rad: -self.rad, radicand: self.radicand }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text form: `p/q` (or `p` for integers), and `p/q+r/s*sqrt(d)` when a radical is present.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radicand == 0 {
            return f.write_str(&fmt_rational(&self.rat));
        }
        let sep = if self.rad.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{}{}{}*sqrt({})",
            fmt_rational(&self.rat),
            sep,
            fmt_rational(&self.rad.abs()),
            self.radicand
        )
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        let Some(pos) = s.find("*sqrt(") else {
            return Ok(Scalar::from_rational(parse_rational(s)?));
        };
        let tail = &s[pos + "*sqrt(".len()..];
        let d_str = tail
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unterminated sqrt in {s:?}")))?;
        let d: u64 = d_str.trim().parse().map_err(|_| Error::Parse(format!("invalid radicand in {s:?}")))?;
        let head = &s[..pos];
        // split "a+b" / "a-b" / "a+-b" at the last sign that follows a digit
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1].is_ascii_digit());
        let (a, b) = match split {
            Some(i) => {
                let b_str = if bytes[i] == b'+' { &head[i + 1..] } else { &head[i..] };
                (parse_rational(&head[..i])?, parse_rational(b_str)?)
            }
            None => (BigRational::zero(), parse_rational(head)?),
        };
        Ok(Scalar::with_radical(a, b, d))
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn square_free_split_examples() {
        assert_eq!(square_free_split(1), (1, 1));
        assert_eq!(square_free_split(12), (2, 3));
        assert_eq!(square_free_split(4096), (64, 1));
        assert_eq!(square_free_split(2 * 1_000_003 * 1_000_003), (1_000_003, 2));
        assert_eq!(square_free_split(999_983 * 1_000_003), (1, 999_983 * 1_000_003));
    }

    #[test]
    fn sqrt_of_perfect_square_is_rational() {
        let r = Scalar::sqrt_rational(&q(4096, 1)).unwrap();
        assert_eq!(r, Scalar::from_integer(64));
        let r = Scalar::sqrt_rational(&q(9, 4)).unwrap();
        assert_eq!(r, Scalar::from_ratio(3, 2));
    }

    #[test]
    fn sqrt_two_squared() {
        let s = Scalar::sqrt_rational(&q(2, 1)).unwrap();
        assert_eq!(s.radicand(), 2);
        assert_eq!(&s * &s, Scalar::from_integer(2));
        let h = Scalar::sqrt_rational(&q(1, 2)).unwrap();
        assert_eq!(h.to_string(), "0+1/2*sqrt(2)");
        assert_eq!(&h * &h, Scalar::from_ratio(1, 2));
    }

    #[test]
    fn inverse_and_sign() {
        let x = Scalar::with_radical(q(1, 1), q(-1, 1), 2); // 1 - √2 < 0
        assert_eq!(x.signum(), -1);
        let inv = x.checked_inv().unwrap();
        assert_eq!(&x * &inv, Scalar::one());
        let y = Scalar::with_radical(q(3, 1), q(-2, 1), 2); // 3 - 2√2 > 0
        assert_eq!(y.signum(), 1);
        assert!(Scalar::zero().checked_inv().is_err());
    }

    #[test]
    fn mixing_radicals_is_rejected() {
        let a = Scalar::sqrt_rational(&q(2, 1)).unwrap();
        let b = Scalar::sqrt_rational(&q(3, 1)).unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::RadicalMismatch(2, 3)));
        assert!(a.checked_add(&Scalar::one()).is_ok());
    }

    #[test]
    fn text_round_trip() {
        for s in ["0", "-3", "5/7", "-1/2-3/4*sqrt(5)", "1/2+3/4*sqrt(5)", "0+1*sqrt(2)"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: Scalar = "1/2+-3/4*sqrt(5)".parse().unwrap();
        assert_eq!(v.to_string(), "1/2-3/4*sqrt(5)");
        let v: Scalar = "2*sqrt(8)".parse().unwrap();
        assert_eq!(v.to_string(), "0+4*sqrt(2)");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }
}
