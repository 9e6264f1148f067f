//! Exact field elements over the rationals and prime fields.
//!
//! A [`Scalar`] always carries its field, so that mixing elements of
//! different fields is detected. The `checked_*` methods report such
//! mismatches as errors; the arithmetic operators panic on them and are
//! meant for code whose inputs already share one [`FieldSpec`] (every
//! [`Matrix`](crate::linalg::Matrix) and Lie algebra guarantees this).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residues are multiplied in `u64`, so the modulus must stay below `2^32`.
pub const MAX_MODULUS: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// The field of coefficients: `Q` or `GF(p)` for a prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    modulus: Option<u64>,
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { modulus: None };

    /// `GF(p)`; `p` is checked for primality by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::InvalidPrime(p, "modulus must be below 2^32"));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec { modulus: Some(p) })
    }

    pub fn kind(&self) -> FieldKind {
        match self.modulus {
            None => FieldKind::Rationals,
            Some(_) => FieldKind::PrimeField,
        }
    }

    /// `p` for `GF(p)`, `None` for `Q`.
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// 0 for `Q`.
    pub fn characteristic(&self) -> u64 {
        self.modulus.unwrap_or(0)
    }

    pub fn is_rationals(&self) -> bool {
        self.modulus.is_none()
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(*self)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(*self)
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        Scalar::from_integer(n, *self)
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        Scalar::from_bigint(n, *self)
    }

    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        Scalar::parse(text, *self)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            None => write!(f, "Q"),
            Some(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `Q` or `GF(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::RATIONALS);
        }
        let inner = s
            .strip_prefix("GF(")
            .or_else(|| s.strip_prefix("gf("))
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown field `{s}` (use Q or GF(p))")))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad modulus in `{s}`")))?;
        FieldSpec::prime(p)
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An exact element of `Q` (in lowest terms, positive denominator) or of
/// `GF(p)` (least nonnegative residue).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Self::from_integer(0, field)
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_integer(1, field)
    }

    /// Canonical image of an integer; in `GF(p)` this is `n mod p`.
    pub fn from_integer(n: i64, field: FieldSpec) -> Self {
        match field.modulus {
            None => Scalar(Repr::Rational(BigRational::from_integer(BigInt::from(n)))),
            Some(p) => Scalar(Repr::Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            }),
        }
    }

    pub fn from_bigint(n: &BigInt, field: FieldSpec) -> Self {
        match field.modulus {
            None => Scalar(Repr::Rational(BigRational::from_integer(n.clone()))),
            Some(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar(Repr::Residue {
                    value: r.to_u64().expect("residue fits in u64"),
                    modulus: p,
                })
            }
        }
    }

    /// `num / den`; fails with `DivisionByZero` if `den` vanishes in the field.
    pub fn from_ratio(num: &BigInt, den: &BigInt, field: FieldSpec) -> Result<Self> {
        let n = Self::from_bigint(num, field);
        let d = Self::from_bigint(den, field);
        n.checked_div(&d)
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar(Repr::Rational(q))
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Rational(_) => FieldSpec::RATIONALS,
            Repr::Residue { modulus, .. } => FieldSpec {
                modulus: Some(*modulus),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The rational value, if this is an element of `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Residue { .. } => None,
        }
    }

    /// The least nonnegative residue, if this is an element of `GF(p)`.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Rational(_) => None,
            Repr::Residue { value, .. } => Some(*value),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(Scalar(Repr::Rational(a + b))),
            (Repr::Residue { value: a, modulus: p }, Repr::Residue { value: b, modulus: q }) if p == q => {
                Ok(Scalar(Repr::Residue {
                    value: (a + b) % p,
                    modulus: *p,
                }))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(Scalar(Repr::Rational(a - b))),
            (Repr::Residue { value: a, modulus: p }, Repr::Residue { value: b, modulus: q }) if p == q => {
                Ok(Scalar(Repr::Residue {
                    value: (a + p - b) % p,
                    modulus: *p,
                }))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Ok(Scalar(Repr::Rational(a * b))),
            (Repr::Residue { value: a, modulus: p }, Repr::Residue { value: b, modulus: q }) if p == q => {
                Ok(Scalar(Repr::Residue {
                    value: (a * b) % p,
                    modulus: *p,
                }))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(self.mismatch(other));
        }
        let inv = other.inv()?;
        self.checked_mul(&inv)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.0 {
            Repr::Rational(q) => Ok(Scalar(Repr::Rational(q.recip()))),
            Repr::Residue { value, modulus } => Ok(Scalar(Repr::Residue {
                value: inverse_mod(*value, *modulus),
                modulus: *modulus,
            })),
        }
    }

    /// Parses `-3` or `2/7`. Over `GF(p)` only integers are accepted; they
    /// are reduced mod `p`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::InvalidParameter(format!("malformed scalar `{text}`"));
        match text.split_once('/') {
            None => {
                let n: BigInt = text.parse().map_err(|_| bad())?;
                Ok(Scalar::from_bigint(&n, field))
            }
            Some((num, den)) => {
                if !field.is_rationals() {
                    return Err(Error::InvalidParameter(format!(
                        "fraction `{text}` not allowed over {field}; use integers"
                    )));
                }
                let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(Repr::Rational(BigRational::new(n, d))))
            }
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch {
            left: self.field(),
            right: other.field(),
        }
    }
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i64) as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rational(q) => Scalar(Repr::Rational(-q)),
            Repr::Residue { value, modulus } => Scalar(Repr::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }

        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);
