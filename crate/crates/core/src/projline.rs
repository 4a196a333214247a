//! Exact arithmetic on the projective line over ℚ and over prime fields F_q.
//!
//! Every value carries its field. Arithmetic between values of different
//! fields is rejected with [`Error::FieldMismatch`].

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest admissible prime modulus.
pub const MAX_MODULUS: u32 = 1 << 16;

/// The field a [`Scalar`] lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(q) => write!(f, "F_{q}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_modulus(q: u64) -> Result<u32> {
    if q <= MAX_MODULUS as u64 && is_prime(q) {
        Ok(q as u32)
    } else {
        Err(Error::BadModulus(q))
    }
}

/// An exact field element: a reduced rational, or a residue modulo a prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u32, modulus: u32 },
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn modular(value: i64, modulus: u64) -> Result<Self> {
        let q = check_modulus(modulus)?;
        Ok(Scalar::Modular {
            value: value.rem_euclid(q as i64) as u32,
            modulus: q,
        })
    }

    pub fn zero(field: Field) -> Self {
        match field {
            Field::Rationals => Scalar::Rational(BigRational::zero()),
            Field::Prime(q) => Scalar::Modular { value: 0, modulus: q },
        }
    }

    pub fn one(field: Field) -> Self {
        match field {
            Field::Rationals => Scalar::Rational(BigRational::one()),
            Field::Prime(q) => Scalar::Modular { value: 1 % q, modulus: q },
        }
    }

    /// Embeds an integer into `field`.
    pub fn from_i64_in(n: i64, field: Field) -> Self {
        match field {
            Field::Rationals => Scalar::int(n),
            Field::Prime(q) => Scalar::Modular {
                value: n.rem_euclid(q as i64) as u32,
                modulus: q,
            },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Modular { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch(self.field().to_string(), other.field().to_string())
    }

    fn zip<R, M>(&self, other: &Scalar, rat: R, modular: M) -> Result<Scalar>
    where
        R: FnOnce(&BigRational, &BigRational) -> Result<BigRational>,
        M: FnOnce(u64, u64, u64) -> Result<u64>,
    {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(rat(a, b)?)),
            (
                Scalar::Modular { value: a, modulus: p },
                Scalar::Modular { value: b, modulus: q },
            ) if p == q => Ok(Scalar::Modular {
                value: modular(*a as u64, *b as u64, *p as u64)? as u32,
                modulus: *p,
            }),
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a + b), |a, b, q| Ok((a + b) % q))
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a - b), |a, b, q| Ok((a + q - b) % q))
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        self.zip(other, |a, b| Ok(a * b), |a, b, q| Ok(a * b % q))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_zero() && self.field() == other.field() {
            return Err(Error::DivisionByZero);
        }
        self.zip(
            other,
            |a, b| Ok(a / b),
            |a, b, q| Ok(a * pow_mod(b, q - 2, q) % q),
        )
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one(self.field()).div(self)
    }

    /// Reduces a rational modulo the prime `q`.
    pub fn reduce(&self, q: u32) -> Result<Scalar> {
        let q = check_modulus(q as u64)?;
        match self {
            Scalar::Rational(r) => {
                let m = BigInt::from(q);
                let num = r.numer().mod_floor(&m).to_u64().unwrap_or(0);
                let den = r.denom().mod_floor(&m).to_u64().unwrap_or(0);
                if den == 0 {
                    return Err(Error::BadReduction {
                        modulus: q,
                        reason: format!("denominator of {r} vanishes"),
                    });
                }
                let value = num * pow_mod(den, q as u64 - 2, q as u64) % q as u64;
                Ok(Scalar::Modular {
                    value: value as u32,
                    modulus: q,
                })
            }
            Scalar::Modular { modulus, .. } if *modulus == q => Ok(self.clone()),
            Scalar::Modular { .. } => Err(Error::FieldMismatch(
                self.field().to_string(),
                Field::Prime(q).to_string(),
            )),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Parses `"n"` or `"n/d"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Formats a rational as `"n"` or `"n/d"`.
pub fn format_rational(r: &BigRational) -> String {
    r.to_string()
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(Scalar::Rational)
    }
}

/// A point `[a : b]` of the projective line, kept in canonical form:
/// `b = 1` for finite points and `(1, 0)` for ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct P1Point {
    x: Scalar,
    y: Scalar,
}

impl P1Point {
    pub fn new(x: Scalar, y: Scalar) -> Result<Self> {
        if x.field() != y.field() {
            return Err(x.mismatch(&y));
        }
        if y.is_zero() {
            if x.is_zero() {
                return Err(Error::ZeroPoint);
            }
            return Ok(P1Point::infinity(x.field()));
        }
        let x = x.div(&y)?;
        let y = Scalar::one(x.field());
        Ok(P1Point { x, y })
    }

    pub fn finite(value: Scalar) -> Self {
        let y = Scalar::one(value.field());
        P1Point { x: value, y }
    }

    pub fn int(n: i64) -> Self {
        P1Point::finite(Scalar::int(n))
    }

    pub fn infinity(field: Field) -> Self {
        P1Point {
            x: Scalar::one(field),
            y: Scalar::zero(field),
        }
    }

    pub fn zero(field: Field) -> Self {
        P1Point::finite(Scalar::zero(field))
    }

    pub fn field(&self) -> Field {
        self.x.field()
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        !self.is_infinity() && self.x.is_zero()
    }

    /// The affine coordinate, `None` at ∞.
    pub fn value(&self) -> Option<&Scalar> {
        (!self.is_infinity()).then_some(&self.x)
    }

    pub fn coords(&self) -> (&Scalar, &Scalar) {
        (&self.x, &self.y)
    }

    /// The 2×2 determinant `a₁b₂ − a₂b₁` of homogeneous coordinates.
    pub fn det(&self, other: &P1Point) -> Result<Scalar> {
        self.x.mul(&other.y)?.sub(&self.y.mul(&other.x)?)
    }

    pub fn reduce(&self, q: u32) -> Result<P1Point> {
        if self.is_infinity() {
            return Ok(P1Point::infinity(Field::Prime(check_modulus(q as u64)?)));
        }
        Ok(P1Point::finite(self.x.reduce(q)?))
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.x)
        }
    }
}

impl FromStr for P1Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            Ok(P1Point::infinity(Field::Rationals))
        } else {
            Ok(P1Point::finite(t.parse()?))
        }
    }
}

impl Serialize for P1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for P1Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a comma-separated list of points, e.g. `"inf,0,1,1/2"`.
pub fn parse_points(s: &str) -> Result<Vec<P1Point>> {
    s.split(',').map(P1Point::parse).collect()
}

pub fn format_points(points: &[P1Point]) -> String {
    points
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// A Möbius transformation: an invertible 2×2 matrix up to scalars.
///
/// Stored scaled so the first nonzero entry in row-major order is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Moebius {
    m: [Scalar; 4],
}

impl Moebius {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let field = a.field();
        for e in [&b, &c, &d] {
            if e.field() != field {
                return Err(a.mismatch(e));
            }
        }
        let det = a.mul(&d)?.sub(&b.mul(&c)?)?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let lead = [&a, &b, &c, &d]
            .into_iter()
            .find(|e| !e.is_zero())
            .cloned()
            .ok_or(Error::SingularMatrix)?;
        let m = [a.div(&lead)?, b.div(&lead)?, c.div(&lead)?, d.div(&lead)?];
        Ok(Moebius { m })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Moebius::new(Scalar::int(a), Scalar::int(b), Scalar::int(c), Scalar::int(d))
    }

    pub fn identity(field: Field) -> Self {
        let (o, z) = (Scalar::one(field), Scalar::zero(field));
        Moebius {
            m: [o.clone(), z.clone(), z, o],
        }
    }

    pub fn field(&self) -> Field {
        self.m[0].field()
    }

    /// Entries `(m11, m12, m21, m22)` in canonical scaling.
    pub fn entries(&self) -> &[Scalar; 4] {
        &self.m
    }

    pub fn is_identity(&self) -> bool {
        *self == Moebius::identity(self.field())
    }

    pub fn apply(&self, p: &P1Point) -> Result<P1Point> {
        let [a, b, c, d] = &self.m;
        let (x, y) = p.coords();
        P1Point::new(a.mul(x)?.add(&b.mul(y)?)?, c.mul(x)?.add(&d.mul(y)?)?)
    }

    /// The composite `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Result<Moebius> {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        Moebius::new(
            a.mul(e)?.add(&b.mul(g)?)?,
            a.mul(f)?.add(&b.mul(h)?)?,
            c.mul(e)?.add(&d.mul(g)?)?,
            c.mul(f)?.add(&d.mul(h)?)?,
        )
    }

    pub fn inverse(&self) -> Moebius {
        let [a, b, c, d] = &self.m;
        Moebius::new(d.clone(), b.neg(), c.neg(), a.clone())
            .expect("adjugate of an invertible matrix is invertible")
    }

    pub fn reduce(&self, q: u32) -> Result<Moebius> {
        let [a, b, c, d] = &self.m;
        Moebius::new(a.reduce(q)?, b.reduce(q)?, c.reduce(q)?, d.reduce(q)?)
    }

    /// The matrix sending ∞, 0, 1 to `p1`, `p2`, `p3`.
    fn from_standard_frame(p1: &P1Point, p2: &P1Point, p3: &P1Point) -> Result<Moebius> {
        let d12 = p1.det(p2)?;
        if d12.is_zero() {
            return Err(Error::RepeatedPoint("frame"));
        }
        // p3 = l1·p1 + l2·p2 in homogeneous coordinates
        let l1 = p3.det(p2)?.div(&d12)?;
        let l2 = p1.det(p3)?.div(&d12)?;
        if l1.is_zero() || l2.is_zero() {
            return Err(Error::RepeatedPoint("frame"));
        }
        let (x1, y1) = p1.coords();
        let (x2, y2) = p2.coords();
        Moebius::new(l1.mul(x1)?, l2.mul(x2)?, l1.mul(y1)?, l2.mul(y2)?)
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// Value of a cross-ratio: a field element or ∞.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CrossRatio {
    Finite(Scalar),
    Infinity,
}

impl fmt::Display for CrossRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossRatio::Finite(s) => write!(f, "{s}"),
            CrossRatio::Infinity => write!(f, "inf"),
        }
    }
}

/// `((a−c)(b−d)) / ((a−d)(b−c))`, evaluated with homogeneous determinants.
pub fn cross_ratio(a: &P1Point, b: &P1Point, c: &P1Point, d: &P1Point) -> Result<CrossRatio> {
    let num = a.det(c)?.mul(&b.det(d)?)?;
    let den = a.det(d)?.mul(&b.det(c)?)?;
    match (num.is_zero(), den.is_zero()) {
        (true, true) => Err(Error::DegenerateCrossRatio),
        (_, true) => Ok(CrossRatio::Infinity),
        _ => Ok(CrossRatio::Finite(num.div(&den)?)),
    }
}

/// The unique Möbius class with `g(src[i]) = dst[i]` for `i = 0, 1, 2`.
pub fn find_moebius(src: [&P1Point; 3], dst: [&P1Point; 3]) -> Result<Moebius> {
    let s = Moebius::from_standard_frame(src[0], src[1], src[2])
        .map_err(|_| Error::RepeatedPoint("source triple"))?;
    let d = Moebius::from_standard_frame(dst[0], dst[1], dst[2])
        .map_err(|_| Error::RepeatedPoint("target triple"))?;
    d.compose(&s.inverse())
}
