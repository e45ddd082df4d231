//! Exact arithmetic in the real quadratic fields `Q(beta)` generated by
//! quadratic Pisot units.
//!
//! A field is fixed by a [`FieldSpec`]: the family picks the defining
//! relation (`beta^2 = a*beta + 1` or `beta^2 = a*beta - 1`) and `a` its
//! integer coefficient. Elements are [`QuadRat`] values `p + q*beta` with
//! rational `p`, `q`; this representation is unique, so equality is
//! coefficient equality and no rounding ever enters a comparison. Signs,
//! floors, and orderings are decided by integer case analysis on
//! `(2p + aq) + q*sqrt(disc)`, squaring out the radical.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeStruct, SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two families of quadratic Pisot units.
///
/// `Minus` solves `x^2 = a*x + 1` with `a >= 1`; `Plus` solves
/// `x^2 = a*x - 1` with `a >= 3`. In both cases the larger root `beta`
/// exceeds 1, its Galois conjugate lies strictly inside `(-1, 1)`, and the
/// unit constant term makes `beta` invertible in `Z[beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `beta^2 = a*beta + 1`, e.g. the golden ratio for `a = 1`.
    Minus,
    /// `beta^2 = a*beta - 1`, e.g. the squared golden ratio for `a = 3`.
    Plus,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Minus => write!(f, "minus"),
            Family::Plus => write!(f, "plus"),
        }
    }
}

/// A concrete quadratic field, small enough to copy freely.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    family: Family,
    a: u32,
}

impl FieldSpec {
    /// Builds a field spec, checking the family's parameter range.
    pub fn new(family: Family, a: u32) -> Result<FieldSpec> {
        match family {
            Family::Minus if a >= 1 => Ok(FieldSpec { family, a }),
            Family::Plus if a >= 3 => Ok(FieldSpec { family, a }),
            Family::Minus => Err(Error::ParameterOutOfRange(
                "family minus requires a >= 1".into(),
            )),
            Family::Plus => Err(Error::ParameterOutOfRange(
                "family plus requires a >= 3".into(),
            )),
        }
    }

    /// The golden ratio field: family `Minus` with `a = 1`.
    pub fn golden() -> FieldSpec {
        FieldSpec {
            family: Family::Minus,
            a: 1,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    /// The constant `c` in the defining relation `beta^2 = a*beta + c`.
    pub fn relation_constant(&self) -> i64 {
        match self.family {
            Family::Minus => 1,
            Family::Plus => -1,
        }
    }

    /// Discriminant of the defining polynomial, `a^2 + 4c`. Always positive
    /// and never a perfect square for admissible parameters.
    pub fn discriminant(&self) -> BigInt {
        let a = BigInt::from(self.a);
        &a * &a + BigInt::from(4 * self.relation_constant())
    }

    /// `floor(beta)`: `a` for the minus family, `a - 1` for the plus family.
    pub fn floor_beta(&self) -> u32 {
        match self.family {
            Family::Minus => self.a,
            Family::Plus => self.a - 1,
        }
    }

    /// Display-only numeric value of `beta`.
    pub fn beta_f64(&self) -> f64 {
        let a = f64::from(self.a);
        let d = a * a + 4.0 * self.relation_constant() as f64;
        (a + d.sqrt()) / 2.0
    }

    /// `beta` as a field element.
    pub fn beta(&self) -> QuadRat {
        QuadRat::from_pq_int(*self, 0, 1)
    }

    /// The Galois conjugate `beta' = a - beta`.
    pub fn beta_conjugate(&self) -> QuadRat {
        QuadRat::from_pq_int(*self, i64::from(self.a), -1)
    }

    fn a_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.a))
    }

    fn c_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.relation_constant()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(a={})", self.family, self.a)
    }
}

/// An element `p + q*beta` of `Q(beta)`, with `p` and `q` fully reduced
/// arbitrary precision rationals.
///
/// Since `1, beta` is a basis of `Q(beta)` over `Q`, the representation is
/// unique and equality is componentwise. All predicates are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadRat {
    field: FieldSpec,
    p: BigRational,
    q: BigRational,
}

impl QuadRat {
    pub fn new(field: FieldSpec, p: BigRational, q: BigRational) -> QuadRat {
        QuadRat { field, p, q }
    }

    /// A purely rational element `r + 0*beta`.
    pub fn rational(field: FieldSpec, r: BigRational) -> QuadRat {
        QuadRat {
            field,
            p: r,
            q: BigRational::zero(),
        }
    }

    pub fn from_int(field: FieldSpec, n: i64) -> QuadRat {
        QuadRat::from_pq_int(field, n, 0)
    }

    /// `p + q*beta` from integer coefficients.
    pub fn from_pq_int(field: FieldSpec, p: i64, q: i64) -> QuadRat {
        QuadRat {
            field,
            p: BigRational::from_integer(BigInt::from(p)),
            q: BigRational::from_integer(BigInt::from(q)),
        }
    }

    /// `(pn/pd) + (qn/qd)*beta` from integer numerators and denominators.
    ///
    /// # Panics
    ///
    /// Panics if a denominator is zero.
    pub fn from_ratio(field: FieldSpec, pn: i64, pd: i64, qn: i64, qd: i64) -> QuadRat {
        QuadRat {
            field,
            p: BigRational::new(BigInt::from(pn), BigInt::from(pd)),
            q: BigRational::new(BigInt::from(qn), BigInt::from(qd)),
        }
    }

    pub fn zero(field: FieldSpec) -> QuadRat {
        QuadRat::from_pq_int(field, 0, 0)
    }

    pub fn one(field: FieldSpec) -> QuadRat {
        QuadRat::from_pq_int(field, 1, 0)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Rational part (coefficient of 1).
    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Irrational part (coefficient of `beta`).
    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// True when the element is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.p.is_integer()
    }

    fn check_field(&self, other: &QuadRat) {
        assert_eq!(
            self.field, other.field,
            "operands belong to different quadratic fields; re-embed explicitly"
        );
    }

    /// Image under the Galois automorphism `beta -> a - beta`.
    pub fn conjugate(&self) -> QuadRat {
        QuadRat {
            field: self.field,
            p: &self.p + &self.q * self.field.a_rational(),
            q: -&self.q,
        }
    }

    /// Field norm `x * x'`, always rational.
    pub fn norm(&self) -> BigRational {
        // (p + q b)(p + q b') = p^2 + a p q - c q^2   since b + b' = a, b b' = -c
        &self.p * &self.p + self.field.a_rational() * &self.p * &self.q
            - self.field.c_rational() * &self.q * &self.q
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<QuadRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let conj = self.conjugate();
        Ok(QuadRat {
            field: self.field,
            p: conj.p / &n,
            q: conj.q / n,
        })
    }

    /// Division that reports a zero divisor instead of panicking.
    pub fn checked_div(&self, rhs: &QuadRat) -> Result<QuadRat> {
        self.check_field(rhs);
        Ok(self * &rhs.inv()?)
    }

    /// Exact sign: `-1`, `0`, or `1`.
    ///
    /// Writes the value as `(u + v*sqrt(disc)) / 2` with rational `u`, `v`
    /// and decides by comparing `u^2` against `v^2 * disc` when the two
    /// terms have opposite signs. No floating point is involved.
    pub fn sign(&self) -> i32 {
        let two = BigRational::from_integer(BigInt::from(2));
        let u = &self.p * &two + self.field.a_rational() * &self.q;
        let v = &self.q;
        let su = rational_sign(&u);
        let sv = rational_sign(v);
        if sv == 0 {
            return su;
        }
        if su == 0 {
            return sv;
        }
        if su == sv {
            return su;
        }
        // Opposite signs: |u| vs |v| sqrt(disc), i.e. u^2 vs v^2 * disc.
        let disc = BigRational::from_integer(self.field.discriminant());
        let u2 = &u * &u;
        let v2d = v * v * disc;
        match u2.cmp(&v2d) {
            Ordering::Greater => su,
            Ordering::Less => sv,
            // Equality would force sqrt(disc) rational; the discriminant is
            // never a perfect square for admissible parameters.
            Ordering::Equal => unreachable!("non-square discriminant"),
        }
    }

    /// Total order among elements of the same field.
    ///
    /// # Panics
    ///
    /// Panics if the fields differ.
    pub fn total_cmp(&self, other: &QuadRat) -> Ordering {
        self.check_field(other);
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Exact square root within the field, when one exists.
    ///
    /// Returns the nonnegative root of a nonnegative element whose root
    /// stays in the field, and `None` otherwise (negative input, or a root
    /// that is irrational over the field). Roots of rational values are
    /// either rational or rational multiples of `sqrt(disc) = 2*beta - a`;
    /// for the rest, the norm and trace of the root are pinned down by the
    /// input, leaving finitely many exactly checkable candidates.
    pub fn sqrt(&self) -> Option<QuadRat> {
        if self.sign() < 0 {
            return None;
        }
        if self.is_zero() {
            return Some(QuadRat::zero(self.field));
        }
        if self.is_rational() {
            if let Some(r) = rational_sqrt(&self.p) {
                return Some(QuadRat::rational(self.field, r));
            }
            let disc = BigRational::from_integer(self.field.discriminant());
            if let Some(v) = rational_sqrt(&(&self.p / disc)) {
                let root_disc = QuadRat::from_pq_int(self.field, -(self.field.a() as i64), 2);
                return Some(&QuadRat::rational(self.field, v) * &root_disc);
            }
            return None;
        }
        // A root y of x satisfies N(y)^2 = N(x) and tr(y)^2 = tr(x) + 2 N(y),
        // so both are rational square roots; y = (x + N(y)) / tr(y).
        if self.conjugate().sign() < 0 {
            return None;
        }
        let norm_root = rational_sqrt(&self.norm())?;
        let trace = BigRational::from_integer(BigInt::from(2)) * &self.p
            + self.field.a_rational() * &self.q;
        for n in [norm_root.clone(), -norm_root] {
            let t2 = &trace + BigRational::from_integer(BigInt::from(2)) * &n;
            if rational_sign(&t2) <= 0 {
                continue;
            }
            let Some(t) = rational_sqrt(&t2) else {
                continue;
            };
            let y = QuadRat {
                field: self.field,
                p: (&self.p + &n) / &t,
                q: &self.q / &t,
            };
            if &(&y * &y) == self {
                return Some(if y.sign() >= 0 { y } else { -&y });
            }
        }
        None
    }

    fn cmp_big_int(&self, n: &BigInt) -> i32 {
        let shifted = QuadRat {
            field: self.field,
            p: &self.p - BigRational::from_integer(n.clone()),
            q: self.q.clone(),
        };
        shifted.sign()
    }

    /// Exact floor, via an integer square root bracket on the radical part
    /// followed by at most two exact sign corrections.
    pub fn floor(&self) -> BigInt {
        // x = (u + v sqrt(D)) / 2 with u = 2p + aq, v = q; clear denominators
        // to x = (alpha + gamma sqrt(D)) / m, m > 0.
        let two = BigRational::from_integer(BigInt::from(2));
        let u = &self.p * &two + self.field.a_rational() * &self.q;
        let v = &self.q;
        let m = BigInt::from(2) * u.denom() * v.denom();
        let alpha = u.numer() * v.denom();
        let gamma = v.numer() * u.denom();
        let disc = self.field.discriminant();
        let t = (&gamma * &gamma * disc).sqrt();
        // gamma*sqrt(D) lies in [t, t+1) when gamma >= 0, in (-t-1, -t] otherwise.
        let lower = if gamma.is_negative() {
            &alpha - &t - BigInt::one()
        } else {
            &alpha + &t
        };
        let mut c = lower.div_floor(&m);
        let mut guard = 0;
        while self.cmp_big_int(&(&c + BigInt::one())) >= 0 {
            c += 1;
            guard += 1;
            debug_assert!(guard < 4, "floor correction out of bounds");
        }
        while self.cmp_big_int(&c) < 0 {
            c -= 1;
            guard += 1;
            debug_assert!(guard < 4, "floor correction out of bounds");
        }
        c
    }

    /// Exact ceiling.
    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Floating shadow for display and sampling. Never used in comparisons.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        p + q * self.field.beta_f64()
    }

    /// Correctly rounded decimal string with `digits >= 1` fraction digits
    /// (half away from zero at ties, which can occur only for rationals).
    pub fn to_decimal_string(&self, digits: usize) -> Result<String> {
        if digits == 0 {
            return Err(Error::ParameterOutOfRange(
                "decimal rendering needs at least one digit".into(),
            ));
        }
        let scale = BigInt::from(10).pow(digits as u32);
        let negative = self.sign() < 0;
        let mut scaled = self * &QuadRat::rational(self.field, BigRational::from_integer(scale.clone()));
        if negative {
            scaled = -scaled;
        }
        let half = QuadRat::rational(
            self.field,
            BigRational::new(BigInt::one(), BigInt::from(2)),
        );
        let rounded = (&scaled + &half).floor();
        let (int_part, frac_part) = rounded.div_mod_floor(&scale);
        let frac_str = frac_part.to_string();
        let padded = format!("{}{}", "0".repeat(digits - frac_str.len()), frac_str);
        let sign = if negative && !rounded.is_zero() { "-" } else { "" };
        Ok(format!("{sign}{int_part}.{padded}"))
    }

    /// Canonical exact rendering `p/q + r/s*b` with explicit denominators.
    pub fn canonical_string(&self) -> String {
        format!(
            "{}/{} + {}/{}*b",
            self.p.numer(),
            self.p.denom(),
            self.q.numer(),
            self.q.denom()
        )
    }
}

fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_negative() {
        -1
    } else {
        1
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

impl PartialOrd for QuadRat {
    fn partial_cmp(&self, other: &QuadRat) -> Option<Ordering> {
        if self.field != other.field {
            return None;
        }
        Some(self.total_cmp(other))
    }
}

impl Add for &QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &QuadRat) -> QuadRat {
        self.check_field(rhs);
        QuadRat {
            field: self.field,
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
        }
    }
}

impl Sub for &QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &QuadRat) -> QuadRat {
        self.check_field(rhs);
        QuadRat {
            field: self.field,
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
        }
    }
}

impl Mul for &QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &QuadRat) -> QuadRat {
        self.check_field(rhs);
        // (p1 + q1 b)(p2 + q2 b) with b^2 = a b + c
        let cross = &self.q * &rhs.q;
        QuadRat {
            field: self.field,
            p: &self.p * &rhs.p + self.field.c_rational() * &cross,
            q: &self.p * &rhs.q + &self.q * &rhs.p + self.field.a_rational() * cross,
        }
    }
}

impl Div for &QuadRat {
    type Output = QuadRat;
    /// # Panics
    ///
    /// Panics on a zero divisor; use [`QuadRat::checked_div`] to get an error.
    fn div(self, rhs: &QuadRat) -> QuadRat {
        self.checked_div(rhs).expect("division by zero")
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat {
            field: self.field,
            p: -&self.p,
            q: -&self.q,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadRat> for QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: &QuadRat) -> QuadRat {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadRat> for &QuadRat {
            type Output = QuadRat;
            fn $method(self, rhs: QuadRat) -> QuadRat {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

/// Binary operations selectable by name, for the checked [`arith`] entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked arithmetic between two field elements.
///
/// Unlike the operator impls, this reports field mismatches and zero
/// divisors as errors instead of panicking.
pub fn arith(x: &QuadRat, y: &QuadRat, op: ArithOp) -> Result<QuadRat> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch);
    }
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => x.checked_div(y),
    }
}

/// Explicit re-embedding between the golden fields, which share the ring
/// `Z[tau] = Z[tau^2]`.
///
/// Maps `p + q*tau` to `(p - q) + q*tau^2` and back; any other field pair is
/// rejected. This is the only sanctioned cross-field conversion.
pub fn reembed(x: &QuadRat, target: FieldSpec) -> Result<QuadRat> {
    let golden = FieldSpec::golden();
    let golden_sq = FieldSpec::new(Family::Plus, 3)?;
    if x.field() == target {
        return Ok(x.clone());
    }
    if x.field() == golden && target == golden_sq {
        // tau = tau^2 - 1
        Ok(QuadRat::new(target, &x.p - &x.q, x.q.clone()))
    } else if x.field() == golden_sq && target == golden {
        // tau^2 = 1 + tau
        Ok(QuadRat::new(target, &x.p + &x.q, x.q.clone()))
    } else {
        Err(Error::InvalidArgument(format!(
            "no re-embedding between {} and {}",
            x.field(),
            target
        )))
    }
}

struct BigIntRepr<'a>(&'a BigInt);

impl Serialize for BigIntRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct RatioRepr<'a>(&'a BigRational);

impl Serialize for RatioRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&BigIntRepr(self.0.numer()))?;
        t.serialize_element(&BigIntRepr(self.0.denom()))?;
        t.end()
    }
}

impl Serialize for QuadRat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadRat", 3)?;
        st.serialize_field("p", &RatioRepr(&self.p))?;
        st.serialize_field("q", &RatioRepr(&self.q))?;
        st.serialize_field("field", &self.field)?;
        st.end()
    }
}

struct BigIntDe(BigInt);

impl<'de> Deserialize<'de> for BigIntDe {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigIntDe;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigIntDe, E> {
                Ok(BigIntDe(BigInt::from(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigIntDe, E> {
                Ok(BigIntDe(BigInt::from(v)))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigIntDe, E> {
                v.parse::<BigInt>()
                    .map(BigIntDe)
                    .map_err(|_| E::custom("invalid integer string"))
            }
        }
        d.deserialize_any(V)
    }
}

impl<'de> Deserialize<'de> for QuadRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: (BigIntDe, BigIntDe),
            q: (BigIntDe, BigIntDe),
            field: FieldSpec,
        }
        let raw = Raw::deserialize(d)?;
        if raw.p.1 .0.is_zero() || raw.q.1 .0.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(QuadRat::new(
            raw.field,
            BigRational::new(raw.p.0 .0, raw.p.1 .0),
            BigRational::new(raw.q.0 .0, raw.q.1 .0),
        ))
    }
}
