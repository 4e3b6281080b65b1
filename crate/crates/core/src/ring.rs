//! Exact arithmetic in the Gaussian integers `Z[i]` and the Eisenstein
//! integers `Z[ω]`.
//!
//! Elements are stored as `a + b·θ` with arbitrary-precision coordinates,
//! where `θ = i` (`θ² = −1`) or `θ = ω` (`θ² = −1 − θ`). Both rings are
//! norm-Euclidean, so division with remainder and gcds are computed by
//! rounding exact rational quotients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingId {
    Gaussian,
    Eisenstein,
}

impl RingId {
    pub const ALL: [RingId; 2] = [RingId::Gaussian, RingId::Eisenstein];

    pub fn name(self) -> &'static str {
        match self {
            RingId::Gaussian => "gaussian",
            RingId::Eisenstein => "eisenstein",
        }
    }

    /// Suffix used by the element grammar: `i` or `w`.
    pub fn suffix(self) -> char {
        match self {
            RingId::Gaussian => 'i',
            RingId::Eisenstein => 'w',
        }
    }

    pub fn unit_count(self) -> usize {
        match self {
            RingId::Gaussian => 4,
            RingId::Eisenstein => 6,
        }
    }

    /// Norm of the minimal prime, which is also the order of the residue
    /// field modulo it.
    pub fn residue_characteristic(self) -> u32 {
        match self {
            RingId::Gaussian => 2,
            RingId::Eisenstein => 3,
        }
    }

    /// `1 + i` or `2 + ω = 1 − ω²`, the positive non-unit of least norm.
    pub fn minimal_prime(self) -> QuadInt {
        match self {
            RingId::Gaussian => QuadInt::new(self, 1, 1),
            RingId::Eisenstein => QuadInt::new(self, 2, 1),
        }
    }

    /// Units as successive powers of a generator of the unit group
    /// (`i`, resp. `1 + ω = −ω²`), starting from 1.
    pub fn units(self) -> Vec<Unit> {
        let generator = match self {
            RingId::Gaussian => QuadInt::new(self, 0, 1),
            RingId::Eisenstein => QuadInt::new(self, 1, 1),
        };
        let mut acc = QuadInt::one(self);
        let mut out = Vec::with_capacity(self.unit_count());
        for _ in 0..self.unit_count() {
            out.push(Unit(acc.clone()));
            acc = &acc * &generator;
        }
        out
    }

    /// Whether the rational prime `q` stays prime in this ring.
    pub fn is_inert(self, q: &BigInt) -> bool {
        match self {
            RingId::Gaussian => q.mod_floor(&BigInt::from(4)) == BigInt::from(3),
            RingId::Eisenstein => q.mod_floor(&BigInt::from(3)) == BigInt::from(2),
        }
    }

    pub fn is_ramified(self, q: &BigInt) -> bool {
        *q == BigInt::from(self.residue_characteristic())
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RingId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" | "i" => Ok(RingId::Gaussian),
            "eisenstein" | "w" | "omega" => Ok(RingId::Eisenstein),
            _ => Err(Error::Parse {
                text: s.to_string(),
                reason: "expected `gaussian` or `eisenstein`".into(),
            }),
        }
    }
}

/// An element `a + b·θ` of `Z[i]` or `Z[ω]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ring: RingId,
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    pub fn new(ring: RingId, a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        QuadInt {
            ring,
            a: a.into(),
            b: b.into(),
        }
    }

    pub fn from_int(ring: RingId, n: impl Into<BigInt>) -> Self {
        QuadInt::new(ring, n, 0)
    }

    pub fn zero(ring: RingId) -> Self {
        QuadInt::new(ring, 0, 0)
    }

    pub fn one(ring: RingId) -> Self {
        QuadInt::new(ring, 1, 0)
    }

    pub fn ring(&self) -> RingId {
        self.ring
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// `a² + b²` or `a² − ab + b²`.
    pub fn norm(&self) -> BigInt {
        let (a, b) = (&self.a, &self.b);
        match self.ring {
            RingId::Gaussian => a * a + b * b,
            RingId::Eisenstein => a * a - a * b + b * b,
        }
    }

    /// Complex conjugation; for `Z[ω]` this sends `a + bω` to `a + bω² = (a − b) − bω`.
    pub fn conjugate(&self) -> QuadInt {
        match self.ring {
            RingId::Gaussian => QuadInt::new(self.ring, self.a.clone(), -&self.b),
            RingId::Eisenstein => QuadInt::new(self.ring, &self.a - &self.b, -&self.b),
        }
    }

    /// Twice the real part of the complex embedding.
    pub fn real_part_doubled(&self) -> BigInt {
        match self.ring {
            RingId::Gaussian => &self.a * 2,
            RingId::Eisenstein => &self.a * 2 - &self.b,
        }
    }

    /// All unit multiples of `self`, in the order of [`RingId::units`].
    pub fn associates(&self) -> Vec<QuadInt> {
        self.ring
            .units()
            .iter()
            .map(|u| u.as_elem() * self)
            .collect()
    }

    /// Membership in the fundamental sector: `a > 0, b ≥ 0` for `Z[i]`,
    /// `a > b ≥ 0` for `Z[ω]`.
    pub fn in_sector(&self) -> bool {
        match self.ring {
            RingId::Gaussian => self.a.is_positive() && !self.b.is_negative(),
            RingId::Eisenstein => self.a > self.b && !self.b.is_negative(),
        }
    }

    /// Splits `self = u·y` with `y` the unique associate in the sector.
    pub fn sector_canonical(&self) -> Result<(Unit, QuadInt)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut found = None;
        for u in self.ring.units() {
            // y = x·u⁻¹ and u⁻¹ = conj(u)
            let y = &u.as_elem().conjugate() * self;
            if y.in_sector() {
                debug_assert!(found.is_none(), "two associates of {self} in the sector");
                found = Some((u, y));
                if !cfg!(debug_assertions) {
                    break;
                }
            }
        }
        Ok(found.expect("every nonzero element has an associate in the sector"))
    }

    /// The sector associate alone.
    pub fn canonical(&self) -> Result<QuadInt> {
        self.sector_canonical().map(|(_, y)| y)
    }

    /// Division with remainder, `self = q·y + r` and `N(r) < N(y)`.
    pub fn divrem(&self, y: &QuadInt) -> Result<(QuadInt, QuadInt)> {
        self.check_ring(y)?;
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = y.norm();
        let num = self * &y.conjugate();
        let q = QuadInt::new(self.ring, round_half_to_zero(&num.a, &n), round_half_to_zero(&num.b, &n));
        let r = self - &(&q * y);
        Ok((q, r))
    }

    /// `self / y` if `y` divides `self`, otherwise `None`.
    pub fn exact_divide(&self, y: &QuadInt) -> Result<Option<QuadInt>> {
        self.check_ring(y)?;
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = y.norm();
        let num = self * &y.conjugate();
        let (qa, ra) = num.a.div_rem(&n);
        if !ra.is_zero() {
            return Ok(None);
        }
        let (qb, rb) = num.b.div_rem(&n);
        if !rb.is_zero() {
            return Ok(None);
        }
        Ok(Some(QuadInt::new(self.ring, qa, qb)))
    }

    pub fn divides(&self, x: &QuadInt) -> Result<bool> {
        Ok(x.exact_divide(self)?.is_some())
    }

    /// Sector-canonical greatest common divisor.
    pub fn gcd(&self, y: &QuadInt) -> Result<QuadInt> {
        self.check_ring(y)?;
        if self.is_zero() && y.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut x = self.clone();
        let mut y = y.clone();
        while !y.is_zero() {
            let (_, r) = x.divrem(&y)?;
            x = y;
            y = r;
        }
        x.canonical()
    }

    /// Image in `Z[θ]/(minimal prime)`, i.e. in `Z/2` resp. `Z/3`.
    ///
    /// The minimal prime generates the same ideal as `1 − θ`, so the map is
    /// `θ ↦ 1` followed by reduction.
    pub fn residue_mod_minimal(&self) -> u32 {
        let m = BigInt::from(self.ring.residue_characteristic());
        let r = (&self.a + &self.b).mod_floor(&m);
        u32::try_from(&r).expect("residue fits in u32")
    }

    pub fn is_even(&self) -> bool {
        self.residue_mod_minimal() == 0
    }

    pub fn pow(&self, mut e: u64) -> QuadInt {
        let mut base = self.clone();
        let mut acc = QuadInt::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn checked_add(&self, y: &QuadInt) -> Result<QuadInt> {
        self.check_ring(y)?;
        Ok(self + y)
    }

    pub fn checked_sub(&self, y: &QuadInt) -> Result<QuadInt> {
        self.check_ring(y)?;
        Ok(self - y)
    }

    pub fn checked_mul(&self, y: &QuadInt) -> Result<QuadInt> {
        self.check_ring(y)?;
        Ok(self * y)
    }

    fn check_ring(&self, y: &QuadInt) -> Result<()> {
        if self.ring != y.ring {
            return Err(Error::RingMismatch(self.ring, y.ring));
        }
        Ok(())
    }

    /// Parses the element grammar `[+-]<int>` or `[+-]<int>(+|-)<int>(i|w)`.
    pub fn parse(ring: RingId, text: &str) -> Result<QuadInt> {
        let err = |reason: &str| Error::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut negative = false;
        if let Some(&c) = bytes.first() {
            if c == b'+' || c == b'-' {
                negative = c == b'-';
                pos = 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(err("expected digits"));
        }
        let mut a: BigInt = text[start..pos].parse().map_err(|_| err("bad integer"))?;
        if negative {
            a = -a;
        }
        if pos == bytes.len() {
            return Ok(QuadInt::new(ring, a, 0));
        }
        let sep = bytes[pos];
        if sep != b'+' && sep != b'-' {
            return Err(err("expected `+` or `-` after the rational part"));
        }
        pos += 1;
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == start {
            return Err(err("expected digits before the basis symbol"));
        }
        let mut b: BigInt = text[start..pos].parse().map_err(|_| err("bad integer"))?;
        if sep == b'-' {
            b = -b;
        }
        if pos + 1 != bytes.len() {
            return Err(err("expected a single trailing basis symbol"));
        }
        if bytes[pos] as char != ring.suffix() {
            return Err(err(match ring {
                RingId::Gaussian => "gaussian elements end in `i`",
                RingId::Eisenstein => "eisenstein elements end in `w`",
            }));
        }
        Ok(QuadInt::new(ring, a, b))
    }
}

/// Nearest integer to `u / n` for `n > 0`, ties rounded toward zero.
fn round_half_to_zero(u: &BigInt, n: &BigInt) -> BigInt {
    let (q, r) = u.div_mod_floor(n);
    let twice: BigInt = r * 2;
    match twice.cmp(n) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Equal if q.is_negative() => q + 1,
        _ => q,
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sep = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}{}", self.a, sep, self.b.abs(), self.ring.suffix())
    }
}

impl<'a> Add<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;

    fn add(self, y: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, y.ring, "ring mismatch");
        QuadInt::new(self.ring, &self.a + &y.a, &self.b + &y.b)
    }
}

impl<'a> Sub<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;

    fn sub(self, y: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, y.ring, "ring mismatch");
        QuadInt::new(self.ring, &self.a - &y.a, &self.b - &y.b)
    }
}

impl<'a> Mul<&'a QuadInt> for &'a QuadInt {
    type Output = QuadInt;

    fn mul(self, y: &QuadInt) -> QuadInt {
        assert_eq!(self.ring, y.ring, "ring mismatch");
        let ac = &self.a * &y.a;
        let bd = &self.b * &y.b;
        let cross = &self.a * &y.b + &self.b * &y.a;
        match self.ring {
            RingId::Gaussian => QuadInt::new(self.ring, ac - bd, cross),
            // ω² = −1 − ω
            RingId::Eisenstein => QuadInt::new(self.ring, &ac - &bd, cross - bd),
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;

    fn add(self, y: QuadInt) -> QuadInt {
        &self + &y
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;

    fn sub(self, y: QuadInt) -> QuadInt {
        &self - &y
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;

    fn mul(self, y: QuadInt) -> QuadInt {
        &self * &y
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        QuadInt::new(self.ring, -&self.a, -&self.b)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;

    fn neg(self) -> QuadInt {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct QuadIntRepr {
    ring: RingId,
    a: String,
    b: String,
}

impl Serialize for QuadInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuadIntRepr {
            ring: self.ring,
            a: self.a.to_string(),
            b: self.b.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = QuadIntRepr::deserialize(d)?;
        let a = repr.a.parse::<BigInt>().map_err(serde::de::Error::custom)?;
        let b = repr.b.parse::<BigInt>().map_err(serde::de::Error::custom)?;
        Ok(QuadInt::new(repr.ring, a, b))
    }
}

/// A norm-one element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuadInt", into = "QuadInt")]
pub struct Unit(QuadInt);

impl Unit {
    pub fn new(x: QuadInt) -> Result<Unit> {
        if x.is_unit() {
            Ok(Unit(x))
        } else {
            Err(Error::Precondition(format!("{x} is not a unit")))
        }
    }

    pub fn one(ring: RingId) -> Unit {
        Unit(QuadInt::one(ring))
    }

    pub fn as_elem(&self) -> &QuadInt {
        &self.0
    }

    pub fn into_elem(self) -> QuadInt {
        self.0
    }

    pub fn inverse(&self) -> Unit {
        Unit(self.0.conjugate())
    }

    pub fn mul(&self, other: &Unit) -> Unit {
        Unit(&self.0 * &other.0)
    }

    /// Parses a unit in the element grammar.
    pub fn parse(ring: RingId, text: &str) -> Result<Unit> {
        Unit::new(QuadInt::parse(ring, text)?)
    }
}

impl TryFrom<QuadInt> for Unit {
    type Error = Error;

    fn try_from(x: QuadInt) -> Result<Unit> {
        Unit::new(x)
    }
}

impl From<Unit> for QuadInt {
    fn from(u: Unit) -> QuadInt {
        u.0
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(a: i64, b: i64) -> QuadInt {
        QuadInt::new(RingId::Eisenstein, a, b)
    }

    fn g(a: i64, b: i64) -> QuadInt {
        QuadInt::new(RingId::Gaussian, a, b)
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&e(2, 1) * &e(2, 1), e(3, 3));
        assert_eq!(&g(1, 1) * &g(1, 1), g(0, 2));
        assert_eq!(&e(3, 1) * &e(3, 2), e(7, 7));
    }

    #[test]
    fn norms() {
        assert_eq!(e(2, 1).norm(), BigInt::from(3));
        assert_eq!(g(1, 1).norm(), BigInt::from(2));
        assert!(e(0, 0).norm().is_zero());
        assert!(g(0, 0).norm().is_zero());
    }

    #[test]
    fn conjugates() {
        assert_eq!(g(7, -8).conjugate(), g(7, 8));
        assert_eq!(e(3, 1).conjugate(), e(2, -1));
        assert_eq!(e(5, 0).conjugate(), e(5, 0));
    }

    #[test]
    fn unit_groups() {
        let gu: Vec<_> = RingId::Gaussian.units().into_iter().map(Unit::into_elem).collect();
        assert_eq!(gu, vec![g(1, 0), g(0, 1), g(-1, 0), g(0, -1)]);
        let eu: Vec<_> = RingId::Eisenstein.units().into_iter().map(Unit::into_elem).collect();
        for x in [e(1, 0), e(-1, 0), e(0, 1), e(0, -1), e(-1, -1), e(1, 1)] {
            assert!(eu.contains(&x), "{x} missing");
        }
        assert_eq!(eu.len(), 6);
    }

    #[test]
    fn associates_examples() {
        let units: Vec<_> = RingId::Eisenstein.units().into_iter().map(Unit::into_elem).collect();
        assert_eq!(e(1, 0).associates(), units);
        assert_eq!(g(2, 1).associates(), vec![g(2, 1), g(-1, 2), g(-2, -1), g(1, -2)]);
        assert!(e(1, -1).associates().contains(&e(2, 1)));
    }

    #[test]
    fn sector_examples() {
        let (u, y) = e(1, -1).sector_canonical().unwrap();
        assert_eq!(u.as_elem(), &e(0, -1));
        assert_eq!(y, e(2, 1));
        let (u, y) = g(-3, 0).sector_canonical().unwrap();
        assert_eq!((u.as_elem(), y), (&g(-1, 0), g(3, 0)));
        let (u, y) = e(3, 3).sector_canonical().unwrap();
        // −ω² = 1 + ω
        assert_eq!((u.as_elem(), y), (&e(1, 1), e(3, 0)));
        assert!(matches!(e(0, 0).sector_canonical(), Err(Error::ZeroInput)));
    }

    #[test]
    fn divrem_examples() {
        let x = g(17, -4);
        let (q, r) = x.divrem(&QuadInt::one(RingId::Gaussian)).unwrap();
        assert_eq!((q, r), (x, g(0, 0)));

        let (q, r) = g(5, 0).divrem(&g(1, 1)).unwrap();
        assert_eq!(&(&q * &g(1, 1)) + &r, g(5, 0));
        assert!(r.norm() < BigInt::from(2));

        let (q, r) = e(7, 0).divrem(&e(3, 1)).unwrap();
        assert!(r.is_zero());
        assert!(e(3, 2).associates().contains(&q));

        assert!(matches!(g(1, 0).divrem(&g(0, 0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn halves_round_toward_zero() {
        assert_eq!(round_half_to_zero(&BigInt::from(1), &BigInt::from(2)), BigInt::from(0));
        assert_eq!(round_half_to_zero(&BigInt::from(-1), &BigInt::from(2)), BigInt::from(0));
        assert_eq!(round_half_to_zero(&BigInt::from(3), &BigInt::from(2)), BigInt::from(1));
        assert_eq!(round_half_to_zero(&BigInt::from(-3), &BigInt::from(2)), BigInt::from(-1));
        assert_eq!(round_half_to_zero(&BigInt::from(5), &BigInt::from(3)), BigInt::from(2));
        assert_eq!(round_half_to_zero(&BigInt::from(-5), &BigInt::from(3)), BigInt::from(-2));
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(g(0, 2).exact_divide(&g(1, 1)).unwrap(), Some(g(1, 1)));
        assert_eq!(e(3, 0).exact_divide(&e(2, 1)).unwrap(), Some(e(1, -1)));
        assert_eq!(g(5, 0).exact_divide(&g(1, 1)).unwrap(), None);
        assert!(matches!(g(5, 0).exact_divide(&g(0, 0)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(e(-4, 7).gcd(&e(0, 0)).unwrap(), e(-4, 7).canonical().unwrap());
        assert_eq!(e(3, 0).gcd(&e(2, 1)).unwrap(), e(2, 1));
        assert_eq!(g(2, 1).gcd(&g(2, -1)).unwrap(), g(1, 0));
        assert!(matches!(g(0, 0).gcd(&g(0, 0)), Err(Error::ZeroInput)));
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        assert!(matches!(g(1, 1).checked_mul(&e(1, 1)), Err(Error::RingMismatch(..))));
        assert!(matches!(g(1, 1).gcd(&e(1, 1)), Err(Error::RingMismatch(..))));
    }

    #[test]
    fn evenness() {
        assert!(e(3, 0).is_even());
        assert!(!e(2, 0).is_even());
        assert!(!g(2, 1).is_even());
        assert!(g(2, 0).is_even());
        assert_eq!(e(2, 1).residue_mod_minimal(), 0);
        assert_eq!(e(3, 1).residue_mod_minimal(), 1);
        assert_eq!(g(2, 1).residue_mod_minimal(), 1);
    }

    #[test]
    fn doubled_real_parts() {
        assert_eq!(e(3, 1).real_part_doubled(), BigInt::from(5));
        assert_eq!(e(3, 2).real_part_doubled(), BigInt::from(4));
        assert_eq!(g(-6, 9).real_part_doubled(), BigInt::from(-12));
    }

    #[test]
    fn grammar() {
        assert_eq!(QuadInt::parse(RingId::Gaussian, "7-8i").unwrap(), g(7, -8));
        assert_eq!(QuadInt::parse(RingId::Eisenstein, "2+1w").unwrap(), e(2, 1));
        assert_eq!(QuadInt::parse(RingId::Eisenstein, "-3").unwrap(), e(-3, 0));
        assert_eq!(g(7, -8).to_string(), "7-8i");
        assert_eq!(e(2, 1).to_string(), "2+1w");
        assert_eq!(e(-3, 0).to_string(), "-3");
        assert_eq!(g(0, 1).to_string(), "0+1i");
        for bad in ["", "-", "2+w", "2+1i", "2+1", "1w", "2 +1w", "2+1ww", "x"] {
            assert!(QuadInt::parse(RingId::Eisenstein, bad).is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn json_shape() {
        let x = e(-5, 123);
        let v = serde_json::to_value(&x).unwrap();
        assert_eq!(v, serde_json::json!({"ring": "eisenstein", "a": "-5", "b": "123"}));
        let back: QuadInt = serde_json::from_value(v).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_value::<Unit>(serde_json::to_value(e(2, 1)).unwrap()).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(g(1, 1).pow(7), g(8, -8));
        assert_eq!(e(2, 1).pow(0), e(1, 0));
        assert_eq!(e(2, 1).pow(12), e(729, 0));
    }
}
