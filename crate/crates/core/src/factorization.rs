//! Unique factorization in `Z[i]` and `Z[ω]` into sector-canonical primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{factor_rational, is_rational_prime, sqrt_mod_prime};
use crate::ring::{QuadInt, RingId, Unit};

/// Split primes below this bound are located by direct search over the
/// sector; larger ones through a modular square root and a ring gcd.
const DIRECT_SEARCH_LIMIT: u64 = 1 << 32;

/// `unit · Π primeᵉ`, primes sector-canonical, pairwise non-associate and
/// sorted by `(norm, a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Unit,
    pub factors: Vec<(QuadInt, u32)>,
}

impl Factorization {
    pub fn ring(&self) -> RingId {
        self.unit.as_elem().ring()
    }

    pub fn recompose(&self) -> QuadInt {
        self.factors
            .iter()
            .fold(self.unit.as_elem().clone(), |acc, (p, e)| &acc * &p.pow(*e as u64))
    }

    pub fn exponent_of(&self, prime: &QuadInt) -> u32 {
        self.factors
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }

    /// Number of divisor classes, `Π (eᵢ + 1)`.
    pub fn divisor_count(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, (_, e)| acc.saturating_mul(*e as u128 + 1))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.unit)?;
        for (p, e) in &self.factors {
            if *e == 1 {
                write!(f, "·({p})")?;
            } else {
                write!(f, "·({p})^{e}")?;
            }
        }
        Ok(())
    }
}

/// JSON form of a factorization; elements are written in the element grammar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationRecord {
    pub ring: RingId,
    pub element: String,
    pub unit: String,
    pub factors: Vec<FactorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    pub prime: String,
    pub exp: u32,
}

impl FactorizationRecord {
    pub fn new(element: &QuadInt, f: &Factorization) -> Self {
        FactorizationRecord {
            ring: element.ring(),
            element: element.to_string(),
            unit: f.unit.to_string(),
            factors: f
                .factors
                .iter()
                .map(|(p, e)| FactorEntry {
                    prime: p.to_string(),
                    exp: *e,
                })
                .collect(),
        }
    }

    pub fn to_factorization(&self) -> Result<Factorization> {
        let unit = Unit::parse(self.ring, &self.unit)?;
        let factors = self
            .factors
            .iter()
            .map(|entry| Ok((QuadInt::parse(self.ring, &entry.prime)?, entry.exp)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Factorization { unit, factors })
    }
}

/// Primality in the ring: prime norm, or an associate of an inert rational prime.
pub fn is_ring_prime(x: &QuadInt) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = x.norm();
    if is_rational_prime(&n) {
        return Ok(true);
    }
    let q = n.sqrt();
    if &q * &q != n || !is_rational_prime(&q) || !x.ring().is_inert(&q) {
        return Ok(false);
    }
    let q = QuadInt::from_int(x.ring(), q);
    Ok(x.exact_divide(&q)?.is_some_and(|u| u.is_unit()))
}

/// A sector-canonical prime above the rational prime `q`.
///
/// Ramified `q` gives the minimal prime, inert `q` gives `q` itself, and a
/// split `q` gives whichever of its two conjugate prime classes has the
/// sector representative with the smaller `b` coordinate.
pub fn prime_above(q: &BigInt, ring: RingId) -> Result<QuadInt> {
    if !is_rational_prime(q) {
        return Err(Error::Precondition(format!("{q} is not a rational prime")));
    }
    if ring.is_ramified(q) {
        return Ok(ring.minimal_prime());
    }
    if ring.is_inert(q) {
        return Ok(QuadInt::from_int(ring, q.clone()));
    }
    match q.to_u64() {
        Some(small) if small < DIRECT_SEARCH_LIMIT => Ok(split_prime_by_search(small, ring)),
        _ => split_prime_by_gcd(q, ring),
    }
}

/// Smallest-`b` sector element of norm `q`, scanning `b` upward.
fn split_prime_by_search(q: u64, ring: RingId) -> QuadInt {
    let q = q as u128;
    let mut b: u128 = 0;
    loop {
        match ring {
            RingId::Gaussian => {
                if b * b > q {
                    break;
                }
                let rest = q - b * b;
                let a = rest.sqrt();
                if a > 0 && a * a == rest {
                    return QuadInt::new(ring, a, b);
                }
            }
            RingId::Eisenstein => {
                // a² − ab + b² = q  ⇔  (2a − b)² = 4q − 3b²
                if 3 * b * b > 4 * q {
                    break;
                }
                let disc = 4 * q - 3 * b * b;
                let s = disc.sqrt();
                if s * s == disc && (b + s).is_multiple_of(2) {
                    let a = (b + s) / 2;
                    if a > b {
                        return QuadInt::new(ring, a, b);
                    }
                }
            }
        }
        b += 1;
    }
    unreachable!("split prime {q} has no element of that norm")
}

/// Prime above a split `q` as `gcd(q, t − θ)` where `t` is a root of the
/// minimal polynomial of `θ` modulo `q`.
fn split_prime_by_gcd(q: &BigInt, ring: RingId) -> Result<QuadInt> {
    let t = match ring {
        RingId::Gaussian => sqrt_mod_prime(&BigInt::from(-1), q),
        RingId::Eisenstein => sqrt_mod_prime(&BigInt::from(-3), q).map(|s: BigInt| {
            // root of t² + t + 1: t = (s − 1)/2 mod q
            let inv2: BigInt = (q + 1u32) >> 1;
            let t: BigInt = (s - 1u32) * inv2;
            t.mod_floor(q)
        }),
    }
    .ok_or_else(|| Error::Precondition(format!("{q} does not split in the {ring} ring")))?;
    let candidate = QuadInt::from_int(ring, q.clone()).gcd(&QuadInt::new(ring, t, -1))?;
    debug_assert_eq!(candidate.norm(), *q);
    let other = candidate.conjugate().canonical()?;
    Ok(if (other.b(), other.a()) < (candidate.b(), candidate.a()) {
        other
    } else {
        candidate
    })
}

/// Divides `x` by `p` as often as possible.
fn peel(x: &mut QuadInt, p: &QuadInt) -> u32 {
    let mut e = 0;
    while let Some(q) = x.exact_divide(p).expect("p is nonzero") {
        *x = q;
        e += 1;
    }
    e
}

/// Factorization into a unit and sector-canonical primes.
pub fn factor(x: &QuadInt) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let ring = x.ring();
    let norm_factors = factor_rational(&x.norm())?;
    let mut rest = x.clone();
    let mut factors = Vec::new();
    for (q, e) in &norm_factors.factors {
        if ring.is_ramified(q) {
            let pi = ring.minimal_prime();
            let got = peel(&mut rest, &pi);
            debug_assert_eq!(got, *e);
            factors.push((pi, got));
        } else if ring.is_inert(q) {
            let pi = QuadInt::from_int(ring, q.clone());
            let got = peel(&mut rest, &pi);
            debug_assert_eq!(2 * got, *e);
            factors.push((pi, got));
        } else {
            let pi = prime_above(q, ring)?;
            let mut pair = [pi.clone(), pi.conjugate().canonical()?];
            pair.sort_by(|u, v| (u.a(), u.b()).cmp(&(v.a(), v.b())));
            let mut total = 0;
            for p in pair {
                let got = peel(&mut rest, &p);
                if got > 0 {
                    factors.push((p, got));
                    total += got;
                }
            }
            debug_assert_eq!(total, *e);
        }
    }
    let unit = Unit::new(rest).expect("cofactor after peeling every prime is a unit");
    factors.sort_by(|(p, _), (q, _)| {
        (p.norm(), p.a(), p.b()).cmp(&(q.norm(), q.a(), q.b()))
    });
    Ok(Factorization { unit, factors })
}

/// Every sector-canonical prime with norm at most `bound`, sorted by
/// `(norm, a, b)`.
pub fn primes_up_to_norm(ring: RingId, bound: u64) -> Vec<QuadInt> {
    let mut out = Vec::new();
    if bound < 2 {
        return out;
    }
    let limit = u32::try_from(bound + 1).expect("prime enumeration bound fits in u32");
    for q in crate::rational::sieve(limit) {
        let qb = BigInt::from(q);
        if ring.is_ramified(&qb) {
            out.push(ring.minimal_prime());
        } else if ring.is_inert(&qb) {
            if (q as u64) * (q as u64) <= bound {
                out.push(QuadInt::from_int(ring, q));
            }
        } else {
            let p = prime_above(&qb, ring).expect("q is prime");
            let c = p.conjugate().canonical().expect("nonzero");
            out.push(p);
            out.push(c);
        }
    }
    out.sort_by(|p, q| (p.norm(), p.a(), p.b()).cmp(&(q.norm(), q.a(), q.b())));
    out
}

/// Exponent of the minimal prime in `x`.
pub fn minimal_exponent(x: &QuadInt) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut rest = x.clone();
    Ok(peel(&mut rest, &x.ring().minimal_prime()))
}
