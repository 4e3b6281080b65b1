//! The generalized sum-of-divisors function and the
//! deficient / norm-perfect / perfect / abundant classification.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{factor, is_ring_prime, Factorization};
use crate::ring::{QuadInt, RingId};

/// Norm bound for [`divisor_sum_oracle`].
pub const DEFAULT_ORACLE_BOUND: u64 = 1_000_000_000_000;

/// Maximum number of divisor classes visited by the primitivity check.
pub const DEFAULT_DIVISOR_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Deficient,
    NormPerfect,
    Abundant,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Deficient => "deficient",
            Status::NormPerfect => "norm_perfect",
            Status::Abundant => "abundant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub element: QuadInt,
    pub even: bool,
    pub status: Status,
    pub perfect: bool,
    /// Set only when requested and the element is norm-perfect.
    pub primitive: Option<bool>,
    pub sigma: QuadInt,
    pub norm: BigInt,
    pub sigma_norm: BigInt,
}

/// JSON form of a [`Classification`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub ring: RingId,
    pub element: String,
    pub even: bool,
    pub status: Status,
    pub perfect: bool,
    pub primitive: Option<bool>,
    pub sigma: String,
    pub norm: String,
    pub sigma_norm: String,
}

impl From<&Classification> for ClassificationRecord {
    fn from(c: &Classification) -> Self {
        ClassificationRecord {
            ring: c.element.ring(),
            element: c.element.to_string(),
            even: c.even,
            status: c.status,
            perfect: c.perfect,
            primitive: c.primitive,
            sigma: c.sigma.to_string(),
            norm: c.norm.to_string(),
            sigma_norm: c.sigma_norm.to_string(),
        }
    }
}

/// `1 + π + … + πᵉ` by Horner accumulation.
pub fn geometric_sum(pi: &QuadInt, e: u64) -> QuadInt {
    let one = QuadInt::one(pi.ring());
    let mut acc = one.clone();
    for _ in 0..e {
        acc = &(&acc * pi) + &one;
    }
    acc
}

/// σ over an already computed factorization.
pub fn sigma_of(f: &Factorization) -> QuadInt {
    f.factors
        .iter()
        .fold(QuadInt::one(f.ring()), |acc, (p, e)| &acc * &geometric_sum(p, *e as u64))
}

/// `σ(x) = Π (1 + π + … + π^e)` over the positive prime factorization of `x`.
pub fn sigma(x: &QuadInt) -> Result<QuadInt> {
    Ok(sigma_of(&factor(x)?))
}

pub fn divisor_sum_oracle(x: &QuadInt) -> Result<QuadInt> {
    divisor_sum_oracle_with_bound(x, DEFAULT_ORACLE_BOUND)
}

/// Sum of `Π πᵢ^{fᵢ}` over every exponent tuple `0 ≤ fᵢ ≤ eᵢ`.
pub fn divisor_sum_oracle_with_bound(x: &QuadInt, bound: u64) -> Result<QuadInt> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let norm = x.norm();
    if norm > BigInt::from(bound) {
        return Err(Error::BoundExceeded {
            requested: u64::try_from(&norm).unwrap_or(u64::MAX),
            limit: bound,
        });
    }
    let f = factor(x)?;
    let ring = x.ring();
    let mut total = QuadInt::zero(ring);
    for exps in ExponentTuples::new(&f) {
        let d = f
            .factors
            .iter()
            .zip(&exps)
            .fold(QuadInt::one(ring), |acc, ((p, _), &k)| &acc * &p.pow(k as u64));
        total = &total + &d;
    }
    Ok(total)
}

/// Iterates every exponent tuple of a factorization's divisor lattice.
struct ExponentTuples {
    limits: Vec<u32>,
    current: Option<Vec<u32>>,
}

impl ExponentTuples {
    fn new(f: &Factorization) -> Self {
        let limits: Vec<u32> = f.factors.iter().map(|(_, e)| *e).collect();
        let current = Some(vec![0; limits.len()]);
        ExponentTuples { limits, current }
    }
}

impl Iterator for ExponentTuples {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        for (i, limit) in self.limits.iter().enumerate() {
            if next[i] < *limit {
                next[i] += 1;
                self.current = Some(next);
                return Some(out);
            }
            next[i] = 0;
        }
        Some(out)
    }
}

fn status_of(sigma_norm: &BigInt, norm: &BigInt, ring: RingId) -> Status {
    let target = norm * ring.residue_characteristic();
    match sigma_norm.cmp(&target) {
        Ordering::Less => Status::Deficient,
        Ordering::Equal => Status::NormPerfect,
        Ordering::Greater => Status::Abundant,
    }
}

pub fn classify(x: &QuadInt, check_primitive: bool) -> Result<Classification> {
    classify_with_budget(x, check_primitive, DEFAULT_DIVISOR_BUDGET)
}

/// Classification of `x`; primitivity, when requested for a norm-perfect
/// `x`, is decided by walking the whole divisor lattice.
///
/// A perfect `x` is primitive when no proper divisor has a perfect
/// associate; a norm-perfect one when no proper divisor is norm-perfect.
pub fn classify_with_budget(
    x: &QuadInt,
    check_primitive: bool,
    budget: u128,
) -> Result<Classification> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let f = factor(x)?;
    let ring = x.ring();
    let sigma = sigma_of(&f);
    let norm = x.norm();
    let sigma_norm = sigma.norm();
    let status = status_of(&sigma_norm, &norm, ring);
    let perfect = status == Status::NormPerfect && sigma == &ring.minimal_prime() * x;
    let primitive = if check_primitive && status == Status::NormPerfect {
        Some(is_primitive(&f, perfect, budget)?)
    } else {
        None
    };
    Ok(Classification {
        element: x.clone(),
        even: x.is_even(),
        status,
        perfect,
        primitive,
        sigma,
        norm,
        sigma_norm,
    })
}

fn is_primitive(f: &Factorization, perfect: bool, budget: u128) -> Result<bool> {
    let count = f.divisor_count();
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    let ring = f.ring();
    let minimal = ring.minimal_prime();
    // per prime: powers, geometric sums and their norms, indexed by exponent
    let tables: Vec<(Vec<QuadInt>, Vec<QuadInt>, Vec<BigInt>, Vec<BigInt>)> = f
        .factors
        .iter()
        .map(|(p, e)| {
            let mut powers = vec![QuadInt::one(ring)];
            let mut sums = vec![QuadInt::one(ring)];
            for _ in 0..*e {
                let next = powers.last().unwrap() * p;
                sums.push(sums.last().unwrap() + &next);
                powers.push(next);
            }
            let pn = powers.iter().map(QuadInt::norm).collect();
            let sn = sums.iter().map(QuadInt::norm).collect();
            (powers, sums, pn, sn)
        })
        .collect();
    let full: Vec<u32> = f.factors.iter().map(|(_, e)| *e).collect();
    for exps in ExponentTuples::new(f) {
        if exps == full {
            continue;
        }
        let mut norm = BigInt::one();
        let mut sigma_norm = BigInt::one();
        for (t, &k) in tables.iter().zip(&exps) {
            norm *= &t.2[k as usize];
            sigma_norm *= &t.3[k as usize];
        }
        if status_of(&sigma_norm, &norm, ring) != Status::NormPerfect {
            continue;
        }
        if !perfect {
            return Ok(false);
        }
        let mut divisor = QuadInt::one(ring);
        let mut sigma = QuadInt::one(ring);
        for (t, &k) in tables.iter().zip(&exps) {
            divisor = &divisor * &t.0[k as usize];
            sigma = &sigma * &t.1[k as usize];
        }
        // some associate ε·d is perfect iff σ(d) / (minimal · d) is a unit
        if sigma
            .exact_divide(&(&minimal * &divisor))?
            .is_some_and(|u| u.is_unit())
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_spira_domain(alpha: &QuadInt) -> Result<()> {
    if alpha.is_zero() || alpha == &QuadInt::one(alpha.ring()) {
        return Err(Error::Precondition("α must differ from 0 and 1".into()));
    }
    if alpha.real_part_doubled() < BigInt::from(2) {
        return Err(Error::Precondition(format!("Re({alpha}) < 1")));
    }
    Ok(())
}

/// `N(1 + α + … + αⁿ) ≥ N(αⁿ)` for `Re(α) ≥ 1`, `α ∉ {0, 1}`.
pub fn check_spira_inequality(alpha: &QuadInt, n: u64) -> Result<bool> {
    require_spira_domain(alpha)?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    Ok(geometric_sum(alpha, n).norm() >= alpha.pow(n).norm())
}

fn require_odd_positive_prime(psi: &QuadInt) -> Result<()> {
    if psi.is_zero() {
        return Err(Error::ZeroInput);
    }
    if psi.is_even() {
        return Err(Error::Precondition(format!("{psi} is even")));
    }
    if !psi.in_sector() {
        return Err(Error::Precondition(format!("{psi} is not sector-canonical")));
    }
    if !is_ring_prime(psi)? {
        return Err(Error::Precondition(format!("{psi} is not prime")));
    }
    Ok(())
}

/// The strengthened lower bound for `N(σ(ψⁿ)/ψⁿ)` at an odd positive prime,
/// with denominators cleared:
/// `5·N(σ(ψⁿ))·N(ψ) > N(ψⁿ)·(5·N(ψ) + 5·2Re(ψ) − 7)`.
pub fn check_mcdaniel_inequality(psi: &QuadInt, n: u64) -> Result<bool> {
    require_odd_positive_prime(psi)?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let norm = psi.norm();
    let lhs = geometric_sum(psi, n).norm() * &norm * 5u32;
    let rhs = psi.pow(n).norm() * (&norm * 5u32 + psi.real_part_doubled() * 5u32 - 7u32);
    Ok(lhs > rhs)
}

/// Whether `3 | N(σ(ψᵐ))` for an odd positive Eisenstein prime `ψ`.
pub fn check_odd_power_divisibility(psi: &QuadInt, m: u64) -> Result<bool> {
    if psi.ring() != RingId::Eisenstein {
        return Err(Error::RingMismatch(psi.ring(), RingId::Eisenstein));
    }
    require_odd_positive_prime(psi)?;
    Ok(geometric_sum(psi, m).norm().is_multiple_of(&BigInt::from(3)))
}

/// Closed-form side of the same statement: `ψ ≡ 1` with `m ≡ 2 (mod 3)`, or
/// `ψ ≡ 2` with `m` odd, residues taken modulo the minimal prime.
pub fn odd_power_divisibility_predicate(psi: &QuadInt, m: u64) -> bool {
    match psi.residue_mod_minimal() {
        1 => m % 3 == 2,
        2 => m % 2 == 1,
        _ => false,
    }
}

/// Residue of `x` modulo the minimal prime, in `{0, …, p − 1}`.
pub fn residue_mod_minimal(x: &QuadInt) -> u32 {
    x.residue_mod_minimal()
}

/// Status derived from norms alone; exposed for callers holding norms.
pub fn status_from_norms(sigma_norm: &BigInt, norm: &BigInt, ring: RingId) -> Status {
    if norm.is_zero() {
        return Status::Deficient;
    }
    status_of(sigma_norm, norm, ring)
}
