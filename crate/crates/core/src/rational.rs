//! Rational-integer primality and factorization.
//!
//! Primality is Miller–Rabin: deterministic below 2⁶⁴ with a fixed witness
//! set, probabilistic above with [`MR_ROUNDS`] rounds after trial division.
//! Factorization strips primes below [`TRIAL_LIMIT`] and splits what is left
//! with Brent's variant of Pollard's rho.

use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial division bound.
pub const TRIAL_LIMIT: u32 = 10_000;

/// Miller–Rabin rounds for inputs of 64 bits or more.
pub const MR_ROUNDS: usize = 40;

/// Seed for random Miller–Rabin bases and rho polynomials.
pub const RNG_SEED: u64 = 0x0005_eed0_fe15_e7e1;

/// Witnesses making Miller–Rabin deterministic for every n < 2⁶⁴.
const DETERMINISTIC_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_LIMIT))
}

/// Primes strictly below `limit`.
pub fn sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    if n < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &DETERMINISTIC_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigInt, d: &BigInt, s: u64, a: &BigInt) -> bool {
    let n_minus_1 = n - 1u32;
    let mut x = a.modpow(d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Primality of a nonnegative rational integer.
pub fn is_rational_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes() {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_1: BigInt = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    for &a in &DETERMINISTIC_WITNESSES {
        if !miller_rabin_round(n, &d, s, &BigInt::from(a)) {
            return false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let span = &n_minus_1 - 3u32;
    for _ in DETERMINISTIC_WITNESSES.len()..MR_ROUNDS {
        let a = BigInt::from(rng.gen::<u128>()) % &span + 2u32;
        if !miller_rabin_round(n, &d, s, &a) {
            return false;
        }
    }
    true
}

/// Signed factorization `n = sign · Π pᵉ` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFactorization {
    pub negative: bool,
    pub factors: Vec<(BigInt, u32)>,
}

impl RationalFactorization {
    pub fn recompose(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        if self.negative {
            -acc
        } else {
            acc
        }
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }
}

/// Complete factorization of a nonzero integer.
pub fn factor_rational(n: &BigInt) -> Result<RationalFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let negative = n.sign() == Sign::Minus;
    let mut rest = n.abs();
    let mut primes: Vec<BigInt> = Vec::new();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((pb, e));
        }
    }
    if !rest.is_one() {
        split_into(&rest, &mut primes);
    }
    primes.sort();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    factors.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(RationalFactorization { negative, factors })
}

/// Pushes the prime factors (with multiplicity) of `n > 1`, which has no
/// factor below the trial-division limit unless it is itself small.
fn split_into(n: &BigInt, out: &mut Vec<BigInt>) {
    if is_rational_prime(n) {
        out.push(n.clone());
        return;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        split_into(&root, out);
        split_into(&root, out);
        return;
    }
    let d = pollard_brent(n);
    split_into(&d, out);
    split_into(&(n / &d), out);
}

/// A nontrivial divisor of the composite `n`.
fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    for &p in small_primes() {
        if (n % p).is_zero() {
            return BigInt::from(p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    loop {
        let c = BigInt::from(rng.gen::<u64>()) % n + 1u32;
        let mut y = BigInt::from(rng.gen::<u64>()) % n;
        let batch = 128u64;
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let step = |v: &BigInt| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = step(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..batch.min(r - k) {
                    y = step(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += batch;
            }
            r *= 2;
        }
        if g == *n {
            // batch overshot: retrace one step at a time
            loop {
                ys = step(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
}

/// A square root of `a` modulo the odd prime `p`, if `a` is a residue.
pub fn sqrt_mod_prime(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    let one = BigInt::one();
    let p_minus_1: BigInt = p - 1u32;
    let half = &p_minus_1 >> 1;
    if a.modpow(&half, p) != one {
        return None;
    }
    let s = p_minus_1.trailing_zeros().expect("p > 1");
    let q = &p_minus_1 >> s;
    let mut z = BigInt::from(2);
    while z.modpow(&half, p) != p_minus_1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + 1u32) >> 1), p);
    while !t.is_one() {
        let mut i = 0;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = (&b * &b) % p;
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}

/// Multiplicative order of `a` modulo `m`; `None` when `gcd(a, m) ≠ 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m < 2 || num_integer::gcd(a % m, m) != 1 {
        return None;
    }
    let mut x = a % m;
    let mut t = 1;
    while x != 1 % m {
        x = mul_mod(x, a, m);
        t += 1;
    }
    Some(t)
}
