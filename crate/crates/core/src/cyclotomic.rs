//! Arithmetic in `Z[ζ_p]` for the odd primes `p` with class number one,
//! with elements stored as coefficient vectors reduced modulo `Φ_p`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_rational_prime, multiplicative_order};

/// Odd primes `p` served here.
pub const SUPPORTED_PRIMES: [u32; 7] = [3, 5, 7, 11, 13, 17, 19];

/// Indices `n` with `Z[ζ_n]` of class number one among the fields covered
/// (`n = 4` being the Gaussian integers).
pub const CLASS_NUMBER_ONE_INDICES: [u32; 9] = [2, 3, 4, 5, 7, 11, 13, 17, 19];

fn check_supported(p: u32) -> Result<()> {
    if SUPPORTED_PRIMES.contains(&p) {
        Ok(())
    } else {
        Err(Error::UnsupportedIndex(p))
    }
}

/// `Σ cⱼ ζ_pʲ` with `j < p − 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycElement {
    p: u32,
    #[serde(with = "coeffs_serde")]
    coeffs: Vec<BigInt>,
}

mod coeffs_serde {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        c.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

impl CycElement {
    /// Reduces an arbitrary-length coefficient vector: first `ζᵖ = 1`, then
    /// `ζ^{p−1} = −Σ_{j<p−1} ζʲ`.
    pub fn new(p: u32, coeffs: Vec<BigInt>) -> Result<CycElement> {
        check_supported(p)?;
        let p = p as usize;
        let mut cyclic = vec![BigInt::zero(); p];
        for (j, c) in coeffs.into_iter().enumerate() {
            cyclic[j % p] += c;
        }
        let top = cyclic.pop().expect("p > 0");
        for c in &mut cyclic {
            *c -= &top;
        }
        Ok(CycElement {
            p: p as u32,
            coeffs: cyclic,
        })
    }

    pub fn from_i64s(p: u32, coeffs: &[i64]) -> Result<CycElement> {
        CycElement::new(p, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Result<CycElement> {
        CycElement::new(p, vec![n.into()])
    }

    pub fn one(p: u32) -> Result<CycElement> {
        CycElement::from_int(p, 1)
    }

    /// `ζ_pʲ`.
    pub fn zeta_pow(p: u32, j: u32) -> Result<CycElement> {
        let mut c = vec![BigInt::zero(); j as usize + 1];
        c[j as usize] = BigInt::one();
        CycElement::new(p, c)
    }

    /// The minimal prime `1 − ζ_p`.
    pub fn one_minus_zeta(p: u32) -> Result<CycElement> {
        CycElement::from_i64s(p, &[1, -1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn same_p(&self, y: &CycElement) -> Result<()> {
        if self.p == y.p {
            Ok(())
        } else {
            Err(Error::IndexMismatch(self.p, y.p))
        }
    }

    pub fn pow(&self, mut e: u64) -> CycElement {
        let mut base = self.clone();
        let mut acc = CycElement::one(self.p).expect("p already validated");
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_unchecked(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = mul_unchecked(&base, &base);
            }
        }
        acc
    }

    /// Exact division by a rational integer, if every coefficient allows it.
    pub fn divide_int(&self, n: &BigInt) -> Option<CycElement> {
        if n.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = c.div_rem(n);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CycElement { p: self.p, coeffs: out })
    }
}

impl fmt::Display for CycElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match j {
                0 => c.to_string(),
                1 => format!("{c}z"),
                _ => format!("{c}z^{j}"),
            });
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&terms.join(" + ").replace("+ -", "- "))
    }
}

pub fn cyc_add(x: &CycElement, y: &CycElement) -> Result<CycElement> {
    x.same_p(y)?;
    let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect();
    Ok(CycElement { p: x.p, coeffs })
}

pub fn cyc_sub(x: &CycElement, y: &CycElement) -> Result<CycElement> {
    x.same_p(y)?;
    let coeffs = x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect();
    Ok(CycElement { p: x.p, coeffs })
}

pub fn cyc_mul(x: &CycElement, y: &CycElement) -> Result<CycElement> {
    x.same_p(y)?;
    Ok(mul_unchecked(x, y))
}

fn mul_unchecked(x: &CycElement, y: &CycElement) -> CycElement {
    let p = x.p as usize;
    let mut cyclic = vec![BigInt::zero(); p];
    for (i, a) in x.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.coeffs.iter().enumerate() {
            cyclic[(i + j) % p] += a * b;
        }
    }
    CycElement::new(x.p, cyclic).expect("p already validated")
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Norm as the determinant of multiplication by `x` on the power basis.
pub fn cyc_norm(x: &CycElement) -> BigInt {
    let n = x.coeffs.len();
    let mut columns = Vec::with_capacity(n);
    for j in 0..n {
        let basis = CycElement::zeta_pow(x.p, j as u32).expect("p already validated");
        columns.push(mul_unchecked(x, &basis).coeffs);
    }
    let matrix = (0..n)
        .map(|i| columns.iter().map(|col| col[i].clone()).collect())
        .collect();
    bareiss_determinant(matrix)
}

/// Divisibility by `1 − ζ_p`, read off the image under `ζ_p ↦ 1`.
pub fn cyc_is_even(x: &CycElement) -> bool {
    let sum: BigInt = x.coeffs.iter().sum();
    sum.is_multiple_of(&BigInt::from(x.p))
}

/// `(1 − ζ_p)^{p−1} = p·u` with `N(u) = ±1`.
pub fn ramification_check(p: u32) -> Result<bool> {
    let power = CycElement::one_minus_zeta(p)?.pow(p as u64 - 1);
    Ok(match power.divide_int(&BigInt::from(p)) {
        Some(u) => cyc_norm(&u).abs().is_one(),
        None => false,
    })
}

/// `(−1)^{(p−1)/2}·p^{p−2}` for supported odd `p`, and `−4` for `p = 4`.
pub fn discriminant(p: u32) -> Result<BigInt> {
    if p == 4 {
        return Ok(BigInt::from(-4));
    }
    check_supported(p)?;
    let magnitude = BigInt::from(p).pow(p - 2);
    Ok(if (p - 1) / 2 % 2 == 1 { -magnitude } else { magnitude })
}

/// Discriminant recomputed as `(−1)^{n(n−1)/2}·N(Φ_p'(ζ_p))` with `n = p − 1`.
pub fn discriminant_from_derivative(p: u32) -> Result<BigInt> {
    check_supported(p)?;
    let derivative: Vec<BigInt> = (1..p).map(BigInt::from).collect();
    let n = (p - 1) as u64;
    let norm = cyc_norm(&CycElement::new(p, derivative)?);
    Ok(if n * (n - 1) / 2 % 2 == 1 { -norm } else { norm })
}

fn require_other_prime(q: u64, p: u32) -> Result<()> {
    if q == p as u64 {
        return Err(Error::Precondition(format!("q = {q} equals p")));
    }
    if !is_rational_prime(&BigInt::from(q)) {
        return Err(Error::Precondition(format!("{q} is not prime")));
    }
    Ok(())
}

/// Order of `q` modulo `p`; primes above `q` have norm `q^f`.
pub fn residue_degree(q: u64, p: u32) -> Result<u64> {
    check_supported(p)?;
    require_other_prime(q, p)?;
    Ok(multiplicative_order(q % p as u64, p as u64).expect("q is a unit mod p"))
}

/// Degrees of the irreducible factors of `Φ_p` over `F_q`, from a
/// distinct-degree factorization.
pub fn cyclotomic_factor_degrees(q: u64, p: u32) -> Result<Vec<u64>> {
    check_supported(p)?;
    require_other_prime(q, p)?;
    if q >= 1 << 31 {
        return Err(Error::Precondition(format!("q = {q} is too large")));
    }
    let phi = vec![1; p as usize];
    Ok(ffpoly::distinct_degree(&phi, q)
        .into_iter()
        .flat_map(|(d, count)| std::iter::repeat_n(d, count))
        .collect())
}

/// `Φ_p mod q` has exactly `(p − 1)/f` irreducible factors, all of degree
/// `f = residue_degree(q, p)`.
pub fn splitting_pattern_check(q: u64, p: u32) -> Result<bool> {
    let f = residue_degree(q, p)?;
    let degrees = cyclotomic_factor_degrees(q, p)?;
    Ok(degrees.len() as u64 == (p as u64 - 1) / f && degrees.iter().all(|&d| d == f))
}

/// `p | Σ_{k<t} aᵏ` with `t` the order of `a` modulo `p`.
pub fn order_lemma_check(a: i64, p: u32) -> Result<bool> {
    check_supported(p)?;
    let r = a.rem_euclid(p as i64) as u64;
    if r <= 1 {
        return Err(Error::Precondition(format!("a = {a} is 0 or 1 mod {p}")));
    }
    let t = multiplicative_order(r, p as u64).expect("a is a unit mod p");
    let base = BigInt::from(a);
    let mut sum = BigInt::zero();
    let mut term = BigInt::one();
    for _ in 0..t {
        sum += &term;
        term *= &base;
    }
    Ok(sum.is_multiple_of(&BigInt::from(p)))
}

/// `(1 − ζ_p)^k − 1`.
pub fn cyc_mersenne(p: u32, k: u64) -> Result<CycElement> {
    let power = CycElement::one_minus_zeta(p)?.pow(k);
    cyc_sub(&power, &CycElement::one(p)?)
}

pub fn cyc_mersenne_norm(p: u32, k: u64) -> Result<BigInt> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    Ok(cyc_norm(&cyc_mersenne(p, k)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub p: u32,
    pub k: u64,
    #[serde(with = "crate::decimal")]
    pub mersenne_norm: BigInt,
    pub norm_is_prime: bool,
}

/// Mersenne norms for `k ≤ k_max` with `k ≡ ±1 (mod 4p)`; records only.
pub fn conjecture_harness(p: u32, k_max: u64) -> Result<Vec<ConjectureRow>> {
    check_supported(p)?;
    let m = 4 * p as u64;
    let ks: Vec<u64> = (1..=k_max).filter(|k| k % m == 1 || k % m == m - 1).collect();
    ks.into_par_iter()
        .map(|k| {
            let mersenne_norm = cyc_mersenne_norm(p, k)?;
            Ok(ConjectureRow {
                p,
                k,
                norm_is_prime: is_rational_prime(&mersenne_norm.abs()),
                mersenne_norm,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddEntry {
    /// Residue class modulo `1 − ζ_p`, in `1..p`.
    pub j: u32,
    pub e: u32,
    #[serde(default)]
    pub special: bool,
}

/// Exponent pattern `ε ψ₀ᵏ Π ψᵉ` of an odd element, grouped by residue class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractOddFactorization {
    pub p: u32,
    /// Whether a unit factor is written out; carried along, not validated.
    #[serde(default)]
    pub unit: bool,
    pub entries: Vec<OddEntry>,
}

/// The exponent condition under which `p | N(σ(ψᵉ))` for `ψ` in class `j`:
/// `e ≡ −1 (mod p)` for `j = 1`, else `e ≡ −1 (mod t)` with `t` the order of `j`.
pub fn special_exponent_condition(p: u32, j: u32, e: u32) -> bool {
    let modulus = if j == 1 {
        p as u64
    } else {
        multiplicative_order(j as u64, p as u64).expect("j is a unit mod p")
    };
    (e as u64 + 1).is_multiple_of(modulus)
}

pub fn validate_general_odd_form(f: &AbstractOddFactorization) -> Result<(bool, Option<String>)> {
    check_supported(f.p).map_err(|_| Error::Malformed(format!("unsupported p = {}", f.p)))?;
    for entry in &f.entries {
        if entry.j == 0 || entry.j >= f.p {
            return Err(Error::Malformed(format!("residue class {} outside 1..{}", entry.j, f.p)));
        }
        if entry.e == 0 {
            return Err(Error::Malformed("exponents must be positive".into()));
        }
    }
    let specials: Vec<&OddEntry> = f.entries.iter().filter(|e| e.special).collect();
    if specials.len() > 1 {
        return Err(Error::Malformed("more than one special entry".into()));
    }
    let Some(special) = specials.first() else {
        return Ok((false, Some("no special entry".into())));
    };
    if !special_exponent_condition(f.p, special.j, special.e) {
        return Ok((
            false,
            Some(format!(
                "special exponent {} fails the congruence for class {}",
                special.e, special.j
            )),
        ));
    }
    for entry in f.entries.iter().filter(|e| !e.special) {
        if special_exponent_condition(f.p, entry.j, entry.e) {
            return Ok((
                false,
                Some(format!(
                    "non-special exponent {} in class {} meets the special congruence",
                    entry.e, entry.j
                )),
            ));
        }
    }
    Ok((true, None))
}

/// Dense polynomials over `F_q`, low degree first, no trailing zeros.
mod ffpoly {
    type Poly = Vec<u64>;

    fn trim(mut a: Poly) -> Poly {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn deg(a: &Poly) -> Option<usize> {
        a.len().checked_sub(1)
    }

    fn inv(a: u64, q: u64) -> u64 {
        let mut acc = 1;
        let mut base = a % q;
        let mut e = q - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            e >>= 1;
        }
        acc
    }

    fn sub(a: &Poly, b: &Poly, q: u64) -> Poly {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).unwrap_or(&0) + q - b.get(i).unwrap_or(&0)) % q)
            .collect();
        trim(out)
    }

    fn mul(a: &Poly, b: &Poly, q: u64) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % q;
            }
        }
        trim(out)
    }

    fn divrem(a: &Poly, b: &Poly, q: u64) -> (Poly, Poly) {
        let db = deg(b).expect("division by the zero polynomial");
        let lead = inv(b[db], q);
        let mut rem = a.clone();
        let mut quot = vec![0; a.len().saturating_sub(db).max(1)];
        while let Some(dr) = deg(&rem) {
            if dr < db {
                break;
            }
            let c = rem[dr] * lead % q;
            let shift = dr - db;
            quot[shift] = c;
            for (i, y) in b.iter().enumerate() {
                rem[i + shift] = (rem[i + shift] + q - c * y % q) % q;
            }
            rem = trim(rem);
        }
        (trim(quot), rem)
    }

    fn gcd(a: &Poly, b: &Poly, q: u64) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = divrem(&a, &b, q).1;
            a = b;
            b = r;
        }
        if let Some(d) = deg(&a) {
            let l = inv(a[d], q);
            a = a.iter().map(|c| c * l % q).collect();
        }
        a
    }

    fn pow_mod(base: &Poly, mut e: u64, m: &Poly, q: u64) -> Poly {
        let mut acc = vec![1];
        let mut b = divrem(base, m, q).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = divrem(&mul(&acc, &b, q), m, q).1;
            }
            b = divrem(&mul(&b, &b, q), m, q).1;
            e >>= 1;
        }
        acc
    }

    /// `(degree, count)` pairs for a squarefree polynomial given over the
    /// integers.
    pub fn distinct_degree(f: &[i64], q: u64) -> Vec<(u64, usize)> {
        let mut f = trim(f.iter().map(|c| c.rem_euclid(q as i64) as u64).collect());
        let x = vec![0, 1];
        let mut h = x.clone();
        let mut out = Vec::new();
        let mut i = 1;
        while deg(&f).is_some_and(|d| d >= 2 * i) {
            h = pow_mod(&h, q, &f, q);
            let g = gcd(&f, &sub(&h, &x, q), q);
            let dg = deg(&g).unwrap_or(0);
            if dg > 0 {
                out.push((i as u64, dg / i));
                f = divrem(&f, &g, q).0;
                h = divrem(&h, &f, q).1;
            }
            i += 1;
        }
        if let Some(d) = deg(&f) {
            if d > 0 {
                out.push((d as u64, 1));
            }
        }
        out
    }

}
