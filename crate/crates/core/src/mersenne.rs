//! Generalized Mersenne numbers `πᵏ − 1` over the minimal prime `π` of each
//! quadratic ring, and the even (norm-)perfect integers built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::is_ring_prime;
use crate::rational::is_rational_prime;
use crate::ring::{QuadInt, RingId, Unit};

/// Exponents per parallel batch; the cache is flushed after each batch.
pub const SCAN_CHUNK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MersenneRecord {
    pub ring: RingId,
    pub k: u64,
    pub element: QuadInt,
    #[serde(with = "crate::decimal")]
    pub norm: BigInt,
    /// `k mod 12` for Eisenstein, `k mod 8` for Gaussian.
    pub k_residue: u64,
    pub is_prime: bool,
    pub prime_exponent_ok: bool,
}

/// Modulus used for exponent residues in `ring`.
pub fn residue_modulus(ring: RingId) -> u64 {
    match ring {
        RingId::Gaussian => 8,
        RingId::Eisenstein => 12,
    }
}

fn is_prime_u64(k: u64) -> bool {
    is_rational_prime(&BigInt::from(k))
}

/// `π^k − 1` for the minimal prime `π` of `ring`.
pub fn mersenne_element(ring: RingId, k: u64) -> QuadInt {
    &ring.minimal_prime().pow(k) - &QuadInt::one(ring)
}

pub fn mersenne(ring: RingId, k: u64) -> Result<MersenneRecord> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let element = mersenne_element(ring, k);
    let norm = element.norm();
    let is_prime = !element.is_unit() && is_ring_prime(&element)?;
    Ok(MersenneRecord {
        ring,
        k,
        k_residue: k % residue_modulus(ring),
        is_prime,
        prime_exponent_ok: is_prime_u64(k),
        element,
        norm,
    })
}

/// Norm of the Eisenstein `(2+ω)^k − 1` from its residue class mod 12, for
/// the classes `0, ±1, ±2`.
pub fn mersenne_norm_closed_form(k: u64) -> Option<BigInt> {
    if k < 2 {
        return None;
    }
    let three = BigInt::from(3u32);
    let pow3 = |e: u64| three.pow(e as u32);
    let full = pow3(k);
    match k % 12 {
        2 | 10 => Some(full - pow3(k / 2) + 1),
        1 | 11 => Some(full - pow3(k.div_ceil(2)) + 1),
        0 => Some(full - pow3(k / 2) * 2u32 + 1),
        _ => None,
    }
}

/// Cofactors `(π^m − 1, Σ_{j<n} π^{mj})` of `π^k − 1` for `k = m·n`, with
/// `m` the least prime factor of `k`.
pub fn composite_exponent_witness(ring: RingId, k: u64) -> Result<(QuadInt, QuadInt)> {
    if k < 4 || is_prime_u64(k) {
        return Err(Error::Precondition(format!("{k} is not a composite exponent")));
    }
    let m = (2..k).find(|d| k.is_multiple_of(*d)).expect("composite has a proper factor");
    let n = k / m;
    let step = ring.minimal_prime().pow(m);
    let left = &step - &QuadInt::one(ring);
    let mut right = QuadInt::zero(ring);
    let mut term = QuadInt::one(ring);
    for _ in 0..n {
        right = &right + &term;
        term = &term * &step;
    }
    Ok((left, right))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Conjugated,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Variant> {
        match s {
            "plain" => Ok(Variant::Plain),
            "conjugated" => Ok(Variant::Conjugated),
            _ => Err(Error::Parse {
                text: s.into(),
                reason: "expected plain or conjugated".into(),
            }),
        }
    }
}

/// `ε · π^{k−1} · M` (or `· conj(M)`) where `M = π^k − 1` must be prime.
pub fn construct_even_candidate(ring: RingId, k: u64, variant: Variant, unit: &Unit) -> Result<QuadInt> {
    if unit.as_elem().ring() != ring {
        return Err(Error::RingMismatch(unit.as_elem().ring(), ring));
    }
    let record = mersenne(ring, k)?;
    if !record.is_prime {
        return Err(Error::CompositeMersenne(k));
    }
    let m = match variant {
        Variant::Plain => record.element,
        Variant::Conjugated => record.element.conjugate(),
    };
    Ok(unit.as_elem() * &(&ring.minimal_prime().pow(k - 1) * &m))
}

/// The unit that makes the plain construction perfect for an exponent in
/// the residue class `1` (mod 12 or mod 8): `−ω` or `−i`.
pub fn perfect_unit(ring: RingId) -> Unit {
    Unit::new(-&QuadInt::new(ring, 0, 1)).expect("θ is a unit")
}

/// Residue classes of the exponent `k` modulo [`residue_modulus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueFilter {
    residues: Vec<i64>,
}

impl ResidueFilter {
    pub fn new(residues: Vec<i64>) -> Self {
        ResidueFilter { residues }
    }

    pub fn accepts(&self, ring: RingId, k: u64) -> bool {
        let m = residue_modulus(ring) as i64;
        let r = (k as i64).rem_euclid(m);
        self.residues.iter().any(|x| x.rem_euclid(m) == r)
    }
}

/// Comma-separated signed residues, `±r` standing for both `r` and `−r`.
impl FromStr for ResidueFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<ResidueFilter> {
        let bad = |reason: &str| Error::Parse {
            text: s.into(),
            reason: reason.into(),
        };
        let mut residues = Vec::new();
        for part in s.split(',').map(str::trim) {
            if let Some(rest) = part.strip_prefix('±') {
                let r: i64 = rest.parse().map_err(|_| bad("bad residue"))?;
                residues.extend([r, -r]);
            } else {
                residues.push(part.parse().map_err(|_| bad("bad residue"))?);
            }
        }
        if residues.is_empty() {
            return Err(bad("empty filter"));
        }
        Ok(ResidueFilter { residues })
    }
}

impl fmt::Display for ResidueFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.residues.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Default)]
pub struct ScanOptions<'a> {
    pub filter: Option<ResidueFilter>,
    pub cache: Option<&'a Path>,
    /// Reuse validated records from an existing cache instead of truncating it.
    pub resume: bool,
    pub progress: Option<&'a (dyn Fn(usize, usize) + Sync)>,
}

/// Exponents the scan visits: primes up to `k_max`, optionally filtered.
pub fn scan_exponents(ring: RingId, k_max: u64, filter: Option<&ResidueFilter>) -> Vec<u64> {
    (2..=k_max)
        .filter(|&k| is_prime_u64(k))
        .filter(|&k| filter.is_none_or(|f| f.accepts(ring, k)))
        .collect()
}

pub fn scan(ring: RingId, k_max: u64, filter: Option<&ResidueFilter>) -> Result<Vec<MersenneRecord>> {
    scan_with(
        ring,
        k_max,
        &ScanOptions {
            filter: filter.cloned(),
            ..ScanOptions::default()
        },
    )
}

/// Records for every prime exponent `k ≤ k_max`, ordered by `k`.
pub fn scan_with(ring: RingId, k_max: u64, opts: &ScanOptions<'_>) -> Result<Vec<MersenneRecord>> {
    if k_max < 2 {
        return Err(Error::Precondition("k_max must be at least 2".into()));
    }
    let wanted = scan_exponents(ring, k_max, opts.filter.as_ref());
    let mut done = BTreeMap::new();
    let mut writer = None;
    if let Some(path) = opts.cache {
        if opts.resume && path.exists() {
            done = load_cache(path, ring)?;
        }
        let file = OpenOptions::new()
            .create(true)
            .write(true)
            .append(opts.resume)
            .truncate(!opts.resume)
            .open(path)?;
        writer = Some(BufWriter::new(file));
    }
    let todo: Vec<u64> = wanted.iter().copied().filter(|k| !done.contains_key(k)).collect();
    let total = wanted.len();
    let mut finished = total - todo.len();
    for chunk in todo.chunks(SCAN_CHUNK) {
        let records = chunk
            .par_iter()
            .map(|&k| mersenne(ring, k))
            .collect::<Result<Vec<_>>>()?;
        if let Some(w) = writer.as_mut() {
            for r in &records {
                serde_json::to_writer(&mut *w, r)?;
                w.write_all(b"\n")?;
            }
            w.flush()?;
        }
        finished += records.len();
        for r in records {
            done.insert(r.k, r);
        }
        if let Some(cb) = opts.progress {
            cb(finished, total);
        }
    }
    Ok(wanted.iter().filter_map(|k| done.remove(k)).collect())
}

/// Cached records for `ring` whose element and norm survive recomputation.
pub fn load_cache(path: &Path, ring: RingId) -> Result<BTreeMap<u64, MersenneRecord>> {
    let mut out = BTreeMap::new();
    for line in BufReader::new(File::open(path)?).lines() {
        let line = line?;
        let Ok(record) = serde_json::from_str::<MersenneRecord>(&line) else {
            continue;
        };
        if record.ring != ring || record.k == 0 {
            continue;
        }
        let element = mersenne_element(ring, record.k);
        if record.element == element
            && record.norm == element.norm()
            && record.k_residue == record.k % residue_modulus(ring)
            && record.prime_exponent_ok == is_prime_u64(record.k)
        {
            out.insert(record.k, record);
        }
    }
    Ok(out)
}

/// Lower bound on the norm of an odd prime divisor of an even norm-perfect
/// Eisenstein integer, cleared of denominators: `5·N(ψ)·(3^k − N_M) > 13·N_M`.
pub fn odd_divisor_bound_holds(psi_norm: &BigInt, k: u64, mersenne_norm: &BigInt) -> bool {
    let gap = BigInt::from(3u32).pow(k as u32) - mersenne_norm;
    psi_norm * 5u32 * gap > mersenne_norm * 13u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{classify, Status};

    #[test]
    fn mersenne_examples() {
        let r = mersenne(RingId::Gaussian, 7).unwrap();
        assert_eq!(r.element, QuadInt::new(RingId::Gaussian, 7, -8));
        assert_eq!(r.norm, BigInt::from(113));
        assert!(r.is_prime && r.prime_exponent_ok);
        assert_eq!(r.k_residue, 7);

        let r = mersenne(RingId::Eisenstein, 11).unwrap();
        assert_eq!(r.norm, BigInt::from(176419));
        assert!(r.is_prime);
        assert_eq!(r.k_residue, 11);

        let r = mersenne(RingId::Gaussian, 1).unwrap();
        assert_eq!(r.element, QuadInt::new(RingId::Gaussian, 0, 1));
        assert!(!r.is_prime);
        assert!(mersenne(RingId::Gaussian, 0).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(mersenne_norm_closed_form(11), Some(BigInt::from(176419)));
        assert_eq!(mersenne_norm_closed_form(12), Some(BigInt::from(529984)));
        assert_eq!(mersenne_norm_closed_form(3), None);
        assert_eq!(mersenne_norm_closed_form(1), None);
        for k in 2..=60 {
            if let Some(n) = mersenne_norm_closed_form(k) {
                assert_eq!(n, mersenne_element(RingId::Eisenstein, k).norm(), "k = {k}");
            }
        }
    }

    #[test]
    fn witness_examples() {
        let e = |a, b| QuadInt::new(RingId::Eisenstein, a, b);
        let (l, r) = composite_exponent_witness(RingId::Eisenstein, 4).unwrap();
        assert_eq!((l.clone(), r.clone()), (e(2, 3), e(4, 3)));
        assert_eq!(&l * &r, mersenne_element(RingId::Eisenstein, 4));

        let (l, r) = composite_exponent_witness(RingId::Gaussian, 4).unwrap();
        assert_eq!(&l * &r, QuadInt::from_int(RingId::Gaussian, -5));
        let (l, r) = composite_exponent_witness(RingId::Gaussian, 9).unwrap();
        assert_eq!(&l * &r, mersenne_element(RingId::Gaussian, 9));

        assert!(composite_exponent_witness(RingId::Gaussian, 7).is_err());
        assert!(composite_exponent_witness(RingId::Gaussian, 3).is_err());
    }

    #[test]
    fn small_constructions() {
        let one = Unit::one(RingId::Gaussian);
        let eta = construct_even_candidate(RingId::Gaussian, 7, Variant::Conjugated, &one).unwrap();
        assert_eq!(eta, &QuadInt::new(RingId::Gaussian, 1, 1).pow(6) * &QuadInt::new(RingId::Gaussian, 7, 8));
        let c = classify(&eta, true).unwrap();
        assert_eq!(c.status, Status::NormPerfect);
        assert_eq!(c.primitive, Some(true));

        let one = Unit::one(RingId::Eisenstein);
        let alpha = construct_even_candidate(RingId::Eisenstein, 11, Variant::Conjugated, &one).unwrap();
        assert_eq!(classify(&alpha, false).unwrap().status, Status::NormPerfect);

        assert!(matches!(
            construct_even_candidate(RingId::Eisenstein, 4, Variant::Plain, &one),
            Err(Error::CompositeMersenne(4))
        ));
    }

    #[test]
    fn scan_examples() {
        let ks = |v: &[MersenneRecord]| v.iter().map(|r| r.k).collect::<Vec<_>>();
        let recs = scan(RingId::Eisenstein, 12, None).unwrap();
        assert_eq!(ks(&recs), vec![2, 3, 5, 7, 11]);
        assert!(recs.iter().find(|r| r.k == 11).unwrap().is_prime);

        let f: ResidueFilter = "±1".parse().unwrap();
        let recs = scan(RingId::Gaussian, 12, Some(&f)).unwrap();
        assert_eq!(ks(&recs), vec![7]);
        assert!(recs[0].is_prime);

        assert!(!ks(&scan(RingId::Eisenstein, 4, None).unwrap()).contains(&4));
        assert!(scan(RingId::Eisenstein, 1, None).is_err());
    }

    #[test]
    fn cache_resume_discards_bad_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let opts = ScanOptions {
            cache: Some(&path),
            ..ScanOptions::default()
        };
        let first = scan_with(RingId::Eisenstein, 30, &opts).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), first.len());

        // corrupt the k = 11 record and append garbage
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let idx = first.iter().position(|r| r.k == 11).unwrap();
        let mut bad = first[idx].clone();
        bad.norm = BigInt::from(7);
        lines[idx] = serde_json::to_string(&bad).unwrap();
        lines.push("not json".into());
        std::fs::write(&path, lines.join("\n") + "\n").unwrap();

        let loaded = load_cache(&path, RingId::Eisenstein).unwrap();
        assert!(!loaded.contains_key(&11));
        assert_eq!(loaded.len(), first.len() - 1);

        let resumed = scan_with(
            RingId::Eisenstein,
            30,
            &ScanOptions {
                cache: Some(&path),
                resume: true,
                ..ScanOptions::default()
            },
        )
        .unwrap();
        assert_eq!(resumed, first);
    }

    #[test]
    fn filter_parsing() {
        let f: ResidueFilter = "1, -1".parse().unwrap();
        assert!(f.accepts(RingId::Eisenstein, 13));
        assert!(f.accepts(RingId::Eisenstein, 11));
        assert!(!f.accepts(RingId::Eisenstein, 5));
        assert!("".parse::<ResidueFilter>().is_err());
        assert!("x".parse::<ResidueFilter>().is_err());
    }

    #[test]
    fn odd_divisor_bound_at_eleven() {
        let n = BigInt::from(176419);
        assert!(odd_divisor_bound_holds(&n, 11, &n));
        assert!(!odd_divisor_bound_holds(&BigInt::from(1), 11, &n));
    }
}
