//! Exhaustive sector scans and structural validators for odd norm-perfect
//! shapes.

use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Roots;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divisor::{
    classify, odd_power_divisibility_predicate, sigma, Classification, ClassificationRecord, Status,
};
use crate::error::{Error, Result};
use crate::factorization::{factor, minimal_exponent, primes_up_to_norm, Factorization};
use crate::rational::is_rational_prime;
use crate::ring::{QuadInt, RingId};

pub const DEFAULT_SCAN_LIMIT: u64 = 200_000;
pub const DEFAULT_PRIME_SEARCH_LIMIT: u64 = 10_000_000;
/// Classes between two checkpoint records.
pub const CHECKPOINT_EVERY: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    All,
    Odd,
    Even,
}

impl Parity {
    fn admits(self, x: &QuadInt) -> bool {
        match self {
            Parity::All => true,
            Parity::Odd => !x.is_even(),
            Parity::Even => x.is_even(),
        }
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Parity> {
        match s {
            "all" => Ok(Parity::All),
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            _ => Err(Error::Parse {
                text: s.into(),
                reason: "expected all, odd or even".into(),
            }),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::All => "all",
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

/// Whether an even element whose minimal-prime exponent is `k − 1` can be
/// norm-perfect at all: `k ≡ 0, ±1, ±2 (mod 12)` in `Z[ω]`, `k ≡ 0, ±1
/// (mod 8)` in `Z[i]`. Elements failing this are abundant.
pub fn even_exponent_admissible(ring: RingId, k: u64) -> bool {
    match ring {
        RingId::Eisenstein => matches!(k % 12, 0 | 1 | 2 | 10 | 11),
        RingId::Gaussian => matches!(k % 8, 0 | 1 | 7),
    }
}

/// Sector representatives with norm at most `bound`, in `(a, b)` order.
pub fn sector_elements(ring: RingId, bound: u64) -> Vec<QuadInt> {
    strip_range(ring, bound)
        .flat_map(|a| strip(ring, bound, a))
        .collect()
}

fn strip_range(ring: RingId, bound: u64) -> std::ops::RangeInclusive<u64> {
    match ring {
        RingId::Gaussian => 1..=bound.sqrt(),
        // a > b ≥ 0 forces N ≥ 3a²/4
        RingId::Eisenstein => 1..=(4 * bound / 3).sqrt() + 1,
    }
}

fn strip(ring: RingId, bound: u64, a: u64) -> Vec<QuadInt> {
    let bs: Vec<u64> = match ring {
        RingId::Gaussian if a * a <= bound => (0..=(bound - a * a).sqrt()).collect(),
        RingId::Gaussian => Vec::new(),
        RingId::Eisenstein => (0..a).filter(|&b| a * a - a * b + b * b <= bound).collect(),
    };
    bs.into_iter().map(|b| QuadInt::new(ring, a, b)).collect()
}

/// Nonzero lattice points of norm at most `bound`, counted over a box and
/// divided by the number of units.
pub fn lattice_class_count(ring: RingId, bound: u64) -> u64 {
    let r = (4 * bound / 3).sqrt() as i64 + 2;
    let mut count = 0u64;
    for a in -r..=r {
        for b in -r..=r {
            let n = match ring {
                RingId::Gaussian => a * a + b * b,
                RingId::Eisenstein => a * a - a * b + b * b,
            };
            if n >= 1 && n as u64 <= bound {
                count += 1;
            }
        }
    }
    count / ring.unit_count() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub classification: Classification,
    /// Associates `ε·x` with `σ(x) = minimal · ε·x`; filled for norm-perfect findings.
    pub perfect_associates: Vec<QuadInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingRecord {
    #[serde(flatten)]
    pub classification: ClassificationRecord,
    pub perfect_associates: Vec<String>,
}

impl From<&Finding> for FindingRecord {
    fn from(f: &Finding) -> Self {
        FindingRecord {
            classification: ClassificationRecord::from(&f.classification),
            perfect_associates: f.perfect_associates.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub ring: RingId,
    pub norm_bound: u64,
    pub parity: Parity,
    pub pruning: bool,
    pub scanned: u64,
    pub pruned: u64,
    pub findings: Vec<Finding>,
    /// Invariant violations met during the scan.
    pub breaches: Vec<String>,
    pub wall_time_secs: f64,
}

impl SearchReport {
    pub fn norm_perfect(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.classification.status == Status::NormPerfect)
    }

    pub fn to_record(&self) -> SearchReportRecord {
        SearchReportRecord {
            ring: self.ring,
            norm_bound: self.norm_bound,
            parity: self.parity,
            pruning: self.pruning,
            scanned: self.scanned,
            pruned: self.pruned,
            norm_perfect_count: self.norm_perfect().count() as u64,
            findings: self.findings.iter().map(FindingRecord::from).collect(),
            breaches: self.breaches.clone(),
            wall_time_secs: self.wall_time_secs,
        }
    }

    /// One CSV row per finding.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv_writer(out);
        w.write_record([
            "ring", "element", "even", "status", "perfect", "primitive", "norm", "sigma",
            "sigma_norm", "perfect_associates",
        ])
        .map_err(csv_err)?;
        for f in &self.findings {
            let r = ClassificationRecord::from(&f.classification);
            let assoc: Vec<String> = f.perfect_associates.iter().map(ToString::to_string).collect();
            w.write_record([
                r.ring.name().to_string(),
                r.element,
                r.even.to_string(),
                r.status.as_str().to_string(),
                r.perfect.to_string(),
                r.primitive.map_or(String::new(), |p| p.to_string()),
                r.norm,
                r.sigma,
                r.sigma_norm,
                assoc.join(";"),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::Writer::from_writer(out)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Malformed(e.to_string())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReportRecord {
    pub ring: RingId,
    pub norm_bound: u64,
    pub parity: Parity,
    pub pruning: bool,
    pub scanned: u64,
    pub pruned: u64,
    pub norm_perfect_count: u64,
    pub findings: Vec<FindingRecord>,
    pub breaches: Vec<String>,
    pub wall_time_secs: f64,
}

pub struct ScanConfig<'a> {
    pub prune: bool,
    pub limit: u64,
    /// JSON-lines file of completed strip batches; existing batches for the
    /// same scan are replayed and skipped.
    pub checkpoint: Option<&'a Path>,
    pub progress: Option<&'a (dyn Fn(u64, u64) + Sync)>,
}

impl Default for ScanConfig<'_> {
    fn default() -> Self {
        ScanConfig {
            prune: true,
            limit: DEFAULT_SCAN_LIMIT,
            checkpoint: None,
            progress: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CheckpointEntry {
    ring: RingId,
    norm_bound: u64,
    parity: Parity,
    pruning: bool,
    first_a: u64,
    next_a: u64,
    scanned: u64,
    pruned: u64,
    findings: Vec<String>,
}

#[derive(Default)]
struct BatchResult {
    scanned: u64,
    pruned: u64,
    findings: Vec<Finding>,
    breaches: Vec<String>,
}

impl BatchResult {
    fn merge(mut self, other: BatchResult) -> BatchResult {
        self.scanned += other.scanned;
        self.pruned += other.pruned;
        self.findings.extend(other.findings);
        self.breaches.extend(other.breaches);
        self
    }
}

pub fn sector_scan(ring: RingId, norm_bound: u64, parity: Parity) -> Result<SearchReport> {
    sector_scan_with(ring, norm_bound, parity, &ScanConfig::default())
}

/// Classifies one representative of every associate class with norm at
/// most `norm_bound` and reports the non-deficient ones.
///
/// With pruning on, even elements with an inadmissible minimal-prime
/// exponent are counted as pruned instead of classified. With pruning off
/// they are classified and any that fails to be abundant is a breach.
pub fn sector_scan_with(
    ring: RingId,
    norm_bound: u64,
    parity: Parity,
    cfg: &ScanConfig<'_>,
) -> Result<SearchReport> {
    if norm_bound > cfg.limit {
        return Err(Error::BoundExceeded {
            requested: norm_bound,
            limit: cfg.limit,
        });
    }
    let start = Instant::now();
    let strips: Vec<u64> = strip_range(ring, norm_bound).collect();
    let mut total = BatchResult::default();
    let mut resume_from = strips.first().copied().unwrap_or(1);
    let mut writer = None;
    if let Some(path) = cfg.checkpoint {
        if path.exists() {
            for entry in load_checkpoint(path)? {
                let same = entry.ring == ring
                    && entry.norm_bound == norm_bound
                    && entry.parity == parity
                    && entry.pruning == cfg.prune
                    && entry.first_a == resume_from;
                if !same {
                    continue;
                }
                total = total.merge(replay_entry(&entry, ring)?);
                resume_from = entry.next_a;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        writer = Some(BufWriter::new(file));
    }
    let remaining: Vec<u64> = strips.into_iter().filter(|&a| a >= resume_from).collect();
    let class_total = lattice_estimate(ring, norm_bound);
    for batch in batches(ring, norm_bound, &remaining) {
        let result = batch
            .par_iter()
            .map(|&a| scan_strip(ring, norm_bound, a, parity, cfg.prune))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(BatchResult::default(), BatchResult::merge);
        if let Some(w) = writer.as_mut() {
            let entry = CheckpointEntry {
                ring,
                norm_bound,
                parity,
                pruning: cfg.prune,
                first_a: batch[0],
                next_a: batch[batch.len() - 1] + 1,
                scanned: result.scanned,
                pruned: result.pruned,
                findings: result
                    .findings
                    .iter()
                    .map(|f| f.classification.element.to_string())
                    .collect(),
            };
            serde_json::to_writer(&mut *w, &entry)?;
            w.write_all(b"\n")?;
            w.flush()?;
        }
        total = total.merge(result);
        if let Some(cb) = cfg.progress {
            cb(total.scanned + total.pruned, class_total);
        }
    }
    Ok(SearchReport {
        ring,
        norm_bound,
        parity,
        pruning: cfg.prune,
        scanned: total.scanned,
        pruned: total.pruned,
        findings: total.findings,
        breaches: total.breaches,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

fn lattice_estimate(ring: RingId, bound: u64) -> u64 {
    strip_range(ring, bound).map(|a| strip(ring, bound, a).len() as u64).sum()
}

/// Consecutive strips grouped so each group holds about [`CHECKPOINT_EVERY`] classes.
fn batches(ring: RingId, bound: u64, strips: &[u64]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut size = 0;
    for &a in strips {
        current.push(a);
        size += strip(ring, bound, a).len();
        if size >= CHECKPOINT_EVERY {
            out.push(std::mem::take(&mut current));
            size = 0;
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn load_checkpoint(path: &Path) -> Result<Vec<CheckpointEntry>> {
    let mut out = Vec::new();
    for line in BufReader::new(File::open(path)?).lines() {
        if let Ok(entry) = serde_json::from_str(&line?) {
            out.push(entry);
        }
    }
    Ok(out)
}

/// Re-classifies the findings stored in a checkpoint entry.
fn replay_entry(entry: &CheckpointEntry, ring: RingId) -> Result<BatchResult> {
    let mut result = BatchResult {
        scanned: entry.scanned,
        pruned: entry.pruned,
        ..BatchResult::default()
    };
    for text in &entry.findings {
        let x = QuadInt::parse(ring, text)?;
        let finding = examine(&x)?;
        match finding {
            Some(f) => result.findings.push(f),
            None => result
                .breaches
                .push(format!("checkpointed finding {x} is deficient on replay")),
        }
    }
    Ok(result)
}

fn scan_strip(ring: RingId, bound: u64, a: u64, parity: Parity, prune: bool) -> Result<BatchResult> {
    let mut out = BatchResult::default();
    for x in strip(ring, bound, a) {
        if !parity.admits(&x) {
            continue;
        }
        let inadmissible = x.is_even()
            && !even_exponent_admissible(ring, minimal_exponent(&x)? as u64 + 1);
        if inadmissible && prune {
            out.pruned += 1;
            continue;
        }
        out.scanned += 1;
        let Some(finding) = examine(&x)? else {
            if inadmissible {
                out.breaches.push(format!("{x}: inadmissible exponent but deficient"));
            }
            continue;
        };
        let c = &finding.classification;
        if inadmissible && c.status != Status::Abundant {
            out.breaches
                .push(format!("{x}: inadmissible exponent but {}", c.status.as_str()));
        }
        if c.status == Status::NormPerfect && !x.is_even() {
            let conforms = match ring {
                RingId::Gaussian => validate_ward_form(&x)?,
                RingId::Eisenstein => validate_odd_form(&x)?.conforms,
            };
            if !conforms {
                out.breaches
                    .push(format!("{x}: odd norm-perfect but fails the structural validator"));
            }
        }
        if c.perfect && c.status != Status::NormPerfect {
            out.breaches.push(format!("{x}: perfect but not norm-perfect"));
        }
        out.findings.push(finding);
    }
    Ok(out)
}

/// Classification of a non-deficient `x`, with its perfect associates.
fn examine(x: &QuadInt) -> Result<Option<Finding>> {
    let c = classify(x, true)?;
    if c.status == Status::Deficient {
        return Ok(None);
    }
    let mut perfect_associates = Vec::new();
    if c.status == Status::NormPerfect {
        let minimal = x.ring().minimal_prime();
        for y in x.associates() {
            if c.sigma == &minimal * &y {
                perfect_associates.push(y);
            }
        }
    }
    Ok(Some(Finding {
        classification: c,
        perfect_associates,
    }))
}

/// One prime of an odd factorization, with its residue modulo the minimal prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddFormEntry {
    pub prime: String,
    pub exponent: u32,
    pub residue: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddFormReport {
    pub element: String,
    pub unit: String,
    /// The unique prime whose power contributes the factor 3 to the norm of σ.
    pub special: Option<OddFormEntry>,
    pub p1: Vec<OddFormEntry>,
    pub p2: Vec<OddFormEntry>,
    pub conforms: bool,
    pub violated_condition: Option<String>,
}

fn require_odd(x: &QuadInt, ring: RingId) -> Result<()> {
    if x.ring() != ring {
        return Err(Error::RingMismatch(x.ring(), ring));
    }
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if x.is_even() {
        return Err(Error::Precondition(format!("{x} is even")));
    }
    Ok(())
}

pub fn validate_odd_form(x: &QuadInt) -> Result<OddFormReport> {
    require_odd(x, RingId::Eisenstein)?;
    Ok(validate_odd_form_factored(&factor(x)?))
}

/// Odd-form check over a factorization, which may be built symbolically.
///
/// Conforms iff exactly one prime `ψ₀` has the exponent that makes
/// `3 | N(σ(ψ₀ᵏ))` (residue 1 with `k ≡ 2 mod 3`, or residue 2 with `k`
/// odd); every other residue-1 exponent is then `≢ 2 mod 3` and every other
/// residue-2 exponent even.
pub fn validate_odd_form_factored(f: &Factorization) -> OddFormReport {
    let mut special = Vec::new();
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    let mut even_prime = false;
    for (p, e) in &f.factors {
        let entry = OddFormEntry {
            prime: p.to_string(),
            exponent: *e,
            residue: p.residue_mod_minimal(),
        };
        if entry.residue == 0 {
            even_prime = true;
            continue;
        }
        if odd_power_divisibility_predicate(p, *e as u64) {
            special.push(entry);
        } else if entry.residue == 1 {
            p1.push(entry);
        } else {
            p2.push(entry);
        }
    }
    let violated_condition = if even_prime {
        Some("the element is even".to_string())
    } else {
        match special.len() {
            1 => None,
            0 => Some("no prime satisfies the special exponent condition".to_string()),
            n => Some(format!(
                "{n} primes satisfy the special exponent condition: {}",
                special.iter().map(|s| s.prime.as_str()).collect::<Vec<_>>().join(", ")
            )),
        }
    };
    let conforms = violated_condition.is_none();
    OddFormReport {
        element: f.recompose().to_string(),
        unit: f.unit.to_string(),
        special: if conforms { special.pop() } else { None },
        p1,
        p2,
        conforms,
        violated_condition,
    }
}

/// Exactly one prime of `x` has an odd exponent.
pub fn validate_ward_form(x: &QuadInt) -> Result<bool> {
    require_odd(x, RingId::Gaussian)?;
    Ok(ward_form_factored(&factor(x)?))
}

pub fn ward_form_factored(f: &Factorization) -> bool {
    f.factors.iter().filter(|(_, e)| e % 2 == 1).count() == 1
}

/// Exactly one exponent is `≡ 2 (mod 3)` and all others are `≡ 0 (mod 3)`.
pub fn validate_parker_form(x: &QuadInt) -> Result<bool> {
    require_odd(x, RingId::Eisenstein)?;
    Ok(parker_form_factored(&factor(x)?))
}

pub fn parker_form_factored(f: &Factorization) -> bool {
    let twos = f.factors.iter().filter(|(_, e)| e % 3 == 2).count();
    let zeros = f.factors.iter().filter(|(_, e)| e % 3 == 0).count();
    twos == 1 && twos + zeros == f.factors.len()
}

/// Left side minus right side of `3(a² − ab + b²) = (a+1)² − (a+1)b + b²`.
pub fn normperfect_prime_defect(a: i64, b: i64) -> i64 {
    let n = |x: i64, y: i64| x * x - x * y + y * y;
    3 * n(a, b) - n(a + 1, b)
}

/// Integer solutions with `|a|, |b| ≤ bound` of the equation forced by a
/// norm-perfect Eisenstein prime `a + bω`.
///
/// For fixed `a` it is the quadratic `2b² + (1 − 2a)b + 2a² − 2a − 1 = 0`
/// with discriminant `−12a² + 12a + 9`.
pub fn no_normperfect_prime_equation(bound: i64) -> Result<Vec<(i64, i64)>> {
    if bound < 1 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let mut out = Vec::new();
    for a in -bound..=bound {
        let disc = -12 * (a as i128) * (a as i128) + 12 * a as i128 + 9;
        if disc < 0 {
            continue;
        }
        let root = disc.sqrt();
        if root * root != disc {
            continue;
        }
        let mut bs: Vec<i128> = [2 * a as i128 - 1 - root, 2 * a as i128 - 1 + root]
            .into_iter()
            .filter(|num| num % 4 == 0)
            .map(|num| num / 4)
            .collect();
        bs.dedup();
        for b in bs {
            if b.abs() <= bound as i128 {
                debug_assert_eq!(normperfect_prime_defect(a, b as i64), 0);
                out.push((a, b as i64));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkCheck {
    pub k: u64,
    #[serde(with = "crate::decimal")]
    pub n: BigInt,
    pub norm_perfect: bool,
    pub mersenne_prime: bool,
    /// For a prime `2^k − 1`: it factors as two non-associate conjugate primes,
    /// each to the first power.
    pub splits_into_conjugates: Option<bool>,
}

impl RemarkCheck {
    pub fn holds(&self) -> bool {
        !self.norm_perfect && self.splits_into_conjugates != Some(false)
    }
}

/// Classifies `2^{k−1}(2^k − 1)` in `Z[ω]` for a prime `k > 2`.
pub fn check_rational_perfect_remark(k: u64) -> Result<RemarkCheck> {
    if k <= 2 || !is_rational_prime(&BigInt::from(k)) {
        return Err(Error::Precondition(format!("k = {k} must be a prime above 2")));
    }
    let ring = RingId::Eisenstein;
    let m: BigInt = (BigInt::from(1) << k) - 1;
    let n: BigInt = (BigInt::from(1) << (k - 1)) * &m;
    let c = classify(&QuadInt::from_int(ring, n.clone()), false)?;
    let mersenne_prime = is_rational_prime(&m);
    let splits_into_conjugates = if mersenne_prime {
        let f = factor(&QuadInt::from_int(ring, m))?;
        Some(match f.factors.as_slice() {
            [(p, 1), (q, 1)] => {
                let conj = p.conjugate().canonical()?;
                &conj == q && p != q
            }
            _ => false,
        })
    } else {
        None
    };
    Ok(RemarkCheck {
        k,
        n,
        norm_perfect: c.status == Status::NormPerfect,
        mersenne_prime,
        splits_into_conjugates,
    })
}

pub fn find_normperfect_primes(ring: RingId, norm_bound: u64) -> Result<Vec<QuadInt>> {
    find_normperfect_primes_with_limit(ring, norm_bound, DEFAULT_PRIME_SEARCH_LIMIT)
}

/// Sector-canonical primes `ψ` with `N(1 + ψ) = N(minimal)·N(ψ)`.
pub fn find_normperfect_primes_with_limit(ring: RingId, norm_bound: u64, limit: u64) -> Result<Vec<QuadInt>> {
    if norm_bound > limit {
        return Err(Error::BoundExceeded {
            requested: norm_bound,
            limit,
        });
    }
    let factor = BigInt::from(ring.residue_characteristic());
    let one = QuadInt::one(ring);
    let hits = primes_up_to_norm(ring, norm_bound)
        .into_par_iter()
        .filter(|p| (&one + p).norm() == &factor * p.norm())
        .collect::<Vec<_>>();
    debug_assert!(hits.iter().all(|p| sigma(p).map(|s| s == &one + p).unwrap_or(false)));
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Unit;

    fn e(a: i64, b: i64) -> QuadInt {
        QuadInt::new(RingId::Eisenstein, a, b)
    }

    fn g(a: i64, b: i64) -> QuadInt {
        QuadInt::new(RingId::Gaussian, a, b)
    }

    #[test]
    fn sector_enumeration_is_complete() {
        for ring in RingId::ALL {
            for bound in [1, 2, 3, 7, 50, 997, 10_000] {
                let elems = sector_elements(ring, bound);
                assert!(elems.iter().all(|x| x.in_sector() && x.norm() <= BigInt::from(bound)));
                assert_eq!(elems.len() as u64, lattice_class_count(ring, bound), "{ring} {bound}");
            }
        }
    }

    #[test]
    fn scan_examples() {
        let r = sector_scan(RingId::Gaussian, 30, Parity::Odd).unwrap();
        assert!(r.norm_perfect().any(|f| f.classification.element == g(2, 1)));
        assert!(r.breaches.is_empty());

        let r = sector_scan(RingId::Eisenstein, 10_000, Parity::Even).unwrap();
        assert_eq!(r.norm_perfect().count(), 0);
        assert!(r.breaches.is_empty());

        for ring in RingId::ALL {
            let r = sector_scan(ring, 1, Parity::All).unwrap();
            assert_eq!(r.scanned, 1);
            assert!(r.findings.is_empty());
        }
        assert!(matches!(
            sector_scan(RingId::Gaussian, 300_000, Parity::All),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn pruning_loses_nothing() {
        for ring in RingId::ALL {
            let cfg = ScanConfig {
                prune: false,
                ..ScanConfig::default()
            };
            let full = sector_scan_with(ring, 20_000, Parity::Even, &cfg).unwrap();
            let pruned = sector_scan(ring, 20_000, Parity::Even).unwrap();
            assert!(full.breaches.is_empty(), "{:?}", full.breaches);
            assert!(pruned.pruned > 0);
            assert_eq!(full.scanned, pruned.scanned + pruned.pruned);
            let np = |r: &SearchReport| r.norm_perfect().map(|f| f.classification.element.clone()).collect::<Vec<_>>();
            assert_eq!(np(&full), np(&pruned));
        }
    }

    #[test]
    fn gaussian_even_norm_perfect_at_seven() {
        let r = sector_scan(RingId::Gaussian, 10_000, Parity::Even).unwrap();
        let target = (&g(1, 1).pow(6) * &g(7, 8)).canonical().unwrap();
        assert!(r.norm_perfect().any(|f| f.classification.element == target));
    }

    #[test]
    fn checkpoint_resume_matches_fresh_scan() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scan.jsonl");
        let cfg = ScanConfig {
            checkpoint: Some(&path),
            ..ScanConfig::default()
        };
        let fresh = sector_scan(RingId::Gaussian, 60_000, Parity::All).unwrap();
        let first = sector_scan_with(RingId::Gaussian, 60_000, Parity::All, &cfg).unwrap();
        let lines = std::fs::read_to_string(&path).unwrap().lines().count();
        assert!(lines > 1);
        // keep only the first batch, as if interrupted
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.lines().next().unwrap().to_string() + "\n").unwrap();
        let resumed = sector_scan_with(RingId::Gaussian, 60_000, Parity::All, &cfg).unwrap();
        for r in [&first, &resumed] {
            assert_eq!(r.scanned, fresh.scanned);
            assert_eq!(r.findings, fresh.findings);
        }
    }

    #[test]
    fn odd_form_examples() {
        let r = validate_odd_form(&e(3, 1).pow(2)).unwrap();
        assert!(r.conforms);
        let s = r.special.unwrap();
        assert_eq!((s.prime.as_str(), s.exponent, s.residue), ("3+1w", 2, 1));

        let r = validate_odd_form(&(&e(2, 0) * &e(3, 1))).unwrap();
        assert!(r.conforms);
        assert_eq!(r.special.unwrap().prime, "2");
        assert_eq!(r.p1.len(), 1);

        let r = validate_odd_form(&e(10, 0)).unwrap();
        assert!(!r.conforms);
        assert!(r.violated_condition.unwrap().starts_with("2 primes"));

        assert!(validate_odd_form(&e(2, 1)).is_err());
        assert!(validate_odd_form(&g(2, 1)).is_err());
    }

    #[test]
    fn ward_examples() {
        assert!(validate_ward_form(&g(2, 1)).unwrap());
        assert!(validate_ward_form(&(&g(2, 1).pow(3) * &g(3, 2).pow(2))).unwrap());
        assert!(!validate_ward_form(&(&g(2, 1) * &g(3, 2))).unwrap());
        assert!(validate_ward_form(&g(1, 1)).is_err());
    }

    #[test]
    fn parker_examples() {
        let psi = e(3, 1);
        let phi = e(3, 2);
        assert!(validate_parker_form(&psi.pow(2)).unwrap());
        assert!(validate_parker_form(&(&psi.pow(2) * &phi.pow(3))).unwrap());
        assert!(!validate_parker_form(&(&psi.pow(2) * &phi)).unwrap());
    }

    #[test]
    fn parker_form_need_not_conform_to_odd_form() {
        // 2 lies in residue class 2 with an odd exponent, so it is a second
        // special prime beside ψ
        let x = &e(3, 1).pow(2) * &e(2, 0).pow(3);
        assert!(validate_parker_form(&x).unwrap());
        assert!(!validate_odd_form(&x).unwrap().conforms);
    }

    #[test]
    fn equation_solutions() {
        assert_eq!(no_normperfect_prime_equation(1000).unwrap(), vec![(0, -1), (1, 1)]);
        assert_eq!(no_normperfect_prime_equation(1).unwrap(), vec![(0, -1), (1, 1)]);
        assert_eq!(normperfect_prime_defect(1, 1), 0);
        assert!(no_normperfect_prime_equation(0).is_err());
        let brute: Vec<_> = (-60i64..=60)
            .flat_map(|a| (-60i64..=60).map(move |b| (a, b)))
            .filter(|&(a, b)| normperfect_prime_defect(a, b) == 0)
            .collect();
        assert_eq!(brute, no_normperfect_prime_equation(60).unwrap());
    }

    #[test]
    fn remark_examples() {
        for k in [3, 5, 7, 13] {
            let r = check_rational_perfect_remark(k).unwrap();
            assert!(r.holds(), "k = {k}");
            assert!(r.mersenne_prime);
            assert_eq!(r.splits_into_conjugates, Some(true));
        }
        assert_eq!(check_rational_perfect_remark(3).unwrap().n, BigInt::from(28));
        let r = check_rational_perfect_remark(11).unwrap();
        assert!(!r.mersenne_prime && r.holds());
        assert!(check_rational_perfect_remark(2).is_err());
        assert!(check_rational_perfect_remark(9).is_err());
    }

    #[test]
    fn normperfect_primes() {
        assert!(find_normperfect_primes(RingId::Eisenstein, 100_000).unwrap().is_empty());
        assert_eq!(find_normperfect_primes(RingId::Gaussian, 100_000).unwrap(), vec![g(2, 1)]);
        assert!(find_normperfect_primes(RingId::Gaussian, 4).unwrap().is_empty());
        assert!(find_normperfect_primes(RingId::Gaussian, 20_000_000).is_err());
    }

    #[test]
    fn odd_form_factored_accepts_symbolic_input() {
        let f = Factorization {
            unit: Unit::one(RingId::Eisenstein),
            factors: vec![(e(2, 0), 2), (e(3, 1), 5), (e(5, 0), 4)],
        };
        let r = validate_odd_form_factored(&f);
        assert!(r.conforms);
        assert_eq!(r.special.unwrap().prime, "3+1w");
    }
}
