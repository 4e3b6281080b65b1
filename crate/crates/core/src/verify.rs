//! Invariant suites run by the `verify` command.

use std::fmt::Display;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{
    cyc_is_even, cyc_mersenne_norm, cyc_mul, cyc_norm, discriminant, discriminant_from_derivative,
    order_lemma_check, ramification_check, splitting_pattern_check, CycElement, SUPPORTED_PRIMES,
};
use crate::divisor::{
    check_mcdaniel_inequality, check_odd_power_divisibility, check_spira_inequality, classify,
    divisor_sum_oracle, odd_power_divisibility_predicate, sigma, Status,
};
use crate::error::{Error, Result};
use crate::factorization::{factor, is_ring_prime, prime_above, primes_up_to_norm};
use crate::mersenne::{
    composite_exponent_witness, construct_even_candidate, mersenne, mersenne_element,
    mersenne_norm_closed_form, odd_divisor_bound_holds, perfect_unit, scan, Variant,
};
use crate::rational::{is_rational_prime, sieve, MR_ROUNDS, RNG_SEED, TRIAL_LIMIT};
use crate::ring::{QuadInt, RingId, Unit};
use crate::search::{
    check_rational_perfect_remark, find_normperfect_primes, lattice_class_count,
    no_normperfect_prime_equation, sector_elements, sector_scan, sector_scan_with,
    validate_odd_form, validate_ward_form, Parity, ScanConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Lemmas,
    Mersenne,
    Search,
    Cyclo,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [Suite::Core, Suite::Lemmas, Suite::Mersenne, Suite::Search, Suite::Cyclo];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Lemmas => "lemmas",
            Suite::Mersenne => "mersenne",
            Suite::Search => "search",
            Suite::Cyclo => "cyclo",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse {
                text: s.into(),
                reason: "unknown suite".into(),
            })
    }
}

/// Bounds used by the suites; all printed in the report header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub coordinate_box: i64,
    pub oracle_norm_bound: u64,
    pub spira_samples: usize,
    pub spira_max_n: u64,
    pub mcdaniel_norm_bound: u64,
    pub mcdaniel_max_n: u64,
    pub odd_power_norm_bound: u64,
    pub odd_power_max_m: u64,
    pub equation_bound: i64,
    pub witness_max_k: u64,
    pub mersenne_max_k: u64,
    pub scan_norm_bound: u64,
    pub prime_search_bound: u64,
    pub cyclo_cross_box: i64,
    pub splitting_max_q: u64,
    pub seed: u64,
    pub miller_rabin_rounds: usize,
    pub trial_division_limit: u32,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            coordinate_box: 30,
            oracle_norm_bound: 5_000,
            spira_samples: 1_000,
            spira_max_n: 10,
            mcdaniel_norm_bound: 10_000,
            mcdaniel_max_n: 20,
            odd_power_norm_bound: 500,
            odd_power_max_m: 12,
            equation_bound: 1_000,
            witness_max_k: 50,
            mersenne_max_k: 60,
            scan_norm_bound: 20_000,
            prime_search_bound: 100_000,
            cyclo_cross_box: 100,
            splitting_max_q: 50,
            seed: RNG_SEED,
            miller_rabin_rounds: MR_ROUNDS,
            trial_division_limit: TRIAL_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub inputs: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySuiteResult {
    pub suite: String,
    pub checks_run: u64,
    pub failures: Vec<Failure>,
    pub wall_time_secs: f64,
}

impl VerifySuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub defaults: VerifyConfig,
    pub suites: Vec<VerifySuiteResult>,
    pub passed: bool,
}

struct Checker {
    checks_run: u64,
    failures: Vec<Failure>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks_run: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, id: &str, inputs: impl Display, ok: bool, expected: impl Display, got: impl Display) {
        self.checks_run += 1;
        if !ok {
            self.failures.push(Failure {
                check: id.into(),
                inputs: inputs.to_string(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }

    fn eq<T: PartialEq + Display>(&mut self, id: &str, inputs: impl Display, expected: T, got: T) {
        let ok = expected == got;
        self.check(id, inputs, ok, expected, got);
    }

    fn truth(&mut self, id: &str, inputs: impl Display, got: bool) {
        self.check(id, inputs, got, true, got);
    }

    /// Records an error from a check that was expected to succeed.
    fn ok<T>(&mut self, id: &str, inputs: impl Display, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(id, inputs, false, "Ok", e);
                None
            }
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::EACH.to_vec(),
        s => vec![s],
    };
    let results: Vec<VerifySuiteResult> = suites.into_iter().map(|s| run_suite(s, cfg)).collect();
    let passed = results.iter().all(VerifySuiteResult::passed);
    VerifyReport {
        defaults: cfg.clone(),
        suites: results,
        passed,
    }
}

fn run_suite(suite: Suite, cfg: &VerifyConfig) -> VerifySuiteResult {
    let start = Instant::now();
    let mut c = Checker::new();
    match suite {
        Suite::Core => core_suite(&mut c, cfg),
        Suite::Lemmas => lemmas_suite(&mut c, cfg),
        Suite::Mersenne => mersenne_suite(&mut c, cfg),
        Suite::Search => search_suite(&mut c, cfg),
        Suite::Cyclo => cyclo_suite(&mut c, cfg),
        Suite::All => unreachable!("expanded by run"),
    }
    VerifySuiteResult {
        suite: suite.name().into(),
        checks_run: c.checks_run,
        failures: c.failures,
        wall_time_secs: start.elapsed().as_secs_f64(),
    }
}

fn box_elements(ring: RingId, r: i64) -> impl Iterator<Item = QuadInt> {
    (-r..=r).flat_map(move |a| (-r..=r).map(move |b| QuadInt::new(ring, a, b)))
}

fn core_suite(c: &mut Checker, cfg: &VerifyConfig) {
    let r = cfg.coordinate_box;
    for ring in RingId::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for x in box_elements(ring, r) {
            let y = QuadInt::new(ring, rng.gen_range(-r..=r), rng.gen_range(-r..=r));
            c.eq("norm_multiplicative", format!("{x}, {y}"), x.norm() * y.norm(), (&x * &y).norm());
            c.eq("conjugate_norm", &x, x.norm(), x.conjugate().norm());
            c.eq("grammar_round_trip", &x, x.clone(), QuadInt::parse(ring, &x.to_string()).unwrap_or_else(|_| QuadInt::zero(ring)));
            if x.is_zero() {
                continue;
            }
            let in_sector = x.associates().iter().filter(|u| u.in_sector()).count();
            c.eq("sector_unique", &x, 1, in_sector);
            if let Some(f) = c.ok("factor", &x, factor(&x)) {
                c.eq("factor_recompose", &x, x.clone(), f.recompose());
                for (p, _) in &f.factors {
                    let prime = is_ring_prime(p).unwrap_or(false);
                    c.truth("factor_primes_canonical", format!("{x}: {p}"), p.in_sector() && prime);
                }
            }
            if !y.is_zero() {
                if let Some((q, rem)) = c.ok("divrem", format!("{x}, {y}"), x.divrem(&y)) {
                    c.eq("divrem_identity", format!("{x}, {y}"), x.clone(), &(&q * &y) + &rem);
                    c.truth("divrem_remainder_small", format!("{x}, {y}"), rem.norm() < y.norm());
                }
                if let Some(g) = c.ok("gcd", format!("{x}, {y}"), x.gcd(&y)) {
                    let both = g.divides(&x).unwrap_or(false) && g.divides(&y).unwrap_or(false);
                    c.truth("gcd_divides", format!("{x}, {y}"), both);
                }
            }
        }
        for q in sieve(5_000) {
            let qb = BigInt::from(q);
            if ring.is_inert(&qb) || ring.is_ramified(&qb) {
                continue;
            }
            if let Some(p) = c.ok("prime_above", q, prime_above(&qb, ring)) {
                c.eq("prime_above_norm", q, qb.clone(), p.norm());
                c.truth("prime_above_sector", q, p.in_sector());
            }
        }
    }
}

fn lemmas_suite(c: &mut Checker, cfg: &VerifyConfig) {
    // real parts of the smallest odd Eisenstein primes
    let table: [(i64, i64, i64); 5] = [(2, 0, 4), (5, 0, 10), (3, 1, 5), (3, 2, 4), (11, 0, 22)];
    for (a, b, twice_re) in table {
        let psi = QuadInt::new(RingId::Eisenstein, a, b);
        c.eq("small_odd_prime_real_part", &psi, BigInt::from(twice_re), psi.real_part_doubled());
        c.truth("small_odd_prime_is_odd_prime", &psi, !psi.is_even() && is_ring_prime(&psi).unwrap_or(false));
    }
    for k in 2..=60 {
        if let Some(n) = mersenne_norm_closed_form(k) {
            c.eq("mersenne_norm_closed_form", k, n, mersenne_element(RingId::Eisenstein, k).norm());
        }
    }
    let two_plus_i = QuadInt::new(RingId::Gaussian, 2, 1);
    if let Some(s) = c.ok("sigma", &two_plus_i, sigma(&two_plus_i)) {
        c.eq("two_plus_i_norm_perfect", &two_plus_i, BigInt::from(10), s.norm());
    }
    if let Some(sol) = c.ok("equation", cfg.equation_bound, no_normperfect_prime_equation(cfg.equation_bound)) {
        c.eq("equation_solutions", cfg.equation_bound, "[(0, -1), (1, 1)]".to_string(), format!("{sol:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sampled = 0;
    while sampled < cfg.spira_samples {
        let ring = RingId::ALL[sampled % 2];
        let alpha = QuadInt::new(ring, rng.gen_range(-40..=40), rng.gen_range(-40..=40));
        if alpha.is_zero() || alpha == QuadInt::one(ring) || alpha.real_part_doubled() < BigInt::from(2) {
            continue;
        }
        sampled += 1;
        let n = rng.gen_range(1..=cfg.spira_max_n);
        let got = check_spira_inequality(&alpha, n);
        if let Some(v) = c.ok("spira", format!("{alpha}, n = {n}"), got) {
            c.truth("spira", format!("{alpha}, n = {n}"), v);
        }
    }

    for ring in RingId::ALL {
        for psi in primes_up_to_norm(ring, cfg.mcdaniel_norm_bound) {
            if psi.is_even() {
                continue;
            }
            for n in 1..=cfg.mcdaniel_max_n {
                let got = check_mcdaniel_inequality(&psi, n);
                if let Some(v) = c.ok("mcdaniel", format!("{psi}, n = {n}"), got) {
                    c.truth("mcdaniel", format!("{psi}, n = {n}"), v);
                }
            }
        }
    }

    for psi in primes_up_to_norm(RingId::Eisenstein, cfg.odd_power_norm_bound) {
        if psi.is_even() {
            continue;
        }
        for m in 0..=cfg.odd_power_max_m {
            if let Some(v) = c.ok("odd_power_divisibility", format!("{psi}, m = {m}"), check_odd_power_divisibility(&psi, m)) {
                c.eq("odd_power_divisibility", format!("{psi}, m = {m}"), odd_power_divisibility_predicate(&psi, m), v);
            }
        }
    }

    for ring in RingId::ALL {
        for x in sector_elements(ring, cfg.oracle_norm_bound) {
            let (Ok(s), Ok(o)) = (sigma(&x), divisor_sum_oracle(&x)) else {
                c.truth("oracle_equivalence", &x, false);
                continue;
            };
            c.truth("sigma_lower_bound", &x, s.norm() >= x.norm());
            c.eq("oracle_equivalence", &x, o, s.clone());
            for u in ring.units() {
                let ux = u.as_elem() * &x;
                c.eq("sigma_associate_invariant", &ux, s.clone(), sigma(&ux).unwrap_or_else(|_| QuadInt::zero(ring)));
            }
        }
    }
}

fn mersenne_suite(c: &mut Checker, cfg: &VerifyConfig) {
    let e_one = Unit::one(RingId::Eisenstein);
    if let Some(alpha) = c.ok("construct_k11", 11, construct_even_candidate(RingId::Eisenstein, 11, Variant::Conjugated, &e_one)) {
        if let Some(cl) = c.ok("classify_k11", &alpha, classify(&alpha, true)) {
            c.eq("k11_norm_perfect", &alpha, &cl.norm * 3u32, cl.sigma_norm.clone());
            c.eq("k11_primitive", &alpha, "Some(true)".to_string(), format!("{:?}", cl.primitive));
        }
        for u in RingId::Eisenstein.units() {
            let beta = u.as_elem() * &alpha;
            let perfect = classify(&beta, false).map(|cl| cl.perfect).unwrap_or(true);
            c.truth("k11_no_perfect_associate", &beta, !perfect);
        }
        let m = mersenne(RingId::Eisenstein, 11);
        if let Some(m) = c.ok("mersenne_k11", 11, m) {
            c.eq("k11_mersenne_norm", 11, BigInt::from(176419), m.norm.clone());
            c.truth("k11_mersenne_prime_mr", 11, is_rational_prime(&m.norm));
            c.truth("k11_mersenne_prime_trial", 11, trial_division_prime(176419));
            if let Some(f) = c.ok("factor_k11", &alpha, factor(&alpha)) {
                for (psi, _) in f.factors.iter().filter(|(p, _)| !p.is_even()) {
                    c.truth("odd_divisor_bound", psi, odd_divisor_bound_holds(&psi.norm(), 11, &m.norm));
                }
            }
        }
    }
    let g_one = Unit::one(RingId::Gaussian);
    if let Some(eta) = c.ok("construct_gaussian_k7", 7, construct_even_candidate(RingId::Gaussian, 7, Variant::Conjugated, &g_one)) {
        if let Some(cl) = c.ok("classify_gaussian_k7", &eta, classify(&eta, true)) {
            c.eq("gaussian_k7_norm_perfect", &eta, Status::NormPerfect.as_str(), cl.status.as_str());
            c.eq("gaussian_k7_primitive", &eta, "Some(true)".to_string(), format!("{:?}", cl.primitive));
        }
    }
    for ring in RingId::ALL {
        for k in 4..=cfg.witness_max_k {
            if is_rational_prime(&BigInt::from(k)) {
                continue;
            }
            if let Some((l, r)) = c.ok("composite_witness", k, composite_exponent_witness(ring, k)) {
                let m = mersenne_element(ring, k);
                c.eq("composite_witness_product", format!("{ring} {k}"), m.clone(), &l * &r);
                c.truth("composite_witness_proper", format!("{ring} {k}"), !l.is_unit() && l.norm() < m.norm());
            }
        }
    }
    for ring in RingId::ALL {
        let Some(records) = c.ok("scan", cfg.mersenne_max_k, scan(ring, cfg.mersenne_max_k, None)) else {
            continue;
        };
        for r in &records {
            c.truth("prime_exponent", format!("{ring} {}", r.k), !r.is_prime || r.prime_exponent_ok);
            if !r.is_prime {
                continue;
            }
            let plain = construct_even_candidate(ring, r.k, Variant::Plain, &Unit::one(ring));
            let Some(alpha) = c.ok("construct_plain", r.k, plain) else {
                continue;
            };
            let status = classify(&alpha, false).map(|cl| cl.status);
            let admissible = match ring {
                RingId::Eisenstein => matches!(r.k % 12, 1 | 11),
                RingId::Gaussian => matches!(r.k % 8, 1 | 7),
            };
            if ring == RingId::Eisenstein && !admissible {
                c.truth("k_residue_obstruction", r.k, !matches!(status, Ok(Status::NormPerfect)));
            }
            if r.k_residue == 1 && r.k > 1 {
                let eps = perfect_unit(ring);
                if let Some(a) = c.ok("construct_perfect", r.k, construct_even_candidate(ring, r.k, Variant::Plain, &eps)) {
                    let s = sigma(&a).unwrap_or_else(|_| QuadInt::zero(ring));
                    c.eq("perfect_construction", format!("{ring} {}", r.k), &ring.minimal_prime() * &a, s);
                }
            }
        }
    }
}

fn trial_division_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn search_suite(c: &mut Checker, cfg: &VerifyConfig) {
    for ring in RingId::ALL {
        for bound in [1, 10, 100, 1_000, 10_000] {
            let got = sector_elements(ring, bound).len() as u64;
            c.eq("enumeration_complete", format!("{ring} {bound}"), lattice_class_count(ring, bound), got);
        }
    }
    let bound = cfg.scan_norm_bound;
    for ring in RingId::ALL {
        for parity in [Parity::Odd, Parity::Even] {
            let Some(report) = c.ok("sector_scan", format!("{ring} {bound} {parity}"), sector_scan(ring, bound, parity)) else {
                continue;
            };
            c.eq("scan_breaches", format!("{ring} {bound} {parity}"), 0, report.breaches.len());
            for f in report.norm_perfect() {
                let x = &f.classification.element;
                if parity == Parity::Odd {
                    let ok = match ring {
                        RingId::Gaussian => validate_ward_form(x).unwrap_or(false),
                        RingId::Eisenstein => validate_odd_form(x).map(|r| r.conforms).unwrap_or(false),
                    };
                    c.truth("odd_finding_structure", x, ok);
                }
            }
            if ring == RingId::Eisenstein && parity == Parity::Even {
                c.eq("no_even_eisenstein_norm_perfect", bound, 0, report.norm_perfect().count());
            }
            if ring == RingId::Gaussian && parity == Parity::Odd {
                let two_plus_i = QuadInt::new(ring, 2, 1);
                c.truth("scan_finds_two_plus_i", bound, report.norm_perfect().any(|f| f.classification.element == two_plus_i));
            }
        }
        let unpruned = ScanConfig {
            prune: false,
            ..ScanConfig::default()
        };
        if let Some(full) = c.ok("unpruned_scan", ring, sector_scan_with(ring, bound.min(10_000), Parity::Even, &unpruned)) {
            c.eq("pruning_sound", ring, 0, full.breaches.len());
        }
    }
    let found = find_normperfect_primes(RingId::Eisenstein, cfg.prime_search_bound);
    if let Some(v) = c.ok("normperfect_primes", "eisenstein", found) {
        c.eq("no_eisenstein_normperfect_prime", cfg.prime_search_bound, 0, v.len());
    }
    let found = find_normperfect_primes(RingId::Gaussian, cfg.prime_search_bound);
    if let Some(v) = c.ok("normperfect_primes", "gaussian", found) {
        let names: Vec<String> = v.iter().map(ToString::to_string).collect();
        c.eq("gaussian_normperfect_primes", cfg.prime_search_bound, "2+1i".to_string(), names.join(","));
    }
    for k in [3, 5, 7, 13] {
        if let Some(r) = c.ok("remark", k, check_rational_perfect_remark(k)) {
            c.truth("remark_not_norm_perfect", k, r.holds());
            c.eq("remark_splits", k, "Some(true)".to_string(), format!("{:?}", r.splits_into_conjugates));
        }
    }
}

fn cyclo_suite(c: &mut Checker, cfg: &VerifyConfig) {
    for p in SUPPORTED_PRIMES {
        c.truth("ramification", p, ramification_check(p).unwrap_or(false));
        let d = discriminant(p).ok();
        c.eq("discriminant", p, d.map(|d| d.to_string()).unwrap_or_default(), discriminant_from_derivative(p).map(|d| d.to_string()).unwrap_or_default());
        for q in sieve(cfg.splitting_max_q as u32).into_iter().map(u64::from) {
            if q == p as u64 {
                continue;
            }
            c.truth("splitting_pattern", format!("q = {q}, p = {p}"), splitting_pattern_check(q, p).unwrap_or(false));
        }
        for a in 2..p as i64 {
            c.truth("order_lemma", format!("a = {a}, p = {p}"), order_lemma_check(a, p).unwrap_or(false));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ p as u64);
        for _ in 0..50 {
            let x = random_cyc(&mut rng, p);
            let y = random_cyc(&mut rng, p);
            let xy = cyc_mul(&x, &y).expect("same p");
            c.eq("cyc_norm_multiplicative", format!("{x}, {y}"), cyc_norm(&x) * cyc_norm(&y), cyc_norm(&xy));
        }
    }
    c.eq("discriminant_gaussian", 4, BigInt::from(-4), discriminant(4).unwrap_or_default());
    let r = cfg.cyclo_cross_box;
    for x in box_elements(RingId::Eisenstein, r) {
        let y = CycElement::from_i64s(3, &[i64::try_from(x.a()).unwrap_or(0), i64::try_from(x.b()).unwrap_or(0)]).expect("p = 3");
        c.eq("cross_ring_norm", &x, x.norm(), cyc_norm(&y));
        c.eq("cross_ring_even", &x, x.is_even(), cyc_is_even(&y));
    }
    for k in 1..=60 {
        let quad = mersenne_element(RingId::Eisenstein, k).norm();
        c.eq("cross_ring_mersenne_norm", k, quad, cyc_mersenne_norm(3, k).unwrap_or_else(|_| BigInt::zero()));
    }
    c.truth("cyc_mersenne_norm_unit", 1, SUPPORTED_PRIMES.iter().all(|&p| cyc_mersenne_norm(p, 1).map(|n| n.is_one()).unwrap_or(false)));
}

fn random_cyc(rng: &mut ChaCha8Rng, p: u32) -> CycElement {
    let coeffs: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-5..=5)).collect();
    CycElement::from_i64s(p, &coeffs).expect("supported p")
}
