use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cycloperfect::cyclotomic::{
    cyc_mul, cyc_norm, residue_degree, validate_general_odd_form, AbstractOddFactorization, CycElement,
    OddEntry, SUPPORTED_PRIMES,
};
use cycloperfect::divisor::{classify, odd_power_divisibility_predicate, sigma, Status};
use cycloperfect::factorization::{factor, is_ring_prime, primes_up_to_norm, Factorization};
use cycloperfect::search::{parker_form_factored, validate_odd_form_factored};
use cycloperfect::{QuadInt, RingId, Unit};

fn ring() -> impl Strategy<Value = RingId> {
    prop_oneof![Just(RingId::Gaussian), Just(RingId::Eisenstein)]
}

fn elem_in(r: RingId, bound: i64) -> impl Strategy<Value = QuadInt> {
    (-bound..=bound, -bound..=bound).prop_map(move |(a, b)| QuadInt::new(r, a, b))
}

fn nonzero_in(r: RingId, bound: i64) -> impl Strategy<Value = QuadInt> {
    elem_in(r, bound).prop_filter("nonzero", |x| !x.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn norm_and_conjugation_are_multiplicative(
        (x, y) in ring().prop_flat_map(|r| (elem_in(r, 1000), elem_in(r, 1000)))
    ) {
        let xy = &x * &y;
        prop_assert_eq!(xy.norm(), x.norm() * y.norm());
        prop_assert_eq!(xy.conjugate(), &x.conjugate() * &y.conjugate());
        prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
    }

    #[test]
    fn exactly_one_associate_in_sector(x in ring().prop_flat_map(|r| nonzero_in(r, 50))) {
        let hits: Vec<_> = x.associates().into_iter().filter(QuadInt::in_sector).collect();
        prop_assert_eq!(hits.len(), 1);
        let (u, rep) = x.sector_canonical().unwrap();
        prop_assert_eq!(&rep, &hits[0]);
        prop_assert_eq!(u.as_elem() * &rep, x);
    }

    #[test]
    fn divrem_shrinks_the_remainder(
        (x, y) in ring().prop_flat_map(|r| (elem_in(r, 10_000), nonzero_in(r, 300)))
    ) {
        let (q, rem) = x.divrem(&y).unwrap();
        prop_assert_eq!(&(&q * &y) + &rem, x);
        prop_assert!(rem.norm() < y.norm());
    }

    #[test]
    fn gcd_is_greatest(
        (x, y, z) in ring().prop_flat_map(|r| (nonzero_in(r, 60), nonzero_in(r, 60), nonzero_in(r, 20)))
    ) {
        let g = (&x * &z).gcd(&(&y * &z)).unwrap();
        prop_assert!(g.in_sector());
        prop_assert!(g.divides(&(&x * &z)).unwrap());
        prop_assert!(g.divides(&(&y * &z)).unwrap());
        prop_assert!(z.divides(&g).unwrap());
    }

    #[test]
    fn evenness_is_divisibility_by_the_minimal_prime(x in ring().prop_flat_map(|r| elem_in(r, 500))) {
        let minimal = x.ring().minimal_prime();
        prop_assert_eq!(x.is_even(), minimal.divides(&x).unwrap());
    }

    #[test]
    fn grammar_round_trips(x in ring().prop_flat_map(|r| elem_in(r, i64::MAX / 2))) {
        prop_assert_eq!(QuadInt::parse(x.ring(), &x.to_string()).unwrap(), x);
    }

    #[test]
    fn factorization_invariants(x in ring().prop_flat_map(|r| nonzero_in(r, 3000))) {
        let f = factor(&x).unwrap();
        prop_assert_eq!(f.recompose(), x.clone());
        let key = |p: &QuadInt| (p.norm(), p.a().clone(), p.b().clone());
        for w in f.factors.windows(2) {
            prop_assert!(key(&w[0].0) < key(&w[1].0));
        }
        for (p, e) in &f.factors {
            prop_assert!(*e >= 1);
            prop_assert!(p.in_sector());
            prop_assert!(is_ring_prime(p).unwrap());
        }
    }

    #[test]
    fn sigma_invariants(
        (x, y) in ring().prop_flat_map(|r| (nonzero_in(r, 200), nonzero_in(r, 200)))
    ) {
        let s = sigma(&x).unwrap();
        prop_assert!(s.norm() >= x.norm());
        for u in x.ring().units() {
            prop_assert_eq!(sigma(&(u.as_elem() * &x)).unwrap(), s.clone());
        }
        if x.gcd(&y).unwrap().is_unit() {
            prop_assert_eq!(sigma(&(&x * &y)).unwrap(), &s * &sigma(&y).unwrap());
        }
        let c = classify(&x, false).unwrap();
        prop_assert!(!c.perfect || c.status == Status::NormPerfect);
    }
}

fn odd_primes(ring: RingId, bound: u64) -> Vec<QuadInt> {
    primes_up_to_norm(ring, bound).into_iter().filter(|p| !p.is_even()).collect()
}

/// A random odd factorization whose special prime sits in residue class
/// `class`, every other exponent avoiding the special condition.
fn conforming_factorization(rng: &mut ChaCha8Rng, primes: &[QuadInt], class: u32) -> Factorization {
    let pool: Vec<&QuadInt> = primes.iter().filter(|p| p.residue_mod_minimal() == class).collect();
    let limit = BigInt::from(10_000_000_000u64);
    let (special, k) = loop {
        let p = (*pool.choose(rng).unwrap()).clone();
        let k = if class == 1 { 2 + 3 * rng.gen_range(0..2) } else { 1 + 2 * rng.gen_range(0..2) };
        if p.norm().pow(k) <= limit {
            break (p, k);
        }
    };
    let mut norm = special.norm().pow(k);
    let mut factors = vec![(special, k)];
    for _ in 0..rng.gen_range(0..4) {
        let p = primes.choose(rng).unwrap().clone();
        if factors.iter().any(|(q, _)| q == &p) {
            continue;
        }
        let e = loop {
            let e = rng.gen_range(1..=4);
            if !odd_power_divisibility_predicate(&p, e as u64) {
                break e;
            }
        };
        let next = &norm * p.norm().pow(e);
        if next > limit {
            continue;
        }
        norm = next;
        factors.push((p, e));
    }
    let key = |p: &QuadInt| (p.norm(), p.a().clone(), p.b().clone());
    factors.sort_by_key(|a| key(&a.0));
    Factorization {
        unit: Unit::one(RingId::Eisenstein),
        factors,
    }
}

#[test]
fn conforming_products_land_in_the_special_class() {
    let primes = odd_primes(RingId::Eisenstein, 2000);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..2000 {
        let class = 1 + (i % 2) as u32;
        let f = conforming_factorization(&mut rng, &primes, class);
        let report = validate_odd_form_factored(&f);
        assert!(report.conforms, "{report:?}");
        let x = f.recompose();
        assert!(x.norm() <= BigInt::from(10_000_000_000u64));
        assert_eq!(x.residue_mod_minimal(), class, "{x}");
    }
}

#[test]
fn parker_shape_conforms_when_second_class_exponents_are_even() {
    let primes = odd_primes(RingId::Eisenstein, 500);
    let p1: Vec<&QuadInt> = primes.iter().filter(|p| p.residue_mod_minimal() == 1).collect();
    let p2: Vec<&QuadInt> = primes.iter().filter(|p| p.residue_mod_minimal() == 2).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let psi = (*p1.choose(&mut rng).unwrap()).clone();
        let mut factors = vec![(psi.clone(), 2 + 3 * rng.gen_range(0..3))];
        for _ in 0..rng.gen_range(0..3) {
            let (p, e) = if rng.gen_bool(0.5) {
                ((*p1.choose(&mut rng).unwrap()).clone(), 3 * rng.gen_range(1..3))
            } else {
                ((*p2.choose(&mut rng).unwrap()).clone(), 6)
            };
            if factors.iter().all(|(q, _)| q != &p) {
                factors.push((p, e));
            }
        }
        let f = Factorization {
            unit: Unit::one(RingId::Eisenstein),
            factors,
        };
        assert!(parker_form_factored(&f));
        assert!(validate_odd_form_factored(&f).conforms);
    }
}

#[test]
fn general_validator_agrees_at_three() {
    let primes = odd_primes(RingId::Eisenstein, 300);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2000 {
        let mut factors: Vec<(QuadInt, u32)> = Vec::new();
        for _ in 0..rng.gen_range(1..5) {
            let p = primes.choose(&mut rng).unwrap().clone();
            if factors.iter().all(|(q, _)| q != &p) {
                factors.push((p, rng.gen_range(1..9)));
            }
        }
        let f = Factorization {
            unit: Unit::one(RingId::Eisenstein),
            factors,
        };
        let specific = validate_odd_form_factored(&f).conforms;
        let mut marked = false;
        let entries = f
            .factors
            .iter()
            .map(|(p, e)| {
                let special = !marked && odd_power_divisibility_predicate(p, *e as u64);
                marked |= special;
                OddEntry { j: p.residue_mod_minimal(), e: *e, special }
            })
            .collect();
        let general = AbstractOddFactorization { p: 3, unit: false, entries };
        assert_eq!(validate_general_odd_form(&general).unwrap().0, specific, "{f:?}");
    }
}

#[test]
fn cyclotomic_norm_is_multiplicative() {
    for p in SUPPORTED_PRIMES {
        let mut rng = ChaCha8Rng::seed_from_u64(p as u64);
        let mut random = || {
            let c: Vec<i64> = (0..p - 1).map(|_| rng.gen_range(-4..=4)).collect();
            CycElement::from_i64s(p, &c).unwrap()
        };
        for _ in 0..1000 {
            let (x, y) = (random(), random());
            assert_eq!(cyc_norm(&cyc_mul(&x, &y).unwrap()), cyc_norm(&x) * cyc_norm(&y), "p = {p}");
        }
    }
}

#[test]
fn residue_degree_is_the_exact_order() {
    for p in SUPPORTED_PRIMES {
        for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 1_000_003] {
            if q == p as u64 {
                continue;
            }
            let f = residue_degree(q, p).unwrap();
            assert_eq!((p as u64 - 1) % f, 0);
            let pow = |e: u64| BigInt::from(q).modpow(&BigInt::from(e), &BigInt::from(p));
            assert_eq!(pow(f), BigInt::from(1));
            assert!((1..f).all(|e| pow(e) != BigInt::from(1)));
        }
    }
}
