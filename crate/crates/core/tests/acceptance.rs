//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line per
//! criterion, and exits nonzero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use lieder::bounds::{bound_f, bound_polynomial, central_binomial_divisible, evaluate, kummer_carries};
use lieder::campaign::{self, CampaignSummary, Suite};
use lieder::constructions::{catalog, jacobson};
use lieder::radical::{
    generates_solvable_ideal, is_characteristic, radical_bruteforce, radical_char0, solvable_radical, verify_witness,
    DEFAULT_BUDGET,
};
use lieder::{FieldSpec, IdealHandle, LieAlgebra};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

const Q: FieldSpec = FieldSpec::RATIONALS;
const SEED: u64 = 20240601;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn within(start: Instant, limit: Duration, what: &str) {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
}

/// Derived length of `t F[t]/(t^p)`-valued ideals: the lowest power of `t`
/// doubles at every step (`m -> m^2 -> m^4 ...`) until it reaches `p`.
fn doubling_oracle(p: u64) -> usize {
    let (mut degree, mut steps) = (1u64, 0);
    while degree < p {
        degree *= 2;
        steps += 1;
    }
    steps
}

fn criterion_1() -> String {
    for p in [3u64, 5, 7] {
        let start = Instant::now();
        let c = jacobson(p).unwrap();
        assert_eq!(c.algebra.dim(), 3 * p as usize);
        assert_eq!(c.radical.dim(), 3 * (p as usize - 1), "p = {p}");
        let expected = doubling_oracle(p);
        assert_eq!(expected, (p as f64).log2().floor() as usize + 1);
        assert_eq!(c.radical.derived_length(), Some(expected), "p = {p}");
        let verdict = is_characteristic(&c.radical);
        assert!(!verdict.characteristic, "p = {p}");
        let w = verdict.witness.expect("witness");
        assert!(verify_witness(&c.radical, &w).unwrap());
        if p == 7 {
            within(start, Duration::from_secs(10), "jacobson:7");
        }
    }
    let start = Instant::now();
    let c = jacobson(3).unwrap();
    assert_eq!(radical_bruteforce(&c.algebra, DEFAULT_BUDGET).unwrap(), c.radical);
    within(start, Duration::from_secs(60), "brute-force radical at p = 3");
    "p = 3, 5, 7: dims 6, 12, 18; lengths 2, 3, 3; witnesses verified; brute force agrees at p = 3".into()
}

const CHAR0_CATALOG: &[&str] = &[
    "abelian:1",
    "abelian:3",
    "abelian:8",
    "heisenberg",
    "affine",
    "sl2",
    "borel:2",
    "borel:3",
    "sl2+abelian:1",
    "sl2+abelian:5",
    "sl2+heisenberg",
    "sl2+affine",
    "sl2+borel:2",
    "sl2+sl2",
    "sl2+sl2+affine",
    "heisenberg+heisenberg",
    "heisenberg+affine",
    "borel:3+affine",
    "affine+affine+affine",
];

fn criterion_2() -> String {
    let start = Instant::now();
    let mut count = 0;
    for name in CHAR0_CATALOG {
        let l = Arc::new(catalog(name, Q).unwrap());
        if l.dim() > 8 {
            continue;
        }
        let (radical, _) = solvable_radical(&l, DEFAULT_BUDGET).unwrap();
        assert!(is_characteristic(&radical).characteristic, "{name}");
        count += 1;
    }
    within(start, Duration::from_secs(30), "char 0 catalog");
    format!("{count} algebras over Q, radical characteristic in every case")
}

fn criterion_3() -> String {
    let cases: &[(&str, u64)] = &[
        ("abelian:3", 3),
        ("abelian:2", 5),
        ("heisenberg", 5),
        ("affine", 5),
        ("sl2+heisenberg", 5),
        ("sl2+abelian:2", 5),
        ("sl2+borel:2", 5),
        ("sl2+affine", 7),
        ("heisenberg+heisenberg", 7),
        ("sl2+abelian:1", 11),
    ];
    for &(name, p) in cases {
        let l = Arc::new(catalog(name, gf(p)).unwrap());
        let radical = radical_bruteforce(&l, DEFAULT_BUDGET).unwrap();
        let n = radical.derived_length().unwrap();
        assert!((1u64 << n) < p, "{name} over GF({p}) does not meet the hypothesis");
        assert!(is_characteristic(&radical).characteristic, "{name} over GF({p})");
    }
    format!(
        "{} GF(p) algebras with s(S(L)) < log2 p, all characteristic",
        cases.len()
    )
}

fn campaign(suite: Suite, count: usize, limit: Duration) -> CampaignSummary {
    let start = Instant::now();
    let summary = campaign::run(suite, SEED, count).unwrap();
    within(start, limit, &format!("{suite} campaign"));
    summary
}

fn criterion_4() -> String {
    let s = campaign(Suite::Solvability, 500, Duration::from_secs(120));
    assert_eq!(s.instances, 1000);
    assert_eq!(s.hypotheses_met, s.checks, "every instance must satisfy n < log2 p");
    assert_eq!(s.violations, 0);
    format!("{} instances ({:?}), 0 violations", s.instances, s.fields)
}

fn criterion_5() -> String {
    let s = campaign(Suite::Degree, 200, Duration::from_secs(120));
    assert_eq!(s.instances, 200);
    assert_eq!(s.violations, 0);
    let abelian = s.records.iter().filter(|r| r.ideal_length == Some(1)).count();
    for r in s.records.iter().filter(|r| r.ideal_length == Some(1)) {
        for (k, c) in r.checks.iter().enumerate() {
            assert!(c.observed.unwrap() <= k + 1);
        }
    }
    assert!(abelian > 0, "campaign drew no abelian ideal");
    format!(
        "{} instances x k <= 4 ({abelian} abelian ideals), 0 violations",
        s.instances
    )
}

fn criterion_6() -> String {
    for k in 0..=20 {
        assert_eq!(bound_f(1, k).unwrap(), k as u64 + 1);
        assert_eq!(bound_f(2, k).unwrap(), ((k + 1) * (k + 2)) as u64);
    }
    for n in 1..=5 {
        let coeffs = bound_polynomial(n).unwrap();
        assert_eq!(coeffs.len(), n + 1);
        assert!(!coeffs[n].is_zero());
        for k in 0..=2 * n {
            let exact = BigRational::from_integer(BigInt::from(bound_f(n, k).unwrap()));
            assert_eq!(evaluate(&coeffs, k), exact, "n = {n}, k = {k}");
        }
    }
    "f_1 = k+1 (k <= 20), f_2 = (k+1)(k+2), degree-n interpolants exact for n <= 5".into()
}

fn criterion_7() -> String {
    let start = Instant::now();
    let odd_primes: Vec<u64> = (3..100).filter(|&p| lieder::scalar::is_prime(p)).collect();
    let central: Vec<BigUint> = (1..=12u32)
        .map(|k| num_integer::binomial(BigUint::one() << k, BigUint::one() << (k - 1)))
        .collect();
    for &p in &odd_primes {
        for n in 0..=12u32 {
            let scan = (1..=n).all(|k| !central_binomial_divisible(p, k).unwrap());
            assert_eq!(scan, (1u64 << n) < p, "p = {p}, n = {n}");
        }
        for k in 1..=12u32 {
            let half = BigUint::one() << (k - 1);
            let divides = (&central[k as usize - 1] % BigUint::from(p)).is_zero();
            assert_eq!(central_binomial_divisible(p, k).unwrap(), divides, "p = {p}, k = {k}");
            assert_eq!(kummer_carries(&half, &half, p) > 0, divides);
        }
    }
    within(start, Duration::from_secs(5), "binomial scan");
    format!("{} odd primes < 100, n <= 12", odd_primes.len())
}

fn criterion_8() -> String {
    let l2 = campaign(Suite::Lemma2, 300, Duration::from_secs(120));
    let key = campaign(Suite::Key, 300, Duration::from_secs(120));
    assert_eq!(l2.instances, 300);
    assert_eq!(key.instances, 300);
    assert_eq!(l2.violations, 0);
    assert_eq!(key.violations, 0);
    format!(
        "lemma2: {} inclusions, key: {} inclusions under the binomial hypothesis, 0 violations",
        l2.checks, key.hypotheses_met
    )
}

fn criterion_9() -> String {
    let mut compared = 0;
    for name in CHAR0_CATALOG {
        let l = Arc::new(catalog(name, Q).unwrap());
        if l.dim() > 6 {
            continue;
        }
        let radical = radical_char0(&l).unwrap();
        for v in radical.space().basis() {
            assert!(generates_solvable_ideal(&l, v).unwrap(), "{name}");
        }
        for v in radical.space().complement_basis() {
            assert!(!generates_solvable_ideal(&l, &v).unwrap(), "{name}");
        }
        compared += 1;
    }
    // Known radicals over GF(3): the solvable summand of sl2 + solvable.
    let gf3 = gf(3);
    let known: &[(&str, Vec<usize>)] = &[
        ("sl2+heisenberg", vec![3, 4, 5]),
        ("sl2+affine", vec![3, 4]),
        ("sl2+abelian:3", vec![3, 4, 5]),
        ("sl2+borel:2", vec![3, 4, 5]),
        ("sl2+sl2", vec![]),
        ("heisenberg+affine", (0..5).collect()),
        ("sl2+sl2+abelian:3", vec![6, 7, 8]),
    ];
    for (name, indices) in known {
        let l = Arc::new(catalog(name, gf3).unwrap());
        assert!(l.dim() <= 9);
        let expected = IdealHandle::new(&l, lieder::Subspace::coordinate(gf3, l.dim(), indices).unwrap()).unwrap();
        assert_eq!(radical_bruteforce(&l, DEFAULT_BUDGET).unwrap(), expected, "{name}");
    }
    let c = jacobson(3).unwrap();
    assert_eq!(radical_bruteforce(&c.algebra, DEFAULT_BUDGET).unwrap(), c.radical);
    format!("{compared} char 0 algebras, {} GF(3) sums", known.len() + 1)
}

fn criterion_10() -> String {
    let runs = [
        (Suite::Solvability, 60),
        (Suite::Degree, 40),
        (Suite::Lemma2, 60),
        (Suite::Key, 60),
    ];
    for (suite, count) in runs {
        let a = serde_json::to_string(&campaign::run(suite, SEED, count).unwrap()).unwrap();
        let b = serde_json::to_string(&campaign::run(suite, SEED, count).unwrap()).unwrap();
        assert!(a == b, "{suite} reports differ");
    }
    let algebra = |s: u64| {
        let i = lieder::constructions::random_solvable_instance(s, 1..=8, Q).unwrap();
        (LieAlgebra::clone(&i.algebra), i.fingerprint())
    };
    assert_eq!(algebra(5), algebra(5));
    "all four suites byte-identical across two runs".into()
}

fn main() {
    // Keep assertion output to our own lines.
    panic::set_hook(Box::new(|_| {}));
    type Criterion = (&'static str, fn() -> String);
    let criteria: [Criterion; 10] = [
        ("counterexample reproduction", criterion_1),
        ("radical characteristic, char 0", criterion_2),
        ("radical characteristic, char p with s < log2 p", criterion_3),
        ("solvability campaign", criterion_4),
        ("degree campaign", criterion_5),
        ("bound table exactness", criterion_6),
        ("binomial threshold equivalence", criterion_7),
        ("lemma 2 and key lemma suites", criterion_8),
        ("radical oracle agreement", criterion_9),
        ("campaign determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check));
        let took = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{took:.2}s]: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL  {name} [{took:.2}s]: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
