//! Acceptance suite: one test per criterion, each printing a pass line with
//! its elapsed time (visible under `--nocapture`). Tolerances and runtime
//! limits are pinned in the assertions.
//!
//! Expected values marked "oracle" were computed once with a 60-digit
//! mpmath/sympy evaluation, independently of this crate.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dktuple::arith;
use dktuple::bounds::{self, BoundValue};
use dktuple::characters::{char_sum, make_character};
use dktuple::gap;
use dktuple::sieve::{apriori_sieve_bound, gallagher_bound, PrimeSpec};
use dktuple::tuples::{
    brute_force_search, euler_family, search, verify, PowerPolicy, SearchParams, TupleRecord,
};

fn pass(criterion: u32, detail: &str, started: Instant) {
    println!(
        "[acceptance] criterion {criterion:02} PASS — {detail} ({:.3}s)",
        started.elapsed().as_secs_f64()
    );
}

fn record(k: u32, n: i64, elements: &[u64]) -> TupleRecord {
    TupleRecord::from_u64(k, n, elements).unwrap()
}

#[test]
fn criterion_01_paper_examples_verify_exactly() {
    let started = Instant::now();
    let cases: [(&[u64], i64); 4] = [
        (&[1, 33, 68, 105], 256),
        (&[1, 3, 8, 120], 1),
        (&[1, 33, 105, 320, 18240], 256),
        (&[5, 21, 64, 285, 6720], 256),
    ];
    for (set, n) in cases {
        let t = record(2, n, set);
        let report = verify(&t, PowerPolicy::default()).unwrap();
        assert!(report.ok, "{set:?} with D({n}) failed to verify");
        let m = set.len();
        assert_eq!(report.witnesses.len(), m * (m - 1) / 2);
        for w in &report.witnesses {
            // Exact square witnesses, rechecked by exact multiplication.
            let product = BigInt::from(t.element(w.i) * t.element(w.j)) + t.n();
            assert_eq!(&w.root * &w.root, product);
        }
    }
    assert!(
        started.elapsed().as_secs_f64() < 0.1,
        "criterion 1 exceeded 0.1 s"
    );
    pass(
        1,
        "four paper tuples verify with exact square witnesses",
        started,
    );
}

#[test]
fn criterion_02_euler_family_all_members_verify() {
    let started = Instant::now();
    let fermat = euler_family(&BigUint::from(1u32), &BigUint::from(3u32))
        .unwrap()
        .expect("ab + 1 = 4 is square");
    assert_eq!(fermat, record(2, 1, &[1, 3, 8, 120]));

    let mut members = 0;
    for a in 1u64..200 {
        for b in (a + 1)..=200 {
            if let Some(t) = euler_family(&BigUint::from(a), &BigUint::from(b)).unwrap() {
                members += 1;
                assert!(
                    verify(&t, PowerPolicy::default()).unwrap().ok,
                    "family member for ({a}, {b}) failed D(1)"
                );
            }
        }
    }
    assert!(members > 0);
    assert!(
        started.elapsed().as_secs_f64() < 1.0,
        "criterion 2 exceeded 1 s"
    );
    pass(
        2,
        &format!("{members} Euler-family quadruples below 200 all verify with D(1)"),
        started,
    );
}

#[test]
fn criterion_03_search_matches_brute_force_oracle() {
    let started = Instant::now();
    let mut instances = 0;
    for bound in 1u64..=25 {
        for m in 2usize..=4 {
            for k in [2u32, 3] {
                for n in [-3i64, -2, -1, 1, 2, 3] {
                    let params = SearchParams::new(n, k, m, bound);
                    let fast = search(&params).unwrap();
                    let slow = brute_force_search(&params).unwrap();
                    assert_eq!(fast, slow, "oracle mismatch at n={n} k={k} m={m} B={bound}");
                    instances += 1;
                }
            }
        }
    }
    assert!(
        started.elapsed().as_secs_f64() < 30.0,
        "criterion 3 exceeded 30 s"
    );
    pass(
        3,
        &format!("search equals brute-force subset filter on {instances} instances"),
        started,
    );
}

#[test]
fn criterion_04_vinogradov_bound_randomized_and_character_invariants() {
    let started = Instant::now();

    // Exhaustive multiplicativity and exact-order invariants for p <= 101.
    for &p in arith::primes_up_to(101).unwrap().primes() {
        if p == 2 {
            continue;
        }
        for k in 2..=(p - 1) as u32 {
            if (p - 1) % k as u64 != 0 {
                continue;
            }
            let chi = make_character(p, k).unwrap();
            for x in 1..p {
                for y in 1..p {
                    let product = arith::mul_mod(x, y, p);
                    assert_eq!(
                        chi.exponent(product).unwrap(),
                        (chi.exponent(x).unwrap() + chi.exponent(y).unwrap()) % k
                    );
                }
            }
            for j in 1..k {
                assert!(
                    (1..p).any(|x| !(j * chi.exponent(x).unwrap()).is_multiple_of(k)),
                    "chi^{j} trivial at p={p}, k={k}"
                );
            }
        }
    }

    // 1000 randomized trials of the sqrt(p |A| |B|) bound.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let all_primes = arith::primes_up_to(211).unwrap();
    for trial in 0..1000 {
        let k = [2u32, 3, 5][rng.gen_range(0..3)];
        let candidates: Vec<u64> = all_primes
            .primes()
            .iter()
            .copied()
            .filter(|&p| (p - 1) % k as u64 == 0)
            .collect();
        let p = candidates[rng.gen_range(0..candidates.len())];
        let chi = make_character(p, k).unwrap();

        let mut set_a: Vec<u64> = (1..p).filter(|_| rng.gen_bool(0.5)).collect();
        if set_a.is_empty() {
            set_a.push(rng.gen_range(1..p));
        }
        let mut set_b: Vec<u64> = (0..p).filter(|_| rng.gen_bool(0.5)).collect();
        if set_b.is_empty() {
            set_b.push(0);
        }
        let n = loop {
            let n = rng.gen_range(-500i64..=500);
            if n.rem_euclid(p as i64) != 0 {
                break n;
            }
        };
        let result = char_sum(&chi, &set_a, &set_b, n).unwrap();
        assert!(
            result.holds,
            "trial {trial}: |sum| = {} exceeds bound {} at p={p}, k={k}",
            result.abs, result.bound
        );
        assert!(result.abs <= result.bound + 1e-6);
    }
    pass(
        4,
        "1000 random character sums within sqrt(p|A||B|); invariants exhaustive to 101",
        started,
    );
}

#[test]
fn criterion_05_gallagher_soundness_and_worked_example() {
    let started = Instant::now();

    // Worked example, pinned by the independent oracle script: 19.8355...
    let s: Vec<BigUint> = [1u64, 3, 8, 120]
        .iter()
        .map(|&x| BigUint::from(x))
        .collect();
    let report = gallagher_bound(&s, &BigUint::from(120u32), PrimeSpec::All, 20).unwrap();
    let bound = report.bound.expect("worked example is conclusive");
    assert!(
        (bound - 19.8).abs() <= 0.1,
        "worked example bound {bound} outside 19.8 +/- 0.1"
    );
    assert!((bound - 19.835496373875913).abs() < 1e-9, "oracle drift");

    // 200 random sets in [1, 10^6], random Q: produced bounds are sound.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let n_limit = BigUint::from(1_000_000u64);
    let mut conclusive = 0;
    for _ in 0..200 {
        let size = rng.gen_range(1usize..=800);
        let mut set: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=1_000_000u64)).collect();
        set.sort_unstable();
        set.dedup();
        let set: Vec<BigUint> = set.into_iter().map(BigUint::from).collect();
        let q = rng.gen_range(2u64..=2000);
        let report = gallagher_bound(&set, &n_limit, PrimeSpec::All, q).unwrap();
        if let Some(bound) = report.bound {
            conclusive += 1;
            assert!(
                set.len() as f64 <= bound + 1e-9,
                "|S| = {} exceeds sieve bound {bound} at Q = {q}",
                set.len()
            );
        }
    }
    assert!(conclusive > 0, "no conclusive instance among 200");
    pass(
        5,
        &format!("worked example = 19.835; {conclusive}/200 conclusive bounds all sound"),
        started,
    );
}

#[test]
fn criterion_06_apriori_sieve_dominates_known_quintuples() {
    let started = Instant::now();
    let report = apriori_sieve_bound(&BigInt::from(256), 2, None).unwrap();
    let bound = report.bound.expect("finite bound");
    assert!(bound >= 5.0, "bound {bound} below the known quintuples");
    // Both known D(256) quintuples live inside [1, 256^3].
    for set in [
        &[1u64, 33, 105, 320, 18240][..],
        &[5, 21, 64, 285, 6720][..],
    ] {
        let max = set.iter().max().unwrap();
        assert!(BigUint::from(*max) <= report.n_limit);
    }
    assert!(
        started.elapsed().as_secs_f64() < 0.1,
        "criterion 6 exceeded 0.1 s"
    );
    pass(
        6,
        &format!(
            "a-priori D(256) sieve bound {bound:.3} >= 5 at Q = {}",
            report.q
        ),
        started,
    );
}

#[test]
fn criterion_07_gap_lemma_brute_force() {
    let started = Instant::now();
    let mut checked = 0u64;
    for n in 1u64..=3 {
        let cube = n * n * n;
        let n_big = BigUint::from(n);
        let pool: Vec<BigUint> = (cube..=60).map(BigUint::from).collect();
        for ai in 0..pool.len() {
            for bi in ai + 1..pool.len() {
                for ci in bi + 1..pool.len() {
                    for di in ci + 1..pool.len() {
                        let check =
                            gap::check_abcd(&pool[ai], &pool[bi], &pool[ci], &pool[di], &n_big)
                                .unwrap();
                        assert!(
                            check.holds,
                            "(ac-n)(bd-n) >= abcd/2 failed at ({}, {}, {}, {}), n={n}",
                            pool[ai], pool[bi], pool[ci], pool[di]
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(
        started.elapsed().as_secs_f64() < 10.0,
        "criterion 7 exceeded 10 s"
    );
    pass(
        7,
        &format!("product inequality exhaustive over {checked} quadruples"),
        started,
    );
}

#[test]
fn criterion_08_constants_match_oracles() {
    let started = Instant::now();

    assert!((dktuple::approx::c_lemma(3).unwrap() - 0.75).abs() < 1e-12);
    assert!((dktuple::approx::c_lemma(5).unwrap() - 0.3125).abs() < 1e-12);

    // 50-digit oracle: 613886053.6890888913506918...
    let BoundValue::Real(large3) = bounds::effective_large_bound(3, false).unwrap().value else {
        panic!("real-valued bound expected")
    };
    let oracle = 613886053.689089;
    assert!(
        ((large3 - oracle) / oracle).abs() < 1e-12,
        "large-element bound drifted: {large3}"
    );

    // The kappa = 1/2 identity is exact in IEEE arithmetic.
    assert_eq!((1u64 << 25) as f64 * 0.5f64.powi(-3), (1u64 << 28) as f64);
    assert_eq!(large3 - 14.0, bounds::evertse_count(3, 0.5).unwrap());

    assert_eq!(bounds::j0(3).unwrap(), 4);

    pass(
        8,
        "c(3), c(5), the large-element constant, the 2^28 identity, and j0(3)",
        started,
    );
}

#[test]
fn criterion_09_root_bracket_property_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    for _ in 0..100_000 {
        let x: u128 = rng.gen();
        let k = rng.gen_range(2u32..=64);
        let r = arith::ikroot_u128(x, k);
        // Exact big-integer bracket check, independent of the u128 path.
        let x_big = BigUint::from(x);
        let r_big = BigUint::from(r);
        assert!(r_big.pow(k) <= x_big, "r^k > x at x={x}, k={k}");
        assert!(
            (r_big + 1u32).pow(k) > x_big,
            "(r+1)^k <= x at x={x}, k={k}"
        );

        let present = arith::is_kth_power_u128(x.max(1), k).is_some();
        let exact =
            BigUint::from(arith::ikroot_u128(x.max(1), k)).pow(k) == BigUint::from(x.max(1));
        assert_eq!(present, exact && x.max(1) >= 1);
    }
    assert!(
        started.elapsed().as_secs_f64() < 10.0,
        "criterion 9 exceeded 10 s"
    );
    pass(9, "100000 random (x, k) root brackets exact", started);
}

#[test]
fn criterion_10_search_determinism_across_worker_counts() {
    let started = Instant::now();
    for n in [-3i64, -1, 1, 3] {
        for (k, m) in [(2u32, 3usize), (2, 4), (3, 3)] {
            let base = SearchParams::new(n, k, m, 25);
            let reference = jsonl(&search(&base).unwrap());
            for workers in [4usize, 8] {
                let out = jsonl(
                    &search(&SearchParams {
                        workers,
                        ..base.clone()
                    })
                    .unwrap(),
                );
                assert_eq!(
                    reference, out,
                    "workers={workers} changed bytes at n={n} k={k} m={m}"
                );
            }
        }
    }
    pass(
        10,
        "search output byte-identical at 1, 4, and 8 workers",
        started,
    );
}

fn jsonl(records: &[TupleRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).unwrap())
        .collect::<Vec<_>>()
        .join("\n")
}
