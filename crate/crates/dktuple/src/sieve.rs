//! Gallagher's larger sieve, evaluated exactly as finite sums.
//!
//! For a set `S` inside `[1, N]` and primes `p <= Q` from a chosen family,
//! the sieve bounds `|S|` by
//!
//! ```text
//! (sum log p  -  log N) / (sum log p / w_p  -  log N)
//! ```
//!
//! valid whenever the denominator is positive. In a-posteriori mode `w_p` is
//! the true residue count `|S mod p|`; in a-priori mode it is the
//! character-sum weight `min(sqrt(p) + 2, p)` available for any set with
//! property `D_k(n)`, with primes restricted to `p = 1 (mod k)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashSet;
use std::fmt;

use crate::arith::{ln_big, primes_in_ap, theta, totient, CompensatedSum};
use crate::bounds::q0_ln;
use crate::{jsonnum, Error, Result};

/// Which primes enter the sieve sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSpec {
    /// All primes `p <= Q`.
    All,
    /// Primes `p = 1 (mod k)`, the family carrying an order-k character.
    OneModK(u64),
}

impl fmt::Display for PrimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSpec::All => write!(f, "all primes"),
            PrimeSpec::OneModK(k) => write!(f, "p = 1 (mod {k})"),
        }
    }
}

impl Serialize for PrimeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SieveMode {
    APosteriori,
    APriori,
}

/// One prime's contribution; exported as CSV by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrimeRow {
    pub p: u64,
    pub log_p: f64,
    /// The weight `w_p` dividing `log p` in the denominator.
    pub weight: f64,
    /// Exact residue count `|S mod p|` (a-posteriori mode only).
    pub residues: Option<u64>,
}

/// Exact numerator/denominator of Gallagher's inequality and the resulting
/// bound, or an inconclusive verdict when the denominator is not positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SieveReport {
    /// The interval bound `N` with `S` inside `[1, N]`.
    #[serde(with = "jsonnum::biguint_string")]
    pub n_limit: BigUint,
    pub q: u64,
    pub prime_spec: PrimeSpec,
    pub mode: SieveMode,
    pub numerator: f64,
    pub denominator: f64,
    /// `numerator / denominator`, present iff the denominator is positive.
    pub bound: Option<f64>,
    #[serde(skip)]
    pub rows: Vec<PrimeRow>,
}

/// `|S mod p|`: the number of distinct residues of `S` modulo `p`.
pub fn residue_count(s: &[BigUint], p: u64) -> usize {
    let p_big = BigUint::from(p);
    let residues: HashSet<u64> = s
        .iter()
        .map(|x| (x % &p_big).to_u64().expect("residue fits u64"))
        .collect();
    residues.len()
}

/// Gallagher's inequality on an explicit set: `w_p = |S mod p|`.
pub fn gallagher_bound(
    s: &[BigUint],
    n_limit: &BigUint,
    prime_spec: PrimeSpec,
    q: u64,
) -> Result<SieveReport> {
    if s.is_empty() {
        return Err(Error::InvalidParameter("sieve set is empty".into()));
    }
    if q < 2 {
        return Err(Error::InvalidParameter("sieve requires Q > 1".into()));
    }
    for x in s {
        if x.is_zero() || x > n_limit {
            return Err(Error::InvalidParameter(format!(
                "set element {x} outside [1, N = {n_limit}]"
            )));
        }
    }
    let primes = match prime_spec {
        PrimeSpec::All => primes_in_ap(q, 1, 0)?,
        PrimeSpec::OneModK(k) => primes_in_ap(q, k, 1)?,
    };
    let rows: Vec<PrimeRow> = primes
        .iter()
        .map(|&p| {
            let count = residue_count(s, p) as u64;
            PrimeRow {
                p,
                log_p: (p as f64).ln(),
                weight: count as f64,
                residues: Some(count),
            }
        })
        .collect();
    Ok(assemble(
        n_limit.clone(),
        q,
        prime_spec,
        SieveMode::APosteriori,
        rows,
    ))
}

/// The a-priori form used for sets with property `D_k(n)` inside
/// `[1, |n|^3]`: primes `p = 1 (mod k)`, weight `min(sqrt(p) + 2, p)`, and
/// cutoff defaulting to `ceil((phi(k) log N)^2)`.
///
/// A nonpositive denominator is a data outcome (bound absent), not an error:
/// callers explore `Q`.
pub fn apriori_sieve_bound(n: &BigInt, k: u32, q: Option<u64>) -> Result<SieveReport> {
    if n.magnitude() <= &1u32.into() {
        return Err(Error::InvalidParameter(
            "a-priori sieve requires |n| >= 2".into(),
        ));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(
            "a-priori sieve requires k >= 2".into(),
        ));
    }
    let n_limit = n.magnitude().pow(3);
    let ln_n = ln_big(&n_limit);
    let q = match q {
        Some(q) if q >= 2 => q,
        Some(q) => {
            return Err(Error::InvalidParameter(format!(
                "sieve requires Q > 1, got {q}"
            )))
        }
        None => (totient(k as u64) as f64 * ln_n).powi(2).ceil() as u64,
    };
    let primes = primes_in_ap(q, k as u64, 1)?;
    let rows: Vec<PrimeRow> = primes
        .iter()
        .map(|&p| PrimeRow {
            p,
            log_p: (p as f64).ln(),
            weight: ((p as f64).sqrt() + 2.0).min(p as f64),
            residues: None,
        })
        .collect();
    Ok(assemble(
        n_limit,
        q,
        PrimeSpec::OneModK(k as u64),
        SieveMode::APriori,
        rows,
    ))
}

fn assemble(
    n_limit: BigUint,
    q: u64,
    prime_spec: PrimeSpec,
    mode: SieveMode,
    rows: Vec<PrimeRow>,
) -> SieveReport {
    let ln_n = ln_big(&n_limit);
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for row in &rows {
        num.add(row.log_p);
        den.add(row.log_p / row.weight);
    }
    let numerator = num.value() - ln_n;
    let denominator = den.value() - ln_n;
    let bound = (denominator > 0.0).then(|| numerator / denominator);
    SieveReport {
        n_limit,
        q,
        prime_spec,
        mode,
        numerator,
        denominator,
        bound,
        rows,
    }
}

/// Empirical check record for the prime-counting inequality
/// `|theta(Q; k, a) - Q/phi(k)| < Q / (160 log Q)`, which is guaranteed for
/// `Q >= Q_0(k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PntCheck {
    pub q: u64,
    pub k: u64,
    pub a: i64,
    pub theta: f64,
    pub main_term: f64,
    pub error: f64,
    pub allowance: f64,
    /// Whether `Q >= Q_0(k)`, i.e. whether the inequality is guaranteed.
    pub applies: bool,
    /// Whether the inequality happens to hold at this `Q`.
    pub holds_empirically: bool,
}

/// Compares `theta(Q; k, a)` against its main term `Q / phi(k)`.
pub fn pnt_check(q: u64, k: u64, a: i64) -> Result<PntCheck> {
    if k < 3 {
        return Err(Error::InvalidParameter(
            "pnt_check: stated for k >= 3".into(),
        ));
    }
    if q < 3 {
        return Err(Error::InvalidParameter("pnt_check: Q must be >= 3".into()));
    }
    let theta_val = theta(q, k, a)?;
    let main_term = q as f64 / totient(k) as f64;
    let error = (theta_val - main_term).abs();
    let allowance = q as f64 / (160.0 * (q as f64).ln());
    let applies = (q as f64).ln() >= q0_ln(k)?;
    Ok(PntCheck {
        q,
        k,
        a,
        theta: theta_val,
        main_term,
        error,
        allowance,
        applies,
        holds_empirically: error < allowance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn from_u64s(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn residue_count_examples() {
        let s = from_u64s(&[1, 3, 8, 120]);
        assert_eq!(residue_count(&s, 5), 3); // {1, 3, 0}
        assert_eq!(residue_count(&s, 2), 2); // {1, 0}
        assert_eq!(residue_count(&from_u64s(&[1]), 97), 1);
    }

    #[test]
    fn worked_example_matches_oracle() {
        // S = {1,3,8,120}, N = 120, Q = 20, all primes.
        // Residue counts 2,3,3,2,4,3,3,4 for p = 2..19; oracle values from a
        // 60-digit mpmath run.
        let s = from_u64s(&[1, 3, 8, 120]);
        let report = gallagher_bound(&s, &BigUint::from(120u32), PrimeSpec::All, 20).unwrap();
        let counts: Vec<u64> = report.rows.iter().map(|r| r.residues.unwrap()).collect();
        assert_eq!(counts, vec![2, 3, 3, 2, 4, 3, 3, 4]);
        assert!((report.numerator - 11.300112741417987).abs() < 1e-9);
        assert!((report.denominator - 0.5696914525567737).abs() < 1e-9);
        let bound = report.bound.unwrap();
        assert!((bound - 19.835496373875913).abs() < 1e-9);
        assert!(4.0 <= bound, "|S| <= bound must hold");
    }

    #[test]
    fn full_interval_is_inconclusive() {
        // S = [1, N]: |S_p| = p, denominator negative for Q << N.
        let s: Vec<BigUint> = (1u64..=50).map(BigUint::from).collect();
        let report = gallagher_bound(&s, &BigUint::from(50u32), PrimeSpec::All, 20).unwrap();
        assert!(report.denominator < 0.0);
        assert!(report.bound.is_none());
    }

    #[test]
    fn bound_is_sound_on_random_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let n_limit = rng.gen_range(100u64..100_000);
            let size = rng.gen_range(1usize..60);
            let mut set: Vec<u64> = (0..size).map(|_| rng.gen_range(1..=n_limit)).collect();
            set.sort_unstable();
            set.dedup();
            let q = rng.gen_range(2u64..500);
            let report =
                gallagher_bound(&from_u64s(&set), &BigUint::from(n_limit), PrimeSpec::All, q)
                    .unwrap();
            if let Some(bound) = report.bound {
                assert!(
                    set.len() as f64 <= bound + 1e-9,
                    "sieve bound violated: |S|={} bound={bound}",
                    set.len()
                );
            }
        }
    }

    #[test]
    fn rejects_elements_outside_interval() {
        let s = from_u64s(&[1, 200]);
        assert!(matches!(
            gallagher_bound(&s, &BigUint::from(120u32), PrimeSpec::All, 20),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn numerator_monotone_in_q() {
        let s = from_u64s(&[1, 3, 8, 120]);
        let mut prev = f64::NEG_INFINITY;
        for q in (2..400).step_by(13) {
            let r = gallagher_bound(&s, &BigUint::from(120u32), PrimeSpec::All, q).unwrap();
            assert!(r.numerator >= prev);
            prev = r.numerator;
        }
    }

    #[test]
    fn apriori_default_cutoff_matches_oracle() {
        // n = 256, k = 2: N = 2^24, Q = ceil((ln N)^2) = 277, 58 odd primes.
        let report = apriori_sieve_bound(&BigInt::from(256), 2, None).unwrap();
        assert_eq!(report.q, 277);
        assert_eq!(report.rows.len(), 58);
        assert_eq!(report.mode, SieveMode::APriori);
        assert!((report.numerator - 242.73235838534204).abs() < 1e-9);
        assert!((report.denominator - 5.038421345585919).abs() < 1e-9);
        let bound = report.bound.expect("denominator is positive");
        assert!((bound - 48.17627223614317).abs() < 1e-8);
        assert!(bound >= 5.0, "must dominate the known D(256) quintuples");
    }

    #[test]
    fn apriori_with_tiny_q_is_inconclusive() {
        let report = apriori_sieve_bound(&BigInt::from(256), 2, Some(10)).unwrap();
        assert!(report.denominator < 0.0);
        assert!(report.bound.is_none());
    }

    #[test]
    fn apriori_rejects_tiny_n() {
        assert!(apriori_sieve_bound(&BigInt::from(1), 2, None).is_err());
        assert!(apriori_sieve_bound(&BigInt::from(0), 2, None).is_err());
        // Negative n works through |n|.
        let report = apriori_sieve_bound(&BigInt::from(-256), 2, None).unwrap();
        assert_eq!(report.q, 277);
    }

    #[test]
    fn aposteriori_beats_apriori_on_paper_quintuples() {
        // With true residue counts the denominator can only grow, so the
        // resulting bound can only shrink.
        for set in [
            &[1u64, 33, 105, 320, 18240][..],
            &[5, 21, 64, 285, 6720][..],
        ] {
            let apriori = apriori_sieve_bound(&BigInt::from(256), 2, None).unwrap();
            let n_limit = apriori.n_limit.clone();
            let apost =
                gallagher_bound(&from_u64s(set), &n_limit, PrimeSpec::OneModK(2), apriori.q)
                    .unwrap();
            for (post_row, pri_row) in apost.rows.iter().zip(&apriori.rows) {
                assert_eq!(post_row.p, pri_row.p);
                assert!(
                    post_row.weight <= pri_row.weight + 1e-12,
                    "residue count exceeds a-priori weight at p={}",
                    post_row.p
                );
            }
            let (Some(a), Some(b)) = (apost.bound, apriori.bound) else {
                panic!("both bounds should exist")
            };
            assert!(a <= b + 1e-9, "a-posteriori {a} > a-priori {b}");
            assert!(5.0 <= a + 1e-9, "bound must admit the quintuple itself");
        }
    }

    #[test]
    fn pnt_check_below_threshold() {
        let c = pnt_check(1_000_000, 3, 1).unwrap();
        assert!(!c.applies, "10^6 < 8e9");
        assert!(c.error > 0.0 && c.allowance > 0.0);

        assert!(pnt_check(3, 3, 2).is_ok());
        let degenerate = pnt_check(3, 3, 1).unwrap();
        assert_eq!(degenerate.theta, 0.0);
        assert!((degenerate.main_term - 1.5).abs() < 1e-15);
    }

    #[test]
    fn pnt_check_regression_value() {
        // theta(10^6; 4, 1) pinned by a 60-digit oracle over 39175 primes.
        let c = pnt_check(1_000_000, 4, 1).unwrap();
        assert!((c.theta - 498333.4419217265).abs() < 1e-7);
        assert_eq!(c.main_term, 500_000.0);
        assert!((c.error - 1666.5580782735112).abs() < 1e-7);
        assert!((c.allowance - 452.3900853158873).abs() < 1e-9);
        assert!(!c.applies);
        // Informational: at this Q the 1/160 inequality does not yet hold.
        assert!(!c.holds_empirically);
    }

    #[test]
    fn pnt_check_rejects_bad_domain() {
        assert!(pnt_check(100, 2, 1).is_err());
        assert!(pnt_check(2, 3, 1).is_err());
        assert!(pnt_check(100, 4, 2).is_err()); // gcd(2,4) != 1
    }

    #[test]
    fn report_serializes_without_rows() {
        let report = apriori_sieve_bound(&BigInt::from(256), 2, Some(100)).unwrap();
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains(r#""n_limit":"16777216""#));
        assert!(text.contains(r#""mode":"a-priori""#));
        assert!(text.contains(r#""prime_spec":"p = 1 (mod 2)""#));
        assert!(!text.contains("rows"));
    }
}
