//! Generalized Diophantine tuples with property `D_k(n)`: representation,
//! exact verification, Euler's quadruple family, extension search, and
//! exhaustive m-tuple search over `[1, B]`.

mod search;

pub use search::{brute_force_search, search, SearchCheckpoint, SearchParams};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::is_kth_power;
use crate::{jsonnum, Error, Result};

/// Which roots `r` witness "`x` is a k-th power" in `x = r^k`.
///
/// The default admits only `r >= 1`, matching the tuple definition and every
/// gap lemma. `allow_zero` admits `r = 0` (so `x = 0` qualifies);
/// `allow_negative` admits `r < 0` for odd `k`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerPolicy {
    pub allow_zero: bool,
    pub allow_negative: bool,
}

impl PowerPolicy {
    /// The admissible root of `x` under this policy, if any.
    pub fn kth_root(&self, x: &BigInt, k: u32) -> Result<Option<BigInt>> {
        if x.is_positive() {
            return Ok(is_kth_power(x, k)?.map(BigInt::from));
        }
        if x.is_zero() {
            return Ok(self.allow_zero.then(BigInt::zero));
        }
        if self.allow_negative && k % 2 == 1 {
            return Ok(is_kth_power(&-x, k)?.map(|r| -BigInt::from(r)));
        }
        Ok(None)
    }
}

/// A candidate or verified m-tuple: `k`, `n`, and the sorted elements
/// `a_1 < a_2 < ... < a_m`.
///
/// Serializes as `{"k":.., "n":.., "elements":["..", ..]}` with elements as
/// decimal strings; `n` stays a JSON number while it fits in 53 bits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTupleRecord")]
pub struct TupleRecord {
    k: u32,
    #[serde(with = "jsonnum::bigint_compact")]
    n: BigInt,
    #[serde(with = "jsonnum::biguint_vec_string")]
    elements: Vec<BigUint>,
}

#[derive(Deserialize)]
struct RawTupleRecord {
    k: u32,
    #[serde(with = "jsonnum::bigint_compact")]
    n: BigInt,
    #[serde(with = "jsonnum::biguint_vec_string")]
    elements: Vec<BigUint>,
}

impl TryFrom<RawTupleRecord> for TupleRecord {
    type Error = Error;
    fn try_from(raw: RawTupleRecord) -> Result<Self> {
        TupleRecord::new(raw.k, raw.n, raw.elements)
    }
}

impl TupleRecord {
    /// Validates `k >= 2`, `n != 0`, and that the elements are positive,
    /// strictly increasing, and nonempty.
    pub fn new(k: u32, n: BigInt, elements: Vec<BigUint>) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "tuple requires k >= 2, got {k}"
            )));
        }
        if n.is_zero() {
            return Err(Error::InvalidParameter("tuple requires n != 0".into()));
        }
        if elements.is_empty() {
            return Err(Error::InvalidParameter("tuple has no elements".into()));
        }
        if elements[0].is_zero() {
            return Err(Error::InvalidParameter(
                "tuple elements must be positive".into(),
            ));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "tuple elements must be strictly increasing".into(),
            ));
        }
        Ok(Self { k, n, elements })
    }

    /// Convenience constructor from machine integers; sorts and deduplicates
    /// nothing — the slice must already be strictly increasing.
    pub fn from_u64(k: u32, n: i64, elements: &[u64]) -> Result<Self> {
        Self::new(
            k,
            BigInt::from(n),
            elements.iter().map(|&x| BigUint::from(x)).collect(),
        )
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    /// Number of elements `m`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one element
    }

    /// 1-based element access, matching the `a_i` notation.
    pub fn element(&self, i: usize) -> &BigUint {
        &self.elements[i - 1]
    }
}

/// Per-pair witness: `a_i * a_j + n = root^k` for the 1-based pair `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    #[serde(with = "jsonnum::bigint_compact")]
    pub root: BigInt,
}

/// Result of [`verify`]: either witnesses for all `C(m,2)` pairs, or the
/// pairs that failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    /// Ordered by `(i, j)`, 1-based, `i < j`.
    pub witnesses: Vec<PairWitness>,
    pub failures: Vec<(usize, usize)>,
}

impl VerifyReport {
    /// Witness lookup by unordered 1-based pair.
    pub fn witness(&self, i: usize, j: usize) -> Option<&BigInt> {
        let key = (i.min(j), i.max(j));
        self.witnesses
            .binary_search_by_key(&key, |w| (w.i, w.j))
            .ok()
            .map(|idx| &self.witnesses[idx].root)
    }
}

/// Checks property `D_k(n)` pair by pair, recording exact root witnesses.
pub fn verify(t: &TupleRecord, policy: PowerPolicy) -> Result<VerifyReport> {
    let m = t.len();
    let mut witnesses = Vec::with_capacity(m * (m - 1) / 2);
    let mut failures = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            let x = BigInt::from(t.element(i) * t.element(j)) + &t.n;
            match policy.kth_root(&x, t.k)? {
                Some(root) => witnesses.push(PairWitness { i, j, root }),
                None => failures.push((i, j)),
            }
        }
    }
    Ok(VerifyReport {
        ok: failures.is_empty(),
        witnesses,
        failures,
    })
}

/// Euler's family: `{a, b, a + b + 2r, 4r(r + a)(r + b)}` with `ab + 1 = r^2`.
///
/// Returns the `D(1)` quadruple when `ab + 1` is a perfect square, `None`
/// otherwise.
pub fn euler_family(a: &BigUint, b: &BigUint) -> Result<Option<TupleRecord>> {
    if a >= b {
        return Err(Error::InvalidParameter(
            "euler_family requires a < b".into(),
        ));
    }
    if a.is_zero() {
        return Err(Error::InvalidParameter(
            "euler_family requires a >= 1".into(),
        ));
    }
    let square = BigInt::from(a * b + 1u32);
    let Some(r) = is_kth_power(&square, 2)? else {
        return Ok(None);
    };
    let third = a + b + 2u32 * &r;
    let fourth = 4u32 * &r * (&r + a) * (&r + b);
    let record = TupleRecord::new(2, BigInt::one(), vec![a.clone(), b.clone(), third, fourth])?;
    Ok(Some(record))
}

/// Outcome of [`extend`]: every admissible new element, plus whether the base
/// tuple itself verified (a failing base is reported, not fatal).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub base_verified: bool,
    #[serde(with = "jsonnum::biguint_vec_string")]
    pub values: Vec<BigUint>,
}

/// All `x <= bound`, `x` not already an element, such that `a * x + n` is an
/// admissible k-th power for every element `a`. Ascending.
///
/// Candidates are generated from the largest element's power progression
/// (the sparsest one), then filtered against the rest.
pub fn extend(t: &TupleRecord, bound: &BigUint, policy: PowerPolicy) -> Result<Extension> {
    let base_verified = verify(t, policy)?.ok;
    let anchor = t.elements.last().expect("nonempty");
    let lo = BigInt::from(anchor.clone()) + &t.n; // v at x = 1
    let hi = BigInt::from(anchor * bound) + &t.n; // v at x = bound
    let mut values = Vec::new();
    if bound.is_zero() {
        return Ok(Extension {
            base_verified,
            values,
        });
    }
    for v in admissible_power_values(&lo, &hi, t.k, policy)? {
        let shifted = v - &t.n;
        if !shifted.is_positive() {
            continue;
        }
        let shifted = shifted.magnitude().clone();
        if (&shifted % anchor) != BigUint::zero() {
            continue;
        }
        let x = shifted / anchor;
        if x.is_zero() || x > *bound || t.elements.contains(&x) {
            continue;
        }
        let mut all = true;
        for a in &t.elements {
            if a == anchor {
                continue;
            }
            let prod = BigInt::from(a * &x) + &t.n;
            if policy.kth_root(&prod, t.k)?.is_none() {
                all = false;
                break;
            }
        }
        if all {
            values.push(x);
        }
    }
    values.sort();
    values.dedup();
    Ok(Extension {
        base_verified,
        values,
    })
}

/// Every value `v` in `[lo, hi]` that is an admissible k-th power under the
/// policy, ascending. Positive powers always; `0` and negative odd powers per
/// the flags.
fn admissible_power_values(
    lo: &BigInt,
    hi: &BigInt,
    k: u32,
    policy: PowerPolicy,
) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    if policy.allow_negative && k % 2 == 1 && lo.is_negative() {
        // v = -s^k with s >= 1 and lo <= v <= min(hi, -1).
        let neg_hi = (-lo.clone()).magnitude().clone(); // s^k <= -lo
        let s_max = crate::arith::ikroot(&neg_hi, k)?;
        let s_min = if hi.is_negative() {
            ceil_root(&(-hi.clone()).magnitude().clone(), k)?
        } else {
            BigUint::one()
        };
        let mut s = s_max;
        while s >= s_min && !s.is_zero() {
            out.push(-BigInt::from(s.pow(k)));
            s -= 1u32;
        }
    }
    if policy.allow_zero && !lo.is_positive() && !hi.is_negative() {
        out.push(BigInt::zero());
    }
    if hi.is_positive() {
        let r_min = if lo.is_positive() {
            ceil_root(lo.magnitude(), k)?.max(BigUint::one())
        } else {
            BigUint::one()
        };
        let r_max = crate::arith::ikroot(hi.magnitude(), k)?;
        let mut r = r_min;
        while r <= r_max {
            out.push(BigInt::from(r.pow(k)));
            r += 1u32;
        }
    }
    Ok(out)
}

/// Least `r` with `r^k >= x`.
fn ceil_root(x: &BigUint, k: u32) -> Result<BigUint> {
    let r = crate::arith::ikroot(x, k)?;
    if r.pow(k) == *x {
        Ok(r)
    } else {
        Ok(r + 1u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(k: u32, n: i64, elements: &[u64]) -> TupleRecord {
        TupleRecord::from_u64(k, n, elements).unwrap()
    }

    #[test]
    fn record_invariants() {
        assert!(TupleRecord::from_u64(1, 1, &[1, 2]).is_err());
        assert!(TupleRecord::from_u64(2, 0, &[1, 2]).is_err());
        assert!(TupleRecord::from_u64(2, 1, &[]).is_err());
        assert!(TupleRecord::from_u64(2, 1, &[0, 2]).is_err());
        assert!(TupleRecord::from_u64(2, 1, &[2, 2]).is_err());
        assert!(TupleRecord::from_u64(2, 1, &[3, 2]).is_err());
    }

    #[test]
    fn fermat_quadruple_witnesses() {
        let t = record(2, 1, &[1, 3, 8, 120]);
        let report = verify(&t, PowerPolicy::default()).unwrap();
        assert!(report.ok);
        assert_eq!(report.witnesses.len(), 6);
        let roots: Vec<i64> = report
            .witnesses
            .iter()
            .map(|w| i64::try_from(&w.root).unwrap())
            .collect();
        assert_eq!(roots, vec![2, 3, 11, 5, 19, 31]);
        assert_eq!(report.witness(4, 1), Some(&BigInt::from(11)));
    }

    #[test]
    fn diophantus_quadruple_d256() {
        let t = record(2, 256, &[1, 33, 68, 105]);
        assert!(verify(&t, PowerPolicy::default()).unwrap().ok);
    }

    #[test]
    fn d256_quintuples() {
        for set in [
            &[1u64, 33, 105, 320, 18240][..],
            &[5u64, 21, 64, 285, 6720][..],
        ] {
            let t = record(2, 256, set);
            let report = verify(&t, PowerPolicy::default()).unwrap();
            assert!(report.ok, "quintuple {set:?} failed");
            assert_eq!(report.witnesses.len(), 10);
        }
    }

    #[test]
    fn verify_reports_failing_pairs() {
        let t = record(2, 5, &[1, 2, 3]);
        let report = verify(&t, PowerPolicy::default()).unwrap();
        assert!(!report.ok);
        // 7, 8, 11: none are squares, so every pair lands in failures.
        assert!(report.failures.contains(&(2, 3)));
        assert_eq!(report.witnesses.len() + report.failures.len(), 3);

        // A single bad pair is isolated: {1, 3, 15} with n = 1 fails only at
        // (2, 3) since 3*15 + 1 = 46.
        let t = record(2, 1, &[1, 3, 15]);
        let report = verify(&t, PowerPolicy::default()).unwrap();
        assert!(!report.ok);
        assert_eq!(report.failures, vec![(2, 3)]);
        assert_eq!(report.witnesses.len(), 2);
    }

    #[test]
    fn power_policy_branches() {
        let strict = PowerPolicy::default();
        let zero = PowerPolicy {
            allow_zero: true,
            ..Default::default()
        };
        let neg = PowerPolicy {
            allow_negative: true,
            ..Default::default()
        };
        assert_eq!(strict.kth_root(&BigInt::zero(), 3).unwrap(), None);
        assert_eq!(
            zero.kth_root(&BigInt::zero(), 3).unwrap(),
            Some(BigInt::zero())
        );
        assert_eq!(strict.kth_root(&BigInt::from(-8), 3).unwrap(), None);
        assert_eq!(
            neg.kth_root(&BigInt::from(-8), 3).unwrap(),
            Some(BigInt::from(-2))
        );
        assert_eq!(neg.kth_root(&BigInt::from(-4), 2).unwrap(), None);
    }

    #[test]
    fn euler_family_examples() {
        let got = euler_family(&BigUint::from(1u32), &BigUint::from(3u32))
            .unwrap()
            .unwrap();
        assert_eq!(got, record(2, 1, &[1, 3, 8, 120]));

        let got = euler_family(&BigUint::from(3u32), &BigUint::from(8u32))
            .unwrap()
            .unwrap();
        assert_eq!(got, record(2, 1, &[3, 8, 21, 2080]));

        assert!(euler_family(&BigUint::from(1u32), &BigUint::from(2u32))
            .unwrap()
            .is_none());
        assert!(euler_family(&BigUint::from(3u32), &BigUint::from(3u32)).is_err());
    }

    #[test]
    fn euler_family_always_verifies() {
        // Every a < b <= 200 with ab + 1 square.
        let mut produced = 0;
        for a in 1u64..200 {
            for b in (a + 1)..=200 {
                if let Some(t) = euler_family(&BigUint::from(a), &BigUint::from(b)).unwrap() {
                    produced += 1;
                    assert!(
                        verify(&t, PowerPolicy::default()).unwrap().ok,
                        "family member for ({a},{b}) failed"
                    );
                }
            }
        }
        assert!(
            produced > 50,
            "expected many family members, got {produced}"
        );
    }

    #[test]
    fn extend_examples() {
        let base = record(2, 1, &[1, 3, 8]);
        let ext = extend(&base, &BigUint::from(200u32), PowerPolicy::default()).unwrap();
        assert!(ext.base_verified);
        assert!(ext.values.contains(&BigUint::from(120u32)));

        let base = record(2, 256, &[1, 33, 68]);
        let ext = extend(&base, &BigUint::from(110u32), PowerPolicy::default()).unwrap();
        assert!(ext.values.contains(&BigUint::from(105u32)));

        // Bound below every valid extension: empty.
        let base = record(2, 1, &[1, 3, 8]);
        let ext = extend(&base, &BigUint::from(2u32), PowerPolicy::default()).unwrap();
        assert!(ext.values.is_empty());
    }

    #[test]
    fn extend_superset_property() {
        // extend of the first m-1 elements recovers a_m.
        for set in [&[1u64, 3, 8, 120][..], &[5, 21, 64, 285, 6720][..]] {
            let n = if set[0] == 1 { 1 } else { 256 };
            let prefix = record(2, n, &set[..set.len() - 1]);
            let last = BigUint::from(*set.last().unwrap());
            let ext = extend(&prefix, &last, PowerPolicy::default()).unwrap();
            assert!(ext.values.contains(&last), "{set:?} missing last element");
        }
    }

    #[test]
    fn extend_respects_power_policy() {
        // {4} with n = -4: candidates x <= 10 need 4x - 4 admissible.
        // Strictly positive roots give {2, 5, 10}; allow_zero adds x = 1
        // (4*1 - 4 = 0).
        let base = TupleRecord::new(2, BigInt::from(-4), vec![BigUint::from(4u32)]).unwrap();
        let strict = extend(&base, &BigUint::from(10u32), PowerPolicy::default()).unwrap();
        let got: Vec<u64> = strict
            .values
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert_eq!(got, vec![2, 5, 10]);

        let zero_ok = PowerPolicy {
            allow_zero: true,
            ..Default::default()
        };
        let lax = extend(&base, &BigUint::from(10u32), zero_ok).unwrap();
        let got: Vec<u64> = lax
            .values
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert_eq!(got, vec![1, 2, 5, 10]);
    }

    #[test]
    fn extend_flags_unverified_base() {
        let base = record(2, 5, &[1, 2, 3]);
        let ext = extend(&base, &BigUint::from(50u32), PowerPolicy::default()).unwrap();
        assert!(!ext.base_verified);
    }

    #[test]
    fn tuple_record_json_shape() {
        let t = record(2, 256, &[1, 33, 105, 320, 18240]);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(
            text,
            r#"{"k":2,"n":256,"elements":["1","33","105","320","18240"]}"#
        );
        let back: TupleRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn tuple_record_json_rejects_invalid() {
        let bad = r#"{"k":2,"n":1,"elements":["3","2"]}"#;
        assert!(serde_json::from_str::<TupleRecord>(bad).is_err());
        let bad = r#"{"k":2,"n":0,"elements":["1","2"]}"#;
        assert!(serde_json::from_str::<TupleRecord>(bad).is_err());
    }
}
