//! Gap-principle inequalities: exact checks that force super-exponential
//! growth among large elements of sets with property `D_k(n)` or `D_k(-n)`.
//!
//! Each operation first verifies the k-th-power (or ordering) hypotheses of
//! its inequality and refuses with a precondition error otherwise — these are
//! instance checks, not claims of lemma-level universality. Verdicts come
//! from exact big-rational comparison; the floating `margin` is advisory.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::is_kth_power;
use crate::tuples::{verify, PowerPolicy, TupleRecord};
use crate::{jsonnum, Error, Result};

/// Outcome of one inequality instance: `holds` iff `lhs >= rhs`, decided by
/// exact rational comparison. `margin = lhs/rhs` as a double, for reading.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCheck {
    #[serde(with = "jsonnum::rational_string")]
    pub lhs: BigRational,
    #[serde(with = "jsonnum::rational_string")]
    pub rhs: BigRational,
    pub holds: bool,
    pub margin: f64,
}

impl GapCheck {
    fn from_parts(lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs >= rhs;
        let margin = ratio_to_f64(&lhs) / ratio_to_f64(&rhs);
        GapCheck {
            lhs,
            rhs,
            holds,
            margin,
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn require_kth_power(x: &BigInt, k: u32, label: &str) -> Result<()> {
    if is_kth_power(x, k)?.is_none() {
        return Err(Error::PreconditionFailed(format!(
            "{label} = {x} is not a positive {k}-th power"
        )));
    }
    Ok(())
}

/// Growth inequality for cross products: with `a < b`, `c < d` and all of
/// `ac+n, bc+n, ad+n, bd+n` perfect k-th powers,
/// checks `bd >= k^k n^-k (ac)^(k-1)`.
pub fn check_gyar(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
    n: &BigUint,
    k: u32,
) -> Result<GapCheck> {
    if k < 2 {
        return Err(Error::InvalidParameter("check_gyar: k must be >= 2".into()));
    }
    if n.is_zero() {
        return Err(Error::InvalidParameter("check_gyar: n must be >= 1".into()));
    }
    if a >= b || c >= d {
        return Err(Error::PreconditionFailed(
            "check_gyar requires a < b and c < d".into(),
        ));
    }
    let n_int = BigInt::from(n.clone());
    for (label, x, y) in [("ac", a, c), ("bc", b, c), ("ad", a, d), ("bd", b, d)] {
        require_kth_power(&(BigInt::from(x * y) + &n_int), k, &format!("{label}+n"))?;
    }
    let lhs = BigRational::from_integer(BigInt::from(b * d));
    // k^k (ac)^(k-1) / n^k, kept exact: n^-k underflows any float.
    let rhs = BigRational::new(
        BigInt::from(k).pow(k) * BigInt::from((a * c).pow(k - 1)),
        n_int.pow(k),
    );
    Ok(GapCheck::from_parts(lhs, rhs))
}

/// Unconditional product inequality: for `n^3 <= a < b < c < d`,
/// checks `(ac - n)(bd - n) >= abcd / 2`. No power hypotheses.
pub fn check_abcd(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
    n: &BigUint,
) -> Result<GapCheck> {
    if n.is_zero() {
        return Err(Error::InvalidParameter("check_abcd: n must be >= 1".into()));
    }
    require_cube_ordering(a, b, c, d, n)?;
    let n_int = BigInt::from(n.clone());
    let lhs = (BigInt::from(a * c) - &n_int) * (BigInt::from(b * d) - &n_int);
    let rhs = BigRational::new(BigInt::from(a * b * c * d), BigInt::from(2));
    Ok(GapCheck::from_parts(BigRational::from_integer(lhs), rhs))
}

fn require_cube_ordering(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
    n: &BigUint,
) -> Result<()> {
    if *a < n.pow(3u32) {
        return Err(Error::PreconditionFailed(format!(
            "requires n^3 <= a, got a = {a} < {}",
            n.pow(3u32)
        )));
    }
    if !(a < b && b < c && c < d) {
        return Err(Error::PreconditionFailed("requires a < b < c < d".into()));
    }
    Ok(())
}

/// Gap inequality on the `D_k(-n)` side: for `n^3 <= a < b < c < d` with
/// `ac-n, bc-n, ad-n, bd-n` perfect k-th powers,
/// checks `bd >= k^k 2^-k n^-k (ac)^(k-1)`.
pub fn check_gap_neg(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
    n: &BigUint,
    k: u32,
) -> Result<GapCheck> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "check_gap_neg: k must be >= 2".into(),
        ));
    }
    if n.is_zero() {
        return Err(Error::InvalidParameter(
            "check_gap_neg: n must be >= 1".into(),
        ));
    }
    require_cube_ordering(a, b, c, d, n)?;
    let n_int = BigInt::from(n.clone());
    for (label, x, y) in [("ac", a, c), ("bc", b, c), ("ad", a, d), ("bd", b, d)] {
        require_kth_power(&(BigInt::from(x * y) - &n_int), k, &format!("{label}-n"))?;
    }
    let lhs = BigRational::from_integer(BigInt::from(b * d));
    let rhs = BigRational::new(
        BigInt::from(k).pow(k) * BigInt::from((a * c).pow(k - 1)),
        BigInt::from(2u32).pow(k) * n_int.pow(k),
    );
    Ok(GapCheck::from_parts(lhs, rhs))
}

/// Super-exponential growth certificate: for a verified tuple whose elements
/// all sit above `|n|^3`, with `k >= 3` and `m >= 5`, returns the exact
/// verdict of `a_{2+3j} >= a_2^((k-1)^j)` for each `1 <= j <= (m-2)/3`.
///
/// `sign` must match the sign of the tuple's `n` (+1 for `D_k(n)` with
/// `n > 0`, -1 for the `D_k(-n)` family); `level >= 3` is the exponent of the
/// size regime the corollaries are stated in.
pub fn growth_certificate(t: &TupleRecord, sign: i8, level: u32) -> Result<Vec<(u32, bool)>> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidParameter(
            "growth_certificate: sign must be +1 or -1".into(),
        ));
    }
    if level < 3 {
        return Err(Error::InvalidParameter(
            "growth_certificate: level must be >= 3".into(),
        ));
    }
    if t.k() < 3 {
        return Err(Error::InvalidParameter(
            "growth_certificate: k must be >= 3".into(),
        ));
    }
    let n_positive = t.n().is_positive();
    if (sign == 1) != n_positive {
        return Err(Error::PreconditionFailed(format!(
            "sign {sign} does not match the tuple's n = {}",
            t.n()
        )));
    }
    let cube = t.n().magnitude().pow(3u32);
    if t.elements().iter().any(|x| *x < cube) {
        return Err(Error::PreconditionFailed(format!(
            "all elements must be >= |n|^3 = {cube}"
        )));
    }
    if !verify(t, PowerPolicy::default())?.ok {
        return Err(Error::PreconditionFailed(
            "tuple does not verify; no growth guarantee to certify".into(),
        ));
    }
    growth_verdicts(t.elements(), t.k())
}

/// The raw verdict list behind [`growth_certificate`], without verifying the
/// tuple — for probing the inequality shape on synthetic element lists.
pub fn growth_verdicts(elements: &[BigUint], k: u32) -> Result<Vec<(u32, bool)>> {
    let m = elements.len();
    if m < 5 {
        return Ok(Vec::new()); // no valid j
    }
    let a2 = &elements[1];
    let mut out = Vec::new();
    let mut j = 1u32;
    while 2 + 3 * j as usize <= m {
        let target = &elements[1 + 3 * j as usize]; // a_{2+3j}, 0-based index
        let exponent = (k as u64 - 1).checked_pow(j).ok_or_else(|| {
            Error::ResourceLimit(format!("(k-1)^{j} overflows the exponent range"))
        })?;
        out.push((j, pow_at_least(target, a2, exponent)?));
        j += 1;
    }
    Ok(out)
}

/// Exact verdict of `target >= base^exponent`, with a bit-length prefilter so
/// the full power is only materialized when the comparison is genuinely close.
fn pow_at_least(target: &BigUint, base: &BigUint, exponent: u64) -> Result<bool> {
    if base.is_one() || exponent == 0 {
        return Ok(*target >= BigUint::one());
    }
    let base_bits = base.bits(); // 2^(b-1) <= base < 2^b
    let target_bits = target.bits();
    // base^e >= 2^(e(b-1)) >= 2^(target bits) > target: verdict is false.
    if exponent.saturating_mul(base_bits - 1) >= target_bits {
        return Ok(false);
    }
    // target >= 2^(target bits - 1) >= 2^(e b) > base^e: verdict is true.
    if target_bits > exponent.saturating_mul(base_bits) {
        return Ok(true);
    }
    let result_bits = exponent.saturating_mul(base_bits);
    if result_bits > 1 << 26 {
        return Err(Error::ResourceLimit(format!(
            "comparing against a {result_bits}-bit power exceeds the desk-scale guard"
        )));
    }
    let exponent = u32::try_from(exponent)
        .map_err(|_| Error::ResourceLimit("exponent exceeds u32 in exact power".into()))?;
    Ok(*target >= base.pow(exponent))
}
