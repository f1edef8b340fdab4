//! The Diophantine-approximation side of the theory: heights of k-th roots
//! of rationals, the solution pairs `(u_i, v_i)` of the linked system
//! `a_1 x + n = u^k`, `a_2 x + n = v^k`, and exact or certified checks of the
//! two approximation inequalities those pairs must satisfy.
//!
//! The rational inequality (`|u/v - alpha| <= a_2 / (2 v^k)`) is decided by
//! exact k-th-power comparison. The irrational-threshold inequality
//! (`|u/v - alpha| < v^{-(k - 1/2)}`) is decided by outward-rounded interval
//! arithmetic with doubling precision; a gap below `2^-256` is declared
//! unresolved rather than guessed.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::f64::consts::TAU;

use crate::arith::{ikroot, ln_big};
use crate::tuples::{verify, PowerPolicy, TupleRecord};
use crate::{jsonnum, Error, Result};

/// One solution `x = a_i` of the linked system, with its exact roots.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionPair {
    /// 1-based element index, `i >= 3`.
    pub index: usize,
    #[serde(with = "jsonnum::biguint_string")]
    pub x: BigUint,
    /// Root of `a_1 x + n`.
    #[serde(with = "jsonnum::biguint_string")]
    pub u: BigUint,
    /// Root of `a_2 x + n`.
    #[serde(with = "jsonnum::biguint_string")]
    pub v: BigUint,
}

/// Extracts `(u_i, v_i)` for every `i >= 3` of a verified tuple. A tuple
/// with fewer than three elements yields no pairs. The sign of `n` is
/// inherited from the record, covering both linked systems.
pub fn solution_pairs(t: &TupleRecord) -> Result<Vec<SolutionPair>> {
    let report = verify(t, PowerPolicy::default())?;
    if !report.ok {
        return Err(Error::InvalidParameter(
            "solution_pairs: tuple does not verify".into(),
        ));
    }
    let mut out = Vec::with_capacity(t.len().saturating_sub(2));
    for i in 3..=t.len() {
        let u = report.witness(1, i).expect("verified pair").magnitude();
        let v = report.witness(2, i).expect("verified pair").magnitude();
        debug_assert!(
            out.last().is_none_or(|prev: &SolutionPair| prev.v < *v),
            "v_i must increase with i"
        );
        out.push(SolutionPair {
            index: i,
            x: t.element(i).clone(),
            u: u.clone(),
            v: v.clone(),
        });
    }
    Ok(out)
}

/// `alpha = (a1/a2)^{1/k}` with its degree and absolute height.
///
/// With `u/w` the reduction of `a1/a2` to lowest terms and `d` the largest
/// divisor of `k` for which both `u` and `w` are d-th powers, `alpha`
/// generates a degree `r = k/d` extension and — since every conjugate has
/// modulus below one — its height is the r-th root of the reduced
/// denominator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootAlpha {
    #[serde(with = "jsonnum::biguint_string")]
    pub a1: BigUint,
    #[serde(with = "jsonnum::biguint_string")]
    pub a2: BigUint,
    pub k: u32,
    /// Numerator of `a1/a2` in lowest terms.
    #[serde(with = "jsonnum::biguint_string")]
    pub u_red: BigUint,
    /// Denominator of `a1/a2` in lowest terms.
    #[serde(with = "jsonnum::biguint_string")]
    pub w_red: BigUint,
    /// Degree of `alpha` over the rationals after power reduction.
    pub degree: u32,
    pub height: f64,
}

pub fn height_of_root(a1: &BigUint, a2: &BigUint, k: u32) -> Result<RootAlpha> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "height_of_root: k must be >= 2".into(),
        ));
    }
    if a1.is_zero() {
        return Err(Error::InvalidParameter(
            "height_of_root: a1 must be >= 1".into(),
        ));
    }
    if a1 >= a2 {
        return Err(Error::InvalidParameter(
            "height_of_root: requires a1 < a2".into(),
        ));
    }
    let g = a1.gcd(a2);
    let u_red = a1 / &g;
    let w_red = a2 / &g;

    // Largest d | k with both parts d-th powers. Positive non-powers keep
    // x^r - u/w irreducible (the quartic exception needs a negative
    // constant), so r = k/d is the exact degree.
    let mut d_best = 1u32;
    for d in (2..=k).rev() {
        if k.is_multiple_of(d)
            && exact_power_root(&u_red, d).is_some()
            && exact_power_root(&w_red, d).is_some()
        {
            d_best = d;
            break;
        }
    }
    let degree = k / d_best;
    let w_free = exact_power_root(&w_red, d_best).expect("d_best divides");
    // Minimal polynomial (degree > 1): w' x^r - u'; leading coefficient w',
    // all conjugates inside the unit circle, so H = w'^(1/r). The degree-1
    // case max(u', w') = w' agrees.
    let height = (ln_big(&w_free) / degree as f64).exp();
    Ok(RootAlpha {
        a1: a1.clone(),
        a2: a2.clone(),
        k,
        u_red,
        w_red,
        degree,
        height,
    })
}

/// `r` with `r^d = x` exactly, if it exists (`d >= 1`, `x >= 1`).
fn exact_power_root(x: &BigUint, d: u32) -> Option<BigUint> {
    let r = ikroot(x, d).expect("d >= 1");
    if r.pow(d) == *x {
        Some(r)
    } else {
        None
    }
}

/// The sine product `c(k) = prod_{j=1}^{(k-1)/2} sin^2(2 pi j / k)`, defined
/// for odd `k >= 3`.
pub fn c_lemma(k: u32) -> Result<f64> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "c_lemma: stated for odd k >= 3, got {k}"
        )));
    }
    let mut product = 1.0f64;
    for j in 1..=(k - 1) / 2 {
        let s = (TAU * j as f64 / k as f64).sin();
        product *= s * s;
    }
    Ok(product)
}

/// The size threshold on `n` in the approximation lemma:
/// `2^{1/(L-1)} c(k)^{-1/(L-1)}`.
pub fn n_threshold(k: u32, level: u32) -> Result<f64> {
    if level < 3 {
        return Err(Error::InvalidParameter(
            "n_threshold: L must be >= 3".into(),
        ));
    }
    let c = c_lemma(k)?;
    Ok((2.0 / c).powf(1.0 / (level - 1) as f64))
}

/// Verdicts for one solution pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ApproxCheck {
    pub index: usize,
    /// Exact verdict of `|u/v - alpha| <= a_2 / (2 v^k)`.
    pub lem31_holds: bool,
    /// Verdict of `|u/v - alpha| < v^{-(k - 1/2)}`. `None` when the regime
    /// `v > a_2^4` is not reached, or (with `certified = false`) when
    /// interval refinement could not separate the two sides.
    pub lem32_holds: Option<bool>,
    /// False only when refinement bottomed out at a gap below `2^-256`.
    pub certified: bool,
}

/// Checks the two approximation inequalities for the pair at `index`.
pub fn approx_check(t: &TupleRecord, index: usize) -> Result<ApproxCheck> {
    let pairs = solution_pairs(t)?;
    let pair = pairs.iter().find(|p| p.index == index).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "approx_check: no solution pair at index {index} (need 3 <= i <= m)"
        ))
    })?;
    let a1 = t.element(1);
    let a2 = t.element(2);
    let k = t.k();

    let uv = BigRational::new(BigInt::from(pair.u.clone()), BigInt::from(pair.v.clone()));
    let threshold = BigRational::new(
        BigInt::from(a2.clone()),
        BigInt::from(2u32) * BigInt::from(pair.v.pow(k)),
    );
    let lem31_holds = root_within_of(&uv, a1, a2, k, &threshold);

    let in_regime = pair.v > a2.pow(4);
    let (lem32_holds, certified) = if in_regime {
        match lemma32_certified(&uv, a1, a2, k, &pair.v) {
            Some(verdict) => (Some(verdict), true),
            None => (None, false),
        }
    } else {
        (None, true)
    };
    Ok(ApproxCheck {
        index,
        lem31_holds,
        lem32_holds,
        certified,
    })
}

/// Exact verdict of `|q - (a1/a2)^{1/k}| <= thr` for nonnegative rational `q`
/// and `thr`: since the k-th power is monotone on nonnegatives, this is
/// `max(0, q - thr)^k <= a1/a2 <= (q + thr)^k`, all rational.
fn root_within_of(q: &BigRational, a1: &BigUint, a2: &BigUint, k: u32, thr: &BigRational) -> bool {
    let ratio = BigRational::new(BigInt::from(a1.clone()), BigInt::from(a2.clone()));
    let upper = (q + thr).pow(k as i32);
    if ratio > upper {
        return false;
    }
    let lower = q - thr;
    if lower.is_positive() && lower.pow(k as i32) > ratio {
        return false;
    }
    true
}

const LEMMA32_PRECISIONS: [u32; 3] = [64, 128, 256];

/// Certified verdict of `|q - alpha| < v^{-(k - 1/2)}` with
/// `alpha = (a1/a2)^{1/k}`: both sides are squared (making the threshold
/// rational) and `alpha` is bracketed in a width `2^-prec` rational interval
/// from an exact scaled integer root. `None` if 256 bits cannot separate.
fn lemma32_certified(
    q: &BigRational,
    a1: &BigUint,
    a2: &BigUint,
    k: u32,
    v: &BigUint,
) -> Option<bool> {
    let tau_squared = BigRational::new(BigInt::one(), BigInt::from(v.pow(2 * k - 1)));
    for prec in LEMMA32_PRECISIONS {
        let scale = BigUint::one() << prec;
        // alpha * scale lands in [root, root + 1].
        let scaled = (a1 * scale.pow(k)) / a2;
        let root = ikroot(&scaled, k).expect("k >= 2");
        let alpha_lo = BigRational::new(BigInt::from(root.clone()), BigInt::from(scale.clone()));
        let alpha_hi = BigRational::new(BigInt::from(root + 1u32), BigInt::from(scale));
        // q - alpha lies in [q - alpha_hi, q - alpha_lo]; take |.| outward.
        let lo = q - &alpha_hi;
        let hi = q - &alpha_lo;
        let (abs_lo, abs_hi) = if !lo.is_negative() {
            (lo, hi)
        } else if !hi.is_positive() {
            (-hi, -lo)
        } else {
            (BigRational::zero(), (-lo).max(hi))
        };
        if abs_hi.pow(2) < tau_squared {
            return Some(true);
        }
        if abs_lo.is_positive() && abs_lo.pow(2) > tau_squared {
            return Some(false);
        }
    }
    None
}
