//! Dirichlet characters of exact order k modulo primes `p = 1 (mod k)`, and
//! the bilinear character sums `sum chi(ab + n)` with their
//! `sqrt(p |A| |B|)` bound.
//!
//! Character values are carried as exponents of the k-th root of unity —
//! exact integers — until the final embedding into doubles, so rounding can
//! never leak into a multiplicativity or order property.

use serde::Serialize;
use std::f64::consts::TAU;

use crate::arith::{is_prime, mul_mod, primitive_root};
use crate::{Error, Result};

/// Largest prime admitting a full discrete-log table. The sieve only ever
/// needs `p <= Q = (phi(k) log N)^2`, which is tiny at desk scale.
pub const CHAR_TABLE_CAP: u64 = 1 << 20;

/// A Dirichlet character of exact order `k` modulo a prime `p = 1 (mod k)`,
/// fixed deterministically by the smallest primitive root `g`:
/// `chi(x) = zeta_k ^ (ind(x) mod k)` where `g^ind(x) = x`, and `chi(0) = 0`.
#[derive(Debug, Clone)]
pub struct OrderKCharacter {
    p: u64,
    k: u32,
    g: u64,
    /// Discrete logs: `ind[x]` with `g^ind[x] = x (mod p)`; `ind[0]` unused.
    ind: Vec<u32>,
}

impl OrderKCharacter {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// The exponent `e` with `chi(x) = zeta_k^e`, or `None` when `x = 0
    /// (mod p)` (where `chi` vanishes).
    pub fn exponent(&self, x: u64) -> Option<u32> {
        let r = (x % self.p) as usize;
        if r == 0 {
            None
        } else {
            Some(self.ind[r] % self.k)
        }
    }

    /// `chi(x)` embedded as a unit complex number `(re, im)`; `(0, 0)` at 0.
    pub fn value(&self, x: u64) -> (f64, f64) {
        match self.exponent(x) {
            None => (0.0, 0.0),
            Some(e) => {
                let angle = TAU * e as f64 / self.k as f64;
                (angle.cos(), angle.sin())
            }
        }
    }
}

/// Builds the order-k character mod `p` determined by the smallest primitive
/// root. Requires `p` prime, `k >= 2`, and `k | p - 1`.
pub fn make_character(p: u64, k: u32) -> Result<OrderKCharacter> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "make_character: {p} is not prime"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(
            "make_character: order k must be >= 2".into(),
        ));
    }
    if !(p - 1).is_multiple_of(k as u64) {
        return Err(Error::InvalidParameter(format!(
            "make_character: {k} does not divide p - 1 = {}",
            p - 1
        )));
    }
    if p > CHAR_TABLE_CAP {
        return Err(Error::ResourceLimit(format!(
            "make_character: discrete-log table capped at p <= 2^20, got {p}"
        )));
    }
    let g = primitive_root(p)?;
    let mut ind = vec![0u32; p as usize];
    let mut x = 1u64;
    for t in 0..(p - 1) as u32 {
        ind[x as usize] = t;
        x = mul_mod(x, g, p);
    }
    Ok(OrderKCharacter { p, k, g, ind })
}

/// A bilinear character sum with the bound it must respect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharSumResult {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    /// `sqrt(p |A| |B|)`.
    pub bound: f64,
    /// `abs <= bound + 1e-6`; the tolerance covers embedding rounding only.
    pub holds: bool,
}

const CHAR_SUM_TOLERANCE: f64 = 1e-6;

/// `sum over a in A, b in B of chi(a b + n)`.
///
/// `A` must consist of distinct nonzero residues, `B` of distinct residues
/// (zero allowed), and `n` must be coprime to `p`. Exponent classes are
/// counted exactly; the complex embedding happens once at the end.
pub fn char_sum(
    chi: &OrderKCharacter,
    set_a: &[u64],
    set_b: &[u64],
    n: i64,
) -> Result<CharSumResult> {
    let p = chi.p;
    if n.rem_euclid(p as i64) == 0 {
        return Err(Error::InvalidParameter(format!(
            "char_sum: n = {n} is divisible by p = {p}"
        )));
    }
    validate_residues(set_a, p, false, "A")?;
    validate_residues(set_b, p, true, "B")?;

    let n_res = n.rem_euclid(p as i64) as u64;
    let mut counts = vec![0u64; chi.k as usize];
    for &a in set_a {
        for &b in set_b {
            let v = (mul_mod(a, b, p) + n_res) % p;
            if let Some(e) = chi.exponent(v) {
                counts[e as usize] += 1;
            }
        }
    }
    let mut re = crate::arith::CompensatedSum::new();
    let mut im = crate::arith::CompensatedSum::new();
    for (e, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let angle = TAU * e as f64 / chi.k as f64;
        re.add(count as f64 * angle.cos());
        im.add(count as f64 * angle.sin());
    }
    let (re, im) = (re.value(), im.value());
    let abs = re.hypot(im);
    let bound = (p as f64 * set_a.len() as f64 * set_b.len() as f64).sqrt();
    Ok(CharSumResult {
        re,
        im,
        abs,
        bound,
        holds: abs <= bound + CHAR_SUM_TOLERANCE,
    })
}

fn validate_residues(set: &[u64], p: u64, allow_zero: bool, label: &str) -> Result<()> {
    let mut seen = vec![false; p as usize];
    for &x in set {
        if x >= p {
            return Err(Error::InvalidParameter(format!(
                "char_sum: {label} contains {x} >= p = {p}"
            )));
        }
        if x == 0 && !allow_zero {
            return Err(Error::InvalidParameter(format!(
                "char_sum: {label} must avoid 0"
            )));
        }
        if seen[x as usize] {
            return Err(Error::InvalidParameter(format!(
                "char_sum: {label} contains {x} twice; sets only"
            )));
        }
        seen[x as usize] = true;
    }
    Ok(())
}

/// The residue-count bound `sqrt(p) + 2` that the character-sum argument
/// yields for any set with property `D_k(n)` reduced mod `p`.
pub fn sp_bound(p: u64) -> Result<f64> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "sp_bound: {p} is not prime"
        )));
    }
    Ok((p as f64).sqrt() + 2.0)
}
