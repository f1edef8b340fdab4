//! Exact integer primitives: k-th roots, perfect-power tests, primes
//! (including in arithmetic progressions), primitive roots, the totient,
//! and Chebyshev-type log sums.
//!
//! Every verdict produced here is decided by integer arithmetic. Floating
//! point appears only as a value type for the analytic sums (`theta`,
//! `ln_big`), never inside a yes/no answer.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Desk-scale guard on prime enumeration.
pub const SIEVE_LIMIT_CAP: u64 = 1 << 40;

/// Largest `x` routed through the `u128` fast path of the root/power tests.
const U128_FAST_PATH_BITS: u64 = 127;

// ---------------------------------------------------------------------------
// Integer k-th roots and perfect powers
// ---------------------------------------------------------------------------

/// Floor of the k-th root: the unique `r` with `r^k <= x < (r+1)^k`.
///
/// The verdict is exact; the Newton iteration works on integers only.
pub fn ikroot(x: &BigUint, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidParameter("ikroot: k must be >= 1".into()));
    }
    if let Some(small) = x.to_u128() {
        return Ok(BigUint::from(ikroot_u128(small, k)));
    }
    Ok(x.nth_root(k))
}

/// `ikroot` on machine integers. Integer Newton iteration descending from a
/// power-of-two overestimate; the trailing adjustment loops make the result
/// exact regardless of where the iteration stalls.
pub fn ikroot_u128(x: u128, k: u32) -> u128 {
    assert!(k >= 1, "ikroot: k must be >= 1");
    if k == 1 || x <= 1 {
        return x;
    }
    let bits = 128 - x.leading_zeros();
    if k >= bits {
        // 2^k > x, so the root is 1.
        return 1;
    }
    // x < 2^bits implies root < 2^(bits/k + 1).
    let mut r = 1u128 << (bits / k + 1);
    loop {
        let q = match r.checked_pow(k - 1) {
            Some(p) => x / p,
            None => 0,
        };
        let t = ((k as u128 - 1) * r + q) / k as u128;
        if t >= r {
            break;
        }
        r = t;
    }
    while pow_exceeds(r, k, x) {
        r -= 1;
    }
    while !pow_exceeds(r + 1, k, x) {
        r += 1;
    }
    r
}

/// `base^k > x`, treating overflow of `base^k` as "greater".
fn pow_exceeds(base: u128, k: u32, x: u128) -> bool {
    match base.checked_pow(k) {
        Some(p) => p > x,
        None => true,
    }
}

/// If `x = r^k` for some integer `r >= 1`, returns `r`; otherwise `None`.
///
/// Nonpositive `x` always answers `None`: the tuple definitions use positive
/// k-th powers (`PowerPolicy` in the tuples module relaxes this).
pub fn is_kth_power(x: &BigInt, k: u32) -> Result<Option<BigUint>> {
    if k == 0 {
        return Err(Error::InvalidParameter(
            "is_kth_power: k must be >= 1".into(),
        ));
    }
    if x.is_positive() {
        let mag = x.magnitude();
        if mag.bits() <= U128_FAST_PATH_BITS {
            let small = mag.to_u128().expect("fits in u128 by bit count");
            return Ok(is_kth_power_u128(small, k).map(BigUint::from));
        }
        let r = mag.nth_root(k);
        if r.pow(k) == *mag {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Fast path of [`is_kth_power`] for `x >= 1` on machine integers.
pub fn is_kth_power_u128(x: u128, k: u32) -> Option<u128> {
    if x == 0 {
        return None;
    }
    let r = ikroot_u128(x, k);
    match r.checked_pow(k) {
        Some(p) if p == x => Some(r),
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Primality and prime tables
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin for `u64`. The witness set is complete below
/// 3.3 * 10^24, far beyond the `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// All primes up to a shared limit, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.primes.iter()
    }
}

fn isqrt_u64(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).is_none_or(|s| s > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|s| s <= x) {
        r += 1;
    }
    r
}

/// Segmented sieve of Eratosthenes over odd numbers.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit > SIEVE_LIMIT_CAP {
        return Err(Error::ResourceLimit(format!(
            "prime enumeration capped at 2^40, got {limit}"
        )));
    }
    let mut primes = Vec::new();
    if limit >= 2 {
        primes.push(2);
    }
    if limit < 3 {
        return Ok(PrimeTable { limit, primes });
    }

    // Base primes up to sqrt(limit), odd-only bit of bookkeeping.
    let root = isqrt_u64(limit);
    let base_len = (root as usize).div_ceil(2); // index i <-> odd number 2i+1
    let mut base_composite = vec![false; base_len.max(1)];
    let mut base_odd_primes: Vec<u64> = Vec::new();
    for i in 1..base_len {
        if !base_composite[i] {
            let p = 2 * i as u64 + 1;
            base_odd_primes.push(p);
            let mut j = (p * p - 1) / 2;
            while j < base_len as u64 {
                base_composite[j as usize] = true;
                j += p;
            }
        }
    }
    for &p in &base_odd_primes {
        if p <= limit {
            primes.push(p);
        }
    }

    // Segments of odd numbers above root.
    const SEGMENT_ODDS: u64 = 1 << 18;
    let mut low = root + 1;
    if low.is_multiple_of(2) {
        low += 1;
    }
    let mut segment = vec![false; SEGMENT_ODDS as usize];
    while low <= limit {
        let high = (low + 2 * SEGMENT_ODDS - 2).min(limit);
        let count = (high - low) / 2 + 1;
        let seg = &mut segment[..count as usize];
        seg.fill(false);
        for &p in &base_odd_primes {
            if p * p > high {
                break;
            }
            // First odd multiple of p in [low, high] that is >= p*p.
            let mut start = p * p;
            if start < low {
                start = low.div_ceil(p) * p;
                if start % 2 == 0 {
                    start += p;
                }
            }
            let mut idx = (start - low) / 2;
            while idx < count {
                seg[idx as usize] = true;
                idx += p;
            }
        }
        for (idx, &c) in seg.iter().enumerate() {
            if !c {
                primes.push(low + 2 * idx as u64);
            }
        }
        low = high + 2;
    }
    Ok(PrimeTable { limit, primes })
}

/// Primes `p <= Q` with `p = a (mod k)`, ascending.
///
/// `k = 1` means "all primes" (`a` is ignored); this is the degenerate case
/// the sieve module uses for unrestricted prime sets.
pub fn primes_in_ap(q: u64, k: u64, a: i64) -> Result<PrimeTable> {
    let table = primes_up_to(q)?;
    if k <= 1 {
        return Ok(table);
    }
    let a_mod = a.rem_euclid(k as i64) as u64;
    if a_mod.gcd(&k) != 1 {
        return Err(Error::InvalidParameter(format!(
            "primes_in_ap: gcd({a}, {k}) != 1"
        )));
    }
    let primes = table
        .primes
        .iter()
        .copied()
        .filter(|p| p % k == a_mod)
        .collect();
    Ok(PrimeTable { limit: q, primes })
}

/// Neumaier-compensated accumulator. Sums of up to ~5*10^7 logarithms stay
/// accurate to the last few ulps.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Chebyshev-type sum `theta(Q; k, a) = sum of log p over p <= Q, p = a (mod k)`.
pub fn theta(q: u64, k: u64, a: i64) -> Result<f64> {
    let table = primes_in_ap(q, k, a)?;
    let mut acc = CompensatedSum::new();
    for &p in table.primes() {
        acc.add((p as f64).ln());
    }
    Ok(acc.value())
}

// ---------------------------------------------------------------------------
// Multiplicative structure mod p
// ---------------------------------------------------------------------------

/// Euler's totient by trial-division factorization.
pub fn totient(k: u64) -> u64 {
    assert!(k >= 1, "totient: k must be >= 1");
    let mut n = k;
    let mut phi = k;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            phi -= phi / d;
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest positive primitive root modulo a prime `p`.
///
/// `p = 2` answers 1 (the group is trivial).
pub fn primitive_root(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "primitive_root: {p} is not prime"
        )));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = distinct_prime_factors(p - 1);
    for g in 2..p {
        if factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every prime has a primitive root")
}

// ---------------------------------------------------------------------------
// Logarithms of big integers
// ---------------------------------------------------------------------------

/// Natural log of a positive big integer, exact to double precision: the top
/// 53 bits supply the mantissa, the bit length the exponent.
pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "ln_big: x must be positive");
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits f64 exactly").ln();
    }
    let shift = bits - 53;
    let mantissa = (x >> shift).to_f64().expect("53-bit mantissa");
    mantissa.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln |x|` for a nonzero big integer.
pub fn ln_big_abs(x: &BigInt) -> f64 {
    ln_big(x.magnitude())
}
