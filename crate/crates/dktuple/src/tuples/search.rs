//! Exhaustive search for m-tuples with property `D_k(n)` inside `[1, B]`.
//!
//! The search walks the graph on `[1, B]` whose edges are the pairs `(a, b)`
//! with `a*b + n` an admissible k-th power, enumerating m-cliques by ordered
//! extension: first elements ascending, candidate sets intersected with each
//! chosen vertex's neighborhood. Output is lexicographic and identical for
//! every worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{PowerPolicy, TupleRecord};
use crate::arith::{ikroot_u128, is_kth_power_u128};
use crate::{Error, Result};

/// Candidate domain guard: first elements are machine integers.
const MAX_SEARCH_BOUND: u64 = 1 << 32;

/// Largest bitset of precomputed k-th powers (in bits).
const POWER_BITSET_MAX_BITS: u128 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    /// The shift `n`, nonzero.
    pub n: i64,
    /// Power exponent, `k >= 2`.
    pub k: u32,
    /// Tuple size to search for, `m >= 2`.
    pub m: usize,
    /// Inclusive upper bound `B` on elements.
    pub bound: u64,
    pub policy: PowerPolicy,
    /// Per-first-element node budget; `None` = unlimited. Budget semantics
    /// are per subtree so that partial output is independent of scheduling.
    pub node_budget: Option<u64>,
    /// Worker threads; output is byte-identical for every value.
    pub workers: usize,
    /// Resume point: skip first elements `<= start_after`.
    pub start_after: Option<u64>,
}

impl SearchParams {
    pub fn new(n: i64, k: u32, m: usize, bound: u64) -> Self {
        Self {
            n,
            k,
            m,
            bound,
            policy: PowerPolicy::default(),
            node_budget: None,
            workers: 1,
            start_after: None,
        }
    }

    /// Digest of the parameters that determine the full-run output
    /// (budget, workers, and resume point deliberately excluded).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!(
            "dktuple-search;n={};k={};m={};max={};allow_zero={};allow_negative={}",
            self.n, self.k, self.m, self.bound, self.policy.allow_zero, self.policy.allow_negative
        ));
        let out = h.finalize();
        out[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Resume token: the last completed first-element prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCheckpoint {
    /// Last completed first element, as a (possibly empty) prefix chain.
    pub prefix: Vec<u64>,
    /// The bound `B` of the interrupted run.
    pub max: u64,
    /// Digest of the originating parameters; resume must match.
    pub digest: String,
}

impl SearchCheckpoint {
    pub fn describe(&self) -> String {
        match self.prefix.last() {
            Some(a) => a.to_string(),
            None => "(empty)".into(),
        }
    }

    /// The `start_after` value that continues this run.
    pub fn resume_point(&self) -> Option<u64> {
        self.prefix.last().copied()
    }
}

/// All m-subsets of `[1, B]` with property `D_k(n)`, lexicographically
/// ordered. On budget exhaustion returns [`Error::SearchInterrupted`] with
/// everything found before the offending first element plus a checkpoint.
pub fn search(params: &SearchParams) -> Result<Vec<TupleRecord>> {
    validate(params)?;
    let searcher = Searcher::new(params);

    let start = params.start_after.map_or(1, |s| s.saturating_add(1));
    let firsts: Vec<u64> = (start..=params.bound).collect();

    // (first element, cliques found below it or a budget hit)
    type FirstOutcome = (u64, std::result::Result<Vec<Vec<u64>>, ()>);
    let per_first: Vec<FirstOutcome> = if params.workers <= 1 {
        firsts
            .iter()
            .map(|&a1| (a1, searcher.expand_first(a1)))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(params.workers)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
        pool.install(|| {
            firsts
                .par_iter()
                .map(|&a1| (a1, searcher.expand_first(a1)))
                .collect()
        })
    };

    let mut records = Vec::new();
    let mut last_completed = params.start_after;
    for (a1, outcome) in per_first {
        match outcome {
            Ok(cliques) => {
                for clique in cliques {
                    records.push(TupleRecord::from_u64(params.k, params.n, &clique)?);
                }
                last_completed = Some(a1);
            }
            Err(()) => {
                let checkpoint = SearchCheckpoint {
                    prefix: last_completed.into_iter().collect(),
                    max: params.bound,
                    digest: params.digest(),
                };
                return Err(Error::SearchInterrupted {
                    partial: records,
                    checkpoint,
                });
            }
        }
    }
    Ok(records)
}

fn validate(params: &SearchParams) -> Result<()> {
    if params.n == 0 {
        return Err(Error::InvalidParameter("search requires n != 0".into()));
    }
    if params.k < 2 {
        return Err(Error::InvalidParameter("search requires k >= 2".into()));
    }
    if params.m < 2 {
        return Err(Error::InvalidParameter("search requires m >= 2".into()));
    }
    if params.bound == 0 {
        return Err(Error::InvalidParameter("search requires B >= 1".into()));
    }
    if params.bound > MAX_SEARCH_BOUND {
        return Err(Error::ResourceLimit(format!(
            "search bound capped at 2^32, got {}",
            params.bound
        )));
    }
    if params.workers == 0 {
        return Err(Error::InvalidParameter("workers must be >= 1".into()));
    }
    Ok(())
}

struct Searcher {
    n: i128,
    k: u32,
    m: usize,
    bound: u64,
    policy: PowerPolicy,
    budget: Option<u64>,
    /// Bit `v` set iff `v` is a positive k-th power; present when
    /// `B^2 + |n|` fits the memory cap.
    power_bits: Option<Vec<u64>>,
}

impl Searcher {
    fn new(params: &SearchParams) -> Self {
        let top = params.bound as u128 * params.bound as u128 + params.n.unsigned_abs() as u128;
        let power_bits = (top < POWER_BITSET_MAX_BITS).then(|| {
            let mut bits = vec![0u64; (top as usize >> 6) + 1];
            let mut r: u128 = 1;
            loop {
                let v = match r.checked_pow(params.k) {
                    Some(v) if v <= top => v,
                    _ => break,
                };
                bits[(v >> 6) as usize] |= 1 << (v & 63);
                r += 1;
            }
            bits
        });
        Searcher {
            n: params.n as i128,
            k: params.k,
            m: params.m,
            bound: params.bound,
            policy: params.policy,
            budget: params.node_budget,
            power_bits,
        }
    }

    fn positive_power(&self, v: u128) -> bool {
        match &self.power_bits {
            Some(bits) => bits[(v >> 6) as usize] & (1 << (v & 63)) != 0,
            None => is_kth_power_u128(v, self.k).is_some(),
        }
    }

    fn admissible(&self, v: i128) -> bool {
        if v > 0 {
            self.positive_power(v as u128)
        } else if v == 0 {
            self.policy.allow_zero
        } else {
            self.policy.allow_negative && self.k % 2 == 1 && self.positive_power(v.unsigned_abs())
        }
    }

    fn edge(&self, a: u64, b: u64) -> bool {
        self.admissible(a as i128 * b as i128 + self.n)
    }

    /// Neighbors of `a1` in `(a1, B]`, ascending, generated from the power
    /// progression `a1*x + n = v` rather than by scanning all of `(a1, B]`.
    fn first_neighbors(&self, a1: u64) -> Vec<u64> {
        let a = a1 as i128;
        let lo = a * (a + 1) + self.n; // v at x = a1 + 1
        let hi = a * self.bound as i128 + self.n; // v at x = B
        let mut xs = Vec::new();
        let mut push = |v: i128| {
            let shifted = v - self.n; // = a1 * x
            debug_assert!(shifted > 0);
            if shifted % a == 0 {
                xs.push((shifted / a) as u64);
            }
        };

        if self.policy.allow_negative && self.k % 2 == 1 && lo < 0 {
            // v = -s^k, ascending as s descends.
            let s_max = floor_root((-lo) as u128, self.k);
            let s_min = if hi < 0 {
                ceil_root((-hi) as u128, self.k)
            } else {
                1
            };
            let mut s = s_max;
            while s >= s_min && s >= 1 {
                push(-(s.pow(self.k) as i128));
                s -= 1;
            }
        }
        if self.policy.allow_zero && lo <= 0 && hi >= 0 {
            push(0);
        }
        if hi > 0 {
            let r_min = if lo > 0 {
                ceil_root(lo as u128, self.k)
            } else {
                1
            };
            let r_max = floor_root(hi as u128, self.k);
            let mut r = r_min;
            while r <= r_max {
                push(r.pow(self.k) as i128);
                r += 1;
            }
        }
        xs
    }

    /// Full expansion below one first element. `Err(())` = budget exceeded.
    fn expand_first(&self, a1: u64) -> std::result::Result<Vec<Vec<u64>>, ()> {
        let cands = self.first_neighbors(a1);
        let mut out = Vec::new();
        let mut clique = vec![a1];
        let mut nodes = 0u64;
        self.expand(&mut clique, &cands, &mut nodes, &mut out)?;
        Ok(out)
    }

    fn expand(
        &self,
        clique: &mut Vec<u64>,
        cands: &[u64],
        nodes: &mut u64,
        out: &mut Vec<Vec<u64>>,
    ) -> std::result::Result<(), ()> {
        *nodes += 1;
        if let Some(b) = self.budget {
            if *nodes > b {
                return Err(());
            }
        }
        if clique.len() == self.m {
            out.push(clique.clone());
            return Ok(());
        }
        let need = self.m - clique.len();
        if cands.len() < need {
            return Ok(());
        }
        for (idx, &c) in cands.iter().enumerate() {
            if cands.len() - idx < need {
                break;
            }
            let next: Vec<u64> = if need == 1 {
                Vec::new()
            } else {
                cands[idx + 1..]
                    .iter()
                    .copied()
                    .filter(|&x| self.edge(c, x))
                    .collect()
            };
            clique.push(c);
            self.expand(clique, &next, nodes, out)?;
            clique.pop();
        }
        Ok(())
    }
}

fn floor_root(x: u128, k: u32) -> u64 {
    ikroot_u128(x, k) as u64
}

fn ceil_root(x: u128, k: u32) -> u64 {
    let r = ikroot_u128(x, k);
    if r.pow(k) == x {
        r as u64
    } else {
        r as u64 + 1
    }
}

/// Brute-force oracle used by tests and the acceptance suite: filter every
/// m-subset of `[1, B]` through `verify`. Exponential; keep `B` tiny.
pub fn brute_force_search(params: &SearchParams) -> Result<Vec<TupleRecord>> {
    validate(params)?;
    let mut out = Vec::new();
    let mut subset: Vec<u64> = Vec::new();
    brute_rec(params, 1, &mut subset, &mut out)?;
    Ok(out)
}

fn brute_rec(
    params: &SearchParams,
    next: u64,
    subset: &mut Vec<u64>,
    out: &mut Vec<TupleRecord>,
) -> Result<()> {
    if subset.len() == params.m {
        let record = TupleRecord::from_u64(params.k, params.n, subset)?;
        if super::verify(&record, params.policy)?.ok {
            out.push(record);
        }
        return Ok(());
    }
    let remaining = params.m - subset.len();
    for x in next..=params.bound {
        if params.bound - x + 1 < remaining as u64 {
            break;
        }
        subset.push(x);
        brute_rec(params, x + 1, subset, out)?;
        subset.pop();
    }
    Ok(())
}
