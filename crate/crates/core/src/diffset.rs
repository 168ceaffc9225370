//! Perfect cyclic difference sets and Baumert's Test C.
//!
//! A perfect `(v, k, lambda)` difference set is `A` in `Z_v` with `|A| = k`
//! whose nonzero differences each occur exactly `lambda` times. Test C rules
//! such sets out from prime-power divisibility data alone; a small brute
//! force oracle provides the existence side for `v` up to a configured
//! limit.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symmetry::canonical_form;
use crate::zm::ResidueSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSetParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DiffSetParams {
    pub fn new(v: u64, k: u64, lambda: u64) -> Result<Self> {
        if lambda < 1 || k < lambda || v < k {
            return Err(Error::InvalidParams(format!(
                "need v >= k >= lambda >= 1, got ({v}, {k}, {lambda})"
            )));
        }
        Ok(DiffSetParams { v, k, lambda })
    }

    /// A perfect difference set forces `k(k-1) = lambda(v-1)`.
    pub fn counting_identity_holds(&self) -> bool {
        self.k * (self.k - 1) == self.lambda * (self.v - 1)
    }
}

/// The tuple certifying nonexistence via Test C.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCWitness {
    /// Prime divisor of `k - lambda`.
    pub p: u64,
    /// Divisor of `v` coprime with `p`.
    pub w: u64,
    /// Least positive exponent with `p^f = -1 (mod w)`.
    pub f: u64,
    /// Exact power of `p` in `k - lambda`.
    pub e: u32,
    /// Exact power of `p` in `v`.
    pub l: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestCVerdict {
    RuledOut(TestCWitness),
    Passes,
}

/// Largest `e` with `p^e | n`.
pub fn exact_prime_power(p: u64, n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParams("exact power of zero".to_string()));
    }
    let mut e = 0;
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

/// Least `f > 0` with `p^f = -1 (mod w)`, or `None` if `-1` is not a power
/// of `p` mod `w`. `w = 1` yields `f = 1` (everything is 0 mod 1).
pub fn minus_one_exponent(p: u64, w: u64) -> Result<Option<u64>> {
    if p.gcd(&w) != 1 {
        return Err(Error::InvalidParams(format!("gcd({p}, {w}) != 1")));
    }
    if w == 1 {
        return Ok(Some(1));
    }
    let target = w - 1;
    let mut x = p % w;
    let mut f = 1;
    loop {
        if x == target {
            return Ok(Some(f));
        }
        if x == 1 {
            return Ok(None); // cycled through the whole subgroup
        }
        x = x * p % w;
        f += 1;
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
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

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    out.sort();
    out
}

/// Runs Test C over every admissible `(p, w)` pair, in ascending order.
///
/// `RuledOut` certifies that no perfect `(v, k, lambda)` difference set
/// exists. `Passes` only means the test found nothing; it is not an
/// existence proof.
pub fn test_c(params: DiffSetParams) -> Result<TestCVerdict> {
    if params.k == params.lambda {
        return Err(Error::InvalidParams(
            "k = lambda leaves no prime to test".to_string(),
        ));
    }
    let diff = params.k - params.lambda;
    for p in prime_divisors(diff) {
        let e = exact_prime_power(p, diff)?;
        let l = exact_prime_power(p, params.v)?;
        for w in divisors(params.v) {
            if w.gcd(&p) != 1 {
                continue;
            }
            let Some(f) = minus_one_exponent(p, w)? else {
                continue;
            };
            // existence requires p^{floor(e/2)} < (v/w) p^{-l}; cleared of
            // the negative power: p^{floor(e/2)} * w * p^l < v
            let lhs = p.pow(e / 2) as u128 * w as u128 * p.pow(l) as u128;
            if lhs >= params.v as u128 {
                return Ok(TestCVerdict::RuledOut(TestCWitness { p, w, f, e, l }));
            }
        }
    }
    Ok(TestCVerdict::Passes)
}

pub const BRUTE_FORCE_DEFAULT_LIMIT: u64 = 25;

/// Exhaustive existence oracle: a perfect difference set with the given
/// parameters (in canonical form), or `None` after a complete search.
pub fn brute_force_exists(params: DiffSetParams, limit: Option<u64>) -> Result<Option<ResidueSet>> {
    let limit = limit.unwrap_or(BRUTE_FORCE_DEFAULT_LIMIT);
    if params.v > limit {
        return Err(Error::InvalidParams(format!(
            "v = {} above brute-force limit {limit}",
            params.v
        )));
    }
    if !params.counting_identity_holds() {
        return Ok(None);
    }
    let v = params.v;
    if params.k == params.v {
        // full group: every nonzero difference occurs k times
        return Ok(if params.lambda == params.k {
            Some(ResidueSet::from_members(v, &(0..v).collect::<Vec<_>>())?)
        } else {
            None
        });
    }
    // translation freedom pins 0 in A; lexicographic DFS over the rest, so
    // the first hit is its own canonical representative within translates
    let mut members = vec![0u64];
    let mut diffs = vec![0u64; v as usize];
    let found = dfs_diffset(&params, 1, &mut members, &mut diffs);
    Ok(found.map(|set| canonical_form(&set)))
}

fn dfs_diffset(
    params: &DiffSetParams,
    next: u64,
    members: &mut Vec<u64>,
    diffs: &mut Vec<u64>,
) -> Option<ResidueSet> {
    let v = params.v;
    if members.len() as u64 == params.k {
        if diffs[1..].iter().all(|&c| c == params.lambda) {
            return Some(ResidueSet::from_members(v, members).expect("members are valid residues"));
        }
        return None;
    }
    let remaining_needed = params.k - members.len() as u64;
    if v < remaining_needed || next > v - remaining_needed {
        return None;
    }
    for a in next..=(v - remaining_needed) {
        // add a, updating difference counts incrementally
        let mut ok = true;
        for &b in members.iter() {
            let d1 = ((a + v - b) % v) as usize;
            let d2 = ((b + v - a) % v) as usize;
            diffs[d1] += 1;
            diffs[d2] += 1;
            if diffs[d1] > params.lambda || diffs[d2] > params.lambda {
                ok = false;
            }
        }
        members.push(a);
        if ok {
            if let Some(hit) = dfs_diffset(params, a + 1, members, diffs) {
                return Some(hit);
            }
        }
        members.pop();
        for &b in members.iter() {
            let d1 = ((a + v - b) % v) as usize;
            let d2 = ((b + v - a) % v) as usize;
            diffs[d1] -= 1;
            diffs[d2] -= 1;
        }
    }
    None
}
