//! Exact-rational inequality filters on `(m, k)` pairs.
//!
//! Every verdict is decided in integer arithmetic after clearing
//! denominators; rationals appear only in the reported values. Decimal
//! renderings (79.2, 81.2, ...) are display conveniences over the stored
//! exact fractions (396/5, 406/5, ...).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A candidate `(m, k)` with `k = |A|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairCandidate {
    pub m: u64,
    pub k: u64,
}

/// Outcome of one exact inequality check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundVerdict {
    pub holds: bool,
    /// Both sides of the inequality multiplied by the common denominator.
    pub lhs_times_denominator: BigInt,
    pub rhs_times_denominator: BigInt,
    /// `lhs - rhs` as an exact rational.
    pub margin: BigRational,
}

impl BoundVerdict {
    fn from_scaled(holds: bool, lhs: i128, rhs: i128, denom: i128) -> Self {
        BoundVerdict {
            holds,
            lhs_times_denominator: BigInt::from(lhs),
            rhs_times_denominator: BigInt::from(rhs),
            margin: BigRational::new(BigInt::from(lhs - rhs), BigInt::from(denom)),
        }
    }
}

/// `q`, `rem` and the right-hand side of the refined profile bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovedBoundTerms {
    pub q: u64,
    pub rem: u64,
    pub rhs: BigRational,
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    while x * x > n {
        x -= 1;
    }
    x
}

fn rational(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Lower bound on `sum (R_A(n) - c)^2` at the optimal `c = k^2/m`:
/// `(k^4/m - 2k^3 + k^2 m) / (m - 1)`, which equals `k^2(m-k)^2 / (m(m-1))`.
pub fn lev_sarkozy_rhs(m: u64, k: u64) -> Result<BigRational> {
    if m < 2 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    if k > m {
        return Err(Error::InvalidParams(format!("k = {k} exceeds m = {m}")));
    }
    let (m, k) = (m as i128, k as i128);
    // expanded form over the common denominator m(m-1)
    let expanded = rational(
        k * k * k * k - 2 * k * k * k * m + k * k * m * m,
        m * (m - 1),
    );
    let factored = rational(k * k * (m - k) * (m - k), m * (m - 1));
    assert_eq!(expanded, factored, "closed forms disagree at ({m}, {k})");
    Ok(factored)
}

/// Smallest `k` with `(2k+1)^2 > 8m`; every additive basis of `Z_m` has at
/// least this many elements.
pub fn size_lower(m: u64) -> u64 {
    let target = 8 * m as u128;
    let mut k = (isqrt(target).saturating_sub(1) / 2) as u64;
    while (2 * k as u128 + 1).pow(2) <= target {
        k += 1;
    }
    k
}

/// `floor(sqrt(c*m))`; any `A` with all representation counts at most `c`
/// has at most this many elements.
pub fn size_upper(m: u64, c: u64) -> u64 {
    isqrt(c as u128 * m as u128) as u64
}

/// The inclusive `k` range a basis with representation cap `r` must lie in.
pub fn k_range(m: u64, r: u64) -> (u64, u64) {
    (size_lower(m).max(1), size_upper(m, r).min(m))
}

/// Certifies that no `A` with `1 <= R_A(n) <= 3` exists in `Z_m`:
/// `k(m-k)^2 > m(m-1)` for every admissible cardinality `k`.
pub fn theorem1_excludes(m: u64) -> Result<BoundVerdict> {
    if m < 12 {
        return Err(Error::ModulusTooSmall { m, min: 12 });
    }
    let rhs = m as i128 * (m as i128 - 1);
    let lo = size_lower(m);
    let hi = size_upper(m, 3);
    let mut holds = true;
    let mut min_lhs = i128::MAX;
    for k in lo..=hi {
        let (m, k) = (m as i128, k as i128);
        let lhs = k * (m - k) * (m - k);
        if lhs <= rhs {
            holds = false;
        }
        min_lhs = min_lhs.min(lhs);
    }
    if lo > hi {
        // empty range: vacuously excluded
        min_lhs = rhs + 1;
    }
    Ok(BoundVerdict::from_scaled(holds, min_lhs, rhs, 1))
}

/// Inequality (necessary for a cap-5 basis): `k^2(m-k)^2 <= (m+3k) m (m-1)`.
pub fn ineq5_holds(m: u64, k: u64) -> Result<BoundVerdict> {
    if k == 0 || k > m {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= m, got ({m}, {k})"
        )));
    }
    let (mi, ki) = (m as i128, k as i128);
    let lhs = ki * ki * (mi - ki) * (mi - ki);
    let rhs = (mi + 3 * ki) * mi * (mi - 1);
    Ok(BoundVerdict::from_scaled(lhs <= rhs, lhs, rhs, 1))
}

/// All nonnegative `(k_1, ..., k_r)` with
/// `sum k_i = m`, `sum i*k_i = k^2`, and `k_1 + k_3 + ... <= k`
/// (equality when `m` is odd), in lexicographic order.
///
/// The odd-index constraint comes from `R_A(n)` being odd exactly when
/// `n = 2a` for an odd number of `a in A`.
pub fn profile_candidates_with_cap(m: u64, k: u64, cap: u32) -> Vec<Vec<u64>> {
    assert!(cap >= 1);
    let r = cap as u64;
    let odd_idx: Vec<u64> = (1..=r).step_by(2).collect();
    let even_idx: Vec<u64> = (2..=r).step_by(2).collect();
    let target_sum = m as i128;
    let target_weight = (k * k) as i128;
    let odd_exact = m % 2 == 1;

    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut odd_counts = vec![0u64; odd_idx.len()];
    enumerate_odds(
        &odd_idx,
        &even_idx,
        0,
        k,
        odd_exact,
        target_sum,
        target_weight,
        &mut odd_counts,
        &mut out,
        r,
    );
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate_odds(
    odd_idx: &[u64],
    even_idx: &[u64],
    pos: usize,
    budget: u64,
    odd_exact: bool,
    target_sum: i128,
    target_weight: i128,
    odd_counts: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
    r: u64,
) {
    if pos == odd_idx.len() {
        if odd_exact && budget != 0 {
            return;
        }
        let odd_sum: i128 = odd_counts.iter().map(|&c| c as i128).sum();
        let odd_weight: i128 = odd_idx
            .iter()
            .zip(odd_counts.iter())
            .map(|(&i, &c)| i as i128 * c as i128)
            .sum();
        solve_evens(
            odd_idx,
            even_idx,
            odd_counts,
            target_sum - odd_sum,
            target_weight - odd_weight,
            out,
            r,
        );
        return;
    }
    // the last odd variable must absorb the full remaining allowance when
    // the odd-count constraint is an equality
    let min_here = if pos + 1 == odd_idx.len() && odd_exact {
        budget
    } else {
        0
    };
    for c in min_here..=budget {
        odd_counts[pos] = c;
        enumerate_odds(
            odd_idx,
            even_idx,
            pos + 1,
            budget - c,
            odd_exact,
            target_sum,
            target_weight,
            odd_counts,
            out,
            r,
        );
    }
    odd_counts[pos] = 0;
}

fn solve_evens(
    odd_idx: &[u64],
    even_idx: &[u64],
    odd_counts: &[u64],
    rem_sum: i128,
    rem_weight: i128,
    out: &mut Vec<Vec<u64>>,
    r: u64,
) {
    if rem_sum < 0 || rem_weight < 0 {
        return;
    }
    let emit = |even_counts: &[u64], out: &mut Vec<Vec<u64>>| {
        let mut profile = vec![0u64; r as usize];
        for (&i, &c) in odd_idx.iter().zip(odd_counts) {
            profile[(i - 1) as usize] = c;
        }
        for (&i, &c) in even_idx.iter().zip(even_counts) {
            profile[(i - 1) as usize] = c;
        }
        out.push(profile);
    };
    match even_idx.len() {
        0 => {
            if rem_sum == 0 && rem_weight == 0 {
                emit(&[], out);
            }
        }
        1 => {
            let e = even_idx[0] as i128;
            if rem_weight == e * rem_sum {
                emit(&[rem_sum as u64], out);
            }
        }
        _ => {
            // enumerate all but the last two even variables, then solve the
            // remaining 2x2 linear system exactly
            let free = &even_idx[..even_idx.len() - 2];
            let e1 = even_idx[even_idx.len() - 2] as i128;
            let e2 = even_idx[even_idx.len() - 1] as i128;
            let mut counts = vec![0u64; even_idx.len()];
            solve_free_evens(
                free,
                0,
                rem_sum,
                rem_weight,
                e1,
                e2,
                &mut counts,
                &mut |c| emit(c, out),
            );
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve_free_evens(
    free: &[u64],
    pos: usize,
    rem_sum: i128,
    rem_weight: i128,
    e1: i128,
    e2: i128,
    counts: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if pos == free.len() {
        // k_{e1} + k_{e2} = rem_sum, e1*k_{e1} + e2*k_{e2} = rem_weight
        let num = rem_weight - e1 * rem_sum;
        if num < 0 || num % (e2 - e1) != 0 {
            return;
        }
        let c2 = num / (e2 - e1);
        let c1 = rem_sum - c2;
        if c1 < 0 {
            return;
        }
        let n = counts.len();
        counts[n - 2] = c1 as u64;
        counts[n - 1] = c2 as u64;
        emit(counts);
        return;
    }
    let e = free[pos] as i128;
    let max_c = (rem_sum).min(rem_weight / e);
    for c in 0..=max_c {
        counts[pos] = c as u64;
        solve_free_evens(
            free,
            pos + 1,
            rem_sum - c,
            rem_weight - e * c,
            e1,
            e2,
            counts,
            emit,
        );
    }
    counts[pos] = 0;
}

/// Cap-5 profile system: the default used throughout the reduction.
pub fn profile_candidates(m: u64, k: u64) -> Vec<[u64; 5]> {
    profile_candidates_with_cap(m, k, 5)
        .into_iter()
        .map(|v| [v[0], v[1], v[2], v[3], v[4]])
        .collect()
}

/// `sum_i (i - k^2/m)^2 k_i` as an exact rational.
pub fn weighted_square_sum(profile: &[u64], m: u64, k: u64) -> BigRational {
    let num = weighted_square_sum_scaled(profile, m, k);
    rational(num, (m * m) as i128)
}

/// The same sum multiplied by `m^2`, as an integer.
fn weighted_square_sum_scaled(profile: &[u64], m: u64, k: u64) -> i128 {
    let (mi, ki) = (m as i128, k as i128);
    profile
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let i = j as i128 + 1;
            let d = i * mi - ki * ki;
            d * d * c as i128
        })
        .sum()
}

/// True iff some cap-5 profile meets the Lev–Sárközy bound at `c = k^2/m`.
pub fn step1_feasible(m: u64, k: u64) -> bool {
    // wss >= k^2(m-k)^2 / (m(m-1)), cleared to integers:
    // wss_scaled * (m-1) >= k^2 (m-k)^2 * m
    let (mi, ki) = (m as i128, k as i128);
    let rhs = ki * ki * (mi - ki) * (mi - ki) * mi;
    profile_candidates(m, k)
        .iter()
        .any(|p| weighted_square_sum_scaled(p, m, k) * (mi - 1) >= rhs)
}

/// Refined lower bound on `sum (R_A(n) - k^2/m)^2` obtained from the
/// difference representation counts.
pub fn improved_rhs(m: u64, k: u64) -> Result<ImprovedBoundTerms> {
    if m < 2 {
        return Err(Error::ModulusTooSmall { m, min: 2 });
    }
    let kk = k as i128 * k as i128 - k as i128;
    let q = kk / (m as i128 - 1);
    let rem = kk - q * (m as i128 - 1);
    let rhs = improved_rhs_scaled(m, k);
    Ok(ImprovedBoundTerms {
        q: q as u64,
        rem: rem as u64,
        rhs: rational(rhs, m as i128),
    })
}

/// The refined bound multiplied by `m`:
/// `m*(k^2 + q^2(m-1) + (2q+1) rem) - k^4`.
fn improved_rhs_scaled(m: u64, k: u64) -> i128 {
    let (mi, ki) = (m as i128, k as i128);
    let kk = ki * ki - ki;
    let q = kk / (mi - 1);
    let rem = kk - q * (mi - 1);
    mi * (ki * ki + q * q * (mi - 1) + (2 * q + 1) * rem) - ki * ki * ki * ki
}

/// True iff some cap-5 profile meets the refined bound.
pub fn step2_feasible(m: u64, k: u64) -> bool {
    step2_survivors(m, k).next().is_some()
}

/// Cap-5 profiles meeting the refined bound, in lexicographic order.
pub fn step2_survivors(m: u64, k: u64) -> impl Iterator<Item = [u64; 5]> {
    // wss_scaled / m^2 >= rhs_scaled / m  <=>  wss_scaled >= rhs_scaled * m
    let rhs = improved_rhs_scaled(m, k) * m as i128;
    profile_candidates(m, k)
        .into_iter()
        .filter(move |p| weighted_square_sum_scaled(p, m, k) >= rhs)
}

/// The `(45, 12)` endgame: the refined bound strengthened by the
/// difference-set exclusion exceeds every attainable profile sum.
#[derive(Debug, Clone)]
pub struct Step3Report {
    /// `12^2 + 398 - 12^4/45` = 406/5: the bound forced once no perfect
    /// `(45, 12, 3)` difference set exists.
    pub refined_lower: BigRational,
    /// Largest weighted square sum over the surviving profiles = 396/5.
    pub profile_max: BigRational,
    pub surviving_profiles: Vec<[u64; 5]>,
    pub verdict: BoundVerdict,
}

pub fn step3_45_12_contradiction() -> Step3Report {
    let (m, k) = (45u64, 12u64);
    // With R_{A,-A} never identically 3 off zero and summing to 132 over 44
    // residues, the square sum is at least 9*42 + 4 + 16 = 398.
    let diff_sq_lower: i128 = 9 * 42 + 4 + 16;
    let refined_scaled = 45 * (144 + diff_sq_lower) - 20736; // times m
    let refined_lower = rational(refined_scaled, 45);

    let surviving: Vec<[u64; 5]> = step2_survivors(m, k).collect();
    let profile_max_scaled = surviving
        .iter()
        .map(|p| weighted_square_sum_scaled(p, m, k))
        .max()
        .expect("profiles exist at (45,12)");
    let profile_max = rational(profile_max_scaled, 45 * 45);

    // compare refined/45 > max/2025, cleared to a common denominator
    let lhs = refined_scaled * 45;
    let rhs = profile_max_scaled;
    let verdict = BoundVerdict::from_scaled(lhs > rhs, lhs, rhs, 45 * 45);
    Step3Report {
        refined_lower,
        profile_max,
        surviving_profiles: surviving,
        verdict,
    }
}

/// Certifies `R_m >= 6` for `m > 500` in exact arithmetic: the three
/// auxiliary inequalities, the constant chain `1.9 * 0.81 > 1.3`, and the
/// reversal of the cap-5 inequality for every admissible `k`.
pub fn m_gt_500_excludes(m: u64) -> Result<BoundVerdict> {
    if m <= 500 {
        return Err(Error::ModulusTooSmall { m, min: 501 });
    }
    let mi = m as i128;
    // sqrt(2m) - 1/2 > sqrt(1.9 m)  <=>  (m/10 - 1/4)^2 > 19m/10, i.e.
    // (2m - 5)^2 > 760 m after clearing denominators
    let aux1 = (2 * mi - 5) * (2 * mi - 5) > 760 * mi;
    // m - sqrt(5m) > 0.9 m  <=>  m^2 > 500 m
    let aux2 = mi * mi > 500 * mi;
    // m + 3 sqrt(5m) < 1.3 m  <=>  m^2 > 500 m again
    let aux3 = mi * mi > 500 * mi;
    // 1.9 * 0.9^2 = 1.539 > 1.3
    let chain = 19 * 81 > 130 * 10;
    if !(aux1 && aux2 && aux3 && chain) {
        return Ok(BoundVerdict::from_scaled(false, 0, 1, 1));
    }
    // full reversal of (5) over the admissible range
    let (lo, hi) = (size_lower(m), size_upper(m, 5));
    let mut min_margin: Option<(i128, i128)> = None;
    let mut holds = true;
    for k in lo..=hi {
        let ki = k as i128;
        let lhs = ki * ki * (mi - ki) * (mi - ki);
        let rhs = (mi + 3 * ki) * mi * (mi - 1);
        if lhs <= rhs {
            holds = false;
        }
        if min_margin.is_none_or(|(l, r)| lhs - rhs < l - r) {
            min_margin = Some((lhs, rhs));
        }
    }
    let (lhs, rhs) = min_margin.unwrap_or((1, 0));
    Ok(BoundVerdict::from_scaled(holds, lhs, rhs, 1))
}

/// Which analytic filter a scan applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanFilter {
    Eq5,
    Step1,
    Step2,
}

/// One scan result row.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub m: u64,
    pub k: u64,
    pub survives: bool,
    /// Signed slack of the filter inequality; `None` when no profile exists.
    pub margin: Option<BigRational>,
}

/// Scans every `(m, k)` with `m` in the range and `k` in the cap-5
/// cardinality window, sorted by `(m, k)`.
pub fn scan(filter: ScanFilter, m_lo: u64, m_hi: u64) -> Vec<ScanRow> {
    let mut rows = Vec::new();
    for m in m_lo..=m_hi {
        let (lo, hi) = k_range(m, 5);
        for k in lo..=hi {
            rows.push(scan_pair(filter, m, k));
        }
    }
    rows
}

fn scan_pair(filter: ScanFilter, m: u64, k: u64) -> ScanRow {
    match filter {
        ScanFilter::Eq5 => {
            let v = ineq5_holds(m, k).expect("k in range");
            ScanRow {
                m,
                k,
                survives: v.holds,
                // slack of lhs <= rhs
                margin: Some(-v.margin),
            }
        }
        ScanFilter::Step1 => {
            // rhs over denominator m(m-1); wss over m^2
            let (mi, ki) = (m as i128, k as i128);
            let rhs_scaled = ki * ki * (mi - ki) * (mi - ki); // / (m(m-1))
            let best = profile_candidates(m, k)
                .iter()
                .map(|p| weighted_square_sum_scaled(p, m, k))
                .max();
            ScanRow {
                m,
                k,
                survives: best.is_some_and(|b| b * (mi - 1) >= rhs_scaled * mi),
                margin: best.map(|b| rational(b, mi * mi) - rational(rhs_scaled, mi * (mi - 1))),
            }
        }
        ScanFilter::Step2 => {
            let mi = m as i128;
            let rhs_scaled = improved_rhs_scaled(m, k); // / m
            let best = profile_candidates(m, k)
                .iter()
                .map(|p| weighted_square_sum_scaled(p, m, k))
                .max();
            ScanRow {
                m,
                k,
                survives: best.is_some_and(|b| b >= rhs_scaled * mi),
                margin: best.map(|b| rational(b, mi * mi) - rational(rhs_scaled, mi)),
            }
        }
    }
}

/// Surviving pairs only.
pub fn surviving_pairs(filter: ScanFilter, m_lo: u64, m_hi: u64) -> Vec<PairCandidate> {
    scan(filter, m_lo, m_hi)
        .into_iter()
        .filter(|r| r.survives)
        .map(|r| PairCandidate { m: r.m, k: r.k })
        .collect()
}

/// The lexicographically largest surviving pair.
pub fn maximal_pair(filter: ScanFilter, m_lo: u64, m_hi: u64) -> Option<PairCandidate> {
    surviving_pairs(filter, m_lo, m_hi).into_iter().max()
}

/// Renders an exact rational both ways, e.g. `396/5 (= 79.2)`.
pub fn render_rational(r: &BigRational) -> String {
    let approx = rational_to_f64(r);
    if r.denom() == &BigInt::from(1) {
        format!("{}", r.numer())
    } else {
        format!("{}/{} (= {})", r.numer(), r.denom(), approx)
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let den: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    num / den
}
