//! End-to-end reproduction reports: the small-modulus classification, the
//! scan cascade down to the three endgame cases, and verification of the
//! bundled witness table.
//!
//! Every pass/fail verdict here is computed in exact arithmetic; decimals
//! only ever appear as renderings next to the exact value.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::{
    m_gt_500_excludes, maximal_pair, rational_to_f64, render_rational, step3_45_12_contradiction,
    surviving_pairs, theorem1_excludes, PairCandidate, ScanFilter,
};
use crate::error::{Error, Result};
use crate::search::{
    brute_force_ruzsa, find_basis, ruzsa_number, Checkpoint, RuzsaOutcome, SearchOpts, SearchTask,
    Verdict, DEFAULT_R_CEILING,
};
use crate::zm::{rep_function, verify_witness, Modulus, ResidueSet};

/// The bundled table of best-known witnesses for `2 <= m <= 35`.
pub const APPENDIX_CSV: &str = include_str!("../data/appendix.csv");
pub const APPENDIX_SHA256: &str =
    "e3320c56a0688992b7cdd338ea1d46a019d9b5db272ab01baa38139a4f252dc7";

/// The 41 pairs surviving the improved-bound scan, the golden value the
/// step-2 stage is checked against.
pub const STEP2_PAIRS: [(u64, u64); 41] = [
    (21, 7),
    (21, 8),
    (21, 9),
    (22, 7),
    (22, 8),
    (22, 9),
    (23, 7),
    (23, 8),
    (23, 9),
    (24, 8),
    (24, 9),
    (25, 8),
    (25, 9),
    (26, 8),
    (26, 9),
    (27, 8),
    (27, 9),
    (28, 8),
    (28, 9),
    (28, 10),
    (29, 8),
    (29, 9),
    (29, 10),
    (30, 9),
    (30, 10),
    (31, 9),
    (31, 10),
    (32, 9),
    (32, 10),
    (33, 9),
    (33, 10),
    (34, 10),
    (35, 10),
    (36, 10),
    (36, 11),
    (37, 11),
    (38, 11),
    (39, 11),
    (40, 11),
    (41, 11),
    (45, 12),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendixRow {
    pub m: u64,
    pub r_m: u32,
    pub witness: ResidueSet,
}

/// Parses the embedded table after checking its digest.
pub fn appendix_rows() -> Result<Vec<AppendixRow>> {
    let mut hasher = Sha256::new();
    hasher.update(APPENDIX_CSV.as_bytes());
    let digest: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    if digest != APPENDIX_SHA256 {
        return Err(Error::InvalidParams(format!(
            "appendix table digest mismatch: {digest}"
        )));
    }
    let mut rows = Vec::new();
    for line in APPENDIX_CSV.lines().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(3, ',');
        let (Some(m), Some(r), Some(set)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse(format!("bad appendix line: {line}")));
        };
        let m: u64 = m.parse().map_err(|_| Error::Parse(line.to_string()))?;
        let r_m: u32 = r.parse().map_err(|_| Error::Parse(line.to_string()))?;
        let members: Vec<u64> = set
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(line.to_string())))
            .collect::<Result<_>>()?;
        rows.push(AppendixRow {
            m,
            r_m,
            witness: ResidueSet::from_members(m, &members)?,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Pass,
    Fail,
    /// Ran out of budget before the stage could decide; nothing is claimed.
    Incomplete,
}

/// One checked claim: what was computed, what was expected, and where the
/// expected value comes from in the bundled data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageResult {
    pub name: String,
    pub claim_anchor: String,
    pub computed: String,
    pub expected: String,
    pub status: StageStatus,
    pub pass: bool,
    pub runtime_s: f64,
}

impl StageResult {
    fn finish(
        name: &str,
        anchor: &str,
        computed: String,
        expected: String,
        status: StageStatus,
        started: Instant,
    ) -> Self {
        StageResult {
            name: name.to_string(),
            claim_anchor: anchor.to_string(),
            computed,
            expected,
            status,
            pass: status == StageStatus::Pass,
            runtime_s: started.elapsed().as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReproReport {
    pub stage: String,
    pub stages: Vec<StageResult>,
    pub runtime_s: f64,
    /// Resumable tokens for stages that ran out of budget, keyed by stage
    /// name.
    pub checkpoints: Vec<(String, Checkpoint)>,
}

impl ReproReport {
    pub fn all_passed(&self) -> bool {
        self.stages.iter().all(|s| s.status == StageStatus::Pass)
    }

    pub fn any_failed(&self) -> bool {
        self.stages.iter().any(|s| s.status == StageStatus::Fail)
    }

    pub fn any_incomplete(&self) -> bool {
        self.stages
            .iter()
            .any(|s| s.status == StageStatus::Incomplete)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("report: {}\n", self.stage));
        for s in &self.stages {
            let tag = match s.status {
                StageStatus::Pass => "PASS",
                StageStatus::Fail => "FAIL",
                StageStatus::Incomplete => "INCOMPLETE",
            };
            out.push_str(&format!(
                "  {tag:<10} {:<28} computed: {} | expected: {} [{}] ({:.2}s)\n",
                s.name, s.computed, s.expected, s.claim_anchor, s.runtime_s
            ));
        }
        out.push_str(&format!("total: {:.2}s\n", self.runtime_s));
        out
    }
}

/// Runtime limits for the reproduction stages. The budget applies to each
/// exhaustive-search stage separately; scans and table checks are fast and
/// never budgeted.
#[derive(Debug, Clone)]
pub struct ReproOpts {
    pub search_budget: Option<Duration>,
    pub threads: usize,
    /// Extra spot-check points for the large-modulus exclusion stage.
    pub extra_large_m: Vec<u64>,
}

impl Default for ReproOpts {
    fn default() -> Self {
        ReproOpts {
            search_budget: Some(Duration::from_secs(5)),
            threads: 1,
            extra_large_m: Vec::new(),
        }
    }
}

fn fmt_pairs(pairs: &[PairCandidate]) -> String {
    pairs
        .iter()
        .map(|p| format!("({},{})", p.m, p.k))
        .collect::<Vec<_>>()
        .join(",")
}

/// Small moduli have small Ruzsa numbers; everything here is re-derived by
/// search and brute force, nothing is taken on faith from the table.
pub fn reproduce_theorem1() -> Result<ReproReport> {
    let started = Instant::now();
    let mut stages = Vec::new();

    // exact values up to 11 from the unpruned oracle
    let t0 = Instant::now();
    let expected: BTreeMap<u64, u32> = [
        (1, 1),
        (2, 2),
        (3, 2),
        (4, 3),
        (5, 3),
        (6, 4),
        (7, 3),
        (8, 4),
        (9, 4),
        (10, 4),
        (11, 4),
    ]
    .into_iter()
    .collect();
    let mut computed = BTreeMap::new();
    for m in 1..=11u64 {
        computed.insert(m, brute_force_ruzsa(m)?.0);
    }
    let status = if computed == expected {
        StageStatus::Pass
    } else {
        StageStatus::Fail
    };
    stages.push(StageResult::finish(
        "small-m-values",
        "classification: values up to m = 11",
        format!("{computed:?}"),
        format!("{expected:?}"),
        status,
        t0,
    ));

    // no cap-3 basis exists from m = 12 on
    let t0 = Instant::now();
    let mut all_hold = true;
    let mut first_bad = None;
    for m in 12..=10_000u64 {
        if !theorem1_excludes(m)?.holds {
            all_hold = false;
            first_bad = Some(m);
            break;
        }
    }
    stages.push(StageResult::finish(
        "r3-exclusion",
        "cap-3 exclusion for m >= 12",
        match first_bad {
            None => "holds for 12..=10000".to_string(),
            Some(m) => format!("fails at m = {m}"),
        },
        "holds for 12..=10000".to_string(),
        if all_hold {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    // for caps at most 3, (R(n) - 2)^2 is 1 exactly on odd counts
    let t0 = Instant::now();
    let mut parity_ok = true;
    'outer: for m in 1..=10u64 {
        for mask in 0u32..(1 << m) {
            let members: Vec<u64> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
            if members.is_empty() {
                continue;
            }
            let set = ResidueSet::from_members(m, &members)?;
            let rv = rep_function(&set);
            if rv.counts.iter().any(|&c| c == 0 || c > 3) {
                continue;
            }
            for &c in &rv.counts {
                let sq = (c as i64 - 2) * (c as i64 - 2);
                if (sq == 1) != (c % 2 == 1) {
                    parity_ok = false;
                    break 'outer;
                }
            }
        }
    }
    stages.push(StageResult::finish(
        "parity-case-table",
        "square deviation parity for caps <= 3",
        format!("holds: {parity_ok}"),
        "holds: true".to_string(),
        if parity_ok {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    Ok(ReproReport {
        stage: "t1".to_string(),
        stages,
        runtime_s: started.elapsed().as_secs_f64(),
        checkpoints: Vec::new(),
    })
}

/// The full reduction cascade: large-modulus exclusion, direct searches for
/// small moduli, the three scan stages, the (45,12) endgame, the two
/// normalized big searches, and the final classification for 21..=35.
pub fn reproduce_theorem2(opts: &ReproOpts) -> Result<ReproReport> {
    let started = Instant::now();
    let mut stages = Vec::new();
    let mut checkpoints = Vec::new();
    let rows = appendix_rows()?;
    let expected_r: BTreeMap<u64, u32> = rows.iter().map(|r| (r.m, r.r_m)).collect();

    // spot checks; each auxiliary inequality is monotone in m, so holding at
    // 501 (and at the larger points) extends to everything beyond
    let t0 = Instant::now();
    let mut points = vec![501u64, 1_000, 1_000_000];
    points.extend(opts.extra_large_m.iter().copied());
    let mut bad = Vec::new();
    for &m in &points {
        if !m_gt_500_excludes(m)?.holds {
            bad.push(m);
        }
    }
    stages.push(StageResult::finish(
        "m-gt-500-exclusion",
        "cap-5 exclusion beyond 500, monotone spot checks",
        if bad.is_empty() {
            format!("holds at all {} points", points.len())
        } else {
            format!("fails at {bad:?}")
        },
        format!("holds at all {} points", points.len()),
        if bad.is_empty() {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    // m <= 20 directly by search
    let t0 = Instant::now();
    let search_opts = SearchOpts {
        threads: opts.threads,
        ..Default::default()
    };
    let mut mismatches = Vec::new();
    for m in 1..=20u64 {
        let expect = if m == 1 { 1 } else { expected_r[&m] };
        match ruzsa_number(m, DEFAULT_R_CEILING, &search_opts)? {
            RuzsaOutcome::Determined { r, .. } if r == expect => {}
            RuzsaOutcome::Determined { r, .. } => mismatches.push((m, r, expect)),
            RuzsaOutcome::Timeout { .. } => mismatches.push((m, 0, expect)),
        }
    }
    stages.push(StageResult::finish(
        "small-m-searches",
        "classification: values up to m = 20",
        if mismatches.is_empty() {
            "all 20 values match".to_string()
        } else {
            format!("mismatches: {mismatches:?}")
        },
        "all 20 values match".to_string(),
        if mismatches.is_empty() {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    // the three scan stages
    let t0 = Instant::now();
    let eq5_max = maximal_pair(ScanFilter::Eq5, 21, 500);
    let pass = eq5_max == Some(PairCandidate { m: 91, k: 13 });
    stages.push(StageResult::finish(
        "eq5-scan",
        "first reduction: maximal surviving pair",
        format!("{eq5_max:?}"),
        "Some(PairCandidate { m: 91, k: 13 })".to_string(),
        if pass {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    let t0 = Instant::now();
    let step1_max = maximal_pair(ScanFilter::Step1, 21, 500);
    let pass = step1_max == Some(PairCandidate { m: 50, k: 12 });
    stages.push(StageResult::finish(
        "step1-scan",
        "profile feasibility: maximal surviving pair",
        format!("{step1_max:?}"),
        "Some(PairCandidate { m: 50, k: 12 })".to_string(),
        if pass {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    let t0 = Instant::now();
    let step2 = surviving_pairs(ScanFilter::Step2, 21, 500);
    let golden: Vec<PairCandidate> = STEP2_PAIRS
        .iter()
        .map(|&(m, k)| PairCandidate { m, k })
        .collect();
    let pass = step2 == golden;
    stages.push(StageResult::finish(
        "step2-scan",
        "improved bound: surviving pair list",
        fmt_pairs(&step2),
        fmt_pairs(&golden),
        if pass {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    // (45, 12): refined second-moment bound against the profile maximum
    let t0 = Instant::now();
    let step3 = step3_45_12_contradiction();
    stages.push(StageResult::finish(
        "step3-45-12",
        "endgame: refined bound exceeds profile maximum",
        format!(
            "refined {} > profile max {}: {}",
            render_rational(&step3.refined_lower),
            render_rational(&step3.profile_max),
            step3.verdict.holds
        ),
        "refined 406/5 (= 81.2) > profile max 396/5 (= 79.2): true".to_string(),
        if step3.verdict.holds && rational_to_f64(&step3.refined_lower) == 81.2 {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    // the two big normalized searches; these are the cluster-scale cases, so
    // running out of budget is reported, not failed
    for m in [40u64, 41] {
        let t0 = Instant::now();
        let name = format!("search-{m}-11");
        let task = SearchTask::with_k_range(m, 5, 11, 11)?;
        let outcome = find_basis(
            &task,
            &SearchOpts {
                threads: opts.threads,
                time_budget: opts.search_budget,
                ..Default::default()
            },
        )?;
        let (computed, status) = match outcome.verdict {
            Verdict::Exhausted => (
                format!("exhausted, {} nodes", outcome.nodes_explored),
                StageStatus::Pass,
            ),
            Verdict::Found(w) => (format!("unexpected witness {w}"), StageStatus::Fail),
            Verdict::Timeout(cp) => {
                let computed = format!(
                    "budget exceeded after {:.2}s; resumable",
                    outcome.wall_time.as_secs_f64()
                );
                checkpoints.push((name.clone(), *cp));
                (computed, StageStatus::Incomplete)
            }
        };
        stages.push(StageResult::finish(
            &name,
            "endgame: exhaustion at cardinality 11",
            computed,
            "exhausted".to_string(),
            status,
            t0,
        ));
    }

    // classification 21..=35: witness gives the upper bound, exhaustion one
    // cap lower gives the lower bound
    let t0 = Instant::now();
    let mut failures = Vec::new();
    let mut incomplete = Vec::new();
    for row in rows.iter().filter(|r| (21..=35).contains(&r.m)) {
        if !verify_witness(Modulus::new(row.m)?, &row.witness, row.r_m)? {
            failures.push(row.m);
            continue;
        }
        let task = SearchTask::new(row.m, row.r_m - 1)?;
        let outcome = find_basis(
            &task,
            &SearchOpts {
                threads: opts.threads,
                time_budget: opts.search_budget,
                ..Default::default()
            },
        )?;
        match outcome.verdict {
            Verdict::Exhausted => {}
            Verdict::Found(_) => failures.push(row.m),
            Verdict::Timeout(cp) => {
                incomplete.push(row.m);
                checkpoints.push((format!("classify-{}", row.m), *cp));
            }
        }
    }
    let status = if !failures.is_empty() {
        StageStatus::Fail
    } else if !incomplete.is_empty() {
        StageStatus::Incomplete
    } else {
        StageStatus::Pass
    };
    stages.push(StageResult::finish(
        "classification-21-35",
        "classification: values 21 through 35",
        format!("failures: {failures:?}, budget-limited: {incomplete:?}"),
        "failures: [], budget-limited: []".to_string(),
        status,
        t0,
    ));

    Ok(ReproReport {
        stage: "t2".to_string(),
        stages,
        runtime_s: started.elapsed().as_secs_f64(),
        checkpoints,
    })
}

/// Checks every bundled witness row and cross-checks the exact-value lists
/// against the table. Uses only the representation-counting layer, so it
/// runs in milliseconds.
pub fn verify_appendix() -> Result<ReproReport> {
    let started = Instant::now();
    let mut stages = Vec::new();
    let rows = appendix_rows()?;

    let t0 = Instant::now();
    let pass = rows.len() == 34 && rows.iter().map(|r| r.m).eq(2..=35);
    stages.push(StageResult::finish(
        "table-shape",
        "bundled table: digest and row range",
        format!("{} rows, digest ok", rows.len()),
        "34 rows, digest ok".to_string(),
        if pass {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    let t0 = Instant::now();
    let mut bad = Vec::new();
    for row in &rows {
        if !verify_witness(Modulus::new(row.m)?, &row.witness, row.r_m)? {
            bad.push(row.m);
        }
    }
    stages.push(StageResult::finish(
        "appendix-witnesses",
        "bundled table: every witness verifies at its value",
        if bad.is_empty() {
            format!("{}/{} rows pass", rows.len(), rows.len())
        } else {
            format!("failing rows: {bad:?}")
        },
        format!("{}/{} rows pass", rows.len(), rows.len()),
        if bad.is_empty() {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    let t0 = Instant::now();
    let by_value = |r: u32| -> Vec<u64> {
        rows.iter()
            .filter(|row| row.r_m == r)
            .map(|row| row.m)
            .collect()
    };
    let checks: [(u32, &[u64]); 4] = [
        (2, &[2, 3]),
        (3, &[4, 5, 7]),
        (4, &[6, 8, 9, 10, 11, 12, 13, 14, 15, 19]),
        (5, &[16, 17, 18, 20, 21, 22, 23, 24, 25, 27, 28, 35]),
    ];
    let mut mismatched = Vec::new();
    for (r, expect) in checks {
        if by_value(r) != expect {
            mismatched.push(r);
        }
    }
    // the remaining rows must all sit at 6
    if by_value(6) != vec![26, 29, 30, 31, 32, 33, 34] {
        mismatched.push(6);
    }
    stages.push(StageResult::finish(
        "classification-cross-check",
        "classification lists match the bundled table",
        if mismatched.is_empty() {
            "all value classes match".to_string()
        } else {
            format!("mismatched classes: {mismatched:?}")
        },
        "all value classes match".to_string(),
        if mismatched.is_empty() {
            StageStatus::Pass
        } else {
            StageStatus::Fail
        },
        t0,
    ));

    Ok(ReproReport {
        stage: "appendix".to_string(),
        stages,
        runtime_s: started.elapsed().as_secs_f64(),
        checkpoints: Vec::new(),
    })
}

/// What is known about `R_m`: the exact value for `m <= 35`, otherwise an
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RmStatus {
    Exact { r: u32 },
    Bounded { lower: u32, upper: u32 },
}

/// For `m >= 42` the scan cascade certifies the lower bound 6: no pair with
/// `m >= 42` survives the improved-bound filter except `(45, 12)`, which the
/// refined second-moment argument kills, and `m > 500` is excluded
/// analytically. For `36 <= m <= 41` only the cap-3 exclusion is certified
/// without running searches, so the honest cheap lower bound is 4. (Direct
/// search in fact gives R_36 = R_38 = 6, R_37 = 4, R_39 = 5, and exhausts
/// (40, 11) and (41, 11); use the search engine for exact values there.)
pub fn classify(m: u64) -> Result<RmStatus> {
    if m == 0 {
        return Err(Error::ModulusTooSmall { m, min: 1 });
    }
    if m == 1 {
        return Ok(RmStatus::Exact { r: 1 });
    }
    if m <= 35 {
        let rows = appendix_rows()?;
        let row = rows.iter().find(|r| r.m == m).expect("2..=35 covered");
        debug_assert!(verify_witness(Modulus::new(m)?, &row.witness, row.r_m)?);
        return Ok(RmStatus::Exact { r: row.r_m });
    }
    let lower = if m <= 41 { 4 } else { 6 };
    Ok(RmStatus::Bounded {
        lower,
        upper: DEFAULT_R_CEILING,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appendix_rows_parse_and_verify() {
        let rows = appendix_rows().unwrap();
        assert_eq!(rows.len(), 34);
        assert_eq!(rows[0].m, 2);
        assert_eq!(rows[0].witness.members(), vec![0, 1]);
        let m35 = rows.last().unwrap();
        assert_eq!(m35.m, 35);
        assert_eq!(m35.r_m, 5);
        assert_eq!(
            m35.witness.members(),
            vec![0, 1, 4, 5, 10, 12, 16, 19, 26, 34]
        );
        for row in &rows {
            assert!(
                verify_witness(Modulus::new(row.m).unwrap(), &row.witness, row.r_m).unwrap(),
                "row m = {}",
                row.m
            );
        }
    }

    #[test]
    fn appendix_witnesses_are_tight_for_small_m() {
        // the table value matches the true minimum where brute force reaches
        for row in appendix_rows().unwrap().iter().filter(|r| r.m <= 14) {
            let (best, _) = brute_force_ruzsa(row.m).unwrap();
            assert_eq!(best, row.r_m, "m = {}", row.m);
        }
    }

    #[test]
    fn theorem1_report_passes() {
        let report = reproduce_theorem1().unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
    }

    #[test]
    fn appendix_report_passes() {
        let report = verify_appendix().unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        assert_eq!(report.stages.len(), 3);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(19).unwrap(), RmStatus::Exact { r: 4 });
        assert_eq!(classify(1).unwrap(), RmStatus::Exact { r: 1 });
        assert_eq!(classify(26).unwrap(), RmStatus::Exact { r: 6 });
        assert_eq!(
            classify(100).unwrap(),
            RmStatus::Bounded {
                lower: 6,
                upper: 288
            }
        );
        // 36..=41 only gets the cheap sound bound; searches show the true
        // values vary here (37 in particular drops all the way to 4)
        assert_eq!(
            classify(37).unwrap(),
            RmStatus::Bounded {
                lower: 4,
                upper: 288
            }
        );
        assert!(classify(0).is_err());
    }

    #[test]
    fn report_serializes() {
        let report = verify_appendix().unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: ReproReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.stages.len(), report.stages.len());
        assert!(json.contains("claim_anchor"));
    }
}
