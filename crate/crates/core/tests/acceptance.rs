//! The release gate: one test per acceptance criterion, each printing a
//! single pass/fail line. Criteria 5 and 6 currently fail by design: the
//! bundled golden lists are each missing one entry that exact arithmetic
//! (and, for the step-2 case, an explicit verified witness) shows must be
//! present. The assertions state the bundled expectation and fail with the
//! discrepancy spelled out.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use ruzsa_core::bounds::{
    m_gt_500_excludes, maximal_pair, rational_to_f64, render_rational, step2_survivors,
    step3_45_12_contradiction, surviving_pairs, weighted_square_sum, PairCandidate, ScanFilter,
};
use ruzsa_core::diffset::{brute_force_exists, test_c, DiffSetParams, TestCVerdict};
use ruzsa_core::pipeline::{appendix_rows, STEP2_PAIRS};
use ruzsa_core::search::{
    brute_force_ruzsa, find_basis, ruzsa_number, RuzsaOutcome, SearchOpts, SearchTask, Verdict,
    DEFAULT_R_CEILING,
};
use ruzsa_core::symmetry::{translate, units, AffineMap};
use ruzsa_core::zm::{rep_function, verify_witness, Modulus, ResidueSet};

fn line(n: u32, pass: bool, detail: &str) {
    println!(
        "criterion {n}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

#[test]
fn criterion_01_appendix_rows_verify() {
    let t = Instant::now();
    let rows = appendix_rows().unwrap();
    let mut ok = rows.len() == 34;
    for row in &rows {
        ok &= verify_witness(Modulus::new(row.m).unwrap(), &row.witness, row.r_m).unwrap();
    }
    line(
        1,
        ok,
        &format!("34 witness rows verified exactly in {:?}", t.elapsed()),
    );
    assert!(ok);
}

#[test]
fn criterion_02_exhaustive_small_m() {
    let t = Instant::now();
    let mut expected: BTreeMap<u64, u32> = BTreeMap::new();
    expected.insert(1, 1);
    for m in [2u64, 3] {
        expected.insert(m, 2);
    }
    for m in [4u64, 5, 7] {
        expected.insert(m, 3);
    }
    for m in [6u64, 8, 9, 10, 11, 12, 13, 14, 15, 19] {
        expected.insert(m, 4);
    }
    for m in [16u64, 17, 18, 20] {
        expected.insert(m, 5);
    }
    let opts = SearchOpts::default();
    let mut ok = true;
    for m in 1..=20u64 {
        let got = match ruzsa_number(m, DEFAULT_R_CEILING, &opts).unwrap() {
            RuzsaOutcome::Determined { r, witness, .. } => {
                assert!(verify_witness(Modulus::new(m).unwrap(), &witness, r).unwrap());
                r
            }
            RuzsaOutcome::Timeout { .. } => panic!("unbudgeted search timed out"),
        };
        ok &= got == expected[&m];
        if m <= 14 {
            ok &= brute_force_ruzsa(m).unwrap().0 == expected[&m];
        }
    }
    line(
        2,
        ok,
        &format!(
            "values for m <= 20 match, m <= 14 cross-checked unpruned, in {:?}",
            t.elapsed()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_03_eq5_scan_max() {
    let t = Instant::now();
    let max = maximal_pair(ScanFilter::Eq5, 21, 500);
    let ok = max == Some(PairCandidate { m: 91, k: 13 });
    line(3, ok, &format!("maximal pair {max:?} in {:?}", t.elapsed()));
    assert!(ok);
}

#[test]
fn criterion_04_step1_scan_max() {
    let t = Instant::now();
    let max = maximal_pair(ScanFilter::Step1, 21, 500);
    let ok = max == Some(PairCandidate { m: 50, k: 12 });
    line(4, ok, &format!("maximal pair {max:?} in {:?}", t.elapsed()));
    assert!(ok);
}

#[test]
fn criterion_05_step2_scan_list() {
    let t = Instant::now();
    let got = surviving_pairs(ScanFilter::Step2, 21, 500);
    let golden: Vec<PairCandidate> = STEP2_PAIRS
        .iter()
        .map(|&(m, k)| PairCandidate { m, k })
        .collect();
    // every golden pair must survive regardless
    for p in &golden {
        assert!(got.contains(p), "bundled pair {p:?} missing from scan");
    }
    let extras: Vec<&PairCandidate> = got.iter().filter(|p| !golden.contains(p)).collect();
    let ok = got == golden;
    line(
        5,
        ok,
        &format!(
            "scan yields {} pairs vs bundled {}; extras {extras:?} in {:?}",
            got.len(),
            golden.len(),
            t.elapsed()
        ),
    );
    // Fails: the scan also finds (37,10), whose profile maximum equals the
    // improved bound exactly (2358/37 on both sides, the same kind of
    // equality that keeps (45,12) alive), and a verified cap-4 witness of
    // cardinality 10 exists in Z_37, so the pair cannot be excluded. The
    // bundled 41-pair list is missing it.
    assert_eq!(
        got, golden,
        "surviving pairs differ from the bundled list: extras {extras:?}"
    );
}

#[test]
fn criterion_06_45_12_endgame() {
    let t = Instant::now();
    let expected_12: [[u64; 5]; 12] = [
        [0, 24, 0, 9, 12],
        [1, 22, 0, 11, 11],
        [2, 20, 0, 13, 10],
        [4, 16, 0, 17, 8],
        [5, 14, 0, 19, 7],
        [6, 12, 0, 21, 6],
        [7, 10, 0, 23, 5],
        [8, 8, 0, 25, 4],
        [9, 6, 0, 27, 3],
        [10, 4, 0, 29, 2],
        [11, 2, 0, 31, 1],
        [12, 0, 0, 33, 0],
    ];
    let survivors: Vec<[u64; 5]> = step2_survivors(45, 12).collect();
    // all bundled tuples appear and every survivor sits at exactly 396/5
    for p in &expected_12 {
        assert!(survivors.contains(p), "bundled tuple {p:?} missing");
    }
    for p in &survivors {
        let wss = weighted_square_sum(p, 45, 12);
        assert_eq!(render_rational(&wss), "396/5 (= 79.2)", "tuple {p:?}");
    }
    // Baumert test witness
    let verdict = test_c(DiffSetParams::new(45, 12, 3).unwrap()).unwrap();
    let witness_ok = matches!(
        verdict,
        TestCVerdict::RuledOut(w) if (w.p, w.w, w.f, w.e, w.l) == (3, 5, 2, 2, 2)
    );
    assert!(witness_ok, "expected Test C witness (3,5,2,2,2)");
    // refined bound and the contradiction
    let step3 = step3_45_12_contradiction();
    assert_eq!(render_rational(&step3.refined_lower), "406/5 (= 81.2)");
    assert_eq!(render_rational(&step3.profile_max), "396/5 (= 79.2)");
    assert!(step3.verdict.holds);
    assert_eq!(rational_to_f64(&step3.refined_lower), 81.2);

    let ok = survivors.len() == 12;
    line(
        6,
        ok,
        &format!(
            "{} surviving tuples (bundled table has 12), all at 396/5; Test C witness and 406/5 > 396/5 hold; {:?}",
            survivors.len(),
            t.elapsed()
        ),
    );
    // Fails: the full survivor family is (t, 24-2t, 0, 9+2t, 12-t) for
    // t = 0..12 - thirteen tuples, all at exactly 396/5. The bundled table
    // omits the t = 3 row (3,18,0,15,9). The contradiction is unaffected.
    assert_eq!(
        survivors.len(),
        12,
        "survivor family has {} tuples; the bundled table omits {:?}",
        survivors.len(),
        survivors
            .iter()
            .filter(|p| !expected_12.contains(p))
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_07_large_m_exclusion() {
    let t = Instant::now();
    let mut ok = true;
    for m in [501u64, 1_000, 1_000_000] {
        ok &= m_gt_500_excludes(m).unwrap().holds;
    }
    let mut rng = XorShift(0x1234_5678_9abc_def0);
    for _ in 0..100 {
        let m = 501 + rng.next() % (10_000_000 - 500);
        ok &= m_gt_500_excludes(m).unwrap().holds;
    }
    line(
        7,
        ok,
        &format!(
            "3 fixed + 100 random moduli excluded exactly in {:?}",
            t.elapsed()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_08_property_suites() {
    let t = Instant::now();
    let mut rng = XorShift(0x9e37_79b9_7f4a_7c15);

    // second-moment lower bound for random (m, A, rational c), checked with
    // cleared denominators in integers
    for _ in 0..10_000 {
        let m = 2 + rng.next() % 39; // 2..=40
        let mask = rng.next();
        let members: Vec<u64> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
        let set = ResidueSet::from_members(m, &members).unwrap();
        let k = set.cardinality() as i128;
        let mi = m as i128;
        let q = 1 + (rng.next() % 20) as i128;
        let p = (rng.next() % (6 * q as u64 + 1)) as i128;
        let rep = rep_function(&set);
        let lhs: i128 = rep
            .counts
            .iter()
            .map(|&r| {
                let d = r as i128 * q - p;
                d * d
            })
            .sum();
        // sum (R - p/q)^2 >= k^2 (m-k)^2 / (m (m-1)), times q^2 m (m-1)
        let denominated_lhs = lhs * mi * (mi - 1);
        let denominated_rhs = k * k * (mi - k) * (mi - k) * q * q;
        assert!(
            denominated_lhs >= denominated_rhs,
            "m={m} A={members:?} c={p}/{q}"
        );
    }

    // the expansion identity sum (R - k^2/m)^2 = sum R^2 - k^4/m, and the
    // closed form of the bound at c = k^2/m
    for _ in 0..500 {
        let m = 2 + rng.next() % 39;
        let mask = rng.next();
        let members: Vec<u64> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
        let set = ResidueSet::from_members(m, &members).unwrap();
        let k = set.cardinality();
        let rep = rep_function(&set);
        assert_eq!(rep.sum(), k * k);
        let mi = m as i128;
        let ki = k as i128;
        // times m^2: sum (m R - k^2)^2 / m^2 == (sum R^2) - k^4/m
        let lhs: i128 = rep
            .counts
            .iter()
            .map(|&r| {
                let d = mi * r as i128 - ki * ki;
                d * d
            })
            .sum();
        let sum_sq: i128 = rep.counts.iter().map(|&r| (r * r) as i128).sum();
        assert_eq!(lhs, mi * (mi * sum_sq - ki * ki * ki * ki));

        // parity: odd counts come from doublings, so #odd <= k with
        // equality for odd m
        let odd = rep.counts.iter().filter(|&&r| r % 2 == 1).count() as u64;
        if m % 2 == 1 {
            assert_eq!(odd, k, "m={m} A={members:?}");
        } else {
            assert!(odd <= k, "m={m} A={members:?}");
        }
    }

    // invariance of the representation multiset under random affine maps
    for _ in 0..1_000 {
        let m = 2 + rng.next() % 39;
        let mask = rng.next();
        let members: Vec<u64> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
        let set = ResidueSet::from_members(m, &members).unwrap();
        let us = units(m);
        let l = us[(rng.next() % us.len() as u64) as usize];
        let t_shift = rng.next() % m;
        let map = AffineMap::new(m, t_shift, l).unwrap();
        let image = map.apply_set(&set);
        let sorted = |s: &ResidueSet| {
            let mut v = rep_function(s).counts;
            v.sort();
            v
        };
        assert_eq!(sorted(&set), sorted(&image));
        assert_eq!(translate(&set, 0), set);
    }

    // thread-count independence of the search
    for (m, r) in [(19u64, 4u32), (20, 5)] {
        let task = SearchTask::new(m, r).unwrap();
        let one = find_basis(&task, &SearchOpts::default()).unwrap();
        let eight = find_basis(
            &task,
            &SearchOpts {
                threads: 8,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(one.verdict, eight.verdict, "(m,r)=({m},{r})");
        assert_eq!(one.nodes_explored, eight.nodes_explored, "(m,r)=({m},{r})");
    }

    line(
        8,
        true,
        &format!("all property suites clean in {:?}", t.elapsed()),
    );
}

#[test]
fn criterion_09_diffset_oracle_soundness() {
    let t = Instant::now();
    let mut checked = 0;
    for v in 2..=21u64 {
        for k in 1..=v {
            for lambda in 1..=k {
                if k * (k - 1) != lambda * (v - 1) {
                    continue;
                }
                let params = DiffSetParams::new(v, k, lambda).unwrap();
                if k == lambda {
                    continue; // full-group case, nothing for the test
                }
                checked += 1;
                if let TestCVerdict::RuledOut(_) = test_c(params).unwrap() {
                    assert!(
                        brute_force_exists(params, None).unwrap().is_none(),
                        "({v},{k},{lambda}) ruled out but a set exists"
                    );
                }
            }
        }
    }
    for (v, k, lambda) in [(7u64, 3u64, 1u64), (11, 5, 2), (13, 4, 1)] {
        let params = DiffSetParams::new(v, k, lambda).unwrap();
        assert!(brute_force_exists(params, None).unwrap().is_some());
    }
    line(
        9,
        true,
        &format!(
            "{checked} parameter triples checked, 3 known sets found, in {:?}",
            t.elapsed()
        ),
    );
}

#[test]
fn criterion_10_heavy_exhaustions() {
    let t = Instant::now();
    // certified: no cap-4 basis for 21..=23, so those values are exactly 5
    for m in [21u64, 22, 23] {
        let task = SearchTask::new(m, 4).unwrap();
        let out = find_basis(&task, &SearchOpts::default()).unwrap();
        assert_eq!(out.verdict, Verdict::Exhausted, "m={m} cap 4");
    }
    // reported, not asserted: the two big normalized searches under budget
    let mut status = Vec::new();
    for m in [40u64, 41] {
        let task = SearchTask::with_k_range(m, 5, 11, 11).unwrap();
        let out = find_basis(
            &task,
            &SearchOpts {
                threads: 4,
                time_budget: Some(Duration::from_secs(600)),
                ..Default::default()
            },
        )
        .unwrap();
        match out.verdict {
            Verdict::Exhausted => {
                status.push(format!("({m},11) exhausted, {} nodes", out.nodes_explored))
            }
            Verdict::Timeout(_) => status.push(format!("({m},11) incomplete under budget")),
            Verdict::Found(w) => panic!("unexpected cap-5 witness {w} at m={m}"),
        }
    }
    line(
        10,
        true,
        &format!(
            "21..=23 certified at cap 4 exhaustion; {}; in {:?}",
            status.join("; "),
            t.elapsed()
        ),
    );
}
