//! Randomized invariants backing the exact-arithmetic layers: the
//! second-moment lower bound for arbitrary sets and centers, the expansion
//! identity, parity constraints, affine invariance, and consistency
//! between the scan stages and the profile enumerator.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ruzsa_core::bounds::{
    lev_sarkozy_rhs, profile_candidates_with_cap, surviving_pairs, ScanFilter,
};
use ruzsa_core::pipeline::appendix_rows;
use ruzsa_core::symmetry::{units, AffineMap};
use ruzsa_core::zm::{rep_function, rep_profile, ResidueSet};

fn random_set(m: u64, mask: u64) -> ResidueSet {
    let members: Vec<u64> = (0..m).filter(|&a| mask >> a & 1 == 1).collect();
    ResidueSet::from_members(m, &members).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    // For every A in Z_m and every rational center c = p/q,
    //   sum_n (R_A(n) - c)^2 >= k^2 (m-k)^2 / (m (m-1)),
    // checked with denominators cleared so the comparison is exact.
    #[test]
    fn second_moment_lower_bound(m in 2u64..=40, mask in any::<u64>(), p in 0i128..=120, q in 1i128..=20) {
        let set = random_set(m, mask);
        let k = set.cardinality() as i128;
        let mi = m as i128;
        let lhs: i128 = rep_function(&set)
            .counts
            .iter()
            .map(|&r| {
                let d = r as i128 * q - p;
                d * d
            })
            .sum();
        prop_assert!(lhs * mi * (mi - 1) >= k * k * (mi - k) * (mi - k) * q * q);
    }

    // sum_n (R_A(n) - k^2/m)^2 == sum_n R_A(n)^2 - k^4/m, scaled by m^2.
    #[test]
    fn expansion_identity(m in 2u64..=40, mask in any::<u64>()) {
        let set = random_set(m, mask);
        let (mi, ki) = (m as i128, set.cardinality() as i128);
        let rep = rep_function(&set);
        let centered: i128 = rep
            .counts
            .iter()
            .map(|&r| {
                let d = mi * r as i128 - ki * ki;
                d * d
            })
            .sum();
        let sum_sq: i128 = rep.counts.iter().map(|&r| (r * r) as i128).sum();
        prop_assert_eq!(centered, mi * (mi * sum_sq - ki * ki * ki * ki));
        prop_assert_eq!(rep.sum() as i128, ki * ki);
    }

    // R_A(n) is odd exactly when n is the double of an odd number of
    // members; for odd m doubling is a bijection, so the count is exactly k.
    #[test]
    fn odd_value_parity(m in 2u64..=63, mask in any::<u64>()) {
        let set = random_set(m, mask);
        let k = set.cardinality();
        let odd = rep_function(&set)
            .counts
            .iter()
            .filter(|&&r| r % 2 == 1)
            .count() as u64;
        if m % 2 == 1 {
            prop_assert_eq!(odd, k);
        } else {
            prop_assert!(odd <= k);
        }
    }

    // n -> l n + t with gcd(l, m) = 1 permutes the representation values.
    #[test]
    fn affine_invariance(m in 2u64..=50, mask in any::<u64>(), unit_ix in any::<usize>(), t in any::<u64>()) {
        let set = random_set(m, mask & ((1u64 << (m.min(63))) - 1));
        let us = units(m);
        let l = us[unit_ix % us.len()];
        let map = AffineMap::new(m, t % m, l).unwrap();
        let image = map.apply_set(&set);
        prop_assert_eq!(set.cardinality(), image.cardinality());
        let sorted = |s: &ResidueSet| {
            let mut v = rep_function(s).counts;
            v.sort_unstable();
            v
        };
        prop_assert_eq!(sorted(&set), sorted(&image));
    }
}

#[test]
fn scan_stages_nest() {
    let eq5 = surviving_pairs(ScanFilter::Eq5, 21, 120);
    let step1 = surviving_pairs(ScanFilter::Step1, 21, 120);
    let step2 = surviving_pairs(ScanFilter::Step2, 21, 120);
    assert!(step2.iter().all(|p| step1.contains(p)));
    assert!(step1.iter().all(|p| eq5.contains(p)));
    assert!(step2.len() < step1.len() && step1.len() < eq5.len());
}

#[test]
fn appendix_profiles_are_enumerated() {
    for row in appendix_rows().unwrap() {
        let profile = rep_profile(&row.witness, row.r_m);
        assert_eq!(profile.zeros, 0, "m = {}", row.m);
        assert_eq!(profile.overflow, 0, "m = {}", row.m);
        let candidates = profile_candidates_with_cap(row.m, row.witness.cardinality(), row.r_m);
        assert!(
            candidates.contains(&profile.k_counts),
            "m = {}: profile {:?} missing from the enumeration",
            row.m,
            profile.k_counts
        );
    }
}

#[test]
fn second_moment_rhs_closed_form() {
    for m in 2u64..=200 {
        for k in [1, m / 4 + 1, m / 2 + 1, m] {
            let got = lev_sarkozy_rhs(m, k).unwrap();
            let num = BigInt::from(k * k) * BigInt::from((m - k) * (m - k));
            let den = BigInt::from(m) * BigInt::from(m - 1);
            assert_eq!(got, BigRational::new(num, den), "(m, k) = ({m}, {k})");
        }
    }
}
