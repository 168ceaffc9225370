//! The affine symmetry group of the problem: translations `A + t` and unit
//! dilations `l * A` with `gcd(l, m) = 1`. Both preserve basis-ness and the
//! multiset of representation values, which is what makes orbit-level search
//! pruning sound.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zm::ResidueSet;

/// An invertible map `x -> l*x + t` on `Z_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AffineMap {
    pub m: u64,
    pub translation: u64,
    pub dilation: u64,
}

impl AffineMap {
    pub fn new(m: u64, translation: u64, dilation: u64) -> Result<Self> {
        if dilation.gcd(&m) != 1 {
            return Err(Error::DilationNotUnit { l: dilation, m });
        }
        Ok(AffineMap {
            m,
            translation: translation % m,
            dilation: dilation % m,
        })
    }

    pub fn apply(&self, a: u64) -> u64 {
        let scaled = (self.dilation as u128 * a as u128 % self.m as u128) as u64;
        (scaled + self.translation) % self.m
    }

    pub fn apply_set(&self, set: &ResidueSet) -> ResidueSet {
        let mut out = ResidueSet::empty(set.modulus());
        for a in set.members() {
            out.insert(self.apply(a));
        }
        out
    }
}

/// `{a + t mod m : a in A}`.
pub fn translate(set: &ResidueSet, t: u64) -> ResidueSet {
    let m = set.modulus().get();
    let map = AffineMap::new(m, t % m, 1).expect("1 is always a unit");
    map.apply_set(set)
}

/// `{l*a mod m : a in A}`; requires `gcd(l, m) = 1`.
pub fn dilate(set: &ResidueSet, l: u64) -> Result<ResidueSet> {
    let m = set.modulus().get();
    let map = AffineMap::new(m, 0, l % m)?;
    Ok(map.apply_set(set))
}

/// Units of `Z_m` in ascending order.
pub fn units(m: u64) -> Vec<u64> {
    (1..m.max(2)).filter(|l| l.gcd(&m) == 1).collect()
}

/// The lexicographically least member list among all `l*A + t`.
/// Idempotent and constant on orbits.
pub fn canonical_form(set: &ResidueSet) -> ResidueSet {
    let m = set.modulus().get();
    if set.is_empty() {
        return set.clone();
    }
    let mut best: Option<(Vec<u64>, ResidueSet)> = None;
    for l in units(m) {
        let dilated = dilate(set, l).expect("unit");
        // only translations that bring some element to 0 can be minimal
        for a in dilated.members() {
            let image = translate(&dilated, m - a);
            let key = image.members();
            if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                best = Some((key, image));
            }
        }
    }
    best.expect("nonempty set").1
}

/// One branch of the normalized search space: elements forced into `A` and
/// the pool the remaining elements are drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCase {
    pub label: String,
    pub required: Vec<u64>,
    pub pool: Vec<u64>,
}

/// The branch constraints the search engine applies for a given modulus.
///
/// Generically translation freedom pins `0 in A`. For `m = 41` (prime) any
/// two distinct elements can be mapped to `{0, 40}`, so both are pinned.
/// For `m = 40` the search splits: either some pair of elements has a unit
/// difference (normalized to `0, 39 in A`), or every element shares a factor
/// with 40 and `A` lives inside the 24 such residues with `0 in A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub m: u64,
    pub cases: Vec<SearchCase>,
}

pub fn search_normalization(m: u64) -> Normalization {
    let cases = match m {
        41 => vec![SearchCase {
            label: "0,40-pinned".to_string(),
            required: vec![0, 40],
            pool: (1..40).collect(),
        }],
        40 => {
            let shared: Vec<u64> = (0..40).filter(|a| a.gcd(&40u64) > 1 || *a == 0).collect();
            vec![
                SearchCase {
                    label: "0,39-pinned".to_string(),
                    required: vec![0, 39],
                    pool: (1..39).collect(),
                },
                SearchCase {
                    label: "no-unit-elements".to_string(),
                    required: vec![0],
                    pool: shared.into_iter().filter(|&a| a != 0).collect(),
                },
            ]
        }
        _ => vec![SearchCase {
            label: "0-pinned".to_string(),
            required: vec![0],
            pool: (1..m).collect(),
        }],
    };
    Normalization { m, cases }
}
