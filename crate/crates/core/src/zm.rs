//! Subsets of `Z_m` and their representation functions.
//!
//! A [`ResidueSet`] stores its membership indicator as a packed bit vector.
//! The representation function is computed by rotating the indicator and
//! popcounting the AND with itself; the naive double loop over ordered pairs
//! is kept in the test suite as an independent oracle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Group order of `Z_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ModulusTooSmall { m, min: 1 });
        }
        Ok(Modulus(m))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A subset of `Z_m`, with membership packed into 64-bit blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    blocks: Vec<u64>,
}

impl ResidueSet {
    pub fn empty(modulus: Modulus) -> Self {
        let nblocks = (modulus.get() as usize).div_ceil(64);
        ResidueSet {
            modulus,
            blocks: vec![0; nblocks],
        }
    }

    /// Builds a set from explicit members. Rejects out-of-range residues and
    /// duplicates.
    pub fn new(modulus: Modulus, members: &[u64]) -> Result<Self> {
        let mut set = Self::empty(modulus);
        for &a in members {
            if a >= modulus.get() {
                return Err(Error::ResidueOutOfRange {
                    residue: a,
                    m: modulus.get(),
                });
            }
            if set.contains(a) {
                return Err(Error::Parse(format!("duplicate residue {a}")));
            }
            set.insert(a);
        }
        Ok(set)
    }

    pub fn from_members(m: u64, members: &[u64]) -> Result<Self> {
        Self::new(Modulus::new(m)?, members)
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn contains(&self, a: u64) -> bool {
        debug_assert!(a < self.modulus.get());
        self.blocks[(a / 64) as usize] >> (a % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn insert(&mut self, a: u64) {
        debug_assert!(a < self.modulus.get());
        self.blocks[(a / 64) as usize] |= 1 << (a % 64);
    }

    pub fn cardinality(&self) -> u64 {
        self.blocks.iter().map(|b| b.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Members in ascending order.
    pub fn members(&self) -> Vec<u64> {
        (0..self.modulus.get())
            .filter(|&a| self.contains(a))
            .collect()
    }

    /// The indicator rotated by one position: bit `a` of the result is bit
    /// `(a - 1) mod m` of `self`.
    fn rotated_once(&self) -> ResidueSet {
        let m = self.modulus.get();
        let mut out = self.clone();
        out.rotate_in_place(m);
        out
    }

    fn rotate_in_place(&mut self, m: u64) {
        let top = self.contains(m - 1);
        let mut carry = 0u64;
        for b in self.blocks.iter_mut() {
            let new_carry = *b >> 63;
            *b = (*b << 1) | carry;
            carry = new_carry;
        }
        // clear any spill past bit m-1, then wrap the old top bit to position 0
        let last = self.blocks.len() - 1;
        let used = m - 64 * last as u64;
        if used < 64 {
            self.blocks[last] &= (1u64 << used) - 1;
        }
        if top {
            self.blocks[0] |= 1;
        }
    }

    /// The set `{(m - a) mod m : a in self}`.
    pub fn reflected(&self) -> ResidueSet {
        let m = self.modulus.get();
        let mut out = Self::empty(self.modulus);
        for a in self.members() {
            out.insert((m - a) % m);
        }
        out
    }

    fn popcount_and(&self, other: &ResidueSet) -> u64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{", self.modulus)?;
        for (i, a) in self.members().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for ResidueSet {
    type Err = Error;

    /// Parses the textual form `m:{a1,a2,...}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (m_part, set_part) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected m:{{...}}, got {s:?}")))?;
        let m: u64 = m_part
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad modulus {m_part:?}")))?;
        let set_part = set_part.trim();
        let inner = set_part
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("expected {{...}}, got {set_part:?}")))?;
        let mut members = Vec::new();
        for tok in inner.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let a: u64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad residue {tok:?}")))?;
            members.push(a);
        }
        ResidueSet::from_members(m, &members)
    }
}

#[derive(Serialize, Deserialize)]
struct ResidueSetRepr {
    m: u64,
    set: Vec<u64>,
}

impl Serialize for ResidueSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ResidueSetRepr {
            m: self.modulus.get(),
            set: self.members(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ResidueSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ResidueSetRepr::deserialize(deserializer)?;
        ResidueSet::from_members(repr.m, &repr.set).map_err(serde::de::Error::custom)
    }
}

/// The full vector of representation counts over `Z_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepVector {
    pub modulus: Modulus,
    pub counts: Vec<u64>,
}

impl RepVector {
    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn sum(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Histogram of representation counts clipped at a cap `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepProfile {
    pub m: u64,
    pub cardinality: u64,
    pub cap: u32,
    /// `k_counts[i]` is the number of residues with representation count
    /// `i + 1`.
    pub k_counts: Vec<u64>,
    pub zeros: u64,
    pub overflow: u64,
}

/// Counts ordered pairs: entry `n` is `#{(a, a') in A x A : a + a' = n mod m}`.
pub fn rep_function(set: &ResidueSet) -> RepVector {
    let m = set.modulus().get();
    // R(n) = |A \cap (n - A)|; n - A is the reflection of A rotated by n.
    let mut rotated = set.reflected();
    let mut counts = Vec::with_capacity(m as usize);
    for _ in 0..m {
        counts.push(set.popcount_and(&rotated));
        rotated = rotated.rotated_once();
    }
    RepVector {
        modulus: set.modulus(),
        counts,
    }
}

/// Entry `n` is `#{(a, a') in A x A : a - a' = n mod m}`; entry 0 is `|A|`.
pub fn diff_function(set: &ResidueSet) -> RepVector {
    let m = set.modulus().get();
    // D(n) = |A \cap (A + n)|.
    let mut rotated = set.clone();
    let mut counts = Vec::with_capacity(m as usize);
    for _ in 0..m {
        counts.push(set.popcount_and(&rotated));
        rotated = rotated.rotated_once();
    }
    RepVector {
        modulus: set.modulus(),
        counts,
    }
}

/// True iff every residue has at least one representation as `a + a'`.
pub fn is_basis(set: &ResidueSet) -> bool {
    rep_function(set).counts.iter().all(|&c| c >= 1)
}

pub fn max_rep(set: &ResidueSet) -> u64 {
    rep_function(set).max()
}

/// Histogram of the representation vector clipped at `cap`.
pub fn rep_profile(set: &ResidueSet, cap: u32) -> RepProfile {
    assert!(cap >= 1, "cap must be positive");
    let rv = rep_function(set);
    let mut k_counts = vec![0u64; cap as usize];
    let mut zeros = 0;
    let mut overflow = 0;
    for &c in &rv.counts {
        if c == 0 {
            zeros += 1;
        } else if c <= cap as u64 {
            k_counts[(c - 1) as usize] += 1;
        } else {
            overflow += 1;
        }
    }
    RepProfile {
        m: set.modulus().get(),
        cardinality: set.cardinality(),
        cap,
        k_counts,
        zeros,
        overflow,
    }
}

/// True iff `1 <= R_A(n) <= r` for every residue `n`.
pub fn verify_witness(m: Modulus, set: &ResidueSet, r: u32) -> Result<bool> {
    if set.modulus() != m {
        return Err(Error::ModulusMismatch {
            left: m.get(),
            right: set.modulus().get(),
        });
    }
    Ok(rep_function(set)
        .counts
        .iter()
        .all(|&c| 1 <= c && c <= r as u64))
}

/// The first residue violating `1 <= R_A(n) <= r`, with its count.
pub fn first_violation(set: &ResidueSet, r: u32) -> Option<(u64, u64)> {
    rep_function(set)
        .counts
        .iter()
        .enumerate()
        .find(|(_, &c)| c < 1 || c > r as u64)
        .map(|(n, &c)| (n as u64, c))
}
