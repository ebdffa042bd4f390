//! Permutations in one-line notation, their symmetries and sums, pattern
//! containment and exhaustive enumeration of avoidance classes.

mod enumerate;
mod lis;
mod pattern;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use enumerate::{
    all_permutations, enumerate_avoiders, enumerate_avoiders_bounded, AllPermutations, Avoiders,
    DEFAULT_EXHAUSTIVE_BOUND,
};
pub use lis::{lds, lis, lis_ending_at, lis_starting_at};
pub use pattern::{avoids, contains, contains_naive, PatternSet};
pub(crate) use pattern::{occurs_in, occurs_in_dfs};

/// A permutation of `{1, ..., n}` in one-line notation.
///
/// Values are stored 1-based; `n = 0` (the empty permutation) is valid.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    values: Vec<u32>,
}

/// Direction of a monotone pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotone {
    /// `I_k = 1 2 ... k`
    Increasing,
    /// `J_k = k ... 2 1`
    Decreasing,
}

impl Permutation {
    /// Validates that `values` is a bijection onto `{1, ..., n}`.
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!("value {v} outside 1..={n}")));
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<u32>) -> Self {
        debug_assert!(Self::new(values.clone()).is_ok(), "not a permutation: {values:?}");
        Self { values }
    }

    /// Relative order of a sequence of distinct values.
    pub fn standardize(seq: &[u32]) -> Self {
        let mut order: Vec<usize> = (0..seq.len()).collect();
        order.sort_unstable_by_key(|&i| seq[i]);
        let mut values = vec![0u32; seq.len()];
        for (rank, &i) in order.iter().enumerate() {
            values[i] = rank as u32 + 1;
        }
        Self::from_vec_unchecked(values)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// `I_k` or `J_k`.
    pub fn monotone(k: usize, direction: Monotone) -> Self {
        let values = match direction {
            Monotone::Increasing => (1..=k as u32).collect(),
            Monotone::Decreasing => (1..=k as u32).rev().collect(),
        };
        Self { values }
    }

    pub fn increasing(k: usize) -> Self {
        Self::monotone(k, Monotone::Increasing)
    }

    pub fn decreasing(k: usize) -> Self {
        Self::monotone(k, Monotone::Decreasing)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// `sigma(i)` for 1-based `i`.
    pub fn at(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v as usize - 1] = i as u32 + 1;
        }
        Self { values: inv }
    }

    /// `sigma^r(i) = sigma(n + 1 - i)`
    pub fn reverse(&self) -> Self {
        Self { values: self.values.iter().rev().copied().collect() }
    }

    /// `sigma^c(i) = n + 1 - sigma(i)`
    pub fn complement(&self) -> Self {
        let n1 = self.len() as u32 + 1;
        Self { values: self.values.iter().map(|&v| n1 - v).collect() }
    }

    /// `sigma^rc(i) = n + 1 - sigma(n + 1 - i)`
    pub fn reverse_complement(&self) -> Self {
        let n1 = self.len() as u32 + 1;
        Self { values: self.values.iter().rev().map(|&v| n1 - v).collect() }
    }

    /// `self ⊕ other`: `other` stacked north-east of `self`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let k = self.len() as u32;
        let mut values = self.values.clone();
        values.extend(other.values.iter().map(|&v| v + k));
        Self { values }
    }

    /// `self ⊖ other`: `other` stacked south-east of `self`.
    pub fn skew_sum(&self, other: &Self) -> Self {
        let k = other.len() as u32;
        let mut values: Vec<u32> = self.values.iter().map(|&v| v + k).collect();
        values.extend_from_slice(&other.values);
        Self { values }
    }

    /// Direct sum of monotone blocks, e.g. `[(Decreasing, 2), (Increasing, 1)] = 213`.
    /// Zero-length blocks are skipped, so `I_0` acts as the empty pattern.
    pub fn block_sum(blocks: &[(Monotone, usize)]) -> Self {
        blocks.iter().fold(Self::empty(), |acc, &(dir, k)| acc.direct_sum(&Self::monotone(k, dir)))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// Parses comma-separated one-line notation (`"3,1,4,2"`). A comma-free
/// string of two or more digits is read one digit per entry (`"2413"`), which
/// is how short patterns are usually written.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let values: Vec<u32> = if !s.contains(',') && s.len() > 1 {
            s.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| Error::InvalidPermutation(format!("bad digit {c:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.split(',')
                .map(|tok| tok.trim().parse::<u32>().map_err(|e| Error::InvalidPermutation(format!("{tok:?}: {e}"))))
                .collect::<Result<_>>()?
        };
        Self::new(values)
    }
}

/// The parameters `(k1, k2, k3)` of the class `Av(J_k1 ⊕ I_k2 ⊕ J_k3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassSpec {
    k1: usize,
    k2: usize,
    k3: usize,
}

/// The five permutations produced along the bijection pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Sigma,
    Rho,
    RhoRc,
    PiRc,
    Pi,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Sigma, Stage::Rho, Stage::RhoRc, Stage::PiRc, Stage::Pi];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Sigma => "sigma",
            Stage::Rho => "rho",
            Stage::RhoRc => "rho_rc",
            Stage::PiRc => "pi_rc",
            Stage::Pi => "pi",
        }
    }
}

impl ClassSpec {
    pub fn new(k1: usize, k2: usize, k3: usize) -> Result<Self> {
        if k1 == 0 || k3 == 0 {
            return Err(Error::InvalidClassSpec(format!("k1 and k3 must be positive, got ({k1},{k2},{k3})")));
        }
        Ok(Self { k1, k2, k3 })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn k3(&self) -> usize {
        self.k3
    }

    /// `d = k1 + k2 + k3 - 1`: the class is in bijection with `Av(I_{d+1})`.
    pub fn d(&self) -> usize {
        self.k1 + self.k2 + self.k3 - 1
    }

    /// `J_k1 ⊕ I_k2 ⊕ J_k3`
    pub fn class_pattern(&self) -> Permutation {
        self.stage_pattern(Stage::Pi)
    }

    /// The pattern avoided by each pipeline stage.
    pub fn stage_pattern(&self, stage: Stage) -> Permutation {
        use Monotone::{Decreasing as J, Increasing as I};
        let (k1, k2, k3) = (self.k1, self.k2, self.k3);
        let blocks = match stage {
            Stage::Sigma => [(I, k1), (I, k2), (I, k3)],
            Stage::Rho => [(J, k1), (I, k2), (I, k3)],
            Stage::RhoRc => [(I, k3), (I, k2), (J, k1)],
            Stage::PiRc => [(J, k3), (I, k2), (J, k1)],
            Stage::Pi => [(J, k1), (I, k2), (J, k3)],
        };
        Permutation::block_sum(&blocks)
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.k1, self.k2, self.k3)
    }
}

impl FromStr for ClassSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidClassSpec(format!("expected k1,k2,k3 but got {s:?}")));
        }
        let mut ks = [0usize; 3];
        for (k, p) in ks.iter_mut().zip(&parts) {
            *k = p.parse().map_err(|e| Error::InvalidClassSpec(format!("{p:?}: {e}")))?;
        }
        Self::new(ks[0], ks[1], ks[2])
    }
}
