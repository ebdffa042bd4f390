//! Integer partitions, standard tableaux, RSK, the hook walk, and growth
//! diagrams on Ferrers shapes.

mod diagram;
mod hook;
mod rsk;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::shape::FerrersShape;

pub use diagram::{border_conjugate_bijection, forward_growth, GrowthBorder, Step};
pub use hook::{hook_count, hook_walk_sample};
pub use rsk::{inverse_rsk, rsk};

/// Weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        Ok(Self { parts })
    }

    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(Self::new(parts.clone()).is_ok());
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// First part, or 0 for the empty partition.
    pub fn first(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// Part `i` (1-based); 0 past the end.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let mut out = vec![0u32; self.first() as usize];
        for &p in &self.parts {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Self { parts: out }
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Adds a box at the end of 1-based row `row`, if the result is a partition.
    pub fn add_box(&mut self, row: usize) -> Result<()> {
        let ok = row >= 1 && row <= self.len() + 1 && (row == 1 || self.part(row) < self.part(row - 1));
        if !ok {
            return Err(Error::InvalidPartition(format!("cannot add a box to row {row} of {self}")));
        }
        if row == self.len() + 1 {
            self.parts.push(1);
        } else {
            self.parts[row - 1] += 1;
        }
        Ok(())
    }

    /// Removes the last box of 1-based row `row`, if the result is a partition.
    pub fn remove_box(&mut self, row: usize) -> Result<()> {
        let ok = row >= 1 && row <= self.len() && self.part(row) > self.part(row + 1);
        if !ok {
            return Err(Error::InvalidPartition(format!("cannot remove a box from row {row} of {self}")));
        }
        self.parts[row - 1] -= 1;
        if self.parts[row - 1] == 0 {
            self.parts.pop();
        }
        Ok(())
    }

    /// The same diagram viewed as a Ferrers shape (rows bottom-up).
    pub fn to_shape(&self) -> FerrersShape {
        FerrersShape::from_rows_unchecked(self.parts.clone())
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: acc.clone() });
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                acc.push(p);
                rec(rest - p, p, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec(n as u32, n as u32, &mut Vec::new(), &mut out);
        out
    }
}

impl From<&FerrersShape> for Partition {
    fn from(shape: &FerrersShape) -> Self {
        Self { parts: shape.rows().to_vec() }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition{self}")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if inner.is_empty() {
            return Ok(Self::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::InvalidPartition(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// A filling of a partition by `1..=n`, strictly increasing along rows and
/// down columns (English reading: row 1 is the longest).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardTableau {
    rows: Vec<Vec<u32>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let shape: Vec<u32> = rows.iter().map(|r| r.len() as u32).collect();
        Partition::new(shape)?;
        let n: usize = rows.iter().map(Vec::len).sum();
        let mut seen = vec![false; n + 1];
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v == 0 || v as usize > n || std::mem::replace(&mut seen[v as usize], true) {
                    return Err(Error::InvalidPartition(format!("entry {v} is not a fresh value in 1..={n}")));
                }
                let left_ok = j == 0 || row[j - 1] < v;
                let up_ok = i == 0 || rows[i - 1][j] < v;
                if !left_ok || !up_ok {
                    return Err(Error::InvalidPartition(format!("entry {v} breaks monotonicity")));
                }
            }
        }
        Ok(Self { rows })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<u32>>) -> Self {
        debug_assert!(Self::new(rows.clone()).is_ok());
        Self { rows }
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Partition {
        Partition::from_parts_unchecked(self.rows.iter().map(|r| r.len() as u32).collect())
    }

    pub fn size(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> Self {
        let width = self.rows.first().map_or(0, Vec::len);
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); width];
        for row in &self.rows {
            for (j, &v) in row.iter().enumerate() {
                out[j].push(v);
            }
        }
        Self { rows: out }
    }
}
