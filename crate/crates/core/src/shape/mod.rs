//! Ferrers shapes in French convention, their traversals, and shape-Wilf
//! comparisons.
//!
//! Boxes are addressed as `(column, row)`, both 1-based, with row 1 at the
//! bottom. A shape is stored by its row lengths read bottom-up.

mod traversal;
mod wilf;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use traversal::{
    enumerate_avoiding_traversals, enumerate_avoiding_traversals_bounded, enumerate_traversals,
    enumerate_traversals_bounded, traversal_contains, Traversal, Traversals, DEFAULT_SHAPE_BOUND,
};
pub use wilf::{shape_wilf_check, shape_wilf_check_bounded, shape_wilf_classes, ShapeWilfReport};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FerrersShape {
    rows: Vec<u32>,
}

impl FerrersShape {
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.contains(&0) {
            return Err(Error::InvalidShape("row lengths must be positive".into()));
        }
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidShape(format!("row lengths must be weakly decreasing bottom-up: {rows:?}")));
        }
        Ok(Self { rows })
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<u32>) -> Self {
        debug_assert!(Self::new(rows.clone()).is_ok());
        Self { rows }
    }

    pub fn square(n: usize) -> Self {
        Self { rows: vec![n as u32; n] }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows.first().copied().unwrap_or(0) as usize
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.rows.iter().map(|&r| r as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Length of 1-based row `j`; zero above the top row.
    pub fn row_len(&self, j: usize) -> usize {
        if j == 0 {
            return self.num_cols();
        }
        self.rows.get(j - 1).copied().unwrap_or(0) as usize
    }

    /// Box `(col, row)` lies in the shape iff `col <= row_len(row)`.
    pub fn contains_box(&self, col: usize, row: usize) -> bool {
        col >= 1 && row >= 1 && col <= self.row_len(row)
    }

    /// Heights of the columns, left to right.
    pub fn column_heights(&self) -> Vec<u32> {
        let cols = self.num_cols();
        let mut heights = vec![0u32; cols];
        for &len in &self.rows {
            for h in heights.iter_mut().take(len as usize) {
                *h += 1;
            }
        }
        heights
    }

    pub fn transpose(&self) -> Self {
        Self { rows: self.column_heights() }
    }

    /// A traversal exists iff the shape has as many rows as columns and each
    /// row `j` (of `r`) has at least `r + 1 - j` boxes.
    pub fn admits_traversal(&self) -> bool {
        let r = self.num_rows();
        r == self.num_cols() && self.rows.iter().enumerate().all(|(j, &len)| len as usize >= r - j)
    }

    /// Number of traversals: rows filled top-down, row `j` has
    /// `row_len(j) - (r - j)` free columns.
    pub fn traversal_count(&self) -> u128 {
        if !self.admits_traversal() {
            return 0;
        }
        let r = self.num_rows();
        self.rows.iter().enumerate().map(|(j, &len)| (len as usize - (r - 1 - j)) as u128).product()
    }
}

/// All shapes with at most `max_boxes` boxes, by size and then reverse
/// lexicographic row lengths. The empty shape comes first.
pub fn all_shapes(max_boxes: usize) -> Vec<FerrersShape> {
    let mut out = Vec::new();
    for size in 0..=max_boxes {
        let mut current = Vec::new();
        partitions_into(size, size, &mut current, &mut out);
    }
    out
}

fn partitions_into(rest: usize, max_part: usize, current: &mut Vec<u32>, out: &mut Vec<FerrersShape>) {
    if rest == 0 {
        out.push(FerrersShape::from_rows_unchecked(current.clone()));
        return;
    }
    for part in (1..=rest.min(max_part)).rev() {
        current.push(part as u32);
        partitions_into(rest - part, part, current, out);
        current.pop();
    }
}

impl fmt::Display for FerrersShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FerrersShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FerrersShape({self})")
    }
}

/// Comma-separated row lengths, bottom-up: `"7,7,5,5"`.
impl FromStr for FerrersShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let rows = s
            .split(',')
            .map(|tok| tok.trim().parse::<u32>().map_err(|e| Error::InvalidShape(format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_query() {
        let s: FerrersShape = "7,7,7,5,5,5,4".parse().unwrap();
        assert_eq!(s.num_rows(), 7);
        assert_eq!(s.num_cols(), 7);
        assert_eq!(s.size(), 40);
        assert!(s.contains_box(4, 7));
        assert!(!s.contains_box(5, 7));
        assert!(s.contains_box(7, 3));
        assert!(!s.contains_box(6, 4));
        assert!(!s.contains_box(1, 8));
        assert!(!s.contains_box(0, 1));
        assert_eq!(s.to_string(), "7,7,7,5,5,5,4");
        assert!("3,4".parse::<FerrersShape>().is_err());
        assert!("3,0".parse::<FerrersShape>().is_err());
        assert!("x".parse::<FerrersShape>().is_err());
        assert!("".parse::<FerrersShape>().unwrap().is_empty());
    }

    #[test]
    fn transpose_and_admissibility() {
        let s: FerrersShape = "3,2,2".parse().unwrap();
        assert_eq!(s.transpose().rows(), &[3, 3, 1]);
        assert_eq!(s.transpose().transpose(), s);
        assert!("2,1".parse::<FerrersShape>().unwrap().admits_traversal());
        assert!(!"2,2,1".parse::<FerrersShape>().unwrap().admits_traversal());
        assert!(!"3,1,1".parse::<FerrersShape>().unwrap().admits_traversal());
        assert!(FerrersShape::empty().admits_traversal());
        assert_eq!(FerrersShape::square(4).traversal_count(), 24);
        assert_eq!("2,1".parse::<FerrersShape>().unwrap().traversal_count(), 1);
    }

    #[test]
    fn shape_listing() {
        let shapes = all_shapes(5);
        // 1 + 1 + 2 + 3 + 5 + 7
        assert_eq!(shapes.len(), 19);
        assert_eq!(shapes[0], FerrersShape::empty());
        assert!(shapes.iter().all(|s| FerrersShape::new(s.rows().to_vec()).is_ok()));
    }
}
