use crate::error::{Error, Result};
use crate::perm::{occurs_in, Permutation};
use crate::shape::{FerrersShape, Traversal};

/// Blue/white coloring of `[n]^2` relative to a pattern `tau`.
///
/// Box `(i, j)` is blue when `tau` occurs among the points strictly to the
/// north-east of it. The blue set is closed to the south-west, so it is
/// stored as one height per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    tau: Permutation,
    heights: Vec<u32>,
}

impl Coloring {
    pub fn n(&self) -> usize {
        self.heights.len()
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    /// Number of blue boxes in each column.
    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn is_blue(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.n() && j >= 1 && j <= self.heights[i - 1] as usize
    }

    pub fn is_frozen(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.n() && j >= 1 && j <= self.n() && !self.is_blue(i, j)
    }

    pub fn blue_count(&self) -> usize {
        self.heights.iter().map(|&h| h as usize).sum()
    }

    /// Blue boxes sorted by column, then row.
    pub fn blue_boxes(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.blue_count());
        for (i, &h) in self.heights.iter().enumerate() {
            out.extend((1..=h).map(|j| (i as u32 + 1, j)));
        }
        out
    }

    /// White boxes sorted by column, then row.
    pub fn frozen_boxes(&self) -> Vec<(u32, u32)> {
        let n = self.n() as u32;
        let mut out = Vec::with_capacity(self.n() * self.n() - self.blue_count());
        for (i, &h) in self.heights.iter().enumerate() {
            out.extend((h + 1..=n).map(|j| (i as u32 + 1, j)));
        }
        out
    }
}

pub fn color_boxes(pi: &Permutation, tau: &Permutation) -> Coloring {
    let heights = match inc_dec_split(tau) {
        Some((a, b)) => heights_inc_dec(pi.values(), a, b),
        None => heights_generic(pi.values(), tau.values()),
    };
    Coloring { tau: tau.clone(), heights }
}

/// The frozen region: every white box, sorted by column then row.
pub fn frozen_region(pi: &Permutation, tau: &Permutation) -> Vec<(u32, u32)> {
    color_boxes(pi, tau).frozen_boxes()
}

/// The blue part of a permutation diagram, re-indexed as a traversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaExtraction {
    shape: FerrersShape,
    traversal: Traversal,
    row_map: Vec<u32>,
    col_map: Vec<u32>,
}

impl LambdaExtraction {
    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    pub fn traversal(&self) -> &Traversal {
        &self.traversal
    }

    /// `row_map[y - 1]` is the original row of row `y` of the shape.
    pub fn row_map(&self) -> &[u32] {
        &self.row_map
    }

    /// `col_map[x - 1]` is the original column of column `x` of the shape.
    pub fn col_map(&self) -> &[u32] {
        &self.col_map
    }

    /// Writes a traversal of the same shape back into `pi`, leaving every
    /// point outside the shape where it was.
    pub fn substitute(&self, pi: &Permutation, replacement: &Traversal) -> Result<Permutation> {
        if replacement.shape() != &self.shape {
            return Err(Error::InnerBijectionFailure(format!(
                "inner map changed the shape from {} to {}",
                self.shape,
                replacement.shape()
            )));
        }
        let mut values = pi.values().to_vec();
        for (x, &row) in replacement.column_rows().iter().enumerate() {
            values[self.col_map[x] as usize - 1] = self.row_map[row as usize - 1];
        }
        Ok(Permutation::from_vec_unchecked(values))
    }
}

pub fn extract_lambda(pi: &Permutation, tau: &Permutation) -> Result<LambdaExtraction> {
    extract_from_coloring(pi, &color_boxes(pi, tau))
}

/// Deletes the white boxes and the rows and columns of every white point.
pub fn extract_from_coloring(pi: &Permutation, coloring: &Coloring) -> Result<LambdaExtraction> {
    let vals = pi.values();
    let h = coloring.heights();
    let col_map: Vec<u32> = (0..vals.len()).filter(|&i| vals[i] <= h[i]).map(|i| i as u32 + 1).collect();
    let mut row_map: Vec<u32> = col_map.iter().map(|&c| vals[c as usize - 1]).collect();
    row_map.sort_unstable();
    let rows: Vec<u32> =
        row_map.iter().map(|&y| col_map.iter().filter(|&&c| h[c as usize - 1] >= y).count() as u32).collect();
    let shape = FerrersShape::new(rows).map_err(|e| Error::NotATraversal(e.to_string()))?;
    let mut row_of = vec![0u32; vals.len() + 1];
    for (k, &y) in row_map.iter().enumerate() {
        row_of[y as usize] = k as u32 + 1;
    }
    let mut row_values = vec![0u32; row_map.len()];
    for (x, &c) in col_map.iter().enumerate() {
        row_values[row_of[vals[c as usize - 1] as usize] as usize - 1] = x as u32 + 1;
    }
    let traversal = Traversal::new(shape.clone(), row_values).map_err(|e| Error::NotATraversal(e.to_string()))?;
    Ok(LambdaExtraction { shape, traversal, row_map, col_map })
}

/// `tau = I_a ⊕ J_b`, with `b = 0` for increasing patterns.
fn inc_dec_split(tau: &Permutation) -> Option<(usize, usize)> {
    let v = tau.values();
    let m = v.len();
    if m == 0 {
        return None;
    }
    let a = v.iter().enumerate().take_while(|&(i, &x)| x as usize == i + 1).count();
    let b = m - a;
    let tail_ok = v[a..].iter().enumerate().all(|(t, &x)| x as usize == m - t);
    tail_ok.then_some((a, b))
}

/// Heights for `tau = I_a ⊕ J_b`.
///
/// With `a >= 1` every occurrence has its minimum at its first point `p`,
/// so the height of column `i` is one less than the largest `pi(p)`, `p > i`,
/// that starts an occurrence. For `a = 0` the minimum is the last point.
fn heights_inc_dec(vals: &[u32], a: usize, b: usize) -> Vec<u32> {
    let n = vals.len();
    if a == 0 {
        return heights_decreasing(vals, b);
    }
    // good[x]: at least b points north-east of x form a decreasing chain
    let good: Vec<bool> = (0..n)
        .map(|x| match b {
            0 => true,
            1 => vals[x + 1..].iter().any(|&v| v > vals[x]),
            _ => lds_above(&vals[x + 1..], vals[x]) >= b,
        })
        .collect();
    // chain[x]: longest increasing chain from x ending at a good point
    let mut chain = vec![0usize; n];
    for x in (0..n).rev() {
        let mut best = usize::from(good[x]);
        for y in x + 1..n {
            if vals[y] > vals[x] && chain[y] > 0 {
                best = best.max(chain[y] + 1);
            }
        }
        chain[x] = best;
    }
    let mut heights = vec![0u32; n];
    let mut top = 0u32;
    for i in (0..n).rev() {
        heights[i] = top.saturating_sub(1);
        if chain[i] >= a {
            top = top.max(vals[i]);
        }
    }
    heights
}

/// Length of the longest decreasing subsequence of the values above `floor`.
fn lds_above(seq: &[u32], floor: u32) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &v in seq.iter().filter(|&&v| v > floor) {
        // strictly decreasing: keep tails decreasing, replace the first tail <= v
        let pos = tails.partition_point(|&t| t > v);
        if pos == tails.len() {
            tails.push(v);
        } else {
            tails[pos] = v;
        }
    }
    tails.len()
}

/// Heights for `tau = J_b`: the largest last point of a decreasing chain
/// of length `b` inside each suffix.
fn heights_decreasing(vals: &[u32], b: usize) -> Vec<u32> {
    let n = vals.len();
    let mut heights = vec![0u32; n];
    for i in 0..n {
        let mut tails: Vec<u32> = Vec::new();
        let mut top = 0u32;
        for &v in &vals[i + 1..] {
            let pos = tails.partition_point(|&t| t > v);
            if pos == tails.len() {
                tails.push(v);
            } else {
                tails[pos] = v;
            }
            if pos + 1 >= b {
                top = top.max(v);
            }
        }
        heights[i] = top.saturating_sub(1);
    }
    heights
}

/// Any pattern: raise a threshold while the pattern still occurs among the
/// suffix points above it. Heights only grow as the suffix grows.
fn heights_generic(vals: &[u32], tau: &[u32]) -> Vec<u32> {
    let n = vals.len();
    if tau.is_empty() {
        return vec![n as u32; n];
    }
    let mut heights = vec![0u32; n];
    let mut best = 0u32;
    let mut buf = Vec::with_capacity(n);
    for i in (0..n).rev() {
        heights[i] = best.saturating_sub(1);
        loop {
            let next = best + 1;
            buf.clear();
            buf.extend(vals[i..].iter().copied().filter(|&v| v >= next));
            if next as usize > n || !occurs_in(&buf, tau) {
                break;
            }
            best = next;
        }
    }
    heights
}
