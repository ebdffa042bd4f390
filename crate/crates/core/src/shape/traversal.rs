use std::fmt;
use std::str::FromStr;

use super::FerrersShape;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Default cap on the number of boxes for exhaustive traversal enumeration.
pub const DEFAULT_SHAPE_BOUND: usize = 16;

/// A 0/1 filling of a Ferrers shape with exactly one 1 in each row and column.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Traversal {
    shape: FerrersShape,
    // row_values[j - 1] = column of the 1 in row j
    row_values: Vec<u32>,
}

impl Traversal {
    pub fn new(shape: FerrersShape, row_values: Vec<u32>) -> Result<Self> {
        if !shape.admits_traversal() {
            return Err(Error::InvalidTraversal(format!("shape {shape} admits no traversal")));
        }
        if row_values.len() != shape.num_rows() {
            return Err(Error::InvalidTraversal(format!(
                "{} row values for {} rows",
                row_values.len(),
                shape.num_rows()
            )));
        }
        let mut seen = vec![false; shape.num_cols()];
        for (j, &c) in row_values.iter().enumerate() {
            if c == 0 || c as usize > shape.row_len(j + 1) {
                return Err(Error::InvalidTraversal(format!(
                    "column {c} outside row {} of length {}",
                    j + 1,
                    shape.row_len(j + 1)
                )));
            }
            if std::mem::replace(&mut seen[c as usize - 1], true) {
                return Err(Error::InvalidTraversal(format!("column {c} used twice")));
            }
        }
        Ok(Self { shape, row_values })
    }

    pub(crate) fn from_parts_unchecked(shape: FerrersShape, row_values: Vec<u32>) -> Self {
        debug_assert!(Self::new(shape.clone(), row_values.clone()).is_ok());
        Self { shape, row_values }
    }

    /// `M_sigma`: the point `(i, sigma(i))` in column `i` of the `n x n` square.
    pub fn from_permutation(sigma: &Permutation) -> Self {
        Self { shape: FerrersShape::square(sigma.len()), row_values: sigma.inverse().into_values() }
    }

    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    pub fn row_values(&self) -> &[u32] {
        &self.row_values
    }

    pub fn size(&self) -> usize {
        self.row_values.len()
    }

    /// Row of the 1 in each column, left to right.
    pub fn column_rows(&self) -> Vec<u32> {
        let mut out = vec![0u32; self.row_values.len()];
        for (j, &c) in self.row_values.iter().enumerate() {
            out[c as usize - 1] = j as u32 + 1;
        }
        out
    }

    /// The points read as a permutation (column -> row). On a square shape
    /// this inverts [`Traversal::from_permutation`].
    pub fn as_permutation(&self) -> Permutation {
        Permutation::from_vec_unchecked(self.column_rows())
    }

    pub fn contains(&self, sigma: &Permutation) -> bool {
        traversal_contains(self, sigma)
    }

    /// Position of this traversal in the lexicographic order of
    /// [`enumerate_traversals`], counting from 0.
    pub fn lex_rank(&self) -> u128 {
        let shape = &self.shape;
        let mut used = vec![false; shape.num_cols() + 1];
        let mut rank = 0u128;
        for (j, &c) in self.row_values.iter().enumerate() {
            for smaller in 1..c {
                if !used[smaller as usize] {
                    used[smaller as usize] = true;
                    rank += completions(shape, &used, j + 1);
                    used[smaller as usize] = false;
                }
            }
            used[c as usize] = true;
        }
        rank
    }

    /// Inverse of [`Traversal::lex_rank`].
    pub fn from_lex_rank(shape: &FerrersShape, mut rank: u128) -> Result<Self> {
        if rank >= shape.traversal_count() {
            return Err(Error::InvalidTraversal(format!(
                "rank {rank} out of range for shape {shape} with {} traversals",
                shape.traversal_count()
            )));
        }
        let r = shape.num_rows();
        let mut used = vec![false; shape.num_cols() + 1];
        let mut rows = Vec::with_capacity(r);
        for j in 0..r {
            let mut chosen = 0;
            for c in 1..=shape.row_len(j + 1) {
                if used[c] {
                    continue;
                }
                used[c] = true;
                let below = completions(shape, &used, j + 1);
                if rank < below {
                    chosen = c;
                    break;
                }
                rank -= below;
                used[c] = false;
            }
            debug_assert!(chosen > 0);
            rows.push(chosen as u32);
        }
        Ok(Self::from_parts_unchecked(shape.clone(), rows))
    }
}

impl fmt::Display for Traversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.shape)?;
        for (i, c) in self.row_values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Traversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Traversal({self})")
    }
}

/// `"<shape>;<row values>"`, e.g. `"2,2;2,1"`.
impl FromStr for Traversal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (shape, cols) =
            s.split_once(';').ok_or_else(|| Error::InvalidTraversal(format!("missing ';' in {s:?}")))?;
        let shape: FerrersShape = shape.parse()?;
        let cols = cols.trim();
        let row_values = if cols.is_empty() {
            Vec::new()
        } else {
            cols.split(',')
                .map(|tok| tok.trim().parse::<u32>().map_err(|e| Error::InvalidTraversal(format!("{tok:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(shape, row_values)
    }
}

/// Ways to fill rows `filled + 1..=r` given the columns already `used`.
/// Filling top-down, every higher row takes a column that row `i` could use.
fn completions(shape: &FerrersShape, used: &[bool], filled: usize) -> u128 {
    let r = shape.num_rows();
    let mut free_upto = vec![0usize; used.len()];
    for c in 1..used.len() {
        free_upto[c] = free_upto[c - 1] + usize::from(!used[c]);
    }
    let mut total = 1u128;
    for i in (filled + 1..=r).rev() {
        let free = free_upto[shape.row_len(i)];
        let taken_above = r - i;
        if free <= taken_above {
            return 0;
        }
        total *= (free - taken_above) as u128;
    }
    total
}

/// Whether `L` contains `sigma` inside a complete rectangle of its shape.
///
/// Rows `r1 < ... < rm` and columns `c1 < ... < cm` must carry the pattern,
/// and since the shape is closed to the south-west the rectangle lies inside
/// it exactly when its top-right box `(cm, max row)` does.
pub fn traversal_contains(l: &Traversal, sigma: &Permutation) -> bool {
    let m = sigma.len();
    if m == 0 {
        return true;
    }
    let seq = l.column_rows();
    if m > seq.len() {
        return false;
    }
    let pat = sigma.values();
    let mut below = vec![usize::MAX; m];
    let mut above = vec![usize::MAX; m];
    for t in 0..m {
        for s in 0..t {
            if pat[s] < pat[t] && (below[t] == usize::MAX || pat[s] > pat[below[t]]) {
                below[t] = s;
            }
            if pat[s] > pat[t] && (above[t] == usize::MAX || pat[s] < pat[above[t]]) {
                above[t] = s;
            }
        }
    }
    let search = RectSearch { seq: &seq, shape: l.shape(), m, below: &below, above: &above };
    let mut chosen = vec![0u32; m];
    search.run(&mut chosen, 0, 0, 0)
}

struct RectSearch<'a> {
    seq: &'a [u32],
    shape: &'a FerrersShape,
    m: usize,
    below: &'a [usize],
    above: &'a [usize],
}

impl RectSearch<'_> {
    fn run(&self, chosen: &mut [u32], t: usize, start: usize, max_row: u32) -> bool {
        if t == self.m {
            return true;
        }
        let n = self.seq.len();
        let lo = if self.below[t] == usize::MAX { 0 } else { chosen[self.below[t]] };
        let hi = if self.above[t] == usize::MAX { u32::MAX } else { chosen[self.above[t]] };
        for i in start..=n + t - self.m {
            let row = self.seq[i];
            if row <= lo || row >= hi {
                continue;
            }
            let top = max_row.max(row);
            // column i + 1 must fit under the tallest row used so far; rows only
            // get shorter as the maximum rises, so failing here is final for
            // this and every later column
            if i + 1 > self.shape.row_len(top as usize) {
                if top == max_row {
                    break;
                }
                continue;
            }
            chosen[t] = row;
            if self.run(chosen, t + 1, i + 1, top) {
                return true;
            }
        }
        false
    }
}

/// All traversals of `shape` in lexicographic order of their row values.
pub fn enumerate_traversals(shape: &FerrersShape) -> Result<Traversals> {
    enumerate_traversals_bounded(shape, DEFAULT_SHAPE_BOUND)
}

pub fn enumerate_traversals_bounded(shape: &FerrersShape, bound: usize) -> Result<Traversals> {
    if shape.size() > bound {
        return Err(Error::BoundExceeded { what: "shape boxes", value: shape.size(), bound });
    }
    Ok(Traversals::new(shape.clone()))
}

/// `S_lambda(sigma)`: traversals of `shape` avoiding `sigma`, in lexicographic order.
pub fn enumerate_avoiding_traversals(
    shape: &FerrersShape,
    sigma: &Permutation,
) -> Result<impl Iterator<Item = Traversal>> {
    enumerate_avoiding_traversals_bounded(shape, sigma, DEFAULT_SHAPE_BOUND)
}

pub fn enumerate_avoiding_traversals_bounded(
    shape: &FerrersShape,
    sigma: &Permutation,
    bound: usize,
) -> Result<impl Iterator<Item = Traversal>> {
    let sigma = sigma.clone();
    Ok(enumerate_traversals_bounded(shape, bound)?.filter(move |t| !traversal_contains(t, &sigma)))
}

/// Depth-first enumeration, bottom row first, smallest column first.
#[derive(Debug, Clone)]
pub struct Traversals {
    shape: FerrersShape,
    cols: Vec<u32>,
    used: Vec<bool>,
    next: Vec<u32>,
    done: bool,
}

impl Traversals {
    pub(super) fn new(shape: FerrersShape) -> Self {
        let r = shape.num_rows();
        let done = !shape.admits_traversal();
        Self { used: vec![false; shape.num_cols() + 1], next: vec![1; r + 1], cols: Vec::with_capacity(r), shape, done }
    }
}

impl Iterator for Traversals {
    type Item = Traversal;

    fn next(&mut self) -> Option<Traversal> {
        if self.done {
            return None;
        }
        let r = self.shape.num_rows();
        if r == 0 {
            self.done = true;
            return Some(Traversal::from_parts_unchecked(self.shape.clone(), Vec::new()));
        }
        loop {
            let depth = self.cols.len();
            if depth == r {
                let out = Traversal::from_parts_unchecked(self.shape.clone(), self.cols.clone());
                let c = self.cols.pop().unwrap();
                self.used[c as usize] = false;
                return Some(out);
            }
            let limit = self.shape.row_len(depth + 1) as u32;
            let mut c = self.next[depth];
            while c <= limit && self.used[c as usize] {
                c += 1;
            }
            if c > limit {
                self.next[depth] = 1;
                match self.cols.pop() {
                    Some(last) => self.used[last as usize] = false,
                    None => {
                        self.done = true;
                        return None;
                    }
                }
                continue;
            }
            self.next[depth] = c + 1;
            self.cols.push(c);
            self.used[c as usize] = true;
        }
    }
}
