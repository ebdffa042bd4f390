//! Growth diagrams on Ferrers shapes.
//!
//! Every lattice corner `(a, b)` of a shape carries the RSK shape of the
//! points in the rectangle `[1, a] x [1, b]`. Neighbouring corners differ by
//! at most one box, so the computation only tracks edge labels: the row in
//! which the larger label gained its box, or 0 for no change. Full labels are
//! materialised along the north-east border only.

use super::Partition;
use crate::error::{Error, Result};
use crate::shape::{FerrersShape, Traversal};

/// One step of the border walk from `(0, r)` to `(lambda_1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// Moving east: a box is added in the given 1-based row.
    Add(u32),
    /// Moving south: a box is removed from the given 1-based row.
    Remove(u32),
}

/// Labels along the north-east border of a filled Ferrers shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthBorder {
    shape: FerrersShape,
    path: Vec<(u32, u32)>,
    labels: Vec<Partition>,
}

impl GrowthBorder {
    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    /// Corners `(a, b)` of the border, west to east.
    pub fn path(&self) -> &[(u32, u32)] {
        &self.path
    }

    pub fn labels(&self) -> &[Partition] {
        &self.labels
    }

    pub fn label_at(&self, a: u32, b: u32) -> Option<&Partition> {
        self.path.iter().position(|&c| c == (a, b)).map(|i| &self.labels[i])
    }

    pub fn steps(&self) -> Vec<Step> {
        steps_from_labels(&self.path, &self.labels)
    }

    /// Every label replaced by its conjugate.
    pub fn conjugate(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            path: self.path.clone(),
            labels: self.labels.iter().map(Partition::conjugate).collect(),
        }
    }

    /// Runs the local rules backwards from the border and returns the filling.
    pub fn reconstruct(&self) -> Result<Traversal> {
        reconstruct(&self.shape, &self.steps())
    }
}

/// Forward growth with the RSK local rules, row by row from the bottom.
pub fn forward_growth(t: &Traversal) -> GrowthBorder {
    let steps = border_steps(t);
    let mut path = Vec::with_capacity(steps.len() + 1);
    let mut labels = Vec::with_capacity(steps.len() + 1);
    let (mut a, mut b) = (0u32, t.shape().num_rows() as u32);
    let mut label = Partition::empty();
    path.push((a, b));
    labels.push(label.clone());
    for step in &steps {
        match *step {
            Step::Add(row) => {
                a += 1;
                label.add_box(row as usize).expect("growth adds addable boxes");
            }
            Step::Remove(row) => {
                b -= 1;
                label.remove_box(row as usize).expect("growth removes corners");
            }
        }
        path.push((a, b));
        labels.push(label.clone());
    }
    GrowthBorder { shape: t.shape().clone(), path, labels }
}

/// Strategy A: conjugate every border label and rebuild the filling.
///
/// The result has the same shape; a traversal avoiding `I_k` maps to one
/// avoiding `J_k` and the map is an involution. The rebuilt filling is grown
/// forward again and compared with the conjugated border, so any
/// inconsistency surfaces as [`Error::ReconstructionFailure`].
pub fn border_conjugate_bijection(t: &Traversal) -> Result<Traversal> {
    let steps = conjugate_steps(&border_steps(t));
    let out = reconstruct(t.shape(), &steps)?;
    if border_steps(&out) != steps {
        return Err(Error::ReconstructionFailure(format!(
            "regrowing {out} does not reproduce the conjugated border of {t}"
        )));
    }
    Ok(out)
}

fn border_steps(t: &Traversal) -> Vec<Step> {
    let shape = t.shape();
    let r = shape.num_rows();
    let mut north = vec![0u32; shape.num_cols()];
    let mut top: Vec<Vec<u32>> = Vec::with_capacity(r);
    let mut east_edges: Vec<u32> = Vec::with_capacity(r);
    for b in 1..=r {
        let len = shape.row_len(b);
        let point = t.row_values()[b - 1] as usize;
        let mut west = 0u32;
        for (a, slot) in north.iter_mut().enumerate().take(len).map(|(i, s)| (i + 1, s)) {
            let (x, y) = (west, *slot);
            let (n_edge, e_edge) = if a == point {
                debug_assert!(x == 0 && y == 0);
                (1, 1)
            } else {
                match (x, y) {
                    (0, 0) => (0, 0),
                    (0, y) => (y, 0),
                    (x, 0) => (0, x),
                    (x, y) if x != y => (y, x),
                    (x, _) => (x + 1, x + 1),
                }
            };
            *slot = n_edge;
            west = e_edge;
        }
        east_edges.push(west);
        top.push(north[shape.row_len(b + 1)..len].to_vec());
    }
    let mut steps = Vec::new();
    for b in (1..=r).rev() {
        steps.extend(top[b - 1].iter().map(|&row| Step::Add(row)));
        steps.push(Step::Remove(east_edges[b - 1]));
    }
    steps
}

fn steps_from_labels(path: &[(u32, u32)], labels: &[Partition]) -> Vec<Step> {
    path.windows(2)
        .zip(labels.windows(2))
        .map(|(p, l)| {
            let (small, big) = if p[1].0 > p[0].0 { (&l[0], &l[1]) } else { (&l[1], &l[0]) };
            let row = (1..=big.len()).find(|&i| big.part(i) != small.part(i)).unwrap_or(0) as u32;
            if p[1].0 > p[0].0 {
                Step::Add(row)
            } else {
                Step::Remove(row)
            }
        })
        .collect()
}

/// Conjugation moves the box in row `x`, column `c` to row `c`.
fn conjugate_steps(steps: &[Step]) -> Vec<Step> {
    let mut parts: Vec<u32> = Vec::new();
    steps
        .iter()
        .map(|&s| match s {
            Step::Add(x) => {
                let i = x as usize - 1;
                if i == parts.len() {
                    parts.push(0);
                }
                parts[i] += 1;
                Step::Add(parts[i])
            }
            Step::Remove(x) => {
                let i = x as usize - 1;
                let c = parts[i];
                parts[i] -= 1;
                if parts[i] == 0 {
                    parts.pop();
                }
                Step::Remove(c)
            }
        })
        .collect()
}

fn reconstruct(shape: &FerrersShape, steps: &[Step]) -> Result<Traversal> {
    let fail = |msg: String| Error::ReconstructionFailure(format!("{shape}: {msg}"));
    let r = shape.num_rows();
    let mut top: Vec<Vec<u32>> = vec![Vec::new(); r];
    let mut east_edges = vec![0u32; r];
    let mut b = r;
    for &s in steps {
        match s {
            Step::Add(x) if b > 0 => top[b - 1].push(x),
            Step::Remove(x) if b > 0 => {
                east_edges[b - 1] = x;
                b -= 1;
            }
            _ => return Err(fail("border walk leaves the shape".into())),
        }
    }
    if b != 0 || (0..r).any(|j| top[j].len() != shape.row_len(j + 1) - shape.row_len(j + 2)) {
        return Err(fail("border walk does not match the shape".into()));
    }
    let mut north = vec![0u32; shape.num_cols()];
    let mut rows = vec![0u32; r];
    for b in (1..=r).rev() {
        let len = shape.row_len(b);
        north[shape.row_len(b + 1)..len].copy_from_slice(&top[b - 1]);
        let mut east = east_edges[b - 1];
        for a in (1..=len).rev() {
            let p = north[a - 1];
            let (x, y, point) = match (p, east) {
                (0, 0) => (0, 0, false),
                (0, q) => (q, 0, false),
                (p, 0) => (0, p, false),
                (p, q) if p != q => (q, p, false),
                (1, _) => (0, 0, true),
                (p, _) => (p - 1, p - 1, false),
            };
            if point {
                if rows[b - 1] != 0 {
                    return Err(fail(format!("two points in row {b}")));
                }
                rows[b - 1] = a as u32;
            }
            north[a - 1] = y;
            east = x;
        }
        if east != 0 {
            return Err(fail(format!("nonempty label on the west edge at row {b}")));
        }
    }
    if north.iter().any(|&e| e != 0) {
        return Err(fail("nonempty label on the south edge".into()));
    }
    Traversal::new(shape.clone(), rows).map_err(|e| fail(e.to_string()))
}
