//! Layers of iterated left-to-right minima in `Av(I_{d+1})`, the scaled
//! polylines they define, and the finite-`n` goodness conditions.

mod goodness;
mod region;

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use goodness::{goodness, GoodnessReport, Violation};
pub use region::{sw_region, SwRegion};

/// Partition of `[n]` into layers `A^1, ..., A^d`.
///
/// `A^1` holds the left-to-right minima of `sigma`, and `A^l` the
/// left-to-right minima of what remains after removing earlier layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    layers: Vec<Vec<usize>>,
    layer_of: Vec<usize>,
}

impl LayerPartition {
    /// Number of nonempty layers, which is `lis(sigma)`.
    pub fn d(&self) -> usize {
        self.layers.len()
    }

    pub fn n(&self) -> usize {
        self.layer_of.len()
    }

    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Indices of `A^l` in increasing order; empty when `l > d`.
    pub fn layer(&self, l: usize) -> &[usize] {
        assert!(l >= 1, "layers are numbered from 1");
        self.layers.get(l - 1).map_or(&[], Vec::as_slice)
    }

    /// Layer containing index `i` (1-based).
    pub fn layer_of(&self, i: usize) -> usize {
        self.layer_of[i - 1]
    }

    /// `j^l(i)`: the largest index of `A^l` below `i`, or 0.
    pub fn predecessor(&self, l: usize, i: usize) -> usize {
        let layer = self.layer(l);
        let pos = layer.partition_point(|&j| j < i);
        if pos == 0 {
            0
        } else {
            layer[pos - 1]
        }
    }

    /// `pred[l - 1][i]` is `j^l(i)` for `l` in `1..=d` and `i` in `0..=n`.
    pub(crate) fn predecessor_table(&self, d: usize) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut table = vec![vec![0usize; n + 1]; d];
        let mut last = vec![0usize; d];
        for i in 1..=n {
            for (row, &j) in table.iter_mut().zip(&last) {
                row[i] = j;
            }
            let l = self.layer_of(i);
            if l <= d {
                last[l - 1] = i;
            }
        }
        table
    }
}

/// Splits `[n]` into layers with one patience-sorting pass.
///
/// Layer minima increase with the layer index, so each value joins the
/// first layer whose current minimum exceeds it.
pub fn layer_partition(sigma: &Permutation) -> LayerPartition {
    let mut minima: Vec<u32> = Vec::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut layer_of = Vec::with_capacity(sigma.len());
    for (idx, &v) in sigma.values().iter().enumerate() {
        let l = minima.partition_point(|&m| m < v);
        if l == minima.len() {
            minima.push(v);
            layers.push(Vec::new());
        } else {
            minima[l] = v;
        }
        layers[l].push(idx + 1);
        layer_of.push(l + 1);
    }
    LayerPartition { layers, layer_of }
}

/// `j^l(i)` for `sigma`; see [`LayerPartition::predecessor`].
pub fn predecessor(partition: &LayerPartition, l: usize, i: usize) -> usize {
    partition.predecessor(l, i)
}

/// The polylines `f^1, ..., f^d` through `(0, 0)`, the scaled layer points
/// and `(1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathFamily {
    paths: Vec<Vec<(f64, f64)>>,
}

impl PathFamily {
    pub fn d(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[Vec<(f64, f64)>] {
        &self.paths
    }

    pub fn path(&self, l: usize) -> &[(f64, f64)] {
        &self.paths[l - 1]
    }

    /// Value of `f^l` at `t` in `[0, 1]` by linear interpolation.
    pub fn eval(&self, l: usize, t: f64) -> f64 {
        let path = self.path(l);
        let k = path.partition_point(|&(x, _)| x <= t);
        if k == 0 {
            return path[0].1;
        }
        if k == path.len() {
            return path[k - 1].1;
        }
        let (x0, y0) = path[k - 1];
        let (x1, y1) = path[k];
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }
}

pub fn paths(sigma: &Permutation, d: usize) -> Result<PathFamily> {
    let partition = layer_partition(sigma);
    if partition.d() > d {
        return Err(Error::LayerOverflow { layers: partition.d(), d });
    }
    let n = sigma.len() as f64;
    let scale = (2.0 * d as f64 * n).sqrt();
    let paths = (1..=d)
        .map(|l| {
            let mut path = Vec::with_capacity(partition.layer(l).len() + 2);
            path.push((0.0, 0.0));
            for &i in partition.layer(l) {
                let dev = sigma.at(i) as f64 + i as f64 - (n + 1.0);
                path.push((i as f64 / (n + 1.0), dev / scale));
            }
            path.push((1.0, 0.0));
            path
        })
        .collect();
    Ok(PathFamily { paths })
}

/// Finds `i_1 < ... < i_d` with `i_k` in `A^k`, `i_l = i` and `sigma`
/// increasing along the sequence, where `d` is the number of layers.
///
/// A greedy pass is tried first; if it gets stuck, an exact search over
/// reachable points decides. `None` means no such sequence exists.
pub fn sequence_witness(sigma: &Permutation, partition: &LayerPartition, l: usize, i: usize) -> Option<Vec<usize>> {
    if i == 0 || i > sigma.len() || partition.layer_of(i) != l {
        return None;
    }
    if let Some(w) = greedy_witness(sigma, partition, l, i) {
        return Some(w);
    }
    exact_witness(sigma, partition, l, i)
}

fn greedy_witness(sigma: &Permutation, partition: &LayerPartition, l: usize, i: usize) -> Option<Vec<usize>> {
    let d = partition.d();
    let mut seq = vec![0usize; d];
    seq[l - 1] = i;
    for k in (1..l).rev() {
        let next = seq[k];
        let v = sigma.at(next);
        seq[k - 1] = partition.layer(k).iter().rev().copied().find(|&j| j < next && sigma.at(j) < v)?;
    }
    for k in l + 1..=d {
        let prev = seq[k - 2];
        let v = sigma.at(prev);
        seq[k - 1] = partition.layer(k).iter().copied().find(|&j| j > prev && sigma.at(j) > v)?;
    }
    Some(seq)
}

fn exact_witness(sigma: &Permutation, partition: &LayerPartition, l: usize, i: usize) -> Option<Vec<usize>> {
    let d = partition.d();
    let mut seq = vec![0usize; d];
    seq[l - 1] = i;

    // Forward: reach[k] holds the points of A^k reachable from i, each with
    // a parent in the previous layer. Keeping, for each point, the reachable
    // predecessor of smallest value is enough to decide reachability.
    let mut frontier = vec![i];
    let mut parents: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in l + 1..=d {
        let mut reached = Vec::new();
        let mut best: Option<usize> = None;
        let mut fi = 0;
        for &j in partition.layer(k) {
            while fi < frontier.len() && frontier[fi] < j {
                let p = frontier[fi];
                if best.is_none_or(|b| sigma.at(p) < sigma.at(b)) {
                    best = Some(p);
                }
                fi += 1;
            }
            if let Some(p) = best {
                if sigma.at(p) < sigma.at(j) {
                    reached.push((j, p));
                }
            }
        }
        if reached.is_empty() {
            return None;
        }
        frontier = reached.iter().map(|&(j, _)| j).collect();
        parents.push(reached);
    }
    if let Some(last) = parents.last() {
        let mut cur = last[0].0;
        for (offset, layer) in parents.iter().enumerate().rev() {
            let k = l + 1 + offset;
            seq[k - 1] = cur;
            cur = layer.iter().find(|&&(j, _)| j == cur).map(|&(_, p)| p)?;
        }
    }

    // Backward, mirrored: from i down to layer 1 keeping the largest value.
    let mut frontier = vec![i];
    let mut parents: Vec<Vec<(usize, usize)>> = Vec::new();
    for k in (1..l).rev() {
        let mut reached = Vec::new();
        let mut best: Option<usize> = None;
        let mut fi = frontier.len();
        for &j in partition.layer(k).iter().rev() {
            while fi > 0 && frontier[fi - 1] > j {
                let p = frontier[fi - 1];
                if best.is_none_or(|b| sigma.at(p) > sigma.at(b)) {
                    best = Some(p);
                }
                fi -= 1;
            }
            if let Some(p) = best {
                if sigma.at(p) > sigma.at(j) {
                    reached.push((j, p));
                }
            }
        }
        if reached.is_empty() {
            return None;
        }
        reached.reverse();
        frontier = reached.iter().map(|&(j, _)| j).collect();
        parents.push(reached);
    }
    if let Some(last) = parents.last() {
        let mut cur = last[0].0;
        for (offset, layer) in parents.iter().enumerate().rev() {
            let k = l - 1 - offset;
            seq[k - 1] = cur;
            cur = layer.iter().find(|&&(j, _)| j == cur).map(|&(_, p)| p)?;
        }
    }
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, lis};

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn brute_witness(sigma: &Permutation, part: &LayerPartition, l: usize, i: usize) -> bool {
        fn go(sigma: &Permutation, part: &LayerPartition, seq: &mut Vec<usize>, l: usize, i: usize) -> bool {
            let k = seq.len() + 1;
            if k > part.d() {
                return true;
            }
            let cands: Vec<usize> = if k == l { vec![i] } else { part.layer(k).to_vec() };
            for j in cands {
                if let Some(&prev) = seq.last() {
                    if !(prev < j && sigma.at(prev) < sigma.at(j)) {
                        continue;
                    }
                }
                seq.push(j);
                if go(sigma, part, seq, l, i) {
                    return true;
                }
                seq.pop();
            }
            false
        }
        go(sigma, part, &mut Vec::new(), l, i)
    }

    #[test]
    fn small_examples() {
        let part = layer_partition(&p("321"));
        assert_eq!(part.layers(), &[vec![1, 2, 3]]);
        let part = layer_partition(&p("2413"));
        assert_eq!(part.layers(), &[vec![1, 3], vec![2, 4]]);
        assert_eq!(part.predecessor(1, 2), 1);
        assert_eq!(part.predecessor(2, 1), 0);
        assert_eq!(part.predecessor(3, 4), 0);
    }

    #[test]
    fn layers_match_definition_and_lis() {
        for n in 0..=8 {
            for sigma in all_permutations(n).unwrap() {
                let part = layer_partition(&sigma);
                assert_eq!(part.d(), lis(&sigma));
                let mut remaining: Vec<usize> = (1..=n).collect();
                for layer in part.layers() {
                    let mut minima = Vec::new();
                    let mut cur = u32::MAX;
                    for &i in &remaining {
                        if sigma.at(i) < cur {
                            cur = sigma.at(i);
                            minima.push(i);
                        }
                    }
                    assert_eq!(&minima, layer, "{sigma}");
                    remaining.retain(|i| !minima.contains(i));
                    assert!(layer.windows(2).all(|w| sigma.at(w[0]) > sigma.at(w[1])));
                }
                assert!(remaining.is_empty());
            }
        }
    }

    #[test]
    fn partial_chains_exist() {
        for n in 1..=8 {
            for sigma in all_permutations(n).unwrap() {
                let part = layer_partition(&sigma);
                for i in 1..=n {
                    let l = part.layer_of(i);
                    let mut cur = i;
                    for k in (1..l).rev() {
                        let v = sigma.at(cur);
                        cur = *part
                            .layer(k)
                            .iter()
                            .rev()
                            .find(|&&j| j < cur && sigma.at(j) < v)
                            .expect("chain to layer 1");
                    }
                }
            }
        }
    }

    #[test]
    fn witness_is_exact() {
        for n in 1..=7 {
            for sigma in all_permutations(n).unwrap() {
                let part = layer_partition(&sigma);
                for i in 1..=n {
                    let l = part.layer_of(i);
                    let w = sequence_witness(&sigma, &part, l, i);
                    assert_eq!(w.is_some(), brute_witness(&sigma, &part, l, i), "{sigma} {i}");
                    if let Some(w) = w {
                        assert_eq!(w.len(), part.d());
                        assert_eq!(w[l - 1], i);
                        for (k, pair) in w.windows(2).enumerate() {
                            assert!(pair[0] < pair[1] && sigma.at(pair[0]) < sigma.at(pair[1]));
                            assert_eq!(part.layer_of(pair[0]), k + 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let sigma = p("2413");
        let part = layer_partition(&sigma);
        assert_eq!(sequence_witness(&sigma, &part, 1, 1), Some(vec![1, 2]));
        assert_eq!(sequence_witness(&sigma, &part, 2, 1), None);
        let j = Permutation::decreasing(6);
        let part = layer_partition(&j);
        assert_eq!(sequence_witness(&j, &part, 1, 4), Some(vec![4]));
    }

    #[test]
    fn path_examples() {
        let fam = paths(&Permutation::decreasing(9), 1).unwrap();
        assert!(fam.path(1).iter().all(|&(_, y)| y == 0.0));
        let fam = paths(&p("2413"), 2).unwrap();
        let ys = |l: usize| fam.path(l).iter().map(|&(_, y)| y).collect::<Vec<_>>();
        assert_eq!(ys(1), vec![0.0, -0.5, -0.25, 0.0]);
        assert_eq!(ys(2), vec![0.0, 0.25, 0.5, 0.0]);
        assert_eq!(fam.path(2)[1].0, 0.4);
        assert!((fam.eval(2, 0.6) - 0.375).abs() < 1e-12);
        assert_eq!(paths(&p("2413"), 1), Err(Error::LayerOverflow { layers: 2, d: 1 }));
        let fam = paths(&p("2413"), 3).unwrap();
        assert_eq!(fam.path(3), &[(0.0, 0.0), (1.0, 0.0)]);
        for path in fam.paths() {
            assert!(path.windows(2).all(|w| w[0].0 < w[1].0));
            assert_eq!(path.last(), Some(&(1.0, 0.0)));
        }
    }
}
