use super::{lds, lis, Permutation};
use crate::error::{Error, Result};

/// Whether `sigma` contains an occurrence of `pi`.
pub fn contains(sigma: &Permutation, pi: &Permutation) -> bool {
    occurs_in(sigma.values(), pi.values())
}

/// Whether `sigma` avoids every pattern in `patterns`.
pub fn avoids(sigma: &Permutation, patterns: &PatternSet) -> bool {
    patterns.iter().all(|pi| !contains(sigma, pi))
}

/// All-subsequences reference implementation. Exponential; tests only.
pub fn contains_naive(sigma: &Permutation, pi: &Permutation) -> bool {
    let (n, m) = (sigma.len(), pi.len());
    if m > n {
        return false;
    }
    if m == 0 {
        return true;
    }
    let mut idx: Vec<usize> = (0..m).collect();
    loop {
        let sub: Vec<u32> = idx.iter().map(|&i| sigma.values()[i]).collect();
        if Permutation::standardize(&sub) == *pi {
            return true;
        }
        // next combination
        let mut t = m;
        loop {
            if t == 0 {
                return false;
            }
            t -= 1;
            if idx[t] < n - m + t {
                break;
            }
        }
        idx[t] += 1;
        for s in t + 1..m {
            idx[s] = idx[s - 1] + 1;
        }
    }
}

/// Containment of `pat` (a permutation's values) in a sequence of distinct
/// values, picking the fastest applicable strategy.
pub(crate) fn occurs_in(seq: &[u32], pat: &[u32]) -> bool {
    let (n, m) = (seq.len(), pat.len());
    if m == 0 {
        return true;
    }
    if m > n {
        return false;
    }
    if m == 1 {
        return true;
    }
    if pat.windows(2).all(|w| w[0] < w[1]) {
        return lis(&Permutation::standardize(seq)) >= m;
    }
    if pat.windows(2).all(|w| w[0] > w[1]) {
        return lds(&Permutation::standardize(seq)) >= m;
    }
    if n > 12 {
        if let Some(sum) = MonotoneSum::decompose(pat) {
            return sum.occurs_in(seq);
        }
    }
    occurs_in_dfs(seq, pat, false)
}

/// Depth-first embedding search. Pattern position `t` is matched to a text
/// index whose value lies strictly between the values already matched to the
/// nearest smaller and nearest larger pattern entries placed before `t`.
///
/// With `last_fixed`, the final pattern entry must land on the last text index.
pub(crate) fn occurs_in_dfs(seq: &[u32], pat: &[u32], last_fixed: bool) -> bool {
    let (n, m) = (seq.len(), pat.len());
    if m == 0 {
        return !last_fixed || n == 0;
    }
    if m > n {
        return false;
    }
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
    let mut chosen = vec![0u32; m];
    dfs(seq, m, &below, &above, &mut chosen, 0, 0, last_fixed)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    seq: &[u32],
    m: usize,
    below: &[usize],
    above: &[usize],
    chosen: &mut [u32],
    t: usize,
    start: usize,
    last_fixed: bool,
) -> bool {
    if t == m {
        return true;
    }
    let n = seq.len();
    let lo = if below[t] == usize::MAX { 0 } else { chosen[below[t]] };
    let hi = if above[t] == usize::MAX { u32::MAX } else { chosen[above[t]] };
    let (first, last) = if last_fixed && t == m - 1 { (n - 1, n - 1) } else { (start, n + t - m) };
    if first > last || first >= n {
        return false;
    }
    for i in first..=last {
        let v = seq[i];
        if v > lo && v < hi {
            chosen[t] = v;
            if dfs(seq, m, below, above, chosen, t + 1, i + 1, last_fixed) {
                return true;
            }
        }
    }
    false
}

/// A pattern written as a direct sum of decreasing blocks
/// (`J_b1 ⊕ J_b2 ⊕ ...`); every `I_k`, `J_k` and mixture of them has this form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MonotoneSum {
    blocks: Vec<usize>,
}

impl MonotoneSum {
    pub(crate) fn decompose(pat: &[u32]) -> Option<Self> {
        let mut blocks = Vec::new();
        let mut start = 0usize;
        let mut max_seen = 0u32;
        for (i, &v) in pat.iter().enumerate() {
            max_seen = max_seen.max(v);
            if max_seen as usize == i + 1 {
                // pat[start..=i] is a ⊕-component; it must be decreasing
                let block = &pat[start..=i];
                if !block.windows(2).all(|w| w[0] > w[1]) {
                    return None;
                }
                blocks.push(block.len());
                start = i + 1;
            }
        }
        Some(Self { blocks })
    }

    /// Block-by-block dynamic programme over the staircase of minimal
    /// corners `(x, y)` such that the blocks matched so far fit in
    /// positions `<= x` and values `<= y`.
    pub(crate) fn occurs_in(&self, seq: &[u32]) -> bool {
        let text = Permutation::standardize(seq);
        let vals = text.values();
        let n = vals.len();
        let mut corners: Vec<(usize, u32)> = vec![(0, 0)];
        for &b in &self.blocks {
            let mut candidates: Vec<(usize, u32)> = Vec::new();
            let mut tops: Vec<SuffixMin> = (0..b).map(|_| SuffixMin::new(n)).collect();
            let mut top = vec![u32::MAX; b];
            for &(x0, y0) in &corners {
                for t in tops.iter_mut() {
                    t.reset();
                }
                for (p, &v) in vals.iter().enumerate().skip(x0) {
                    if v <= y0 {
                        continue;
                    }
                    // top[j] = least possible first value of a decreasing
                    // chain of length j + 1 ending here
                    top[0] = v;
                    for j in 1..b {
                        top[j] = tops[j - 1].query_above(v);
                    }
                    for j in 0..b {
                        if top[j] != u32::MAX {
                            tops[j].update(v, top[j]);
                        }
                    }
                    if top[b - 1] != u32::MAX {
                        candidates.push((p + 1, top[b - 1]));
                    }
                }
            }
            if candidates.is_empty() {
                return false;
            }
            candidates.sort_unstable();
            corners.clear();
            let mut best = u32::MAX;
            for (x, y) in candidates {
                if y < best {
                    corners.push((x, y));
                    best = y;
                }
            }
        }
        true
    }
}

/// Fenwick tree answering "minimum stored key among values > v".
struct SuffixMin {
    tree: Vec<u32>,
    touched: Vec<usize>,
}

impl SuffixMin {
    fn new(n: usize) -> Self {
        Self { tree: vec![u32::MAX; n + 1], touched: Vec::new() }
    }

    fn reset(&mut self) {
        for &i in &self.touched {
            self.tree[i] = u32::MAX;
        }
        self.touched.clear();
    }

    // Values are 1..=n; index reversed so that a prefix query covers (v, n].
    fn update(&mut self, value: u32, key: u32) {
        let n = self.tree.len() - 1;
        let mut i = n + 1 - value as usize;
        while i <= n {
            if key < self.tree[i] {
                self.tree[i] = key;
                self.touched.push(i);
            }
            i += i & i.wrapping_neg();
        }
    }

    fn query_above(&self, value: u32) -> u32 {
        let n = self.tree.len() - 1;
        let mut i = n - value as usize;
        let mut best = u32::MAX;
        while i > 0 {
            best = best.min(self.tree[i]);
            i -= i & i.wrapping_neg();
        }
        best
    }
}

/// A nonempty set of patterns with no member contained in another.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternSet {
    patterns: Vec<Permutation>,
}

impl PatternSet {
    /// Builds the set, dropping duplicates and any pattern that contains
    /// another member (the avoidance class is unchanged).
    pub fn new(patterns: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut all: Vec<Permutation> = patterns.into_iter().collect();
        if all.is_empty() {
            return Err(Error::InvalidPermutation("pattern set is empty".into()));
        }
        if all.iter().any(Permutation::is_empty) {
            return Err(Error::InvalidPermutation("empty pattern".into()));
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Permutation> = Vec::with_capacity(all.len());
        for pi in all {
            if !kept.iter().any(|q| contains(&pi, q)) {
                kept.push(pi);
            }
        }
        Ok(Self { patterns: kept })
    }

    pub fn single(pattern: Permutation) -> Result<Self> {
        Self::new([pattern])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.patterns.iter()
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert!(contains(&p("2413"), &p("231")));
        assert!(contains_naive(&p("2413"), &p("231")));
        assert!(!contains(&p("321"), &p("12")));
        assert!(contains(&p("35142"), &p("35142")));
        assert!(!contains(&p("12"), &p("123")));
        assert!(avoids(&p("321"), &PatternSet::single(p("123")).unwrap()));
        assert!(!avoids(&p("2413"), &PatternSet::single(p("231")).unwrap()));
        assert!(avoids(&Permutation::empty(), &PatternSet::single(p("1")).unwrap()));
    }

    #[test]
    fn witness_for_231_in_2413() {
        // values 2,4,1 at indices 1,2,3
        let s = p("2413");
        let sub = [s.at(1), s.at(2), s.at(3)];
        assert_eq!(Permutation::standardize(&sub), p("231"));
    }

    #[test]
    fn dfs_agrees_with_naive_exhaustively() {
        let mut patterns = Vec::new();
        for m in 1..=4 {
            patterns.extend(all_permutations(m).unwrap());
        }
        for n in 0..=7 {
            for sigma in all_permutations(n).unwrap() {
                for pi in &patterns {
                    assert_eq!(
                        occurs_in_dfs(sigma.values(), pi.values(), false),
                        contains_naive(&sigma, pi),
                        "{sigma} vs {pi}"
                    );
                }
            }
        }
    }

    #[test]
    fn last_fixed_search_matches_definition() {
        let patterns: Vec<Permutation> = (1..=3).flat_map(|m| all_permutations(m).unwrap()).collect();
        for n in 1..=6 {
            for sigma in all_permutations(n).unwrap() {
                for pi in &patterns {
                    let m = pi.len();
                    if m > n {
                        continue;
                    }
                    let last = sigma.at(n);
                    let prefix = &sigma.values()[..n - 1];
                    // oracle: some (m-1)-subset of the prefix plus the last entry
                    let expected =
                        (0u32..1 << (n - 1)).filter(|mask| mask.count_ones() as usize == m - 1).any(|mask| {
                            let mut sub: Vec<u32> =
                                (0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| prefix[i]).collect();
                            sub.push(last);
                            Permutation::standardize(&sub) == *pi
                        });
                    assert_eq!(occurs_in_dfs(sigma.values(), pi.values(), true), expected, "{sigma} {pi}");
                }
            }
        }
    }

    #[test]
    fn monotone_sum_decomposition() {
        assert_eq!(MonotoneSum::decompose(&[2, 1, 3, 5, 4]).unwrap().blocks, vec![2, 1, 2]);
        assert_eq!(MonotoneSum::decompose(&[1, 2, 3]).unwrap().blocks, vec![1, 1, 1]);
        assert_eq!(MonotoneSum::decompose(&[3, 2, 1]).unwrap().blocks, vec![3]);
        assert!(MonotoneSum::decompose(&[2, 3, 1]).is_none());
        assert!(MonotoneSum::decompose(&[1, 3, 4, 2]).is_none());
    }

    #[test]
    fn monotone_sum_agrees_with_dfs() {
        let pats: Vec<Permutation> = (1..=5)
            .flat_map(|m| all_permutations(m).unwrap())
            .filter(|q| MonotoneSum::decompose(q.values()).is_some())
            .collect();
        for n in 0..=7 {
            for sigma in all_permutations(n).unwrap() {
                for pi in &pats {
                    let sum = MonotoneSum::decompose(pi.values()).unwrap();
                    assert_eq!(
                        sum.occurs_in(sigma.values()),
                        occurs_in_dfs(sigma.values(), pi.values(), false),
                        "{sigma} vs {pi}"
                    );
                }
            }
        }
    }

    #[test]
    fn pattern_set_normalizes() {
        let set = PatternSet::new([p("1234"), p("123"), p("321"), p("123")]).unwrap();
        assert_eq!(set.patterns(), &[p("123"), p("321")]);
        assert!(PatternSet::new(Vec::new()).is_err());
        assert!(PatternSet::new([Permutation::empty()]).is_err());
    }
}
