//! Exhaustive, lexicographically ordered enumeration.

use super::{occurs_in_dfs, PatternSet, Permutation};
use crate::error::{Error, Result};

/// Default cap on `n` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_BOUND: usize = 10;

// the used-value bitmask is a u64
const HARD_LIMIT: usize = 63;

/// `Av_n(patterns)` in lexicographic order, capped at [`DEFAULT_EXHAUSTIVE_BOUND`].
pub fn enumerate_avoiders(n: usize, patterns: &PatternSet) -> Result<Avoiders> {
    enumerate_avoiders_bounded(n, patterns, DEFAULT_EXHAUSTIVE_BOUND)
}

pub fn enumerate_avoiders_bounded(n: usize, patterns: &PatternSet, bound: usize) -> Result<Avoiders> {
    check_bound(n, bound)?;
    Ok(Avoiders::new(n, patterns.patterns().to_vec()))
}

/// All of `S_n` in lexicographic order.
pub fn all_permutations(n: usize) -> Result<AllPermutations> {
    check_bound(n, DEFAULT_EXHAUSTIVE_BOUND)?;
    Ok(AllPermutations(Avoiders::new(n, Vec::new())))
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    let bound = bound.min(HARD_LIMIT);
    if n > bound {
        return Err(Error::BoundExceeded { what: "n", value: n, bound });
    }
    Ok(())
}

/// Prefix-pruned depth-first enumeration: a prefix is extended only if no
/// pattern occurrence ends at its last entry, so no prefix containing a
/// pattern is ever extended.
#[derive(Debug, Clone)]
pub struct Avoiders {
    n: usize,
    patterns: Vec<Permutation>,
    prefix: Vec<u32>,
    used: u64,
    // next value to try at each depth
    next: Vec<u32>,
    done: bool,
}

impl Avoiders {
    fn new(n: usize, patterns: Vec<Permutation>) -> Self {
        Self { n, patterns, prefix: Vec::with_capacity(n), used: 0, next: vec![1; n + 1], done: false }
    }

    fn prefix_ok(&self) -> bool {
        self.patterns.iter().all(|pi| !occurs_in_dfs(&self.prefix, pi.values(), true))
    }
}

impl Iterator for Avoiders {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            return Some(Permutation::empty());
        }
        loop {
            let depth = self.prefix.len();
            if depth == self.n {
                let out = Permutation::from_vec_unchecked(self.prefix.clone());
                let v = self.prefix.pop().unwrap();
                self.used &= !(1 << v);
                return Some(out);
            }
            let mut v = self.next[depth];
            while v as usize <= self.n && self.used >> v & 1 == 1 {
                v += 1;
            }
            if v as usize > self.n {
                // exhausted this depth: backtrack
                self.next[depth] = 1;
                match self.prefix.pop() {
                    Some(last) => self.used &= !(1 << last),
                    None => {
                        self.done = true;
                        return None;
                    }
                }
                continue;
            }
            self.next[depth] = v + 1;
            self.prefix.push(v);
            if self.prefix_ok() {
                self.used |= 1 << v;
            } else {
                self.prefix.pop();
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct AllPermutations(Avoiders);

impl Iterator for AllPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        self.0.next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{avoids, contains_naive};

    fn set(s: &str) -> PatternSet {
        PatternSet::single(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_avoiders(5, &set("321")).unwrap().count(), 42);
        assert_eq!(enumerate_avoiders(0, &set("21")).unwrap().count(), 1);
        assert_eq!(all_permutations(5).unwrap().count(), 120);
        assert_eq!(all_permutations(0).unwrap().count(), 1);
        assert_eq!(
            enumerate_avoiders(8, &set("1234")).unwrap().count(),
            enumerate_avoiders(8, &set("2134")).unwrap().count()
        );
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(enumerate_avoiders(11, &set("12")), Err(Error::BoundExceeded { value: 11, bound: 10, .. })));
        assert!(enumerate_avoiders_bounded(11, &set("12"), 12).is_ok());
        assert!(all_permutations(11).is_err());
    }

    #[test]
    fn lexicographic_and_exact() {
        for n in 0..=6 {
            let all: Vec<Permutation> = all_permutations(n).unwrap().collect();
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            for pat in ["123", "2413", "21", "1"] {
                let s = set(pat);
                let got: Vec<Permutation> = enumerate_avoiders(n, &s).unwrap().collect();
                let want: Vec<Permutation> =
                    all.iter().filter(|x| !contains_naive(x, &pat.parse().unwrap())).cloned().collect();
                assert_eq!(got, want, "n={n} pattern={pat}");
                assert!(got.iter().all(|x| avoids(x, &s)));
            }
        }
    }

    #[test]
    fn multiple_patterns() {
        let s = PatternSet::new(["123".parse().unwrap(), "321".parse().unwrap()]).unwrap();
        // Erdos-Szekeres: nothing of length >= 5 avoids both
        assert_eq!(enumerate_avoiders(5, &s).unwrap().count(), 0);
        assert_eq!(enumerate_avoiders(4, &s).unwrap().count(), 4);
    }
}
