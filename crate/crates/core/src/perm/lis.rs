//! Longest increasing / decreasing subsequences by patience sorting.

use super::Permutation;

/// Length of the longest increasing subsequence.
pub fn lis(sigma: &Permutation) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &v in sigma.values() {
        let k = tails.partition_point(|&t| t < v);
        if k == tails.len() {
            tails.push(v);
        } else {
            tails[k] = v;
        }
    }
    tails.len()
}

/// Length of the longest decreasing subsequence.
pub fn lds(sigma: &Permutation) -> usize {
    lis(&sigma.complement())
}

/// For each index, the length of the longest increasing subsequence ending
/// there (the patience pile the entry lands on).
pub fn lis_ending_at(sigma: &Permutation) -> Vec<usize> {
    let mut tails: Vec<u32> = Vec::new();
    sigma
        .values()
        .iter()
        .map(|&v| {
            let k = tails.partition_point(|&t| t < v);
            if k == tails.len() {
                tails.push(v);
            } else {
                tails[k] = v;
            }
            k + 1
        })
        .collect()
}

/// For each index, the length of the longest increasing subsequence
/// starting there.
pub fn lis_starting_at(sigma: &Permutation) -> Vec<usize> {
    let mut out = lis_ending_at(&sigma.reverse_complement());
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, contains_naive};

    fn brute_lis(s: &Permutation) -> usize {
        (1..=s.len()).rev().find(|&k| contains_naive(s, &Permutation::increasing(k))).unwrap_or(0)
    }

    #[test]
    fn examples() {
        assert_eq!(lis(&"3142".parse().unwrap()), 2);
        assert_eq!(lis(&Permutation::increasing(9)), 9);
        assert_eq!(lds(&Permutation::decreasing(9)), 9);
        assert_eq!(lis(&Permutation::empty()), 0);
        assert_eq!(lis_ending_at(&"2413".parse().unwrap()), vec![1, 2, 1, 2]);
        assert_eq!(lis_starting_at(&"2413".parse().unwrap()), vec![2, 1, 2, 1]);
    }

    #[test]
    fn agrees_with_brute_force() {
        for n in 0..=7 {
            for s in all_permutations(n).unwrap() {
                assert_eq!(lis(&s), brute_lis(&s));
                assert_eq!(lds(&s), brute_lis(&s.complement()));
                let starts = lis_starting_at(&s);
                for (i, &start) in starts.iter().enumerate() {
                    let suffix = Permutation::standardize(&s.values()[i..]);
                    let from_here = lis_ending_at(&suffix.reverse_complement());
                    assert_eq!(start, *from_here.last().unwrap());
                }
            }
        }
    }
}
