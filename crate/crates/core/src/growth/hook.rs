use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::{Partition, StandardTableau};

/// Number of standard tableaux of shape `lambda`, by the hook length formula.
pub fn hook_count(lambda: &Partition) -> BigUint {
    let conj = lambda.conjugate();
    let mut num = BigUint::one();
    for k in 2..=lambda.size() as u64 {
        num *= k;
    }
    let mut den = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row as usize {
            let arm = row as u64 - j as u64 - 1;
            let leg = conj.parts()[j] as u64 - i as u64 - 1;
            den *= arm + leg + 1;
        }
    }
    num / den
}

/// Uniform standard tableau of shape `lambda` via the hook walk: a uniform
/// start cell, then repeated jumps to a uniform cell of the current hook
/// until a corner is hit, which receives the largest remaining entry.
pub fn hook_walk_sample<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> StandardTableau {
    let mut rows: Vec<usize> = lambda.parts().iter().map(|&p| p as usize).collect();
    let mut cols: Vec<usize> = lambda.conjugate().parts().iter().map(|&p| p as usize).collect();
    let mut out: Vec<Vec<u32>> = rows.iter().map(|&r| vec![0; r]).collect();
    let mut remaining = lambda.size();
    while remaining > 0 {
        let (mut i, mut j) = uniform_cell(&rows, &cols, remaining, rng);
        loop {
            let arm = rows[i] - j - 1;
            let leg = cols[j] - i - 1;
            if arm + leg == 0 {
                break;
            }
            let step = rng.random_range(0..arm + leg);
            if step < arm {
                j += step + 1;
            } else {
                i += step - arm + 1;
            }
        }
        out[i][j] = remaining as u32;
        rows[i] -= 1;
        cols[j] -= 1;
        if rows[i] == 0 {
            rows.pop();
        }
        if cols[j] == 0 {
            cols.pop();
        }
        remaining -= 1;
    }
    StandardTableau::from_rows_unchecked(out)
}

fn uniform_cell<R: Rng + ?Sized>(rows: &[usize], cols: &[usize], total: usize, rng: &mut R) -> (usize, usize) {
    let mut r = rng.random_range(0..total);
    if rows.len() <= cols.len() {
        for (i, &len) in rows.iter().enumerate() {
            if r < len {
                return (i, r);
            }
            r -= len;
        }
    } else {
        for (j, &len) in cols.iter().enumerate() {
            if r < len {
                return (r, j);
            }
            r -= len;
        }
    }
    unreachable!("cell index below the box count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashMap;

    fn count_brute(lambda: &Partition) -> u64 {
        // remove a corner holding the largest entry, recursively
        if lambda.is_empty() {
            return 1;
        }
        (1..=lambda.len())
            .filter_map(|row| {
                let mut smaller = lambda.clone();
                smaller.remove_box(row).ok().map(|()| count_brute(&smaller))
            })
            .sum()
    }

    #[test]
    fn small_counts() {
        assert_eq!(hook_count(&"1".parse().unwrap()), BigUint::one());
        assert_eq!(hook_count(&"2,1".parse().unwrap()), BigUint::from(2u32));
        assert_eq!(hook_count(&Partition::empty()), BigUint::one());
        for n in 0..=9 {
            for p in Partition::all(n) {
                assert_eq!(hook_count(&p).to_u64().unwrap(), count_brute(&p), "{p}");
            }
        }
    }

    #[test]
    fn squares_sum_to_factorial() {
        let mut fact = BigUint::one();
        for n in 1..=8u32 {
            fact *= n;
            let total: BigUint = Partition::all(n as usize).iter().map(|p| hook_count(p).pow(2)).sum();
            assert_eq!(total, fact);
        }
    }

    #[test]
    fn large_shape_exceeds_u64() {
        let p = Partition::new(vec![10, 9, 8, 7, 6, 5, 4, 3, 2, 1]).unwrap();
        assert!(hook_count(&p).to_u64().is_none());
    }

    #[test]
    fn walk_keeps_shape_and_validity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in Partition::all(7).into_iter().chain([Partition::new(vec![3; 40]).unwrap()]) {
            for _ in 0..20 {
                let t = hook_walk_sample(&p, &mut rng);
                assert_eq!(t.shape(), p);
                assert!(StandardTableau::new(t.rows().to_vec()).is_ok());
            }
        }
        let one = hook_walk_sample(&"1".parse().unwrap(), &mut rng);
        assert_eq!(one.rows(), &[vec![1]]);
    }

    #[test]
    fn walk_is_uniform_on_two_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let p: Partition = "2,1".parse().unwrap();
        let mut freq: HashMap<Vec<Vec<u32>>, u32> = HashMap::new();
        for _ in 0..10_000 {
            *freq.entry(hook_walk_sample(&p, &mut rng).rows().to_vec()).or_default() += 1;
        }
        assert_eq!(freq.len(), 2);
        for &c in freq.values() {
            assert!((c as f64 / 1e4 - 0.5).abs() < 0.02, "{freq:?}");
        }
    }

    #[test]
    fn walk_is_uniform_on_a_larger_shape() {
        let p: Partition = "3,2,1".parse().unwrap();
        let f = hook_count(&p).to_u64().unwrap() as f64;
        let draws = 32_000;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut freq: HashMap<Vec<Vec<u32>>, u32> = HashMap::new();
        for _ in 0..draws {
            *freq.entry(hook_walk_sample(&p, &mut rng).rows().to_vec()).or_default() += 1;
        }
        assert_eq!(freq.len() as f64, f);
        let expected = draws as f64 / f;
        let chi2: f64 = freq.values().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        use statrs::distribution::{ChiSquared, ContinuousCDF};
        let crit = ChiSquared::new(f - 1.0).unwrap().inverse_cdf(1.0 - 1e-3);
        assert!(chi2 < crit, "chi2 {chi2} >= {crit}");
    }
}
