use super::StandardTableau;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Row insertion. Returns the insertion tableau `P` and recording tableau `Q`.
pub fn rsk(sigma: &Permutation) -> (StandardTableau, StandardTableau) {
    let mut p: Vec<Vec<u32>> = Vec::new();
    let mut q: Vec<Vec<u32>> = Vec::new();
    for (i, &v) in sigma.values().iter().enumerate() {
        let mut x = v;
        let mut row = 0;
        loop {
            if row == p.len() {
                p.push(vec![x]);
                q.push(vec![i as u32 + 1]);
                break;
            }
            let r = &mut p[row];
            let pos = r.partition_point(|&y| y < x);
            if pos == r.len() {
                r.push(x);
                q[row].push(i as u32 + 1);
                break;
            }
            x = std::mem::replace(&mut r[pos], x);
            row += 1;
        }
    }
    (StandardTableau::from_rows_unchecked(p), StandardTableau::from_rows_unchecked(q))
}

/// Inverse of [`rsk`]. `p` must be filled by `1..=n` (as any standard
/// tableau is) and share its shape with `q`.
pub fn inverse_rsk(p: &StandardTableau, q: &StandardTableau) -> Result<Permutation> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch(format!("P has shape {}, Q has shape {}", p.shape(), q.shape())));
    }
    let n = q.size();
    // row of each recording entry
    let mut where_q = vec![0usize; n + 1];
    for (i, row) in q.rows().iter().enumerate() {
        for &v in row {
            where_q[v as usize] = i;
        }
    }
    let mut p: Vec<Vec<u32>> = p.rows().to_vec();
    let mut out = vec![0u32; n];
    for k in (1..=n).rev() {
        let mut row = where_q[k];
        // the largest recording entry always sits at the end of its row
        let mut x = p[row].pop().expect("shapes agree");
        while row > 0 {
            row -= 1;
            let r = &mut p[row];
            let pos = r.partition_point(|&y| y < x) - 1;
            x = std::mem::replace(&mut r[pos], x);
        }
        out[k - 1] = x;
    }
    Ok(Permutation::from_vec_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{all_permutations, lds, lis};

    #[test]
    fn small_example() {
        let (p, q) = rsk(&"231".parse().unwrap());
        assert_eq!(p.rows(), &[vec![1, 3], vec![2]]);
        assert_eq!(q.rows(), &[vec![1, 2], vec![3]]);
        let (p, q) = rsk(&Permutation::increasing(5));
        assert_eq!(p.rows(), &[vec![1, 2, 3, 4, 5]]);
        assert_eq!(p, q);
    }

    #[test]
    fn round_trip_and_schensted() {
        for n in 0..=7 {
            for sigma in all_permutations(n).unwrap() {
                let (p, q) = rsk(&sigma);
                assert_eq!(inverse_rsk(&p, &q).unwrap(), sigma);
                assert_eq!(p.shape().first() as usize, lis(&sigma));
                assert_eq!(p.shape().len(), lds(&sigma));
                // symmetry: rsk(inverse) swaps the tableaux
                let (pi, qi) = rsk(&sigma.inverse());
                assert_eq!((pi, qi), (q, p));
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        let a = StandardTableau::new(vec![vec![1, 2]]).unwrap();
        let b = StandardTableau::new(vec![vec![1], vec![2]]).unwrap();
        assert!(matches!(inverse_rsk(&a, &b), Err(Error::ShapeMismatch(_))));
    }
}
