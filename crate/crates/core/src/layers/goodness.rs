use std::fmt;

use super::layer_partition;
use crate::error::{Error, Result};
use crate::perm::{lis, Permutation};

/// First failing instance of a goodness condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `|sigma(i) + i - n - 1| >= n^0.6`
    Deviation { i: usize, deviation: i64 },
    /// Layer `l` has `count` points in `[i, j]`, too far from `(j - i) / d`.
    Density { l: usize, i: usize, j: usize, count: usize },
    /// `|sigma(i) + i - sigma(j) - j| >= (j - i)^0.6` for `i, j` in layer `l`.
    Slope { l: usize, i: usize, j: usize },
    /// `i - j^l(i) >= n^0.2`.
    Gap { l: usize, i: usize, predecessor: usize },
    /// `sigma(j^{l+1}(i)) - sigma(i) <= n^0.4`; `predecessor = 0` means
    /// layer `l + 1` has no index below `i`.
    Separation { l: usize, i: usize, predecessor: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Deviation { i, deviation } => write!(f, "i={i} deviation={deviation}"),
            Violation::Density { l, i, j, count } => write!(f, "l={l} [{i},{j}] count={count}"),
            Violation::Slope { l, i, j } => write!(f, "l={l} i={i} j={j}"),
            Violation::Gap { l, i, predecessor } => write!(f, "l={l} i={i} j={predecessor}"),
            Violation::Separation { l, i, predecessor } => {
                write!(f, "l={l} i={i} j={predecessor}")
            }
        }
    }
}

/// Outcome of the five goodness conditions for one permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessReport {
    pub n: usize,
    pub d: usize,
    pub epsilon: f64,
    pub flags: [bool; 5],
    pub witnesses: [Option<Violation>; 5],
}

impl GoodnessReport {
    pub fn all_good(&self) -> bool {
        self.flags.iter().all(|&f| f)
    }

    /// Condition `c` in `1..=5`.
    pub fn condition(&self, c: usize) -> bool {
        self.flags[c - 1]
    }
}

/// Integer indices `i` with `eps * n <= i <= (1 - eps) * n`.
pub(crate) fn window(n: usize, epsilon: f64) -> std::ops::RangeInclusive<usize> {
    let nf = n as f64;
    let lo = ((epsilon * nf).ceil() as usize).max(1);
    let hi = ((1.0 - epsilon) * nf).floor() as usize;
    lo..=hi.min(n)
}

/// Evaluates the goodness conditions for `sigma` in `Av(I_{d+1})`.
///
/// The exponents are used exactly as stated, with no slack, so small `n`
/// routinely fails conditions that hold asymptotically.
pub fn goodness(sigma: &Permutation, epsilon: f64, d: usize) -> Result<GoodnessReport> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::PreconditionViolated(format!("epsilon = {epsilon} must lie in (0, 0.5)")));
    }
    if d == 0 {
        return Err(Error::PreconditionViolated("d must be positive".into()));
    }
    let layers = lis(sigma);
    if layers > d {
        return Err(Error::PreconditionViolated(format!(
            "permutation contains I_{} (lis = {layers}), so it is not in Av(I_{})",
            d + 1,
            d + 1
        )));
    }
    let n = sigma.len();
    let nf = n as f64;
    let part = layer_partition(sigma);
    let win = window(n, epsilon);
    let pred = part.predecessor_table(d);
    let s = |i: usize| sigma.at(i) as i64;
    let gap_min = nf.powf(0.1);
    let mut witnesses: [Option<Violation>; 5] = Default::default();

    let bound1 = nf.powf(0.6);
    witnesses[0] = (1..=n).find_map(|i| {
        let deviation = s(i) + i as i64 - n as i64 - 1;
        ((deviation.abs() as f64) >= bound1).then_some(Violation::Deviation { i, deviation })
    });

    // prefix[l][x] = |A^l ∩ [1, x]|
    let mut prefix = vec![vec![0usize; n + 1]; d];
    for x in 1..=n {
        for (l, row) in prefix.iter_mut().enumerate() {
            row[x] = row[x - 1] + usize::from(part.layer_of(x) == l + 1);
        }
    }
    'density: for i in win.clone() {
        for j in i + 1..=*win.end() {
            let len = (j - i) as f64;
            if len <= gap_min {
                continue;
            }
            let bound = len.powf(0.6);
            for (l, row) in prefix.iter().enumerate() {
                let count = row[j] - row[i - 1];
                if (count as f64 - len / d as f64).abs() >= bound {
                    witnesses[1] = Some(Violation::Density { l: l + 1, i, j, count });
                    break 'density;
                }
            }
        }
    }

    'slope: for l in 1..=d {
        let members: Vec<usize> = part.layer(l).iter().copied().filter(|i| win.contains(i)).collect();
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                let len = (j - i) as f64;
                if len <= gap_min {
                    continue;
                }
                let diff = (s(i) + i as i64 - s(j) - j as i64).abs() as f64;
                if diff >= len.powf(0.6) {
                    witnesses[2] = Some(Violation::Slope { l, i, j });
                    break 'slope;
                }
            }
        }
    }

    let bound4 = nf.powf(0.2);
    'gap: for i in win.clone() {
        for l in 1..=d {
            let p = pred[l - 1][i];
            if (i - p) as f64 >= bound4 {
                witnesses[3] = Some(Violation::Gap { l, i, predecessor: p });
                break 'gap;
            }
        }
    }

    let bound5 = nf.powf(0.4);
    'sep: for i in win.clone() {
        let l = part.layer_of(i);
        if l >= d {
            continue;
        }
        let p = pred[l][i];
        if p == 0 || ((s(p) - s(i)) as f64) <= bound5 {
            witnesses[4] = Some(Violation::Separation { l, i, predecessor: p });
            break 'sep;
        }
    }

    let flags = std::array::from_fn(|c| witnesses[c].is_none());
    Ok(GoodnessReport { n, d, epsilon, flags, witnesses })
}
