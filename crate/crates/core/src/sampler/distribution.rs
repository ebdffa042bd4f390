//! The law of the RSK shape of a uniform element of `Av_n(I_{d+1})`.
//!
//! Shapes are handled through their conjugates `mu`, which have at most `d`
//! rows. With `l_i = mu_i + d - i`,
//! `f_mu = n! * prod_{i<j} (l_i - l_j) / prod_i l_i!`.
//! The shapes are visited along a tree in which every shape arises from its
//! parent by moving one box into row 1, so each weight `f^2` follows from the
//! parent's by an exact rational factor with small terms.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::growth::Partition;

/// Largest `n` accepted unless a different bound is given.
pub const DEFAULT_N_BOUND: usize = 1000;
/// Largest supported `d`.
pub const MAX_D: usize = 6;
/// Cap on the number of shapes kept in one table.
pub const MAX_SHAPES: usize = 1 << 23;

const CACHE_MAGIC: &str = "permuton-lab shape-distribution v1";

/// Shape weights `f_lambda^2` over partitions of `n` with first part at most
/// `d`, stored as 64-bit fixed-point cumulative boundaries.
#[derive(Debug)]
pub struct ShapeDistribution {
    n: usize,
    d: usize,
    /// Conjugate shapes, each padded to `d` rows.
    conj: Vec<Vec<u32>>,
    /// `floor(2^64 * S_i / T)` with `S_i` the weight of all earlier shapes.
    cuts: Vec<u64>,
    total: OnceLock<BigUint>,
}

impl ShapeDistribution {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Self::with_bound(n, d, DEFAULT_N_BOUND)
    }

    pub fn with_bound(n: usize, d: usize, n_bound: usize) -> Result<Self> {
        check_args(n, d, n_bound)?;
        let mut total = BigUint::zero();
        let mut conj = Vec::new();
        walk(n, d, |mu, g| {
            total += g;
            conj.push(mu.to_vec());
            if conj.len() > MAX_SHAPES {
                return false;
            }
            true
        });
        if conj.len() > MAX_SHAPES {
            return Err(Error::BoundExceeded { what: "shape count", value: conj.len(), bound: MAX_SHAPES });
        }
        let mut cuts = Vec::with_capacity(conj.len());
        let mut prefix = BigUint::zero();
        walk(n, d, |_, g| {
            cuts.push(fixed_point(&prefix, &total));
            prefix += g;
            true
        });
        Ok(Self { n, d, conj, cuts, total: OnceLock::from(total) })
    }

    /// Reads the table from `dir` if a valid file is present, otherwise builds
    /// it and writes it there (write-then-rename).
    pub fn load_or_build(n: usize, d: usize, n_bound: usize, dir: Option<&Path>) -> Result<Self> {
        check_args(n, d, n_bound)?;
        let Some(dir) = dir else {
            return Self::with_bound(n, d, n_bound);
        };
        let path = dir.join(Self::file_name(n, d));
        match std::fs::read_to_string(&path) {
            Ok(text) => return Self::from_cache_text(&text, n, d),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        }
        let dist = Self::with_bound(n, d, n_bound)?;
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        let tmp = dir.join(format!(".{}.{}.tmp", Self::file_name(n, d), std::process::id()));
        std::fs::write(&tmp, dist.to_cache_text()).map_err(io)?;
        std::fs::rename(&tmp, &path).map_err(io)?;
        Ok(dist)
    }

    pub fn file_name(n: usize, d: usize) -> String {
        format!("shapes_n{n}_d{d}.tsv")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.conj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conj.is_empty()
    }

    /// Shape `i` (first part at most `d`).
    pub fn shape(&self, i: usize) -> Partition {
        conj_to_partition(&self.conj[i])
    }

    pub fn shapes(&self) -> impl Iterator<Item = Partition> + '_ {
        self.conj.iter().map(|mu| conj_to_partition(mu))
    }

    /// `f_lambda^2` for shape `i`.
    pub fn weight(&self, i: usize) -> BigUint {
        let f = crate::growth::hook_count(&self.shape(i));
        &f * &f
    }

    /// Sum of all weights, which equals `|Av_n(I_{d+1})|`.
    pub fn total(&self) -> &BigUint {
        self.total.get_or_init(|| {
            let mut t = BigUint::zero();
            walk(self.n, self.d, |_, g| {
                t += g;
                true
            });
            t
        })
    }

    /// Index of a shape drawn with probability `f^2 / total`.
    pub fn sample_index<R: RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let u = rng.next_u64();
        self.index_for(u, rng)
    }

    /// Resolves the uniform real `U` whose first 64 bits are `u`; further bits
    /// come from `rng` only when `u` collides with a stored boundary.
    pub(crate) fn index_for<R: RngCore + ?Sized>(&self, u: u64, rng: &mut R) -> usize {
        let lo = self.cuts.partition_point(|&c| c < u);
        let hi = self.cuts.partition_point(|&c| c <= u);
        if lo == hi {
            return lo - 1;
        }
        // boundaries lo..hi share their top 64 bits with U; compare exactly
        let (prefix, total) = self.exact_prefixes(lo, hi);
        let mut x = BigUint::from(u);
        let mut bits = 64u64;
        let mut below = lo;
        for (i, s) in (lo..hi).zip(prefix) {
            if i == 0 {
                below += 1;
                continue;
            }
            loop {
                let scaled = &s << bits;
                if (&x + 1u32) * &total <= scaled {
                    // U < S_i / T, and the boundaries only grow from here
                    return below - 1;
                }
                if &x * &total >= scaled {
                    below += 1;
                    break;
                }
                x = (x << 64u32) + rng.next_u64();
                bits += 64;
            }
        }
        below - 1
    }

    /// Exact `S_i` for `i` in `lo..hi`, and the total.
    fn exact_prefixes(&self, lo: usize, hi: usize) -> (Vec<BigUint>, BigUint) {
        let mut out = Vec::with_capacity(hi - lo);
        let mut prefix = BigUint::zero();
        let mut i = 0;
        walk(self.n, self.d, |_, g| {
            if (lo..hi).contains(&i) {
                out.push(prefix.clone());
            }
            prefix += g;
            i += 1;
            true
        });
        (out, prefix)
    }

    pub fn to_cache_text(&self) -> String {
        let mut s = format!("{CACHE_MAGIC}\nn={}\nd={}\n", self.n, self.d);
        for (mu, cut) in self.conj.iter().zip(&self.cuts) {
            let parts: Vec<String> = mu.iter().map(u32::to_string).collect();
            let _ = writeln!(s, "{}\t{cut}", parts.join(","));
        }
        s
    }

    /// Parses a cache file and checks it against the expected `(n, d)` and
    /// the canonical shape order.
    pub fn from_cache_text(text: &str, n: usize, d: usize) -> Result<Self> {
        let parsed = parse_shape_cache(text)?;
        if parsed.n != n || parsed.d != d {
            return Err(Error::Cache(format!("cache holds n={} d={}, expected n={n} d={d}", parsed.n, parsed.d)));
        }
        let mut expected = Vec::with_capacity(parsed.conj.len());
        walk_shapes(n, d, |mu| expected.push(mu.to_vec()));
        if expected != parsed.conj {
            return Err(Error::Cache("shape list does not match the canonical order".into()));
        }
        Ok(Self { n, d, conj: parsed.conj, cuts: parsed.cuts, total: OnceLock::new() })
    }
}

/// Raw contents of a shape-distribution cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCacheFile {
    pub n: usize,
    pub d: usize,
    pub conj: Vec<Vec<u32>>,
    pub cuts: Vec<u64>,
}

pub fn parse_shape_cache(text: &str) -> Result<ShapeCacheFile> {
    let bad = |m: &str| Error::Cache(m.to_string());
    let mut lines = text.lines();
    if lines.next() != Some(CACHE_MAGIC) {
        return Err(bad("missing header"));
    }
    let mut field = |key: &str| -> Result<usize> {
        lines
            .next()
            .and_then(|l| l.strip_prefix(key))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Cache(format!("missing {key}")))
    };
    let n = field("n=")?;
    let d = field("d=")?;
    if d == 0 || d > MAX_D {
        return Err(bad("d out of range"));
    }
    let mut conj = Vec::new();
    let mut cuts: Vec<u64> = Vec::new();
    for line in lines.filter(|l| !l.is_empty()) {
        let (parts, cut) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
        let mu = parts
            .split(',')
            .map(|p| p.parse::<u32>().map_err(|e| Error::Cache(format!("{p:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let cut: u64 = cut.parse().map_err(|e| Error::Cache(format!("{cut:?}: {e}")))?;
        let sum: u64 = mu.iter().map(|&p| p as u64).sum();
        if mu.len() != d || sum != n as u64 || mu.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Cache(format!("invalid shape {parts:?}")));
        }
        if cuts.last().is_some_and(|&c| c > cut) || (cuts.is_empty() && cut != 0) {
            return Err(bad("boundaries must start at 0 and never decrease"));
        }
        conj.push(mu);
        cuts.push(cut);
    }
    if conj.is_empty() {
        return Err(bad("no shapes"));
    }
    Ok(ShapeCacheFile { n, d, conj, cuts })
}

fn check_args(n: usize, d: usize, n_bound: usize) -> Result<()> {
    if n > n_bound {
        return Err(Error::BoundExceeded { what: "n", value: n, bound: n_bound });
    }
    if d == 0 || d > MAX_D {
        return Err(Error::BoundExceeded { what: "d", value: d, bound: MAX_D });
    }
    Ok(())
}

fn conj_to_partition(mu: &[u32]) -> Partition {
    let rows: Vec<u32> = mu.iter().copied().filter(|&p| p > 0).collect();
    Partition::from_parts_unchecked(rows).conjugate()
}

fn fixed_point(prefix: &BigUint, total: &BigUint) -> u64 {
    ((prefix << 64u32) / total).to_u64().expect("prefix below total")
}

/// Children of `mu` in the shape tree: move a box from row 1 into row `k`,
/// where `k` is the last nonempty row or the one after it.
fn children(mu: &[u32]) -> impl Iterator<Item = usize> + '_ {
    let d = mu.len();
    let last = mu.iter().rposition(|&p| p > 0).unwrap_or(0);
    [last, last + 1].into_iter().filter(move |&k| {
        if k == 0 || k >= d {
            return false;
        }
        let mut m = mu.to_vec();
        m[0] -= 1;
        m[k] += 1;
        m.windows(2).all(|w| w[0] >= w[1])
    })
}

/// Visits every conjugate shape with its weight `f^2`, in the canonical
/// pre-order. Stops early if `visit` returns false.
fn walk(n: usize, d: usize, mut visit: impl FnMut(&[u32], &BigUint) -> bool) {
    let mut root = vec![0u32; d];
    root[0] = n as u32;
    if n == 0 {
        visit(&root, &BigUint::one());
        return;
    }
    // (shape, weight, candidate rows still to try)
    let mut stack: Vec<(Vec<u32>, BigUint, Vec<usize>)> = Vec::new();
    if !visit(&root, &BigUint::one()) {
        return;
    }
    let kids: Vec<usize> = children(&root).collect();
    stack.push((root, BigUint::one(), kids));
    while let Some((mu, g, kids)) = stack.last_mut() {
        let Some(k) = kids.pop() else {
            stack.pop();
            continue;
        };
        let mut child = mu.clone();
        let mut w = g.clone();
        move_box(&mut w, &child, k);
        child[0] -= 1;
        child[k] += 1;
        if !visit(&child, &w) {
            return;
        }
        let next: Vec<usize> = children(&child).collect();
        stack.push((child, w, next));
    }
}

/// Shapes only, same order as [`walk`].
fn walk_shapes(n: usize, d: usize, mut visit: impl FnMut(&[u32])) {
    let mut root = vec![0u32; d];
    root[0] = n as u32;
    visit(&root);
    if n == 0 {
        return;
    }
    let mut stack: Vec<(Vec<u32>, Vec<usize>)> = vec![(root.clone(), children(&root).collect())];
    while let Some((mu, kids)) = stack.last_mut() {
        let Some(k) = kids.pop() else {
            stack.pop();
            continue;
        };
        let mut child = mu.clone();
        child[0] -= 1;
        child[k] += 1;
        visit(&child);
        let next: Vec<usize> = children(&child).collect();
        stack.push((child, next));
    }
}

/// Multiplies `g = f_mu^2` by `(f_mu' / f_mu)^2` where `mu'` moves one box
/// from row 1 to row `a`.
fn move_box(g: &mut BigUint, mu: &[u32], a: usize) {
    let d = mu.len();
    let l: Vec<i64> = (0..d).map(|i| mu[i] as i64 + (d - 1 - i) as i64).collect();
    let b = 0;
    let mut num: Vec<u64> = Vec::with_capacity(2 * d);
    let mut den: Vec<u64> = Vec::with_capacity(2 * d);
    for i in (0..d).filter(|&i| i != a && i != b) {
        num.push((l[a] + 1 - l[i]).unsigned_abs());
        den.push((l[a] - l[i]).unsigned_abs());
        num.push((l[b] - 1 - l[i]).unsigned_abs());
        den.push((l[b] - l[i]).unsigned_abs());
    }
    num.push((l[b] - l[a] - 2).unsigned_abs());
    den.push((l[b] - l[a]).unsigned_abs());
    num.push(l[b] as u64);
    den.push(l[a] as u64 + 1);
    for _ in 0..2 {
        for group in grouped_products(&num) {
            *g *= group;
        }
    }
    for _ in 0..2 {
        for group in grouped_products(&den) {
            *g /= group;
        }
    }
}

/// Splits a product of factors into u64-sized partial products.
fn grouped_products(factors: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut acc = 1u64;
    for &f in factors {
        match acc.checked_mul(f) {
            Some(v) => acc = v,
            None => {
                out.push(acc);
                acc = f;
            }
        }
    }
    out.push(acc);
    out
}
