//! The inner bijection `S_lambda(I_k) -> S_lambda(J_k)` on extracted shapes.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::growth::border_conjugate_bijection;
use crate::perm::Permutation;
use crate::shape::{enumerate_traversals_bounded, traversal_contains, FerrersShape, Traversal};

/// Environment variable naming the pairing cache directory.
pub const CACHE_ENV: &str = "PERMUTON_LAB_CACHE";

/// Shapes above this many boxes use the growth strategy under `Auto`.
pub const AUTO_THRESHOLD: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InnerStrategy {
    /// Border conjugation of the RSK growth diagram.
    Growth,
    /// Index matching of the two lexicographically ordered avoider lists.
    Enumeration,
    /// Enumeration up to [`AUTO_THRESHOLD`] boxes, growth above.
    #[default]
    Auto,
}

impl std::str::FromStr for InnerStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "growth" | "a" => Ok(Self::Growth),
            "enumeration" | "b" => Ok(Self::Enumeration),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::PreconditionViolated(format!("unknown inner strategy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// From `I_k`-avoiders to `J_k`-avoiders.
    IncToDec,
    /// From `J_k`-avoiders to `I_k`-avoiders.
    DecToInc,
}

/// Lex-rank pairing of `S_lambda(I_k)` with `S_lambda(J_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    inc_to_dec: HashMap<u128, u128>,
    dec_to_inc: HashMap<u128, u128>,
}

impl Pairing {
    fn from_pairs(pairs: Vec<(u128, u128)>) -> Result<Self> {
        let inc_to_dec: HashMap<u128, u128> = pairs.iter().copied().collect();
        let dec_to_inc: HashMap<u128, u128> = pairs.iter().map(|&(a, b)| (b, a)).collect();
        if inc_to_dec.len() != pairs.len() || dec_to_inc.len() != pairs.len() {
            return Err(Error::Cache("pairing is not one-to-one".into()));
        }
        Ok(Self { inc_to_dec, dec_to_inc })
    }

    pub fn len(&self) -> usize {
        self.inc_to_dec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inc_to_dec.is_empty()
    }

    fn pairs_sorted(&self) -> Vec<(u128, u128)> {
        let mut v: Vec<(u128, u128)> = self.inc_to_dec.iter().map(|(&a, &b)| (a, b)).collect();
        v.sort_unstable();
        v
    }
}

/// Parses a pairing file: one `index_I<TAB>index_J` line per pair.
pub fn parse_pairing(text: &str) -> Result<Vec<(u128, u128)>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (a, b) = line.split_once('\t').ok_or_else(|| Error::Cache(format!("missing tab in {line:?}")))?;
            let parse = |s: &str| s.trim().parse::<u128>().map_err(|e| Error::Cache(format!("{s:?}: {e}")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect()
}

/// Strategy-B pairings, memoised in memory and optionally on disk.
///
/// Files are written to a temporary name and renamed into place, so
/// concurrent readers never see a partial file.
#[derive(Debug, Default)]
pub struct PairingCache {
    dir: Option<PathBuf>,
    bound: usize,
    memory: Mutex<HashMap<(FerrersShape, usize), Arc<Pairing>>>,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl PairingCache {
    pub fn in_memory() -> Self {
        Self::with_dir(None)
    }

    pub fn with_dir(dir: Option<PathBuf>) -> Self {
        Self { dir, bound: AUTO_THRESHOLD, memory: Mutex::default() }
    }

    /// Uses the explicit directory if given, else [`CACHE_ENV`], else memory only.
    pub fn resolve(dir: Option<PathBuf>) -> Self {
        Self::with_dir(dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)))
    }

    /// Largest shape (in boxes) the enumeration strategy accepts.
    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = bound;
        self
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn file_name(shape: &FerrersShape, k: usize) -> String {
        format!("pairing_{}_k{k}.tsv", shape.rows().iter().map(u32::to_string).collect::<Vec<_>>().join("-"))
    }

    pub fn pairing(&self, shape: &FerrersShape, k: usize) -> Result<Arc<Pairing>> {
        let key = (shape.clone(), k);
        if let Some(p) = self.memory.lock().expect("cache lock").get(&key) {
            return Ok(Arc::clone(p));
        }
        let pairing = Arc::new(match self.load(shape, k)? {
            Some(p) => p,
            None => {
                let p = build_pairing(shape, k, self.bound)?;
                self.store(shape, k, &p)?;
                p
            }
        });
        self.memory.lock().expect("cache lock").insert(key, Arc::clone(&pairing));
        Ok(pairing)
    }

    fn load(&self, shape: &FerrersShape, k: usize) -> Result<Option<Pairing>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = dir.join(Self::file_name(shape, k));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
        };
        let pairs = parse_pairing(&text)?;
        let total = shape.traversal_count();
        if pairs.iter().any(|&(a, b)| a >= total || b >= total) {
            return Err(Error::Cache(format!("{}: index out of range", path.display())));
        }
        Pairing::from_pairs(pairs).map(Some)
    }

    fn store(&self, shape: &FerrersShape, k: usize, pairing: &Pairing) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let name = Self::file_name(shape, k);
        let tmp =
            dir.join(format!(".{name}.{}.{}.tmp", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
        let mut body = String::new();
        for (a, b) in pairing.pairs_sorted() {
            body.push_str(&format!("{a}\t{b}\n"));
        }
        fs::write(&tmp, body).map_err(io)?;
        fs::rename(&tmp, dir.join(name)).map_err(io)
    }
}

fn build_pairing(shape: &FerrersShape, k: usize, bound: usize) -> Result<Pairing> {
    let inc = Permutation::increasing(k);
    let dec = Permutation::decreasing(k);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in enumerate_traversals_bounded(shape, bound)? {
        if !traversal_contains(&t, &inc) {
            a.push(t.lex_rank());
        }
        if !traversal_contains(&t, &dec) {
            b.push(t.lex_rank());
        }
    }
    if a.len() != b.len() {
        return Err(Error::InnerBijectionFailure(format!(
            "|S(I_{k})| = {} but |S(J_{k})| = {} on shape {shape}",
            a.len(),
            b.len()
        )));
    }
    Pairing::from_pairs(a.into_iter().zip(b).collect())
}

/// Strategy B on a single traversal.
pub fn enumeration_bijection(t: &Traversal, k: usize, direction: Direction, cache: &PairingCache) -> Result<Traversal> {
    let pairing = cache.pairing(t.shape(), k)?;
    let table = match direction {
        Direction::IncToDec => &pairing.inc_to_dec,
        Direction::DecToInc => &pairing.dec_to_inc,
    };
    let rank = t.lex_rank();
    let image = table
        .get(&rank)
        .ok_or_else(|| Error::PreconditionViolated(format!("{t} is not in the source class for k = {k}")))?;
    Traversal::from_lex_rank(t.shape(), *image)
}

/// Applies the chosen strategy. Growth is its own inverse, so the direction
/// only matters for enumeration.
pub fn inner_bijection(
    t: &Traversal,
    k: usize,
    direction: Direction,
    strategy: InnerStrategy,
    cache: &PairingCache,
) -> Result<Traversal> {
    let use_growth = match strategy {
        InnerStrategy::Growth => true,
        InnerStrategy::Enumeration => false,
        InnerStrategy::Auto => t.shape().size() > AUTO_THRESHOLD,
    };
    if use_growth {
        border_conjugate_bijection(t)
    } else {
        enumeration_bijection(t, k, direction, cache)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::all_shapes;
    use std::collections::HashSet;

    #[test]
    fn parse_pairing_lines() {
        assert_eq!(parse_pairing("0\t3\n1\t2\n\n").unwrap(), vec![(0, 3), (1, 2)]);
        assert!(parse_pairing("0 3").is_err());
        assert!(parse_pairing("x\t1").is_err());
        assert!(parse_pairing("").unwrap().is_empty());
    }

    #[test]
    fn enumeration_is_a_bijection_both_ways() {
        let cache = PairingCache::in_memory();
        for shape in all_shapes(10) {
            for k in 2..=3 {
                let inc = Permutation::increasing(k);
                let dec = Permutation::decreasing(k);
                let mut seen = HashSet::new();
                for t in crate::shape::enumerate_traversals(&shape).unwrap() {
                    if traversal_contains(&t, &inc) {
                        assert!(enumeration_bijection(&t, k, Direction::IncToDec, &cache).is_err());
                        continue;
                    }
                    let u = enumeration_bijection(&t, k, Direction::IncToDec, &cache).unwrap();
                    assert!(!traversal_contains(&u, &dec));
                    assert_eq!(enumeration_bijection(&u, k, Direction::DecToInc, &cache).unwrap(), t);
                    assert!(seen.insert(u));
                }
            }
        }
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let shape: FerrersShape = "3,3,2".parse().unwrap();
        let first = PairingCache::with_dir(Some(dir.path().to_path_buf()));
        let p = first.pairing(&shape, 2).unwrap();
        let file = dir.path().join(PairingCache::file_name(&shape, 2));
        let text = std::fs::read_to_string(&file).unwrap();
        assert_eq!(text.lines().count(), p.len());
        let second = PairingCache::with_dir(Some(dir.path().to_path_buf()));
        assert_eq!(*second.pairing(&shape, 2).unwrap(), *p);
        std::fs::write(&file, "0\t0\n1\t0\n").unwrap();
        let third = PairingCache::with_dir(Some(dir.path().to_path_buf()));
        assert!(matches!(third.pairing(&shape, 2), Err(Error::Cache(_))));
        let leftovers = std::fs::read_dir(dir.path())
            .unwrap()
            .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().ends_with(".tmp"))
            .count();
        assert_eq!(leftovers, 0);
    }

    #[test]
    fn bound_applies_to_enumeration() {
        let cache = PairingCache::in_memory();
        let t = Traversal::from_permutation(&"12345".parse().unwrap());
        assert!(matches!(enumeration_bijection(&t, 2, Direction::DecToInc, &cache), Err(Error::BoundExceeded { .. })));
        let big = PairingCache::in_memory().with_bound(25);
        let u = enumeration_bijection(&t, 2, Direction::DecToInc, &big).unwrap();
        assert!(!traversal_contains(&u, &Permutation::increasing(2)));
        assert_eq!(
            inner_bijection(&t, 2, Direction::DecToInc, InnerStrategy::Auto, &cache).unwrap(),
            Traversal::from_permutation(&"54321".parse().unwrap())
        );
    }
}
