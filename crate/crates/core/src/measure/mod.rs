//! The permuton `mu_sigma` of a permutation: density `n` on the boxes
//! `[(i-1)/n, i/n] x [(sigma(i)-1)/n, sigma(i)/n]`, and its comparison with the
//! anti-diagonal permuton `mu_J`.

mod oneside;

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use oneside::{
    oneside_check, oneside_check_with, oneside_epsilon, strip_count, weak_convergence_check, LogBase, OnesideReport,
    StripDiagnostic, WeakConvergenceReport,
};

/// A closed rectangle `[x0, x1] x [y0, y1]` inside the unit square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        let inside = |v: f64| (0.0..=1.0).contains(&v);
        if !(inside(x0) && inside(x1) && inside(y0) && inside(y1)) || x0 > x1 || y0 > y1 {
            return Err(Error::InvalidRect(format!("[{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn unit() -> Self {
        Self { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `x + y > 1 + eps`
    Plus,
    /// `x + y < 1 - eps`
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WRegionSpec {
    pub epsilon: f64,
    pub side: Side,
}

impl WRegionSpec {
    pub fn new(epsilon: f64, side: Side) -> Self {
        Self { epsilon, side }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalPermuton {
    base: Permutation,
}

impl EmpiricalPermuton {
    pub fn new(base: Permutation) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::InvalidPermutation("a permuton needs n >= 1".into()));
        }
        Ok(Self { base })
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// Mass of a rectangle. Boxes lying fully inside are counted exactly;
    /// at most four partial overlaps are added in floating point.
    pub fn mass(&self, r: &Rect) -> f64 {
        let n = self.n() as f64;
        let (x0, x1, y0, y1) = (r.x0 * n, r.x1 * n, r.y0 * n, r.y1 * n);
        let first = x0.floor() as usize + 1;
        let last = (x1.ceil() as usize).min(self.n());
        let mut whole = 0u64;
        let mut partial = 0.0;
        for i in first..=last {
            let xo = overlap(i as f64 - 1.0, i as f64, x0, x1);
            if xo <= 0.0 {
                continue;
            }
            let v = self.base.at(i) as f64;
            let yo = overlap(v - 1.0, v, y0, y1);
            if xo == 1.0 && yo == 1.0 {
                whole += 1;
            } else {
                partial += xo * yo;
            }
        }
        (whole as f64 + partial) / n
    }

    /// Mass of `W^+_eps`, `W^-_eps`, or their union.
    pub fn w_mass(&self, spec: WRegionSpec) -> f64 {
        match spec.side {
            Side::Plus => self.clipped_sum(1.0 + spec.epsilon, true),
            Side::Minus => self.clipped_sum(1.0 - spec.epsilon, false),
            Side::Both => {
                self.w_mass(WRegionSpec::new(spec.epsilon, Side::Plus))
                    + self.w_mass(WRegionSpec::new(spec.epsilon, Side::Minus))
            }
        }
    }

    /// Sum over boxes of the area above (or below) the line `x + y = c`, in
    /// units where every box is `[i-1, i] x [v-1, v]`.
    fn clipped_sum(&self, c_unit: f64, above: bool) -> f64 {
        let n = self.n() as f64;
        let c = c_unit * n;
        let mut whole = 0u64;
        let mut partial = 0.0;
        for (i, &v) in self.base.values().iter().enumerate() {
            let t = c - (i as f64 + v as f64 - 1.0);
            let a = area_above(t);
            let a = if above { a } else { 1.0 - a };
            if a == 1.0 {
                whole += 1;
            } else {
                partial += a;
            }
        }
        (whole as f64 + partial) / n
    }

    /// Cell masses on the `m x m` grid, `cells[a * m + c]` for column cell `a`
    /// and row cell `c`.
    fn grid_cells(&self, m: usize) -> Vec<f64> {
        let n = self.n();
        let mut cells = vec![0.0; m * m];
        let scale = 1.0 / n as f64;
        for (i, &v) in self.base.values().iter().enumerate() {
            let xs = spread(i, n, m);
            let ys = spread(v as usize - 1, n, m);
            for &(a, wx) in &xs {
                for &(c, wy) in &ys {
                    cells[a * m + c] += wx * wy * scale;
                }
            }
        }
        cells
    }
}

/// The mass of `[lo, hi]` inside `[a, b]`.
fn overlap(lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    (hi.min(b) - lo.max(a)).max(0.0)
}

/// Area of `{x + y > t}` inside the unit box at the origin.
pub(crate) fn area_above(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t <= 1.0 {
        1.0 - t * t / 2.0
    } else if t < 2.0 {
        (2.0 - t) * (2.0 - t) / 2.0
    } else {
        0.0
    }
}

/// Grid cells met by the interval `[k, k + 1]` (in units of `1/n`), with
/// the overlap lengths in units of the interval.
fn spread(k: usize, n: usize, m: usize) -> Vec<(usize, f64)> {
    // work in units of 1/(n*m) so cell and box edges are integers
    let lo = k * m;
    let hi = lo + m;
    let first = lo / n;
    let last = (hi - 1) / n;
    (first..=last.min(m - 1))
        .map(|a| {
            let a_lo = a * n;
            let a_hi = a_lo + n;
            let len = hi.min(a_hi) - lo.max(a_lo);
            (a, len as f64 / m as f64)
        })
        .collect()
}

pub fn mu_rect(mu: &EmpiricalPermuton, r: &Rect) -> f64 {
    mu.mass(r)
}

/// The anti-diagonal permuton: uniform on `x + y = 1`.
pub fn mu_j_rect(r: &Rect) -> f64 {
    (r.x1.min(1.0 - r.y0) - r.x0.max(1.0 - r.y1)).max(0.0)
}

/// The diagonal permuton: uniform on `x = y`.
pub fn mu_i_rect(r: &Rect) -> f64 {
    (r.x1.min(r.y1) - r.x0.max(r.y0)).max(0.0)
}

pub fn mu_w(mu: &EmpiricalPermuton, spec: WRegionSpec) -> f64 {
    mu.w_mass(spec)
}

/// Largest `|mu(R) - mu_J(R)|` over rectangles with corners on the
/// `(m + 1) x (m + 1)` grid. Refining the grid (`m` dividing `m'`) can only
/// increase the value.
pub fn rect_sup_distance(mu: &EmpiricalPermuton, m: usize) -> f64 {
    assert!(m >= 1, "grid size must be positive");
    let cells = mu.grid_cells(m);
    // cdf[a][c] = mass of [0, a/m] x [0, c/m]
    let w = m + 1;
    let mut cdf = vec![0.0; w * w];
    for a in 1..=m {
        let mut col = 0.0;
        for c in 1..=m {
            col += cells[(a - 1) * m + (c - 1)];
            cdf[a * w + c] = cdf[(a - 1) * w + c] + col;
        }
    }
    let mf = m as f64;
    let mut best: f64 = 0.0;
    for a0 in 0..m {
        for a1 in a0 + 1..=m {
            for c0 in 0..m {
                for c1 in c0 + 1..=m {
                    let mass = cdf[a1 * w + c1] - cdf[a0 * w + c1] - cdf[a1 * w + c0] + cdf[a0 * w + c0];
                    let j = ((a1 as f64).min(mf - c0 as f64) - (a0 as f64).max(mf - c1 as f64)).max(0.0) / mf;
                    best = best.max((mass - j).abs());
                }
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_permutations;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mu(s: &str) -> EmpiricalPermuton {
        EmpiricalPermuton::new(s.parse().unwrap()).unwrap()
    }

    fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Rect {
        Rect::new(x0, x1, y0, y1).unwrap()
    }

    fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> EmpiricalPermuton {
        let mut v: Vec<u32> = (1..=n as u32).collect();
        v.shuffle(rng);
        EmpiricalPermuton::new(Permutation::new(v).unwrap()).unwrap()
    }

    #[test]
    fn rectangle_examples() {
        assert_eq!(mu("12").mass(&rect(0.0, 0.5, 0.0, 0.5)), 0.5);
        assert_eq!(mu("3142").mass(&Rect::unit()), 1.0);
        assert_eq!(mu("3142").mass(&rect(0.25, 0.75, 0.0, 1.0)), 0.5);
        assert!((mu("21").mass(&rect(0.25, 0.75, 0.25, 0.75)) - 0.25).abs() < 1e-15);
        assert!(Rect::new(0.5, 0.4, 0.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.1, 0.0, 1.0).is_err());
        assert!(Rect::new(f64::NAN, 1.0, 0.0, 1.0).is_err());
        assert!(EmpiricalPermuton::new(Permutation::empty()).is_err());
    }

    #[test]
    fn limit_permutons() {
        assert!((mu_j_rect(&rect(0.0, 1.0, 0.2, 0.7)) - 0.5).abs() < 1e-15);
        assert_eq!(mu_j_rect(&rect(0.0, 0.5, 0.0, 0.5)), 0.0);
        assert!((mu_j_rect(&rect(0.3, 0.6, 0.5, 0.9)) - 0.2).abs() < 1e-15);
        assert!((mu_i_rect(&rect(0.0, 0.5, 0.0, 0.5)) - 0.5).abs() < 1e-15);
        assert_eq!(mu_i_rect(&rect(0.0, 0.5, 0.5, 1.0)), 0.0);
    }

    #[test]
    fn marginals_and_additivity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for &n in &[1usize, 2, 7, 100, 10_000] {
            let m = random_perm(n, &mut rng);
            for _ in 0..100 {
                let (a, b) = sorted(rng.random(), rng.random());
                assert!((m.mass(&rect(a, b, 0.0, 1.0)) - (b - a)).abs() <= 1e-12);
                assert!((m.mass(&rect(0.0, 1.0, a, b)) - (b - a)).abs() <= 1e-12);
                let (c, e) = sorted(rng.random(), rng.random());
                let sx = a + (b - a) * rng.random::<f64>();
                let sy = c + (e - c) * rng.random::<f64>();
                let whole = m.mass(&rect(a, b, c, e));
                let parts = m.mass(&rect(a, sx, c, sy))
                    + m.mass(&rect(sx, b, c, sy))
                    + m.mass(&rect(a, sx, sy, e))
                    + m.mass(&rect(sx, b, sy, e));
                assert!((whole - parts).abs() <= 1e-12, "n={n}");
            }
        }
    }

    fn sorted(a: f64, b: f64) -> (f64, f64) {
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    }

    #[test]
    fn clipped_area_matches_numeric_integration() {
        for k in -4..=24 {
            let t = k as f64 / 10.0;
            let steps = 2000;
            let h = 1.0 / steps as f64;
            let mut count = 0usize;
            for i in 0..steps {
                for j in 0..steps {
                    if (i as f64 + 0.5) * h + (j as f64 + 0.5) * h > t {
                        count += 1;
                    }
                }
            }
            let numeric = count as f64 * h * h;
            assert!((area_above(t) - numeric).abs() < 2e-3, "t={t}");
        }
    }

    #[test]
    fn w_region_examples() {
        for n in [2usize, 5, 30] {
            let j = EmpiricalPermuton::new(Permutation::decreasing(n)).unwrap();
            assert_eq!(j.w_mass(WRegionSpec::new(1.0 / n as f64, Side::Both)), 0.0);
        }
        assert_eq!(mu("21").w_mass(WRegionSpec::new(0.5, Side::Both)), 0.0);
        let i4 = EmpiricalPermuton::new(Permutation::increasing(4)).unwrap();
        assert!((i4.w_mass(WRegionSpec::new(0.5, Side::Both)) - 0.5).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = random_perm(rng.random_range(1..60), &mut rng);
            let e: f64 = rng.random();
            let both = m.w_mass(WRegionSpec::new(e, Side::Both));
            let sum = m.w_mass(WRegionSpec::new(e, Side::Plus)) + m.w_mass(WRegionSpec::new(e, Side::Minus));
            assert_eq!(both, sum);
        }
    }

    #[test]
    fn w_mass_agrees_with_fine_grid() {
        // box (i, v) split into k x k sub-squares, centres tested against the line
        let k = 200;
        for sigma in all_permutations(4).unwrap() {
            let m = EmpiricalPermuton::new(sigma.clone()).unwrap();
            for eps in [0.1, 0.3, 0.55] {
                let mut plus = 0usize;
                for (i, &v) in sigma.values().iter().enumerate() {
                    for a in 0..k {
                        for b in 0..k {
                            let x = i as f64 + (a as f64 + 0.5) / k as f64;
                            let y = v as f64 - 1.0 + (b as f64 + 0.5) / k as f64;
                            if x + y > (1.0 + eps) * 4.0 {
                                plus += 1;
                            }
                        }
                    }
                }
                let approx = plus as f64 / (k * k) as f64 / 4.0;
                assert!((m.w_mass(WRegionSpec::new(eps, Side::Plus)) - approx).abs() < 1e-2);
            }
        }
    }

    /// Brute force over grid rectangles, masses straight from `mass`.
    fn rect_sup_brute(m: &EmpiricalPermuton, g: usize) -> f64 {
        let gf = g as f64;
        let mut best: f64 = 0.0;
        for a0 in 0..g {
            for a1 in a0 + 1..=g {
                for c0 in 0..g {
                    for c1 in c0 + 1..=g {
                        let r = rect(a0 as f64 / gf, a1 as f64 / gf, c0 as f64 / gf, c1 as f64 / gf);
                        best = best.max((m.mass(&r) - mu_j_rect(&r)).abs());
                    }
                }
            }
        }
        best
    }

    #[test]
    fn rect_sup_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let m = random_perm(rng.random_range(1..40), &mut rng);
            for g in [1, 2, 3, 7, 8] {
                assert!((rect_sup_distance(&m, g) - rect_sup_brute(&m, g)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rect_sup_examples() {
        for n in [4usize, 16, 50, 200] {
            let j = EmpiricalPermuton::new(Permutation::decreasing(n)).unwrap();
            assert!(rect_sup_distance(&j, 8) <= 2.0 / n as f64 + 1e-12, "n={n}");
            let i = EmpiricalPermuton::new(Permutation::increasing(n)).unwrap();
            assert!(rect_sup_distance(&i, 8) >= 0.5 - 2.0 / n as f64);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_perm(rng.random_range(1..100), &mut rng);
            let coarse = rect_sup_distance(&m, 2);
            let fine = rect_sup_distance(&m, 16);
            assert!(coarse <= fine + 1e-12);
            assert!(rect_sup_distance(&m, 4) <= rect_sup_distance(&m, 8) + 1e-12);
        }
    }

    #[test]
    fn rect_sup_is_not_monotone_without_refinement() {
        // a coarser grid that is not a divisor can see a larger gap
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let found = (0..500).any(|_| {
            let m = random_perm(rng.random_range(2..12), &mut rng);
            rect_sup_distance(&m, 3) > rect_sup_distance(&m, 4) + 1e-9
        });
        assert!(found);
    }
}
