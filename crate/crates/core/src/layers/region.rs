use crate::perm::Permutation;

/// `SW(C, sigma)`: the union of the rectangles `[0, i) x [0, sigma(i))` for
/// `i` in `C`, stored as a non-increasing height per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwRegion {
    heights: Vec<u32>,
}

impl SwRegion {
    pub fn n(&self) -> usize {
        self.heights.len()
    }

    /// Height of column `a` (1-based); columns past `n` have height 0.
    pub fn height(&self, a: usize) -> u32 {
        self.heights.get(a.wrapping_sub(1)).copied().unwrap_or(0)
    }

    pub fn heights(&self) -> &[u32] {
        &self.heights
    }

    pub fn is_empty(&self) -> bool {
        self.heights.first().is_none_or(|&h| h == 0)
    }

    /// Number of unit boxes in the region.
    pub fn area(&self) -> usize {
        self.heights.iter().map(|&h| h as usize).sum()
    }

    /// Whether the point `(x, y)` lies in the region. Rectangles are
    /// half-open, so `(i, sigma(i))` itself is never covered by its own
    /// rectangle.
    pub fn contains_point(&self, x: f64, y: f64) -> bool {
        if !(x >= 0.0 && y >= 0.0) {
            return false;
        }
        let a = x.floor() as usize + 1;
        a <= self.n() && y < self.height(a) as f64
    }

    /// Whether box `(a, b)`, the unit square `[a-1, a) x [b-1, b)`, lies in
    /// the region.
    pub fn contains_box(&self, a: usize, b: usize) -> bool {
        a >= 1 && b >= 1 && b as u32 <= self.height(a)
    }

    /// Outer corners `(i, h)` of the staircase, one per drop in height.
    pub fn corners(&self) -> Vec<(usize, u32)> {
        (1..=self.n()).filter(|&a| self.height(a) > self.height(a + 1)).map(|a| (a, self.height(a))).collect()
    }
}

pub fn sw_region(c: &[usize], sigma: &Permutation) -> SwRegion {
    let n = sigma.len();
    let mut heights = vec![0u32; n];
    for &i in c {
        assert!(i >= 1 && i <= n, "index {i} outside 1..={n}");
        heights[i - 1] = heights[i - 1].max(sigma.at(i));
    }
    for a in (0..n.saturating_sub(1)).rev() {
        heights[a] = heights[a].max(heights[a + 1]);
    }
    SwRegion { heights }
}
