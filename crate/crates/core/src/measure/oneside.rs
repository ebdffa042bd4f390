use super::{rect_sup_distance, EmpiricalPermuton, Rect, Side, WRegionSpec};
use crate::error::{Error, Result};

/// Logarithm used in the threshold `2 / log(1/delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn log_inv(self, delta: f64) -> f64 {
        match self {
            Self::Natural => (1.0 / delta).ln(),
            Self::Two => (1.0 / delta).log2(),
        }
    }
}

/// Resolution of the epsilon grid.
const EPS_GRID: f64 = 1000.0;

/// Smallest multiple of `1/1000` strictly above `2 / log(1/delta)`.
pub fn oneside_epsilon(delta: f64, base: LogBase) -> f64 {
    let x = 2.0 / base.log_inv(delta);
    ((x * EPS_GRID).floor() + 1.0) / EPS_GRID
}

/// Largest integer `m` with `m < log(1/delta) / 2`; the strips have width `1/m`.
pub fn strip_count(delta: f64, base: LogBase) -> usize {
    let half = base.log_inv(delta) / 2.0;
    (half.ceil() as usize).saturating_sub(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripDiagnostic {
    pub i: usize,
    pub h_minus: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    /// `2^(i+1) * delta`
    pub bound: f64,
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnesideReport {
    pub delta: f64,
    pub w_plus_delta: f64,
    pub hypothesis: bool,
    pub epsilon: f64,
    pub w_minus_eps: f64,
    pub w_both_2eps: f64,
    pub minus_conclusion: bool,
    pub both_conclusion: bool,
    /// Width of the strips is `1 / strip_m`.
    pub strip_m: usize,
    pub strips: Vec<StripDiagnostic>,
}

impl OnesideReport {
    /// Hypothesis implies both conclusions.
    pub fn implication_holds(&self) -> bool {
        !self.hypothesis || (self.minus_conclusion && self.both_conclusion)
    }
}

pub fn oneside_check(mu: &EmpiricalPermuton, delta: f64) -> Result<OnesideReport> {
    oneside_check_with(mu, delta, None, LogBase::Natural)
}

/// `epsilon` overrides the default grid choice from [`oneside_epsilon`].
pub fn oneside_check_with(
    mu: &EmpiricalPermuton,
    delta: f64,
    epsilon: Option<f64>,
    base: LogBase,
) -> Result<OnesideReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidDelta(delta));
    }
    let epsilon = epsilon.unwrap_or_else(|| oneside_epsilon(delta, base));
    let w_plus_delta = mu.w_mass(WRegionSpec::new(delta, Side::Plus));
    let w_minus_eps = mu.w_mass(WRegionSpec::new(epsilon, Side::Minus));
    let w_both_2eps = mu.w_mass(WRegionSpec::new(2.0 * epsilon, Side::Both));
    let strip_m = strip_count(delta, base);
    let strips = if strip_m >= 2 { strips(mu, delta, strip_m) } else { Vec::new() };
    Ok(OnesideReport {
        delta,
        w_plus_delta,
        hypothesis: w_plus_delta < delta,
        epsilon,
        w_minus_eps,
        w_both_2eps,
        minus_conclusion: w_minus_eps < epsilon,
        both_conclusion: w_both_2eps < 2.0 * epsilon,
        strip_m,
        strips,
    })
}

/// Strips `H_i = [0,1) x [i e, (i+1) e + delta)` and `V_i = [1-(i+1)e, 1-ie) x [0,1)`
/// for `e = 1/m`, `0 <= i <= m - 2`, split at the corners of `V_i ∩ H_i`.
fn strips(mu: &EmpiricalPermuton, delta: f64, m: usize) -> Vec<StripDiagnostic> {
    let e = 1.0 / m as f64;
    let clip = |v: f64| v.clamp(0.0, 1.0);
    let mass = |x0: f64, x1: f64, y0: f64, y1: f64| {
        let (x0, x1, y0, y1) = (clip(x0), clip(x1), clip(y0), clip(y1));
        if x0 >= x1 || y0 >= y1 {
            0.0
        } else {
            mu.mass(&Rect { x0, x1, y0, y1 })
        }
    };
    (0..=m - 2)
        .map(|i| {
            let fi = i as f64;
            let left = 1.0 - (fi + 1.0) * e;
            let right = 1.0 - fi * e;
            let top = (fi + 1.0) * e + delta;
            let h_minus = mass(0.0, left, fi * e, top);
            let v_plus = mass(left, right, top, 1.0);
            let v_minus = mass(left, right, 0.0, fi * e);
            let bound = 2f64.powi(i as i32 + 1) * delta;
            StripDiagnostic { i, h_minus, v_plus, v_minus, bound, within_bound: h_minus < bound }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakConvergenceReport {
    /// Smallest grid epsilon with `mu(W_eps) < eps`, if any.
    pub passing_epsilon: Option<f64>,
    pub rect_sup: f64,
    pub grid: usize,
    /// `rect_sup <= 3 eps + 2 / grid`, vacuous when no epsilon passes.
    pub bound_holds: bool,
}

/// Finds the smallest `eps` in `eps_grid` with `mu(W_eps) < eps` and checks
/// `rect_sup_distance(mu, grid) <= 3 eps + 2 / grid`.
pub fn weak_convergence_check(mu: &EmpiricalPermuton, eps_grid: &[f64], grid: usize) -> WeakConvergenceReport {
    let mut sorted: Vec<f64> = eps_grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let passing_epsilon = sorted.into_iter().find(|&e| mu.w_mass(WRegionSpec::new(e, Side::Both)) < e);
    let rect_sup = rect_sup_distance(mu, grid);
    let bound_holds = passing_epsilon.is_none_or(|e| rect_sup <= 3.0 * e + 2.0 / grid as f64);
    WeakConvergenceReport { passing_epsilon, rect_sup, grid, bound_holds }
}
