//! The Read-Bajraktarevic operator on grid-sampled `R^2`-valued functions
//! and its Picard iteration.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::interp::{DataSet, HiddenIfs};
use crate::{Error, Result};

/// Two interval-side evaluations at an interior knot must agree this well.
pub const KNOT_AGREEMENT_TOL: f64 = 1e-9;

/// Ordered sample abscissae covering `I`, with the positions of the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    knots: Vec<usize>,
}

impl Grid {
    /// `per_interval` equal steps on every `I_j`; knots are copied exactly.
    pub fn uniform(data: &DataSet, per_interval: usize) -> Result<Self> {
        if per_interval < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points per interval, got {per_interval}"
            )));
        }
        let t = data.t();
        let mut points = Vec::with_capacity(data.intervals() * per_interval + 1);
        let mut knots = Vec::with_capacity(t.len());
        for p in t.windows(2) {
            knots.push(points.len());
            points.extend((0..per_interval).map(|i| p[0] + (p[1] - p[0]) * i as f64 / per_interval as f64));
        }
        knots.push(points.len());
        points.push(t[t.len() - 1]);
        Ok(Grid { points, knots })
    }

    /// Arbitrary strictly increasing grid; every knot must appear in it.
    pub fn new(points: Vec<f64>, knot_values: &[f64]) -> Result<Self> {
        if points.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidParameter("grid not strictly increasing".into()));
        }
        let knots = knot_values
            .iter()
            .map(|&tk| {
                points
                    .iter()
                    .position(|&g| (g - tk).abs() <= crate::STRUCTURAL_TOL)
                    .ok_or_else(|| Error::InvalidParameter(format!("knot {tk} missing from grid")))
            })
            .collect::<Result<Vec<_>>>()?;
        if knots.first() != Some(&0) || knots.last() != Some(&(points.len() - 1)) {
            return Err(Error::InvalidParameter("grid must start and end at the outer knots".into()));
        }
        Ok(Grid { points, knots })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Grid indices of `t_0, ..., t_N`.
    pub fn knots(&self) -> &[usize] {
        &self.knots
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn max_spacing(&self) -> f64 {
        self.points.windows(2).map(|p| p[1] - p[0]).fold(0.0, f64::max)
    }
}

/// A grid-sampled element of `C(I)` with values `(f1, f2)`, read by
/// piecewise-linear interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledVectorFunction {
    grid: Arc<Grid>,
    values: Vec<[f64; 2]>,
}

impl SampledVectorFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<[f64; 2]>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        Ok(SampledVectorFunction { grid, values })
    }

    pub fn from_fn(grid: Arc<Grid>, f: impl FnMut(f64) -> [f64; 2]) -> Self {
        let values = grid.points.iter().copied().map(f).collect();
        SampledVectorFunction { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    /// Samples of `f1` (`index = 0`) or `f2` (`index = 1`).
    pub fn component(&self, index: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[index]).collect()
    }

    /// Point evaluation; exact at grid points, linear in between.
    pub fn eval(&self, t: f64) -> Result<[f64; 2]> {
        let pts = &self.grid.points;
        let (lo, hi) = (pts[0], pts[pts.len() - 1]);
        if !(lo..=hi).contains(&t) {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        Ok(self.read(t))
    }

    #[inline]
    fn read(&self, t: f64) -> [f64; 2] {
        let pts = &self.grid.points;
        let i = pts.partition_point(|&g| g <= t);
        if i == 0 {
            return self.values[0];
        }
        if i == pts.len() {
            return self.values[i - 1];
        }
        let (t0, t1) = (pts[i - 1], pts[i]);
        let (a, b) = (self.values[i - 1], self.values[i]);
        let s = (t - t0) / (t1 - t0);
        [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]
    }

    /// `d_C`: sup over the shared grid of the Manhattan distance.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.grid.len(), other.grid.len());
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a[0] - b[0]).abs() + (a[1] - b[1]).abs())
            .fold(0.0, f64::max)
    }

    /// `max_j ||f(t_j) - (v_j, w_j)||_1`.
    pub fn node_residual(&self, data: &DataSet) -> f64 {
        self.grid
            .knots
            .iter()
            .enumerate()
            .map(|(j, &k)| {
                let [a, b] = self.values[k];
                (a - data.v()[j]).abs() + (b - data.w()[j]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Piecewise-linear interpolant through the data: an element of `C_d`.
pub fn initial_guess(data: &DataSet, grid: Arc<Grid>) -> SampledVectorFunction {
    let mut values = Vec::with_capacity(grid.len());
    for (j, k) in grid.knots.windows(2).enumerate() {
        let (ta, tb) = (data.t()[j], data.t()[j + 1]);
        let ([_, va, wa], [_, vb, wb]) = (data.point(j), data.point(j + 1));
        for &t in &grid.points[k[0]..k[1]] {
            let s = (t - ta) / (tb - ta);
            values.push([va + s * (vb - va), wa + s * (wb - wa)]);
        }
    }
    let [_, v, w] = data.last();
    values.push([v, w]);
    SampledVectorFunction { grid, values }
}

/// `(Rh)(t) = F_j(L_j^{-1}(t), h(L_j^{-1}(t)))` for `t in I_j`.
///
/// Interior knots are evaluated from both neighbouring intervals; the two
/// values must agree to [`KNOT_AGREEMENT_TOL`] and are averaged.
pub fn apply_rb(ifs: &HiddenIfs, h: &SampledVectorFunction) -> Result<SampledVectorFunction> {
    let grid = &h.grid;
    let (lo, hi) = ifs.data().domain();
    let mut out = Vec::with_capacity(grid.len());
    for (j, (lmap, fmap)) in ifs.interval_maps().iter().zip(ifs.maps().maps()).enumerate() {
        let (start, end) = (grid.knots[j], grid.knots[j + 1]);
        for (i, &t) in grid.points[start..=end].iter().enumerate() {
            let u = lmap.inverse(t).clamp(lo, hi);
            let [hv, hw] = h.read(u);
            let y = fmap.eval(u, hv, hw);
            if i == 0 && j > 0 {
                let prev: &mut [f64; 2] = out.last_mut().expect("left interval written");
                let mismatch = (prev[0] - y[0]).abs() + (prev[1] - y[1]).abs();
                if !(mismatch <= KNOT_AGREEMENT_TOL) {
                    return Err(Error::LeftContinuousSpace { knot: j, mismatch });
                }
                *prev = [0.5 * (prev[0] + y[0]), 0.5 * (prev[1] + y[1])];
            } else {
                out.push(y);
            }
        }
    }
    Ok(SampledVectorFunction {
        grid: grid.clone(),
        values: out,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RbConfig {
    pub per_interval: usize,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for RbConfig {
    fn default() -> Self {
        RbConfig {
            per_interval: 4096,
            tol: 1e-10,
            max_iter: 2000,
        }
    }
}

impl RbConfig {
    pub fn check(&self) -> Result<()> {
        if self.per_interval < 2 || !(self.tol > 0.0) || self.max_iter < 1 {
            return Err(Error::InvalidParameter(format!("invalid solver config {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    /// `d_C(h_k, h_{k-1})` for each iteration `k = 1, 2, ...`.
    pub changes: Vec<f64>,
    /// `d_C(Rf, f)` for the returned `f`.
    pub residual: f64,
    pub node_residual: f64,
}

impl Diagnostics {
    pub fn iterations(&self) -> usize {
        self.changes.len()
    }

    /// Successive ratios `changes[k+1] / changes[k]`.
    pub fn ratios(&self) -> Vec<f64> {
        self.changes
            .windows(2)
            .filter(|c| c[0] > 0.0)
            .map(|c| c[1] / c[0])
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub f: SampledVectorFunction,
    pub diagnostics: Diagnostics,
}

/// Picard iteration of [`apply_rb`] from [`initial_guess`] until the
/// sup-norm change drops below `cfg.tol`.
pub fn iterate_to_fixed_point(ifs: &HiddenIfs, cfg: &RbConfig) -> Result<FixedPoint> {
    cfg.check()?;
    let grid = Arc::new(Grid::uniform(ifs.data(), cfg.per_interval)?);
    iterate_from(ifs, initial_guess(ifs.data(), grid), cfg)
}

/// Like [`iterate_to_fixed_point`] from a caller-supplied start in `C_e`.
pub fn iterate_from(ifs: &HiddenIfs, start: SampledVectorFunction, cfg: &RbConfig) -> Result<FixedPoint> {
    cfg.check()?;
    let mut h = start;
    let mut changes = Vec::new();
    while changes.len() < cfg.max_iter {
        let next = apply_rb(ifs, &h)?;
        let change = next.sup_distance(&h);
        changes.push(change);
        h = next;
        if change < cfg.tol {
            let residual = apply_rb(ifs, &h)?.sup_distance(&h);
            let node_residual = h.node_residual(ifs.data());
            return Ok(FixedPoint {
                f: h,
                diagnostics: Diagnostics {
                    changes,
                    residual,
                    node_residual,
                },
            });
        }
    }
    Err(Error::NotConverged {
        iterations: changes.len(),
        last_change: changes.last().copied().unwrap_or(f64::NAN),
        trace: changes,
    })
}
