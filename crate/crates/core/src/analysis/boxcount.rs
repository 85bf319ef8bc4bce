use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{fit_line, ln_all};
use crate::{Error, Result};

/// Input to [`box_count`].
#[derive(Debug, Clone, Copy)]
pub enum Samples<'a> {
    /// Unordered points; each marks the cell it falls in.
    Cloud(&'a [[f64; 2]]),
    /// Samples of a continuous function at increasing `t`; consecutive
    /// samples are joined by segments and every cell a segment meets is
    /// counted.
    Graph { t: &'a [f64], y: &'a [f64] },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCountRow {
    pub eps: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoxCountTable {
    pub rows: Vec<BoxCountRow>,
}

impl BoxCountTable {
    pub fn from_rows(rows: impl IntoIterator<Item = (f64, u64)>) -> Self {
        BoxCountTable {
            rows: rows.into_iter().map(|(eps, count)| BoxCountRow { eps, count }).collect(),
        }
    }

    /// Counts never drop as `eps` shrinks.
    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|r| r[1].count >= r[0].count)
    }
}

/// `eps = span * 2^-k` for `k` in `coarsest..=finest`.
pub fn default_eps_list(span: f64, coarsest: i32, finest: i32) -> Vec<f64> {
    (coarsest..=finest).map(|k| span * libm::pow(2.0, -k as f64)).collect()
}

/// One axis of the mesh: half-open cells `[a + m eps, a + (m+1) eps)`, the
/// last cell closed so the far edge of the sample range is not split off.
#[derive(Debug, Clone, Copy)]
struct Axis {
    anchor: f64,
    eps: f64,
    cells: i64,
}

impl Axis {
    fn new(lo: f64, hi: f64, eps: f64, shift: f64) -> Self {
        let anchor = lo - shift * eps;
        let cells = (libm::ceil((hi - anchor) / eps) as i64).max(1);
        Axis { anchor, eps, cells }
    }

    fn scaled(&self, x: f64) -> f64 {
        (x - self.anchor) / self.eps
    }

    fn clamp(&self, i: i64) -> i64 {
        i.clamp(0, self.cells - 1)
    }

    fn index(&self, x: f64) -> i64 {
        self.clamp(libm::floor(self.scaled(x)) as i64)
    }

    /// Last cell meeting `[.., x)` when `x` itself is excluded.
    fn index_open_above(&self, x: f64) -> i64 {
        self.clamp(libm::ceil(self.scaled(x)) as i64 - 1)
    }

    /// Left edge of cell `m`.
    fn edge(&self, m: i64) -> f64 {
        self.anchor + m as f64 * self.eps
    }
}

fn check_eps(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return Err(Error::InvalidScales("empty eps list".into()));
    }
    if eps_list.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(Error::InvalidScales(format!("eps must be positive: {eps_list:?}")));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidScales(format!("eps must be strictly decreasing: {eps_list:?}")));
    }
    Ok(())
}

fn bounds(xs: impl Iterator<Item = f64>) -> (f64, f64) {
    xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

/// Counts `eps`-mesh cells meeting the samples, mesh anchored at
/// `(min t, min y)`.
pub fn box_count(samples: Samples<'_>, eps_list: &[f64]) -> Result<BoxCountTable> {
    box_count_shifted(samples, eps_list, 0.0)
}

/// As [`box_count`] with the anchor moved to `(min t, min y) - shift * eps`.
pub fn box_count_shifted(samples: Samples<'_>, eps_list: &[f64], shift: f64) -> Result<BoxCountTable> {
    check_eps(eps_list)?;
    match samples {
        Samples::Cloud(points) => {
            if points.is_empty() {
                return Err(Error::EmptyCloud);
            }
            let (t_lo, t_hi) = bounds(points.iter().map(|p| p[0]));
            let (y_lo, y_hi) = bounds(points.iter().map(|p| p[1]));
            Ok(BoxCountTable::from_rows(eps_list.iter().map(|&eps| {
                let tx = Axis::new(t_lo, t_hi, eps, shift);
                let ty = Axis::new(y_lo, y_hi, eps, shift);
                let mut cells: Vec<(i64, i64)> = points.iter().map(|p| (tx.index(p[0]), ty.index(p[1]))).collect();
                cells.sort_unstable();
                cells.dedup();
                (eps, cells.len() as u64)
            })))
        }
        Samples::Graph { t, y } => {
            if t.len() != y.len() || t.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "graph samples need equal non-zero lengths ({} vs {})",
                    t.len(),
                    y.len()
                )));
            }
            if t.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::InvalidParameter("graph abscissae must increase".into()));
            }
            let spacing = t.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
            let finest = eps_list[eps_list.len() - 1];
            if spacing > finest / 4.0 {
                return Err(Error::Undersampled {
                    spacing,
                    required: finest / 4.0,
                    eps: finest,
                });
            }
            let (y_lo, y_hi) = bounds(y.iter().copied());
            Ok(BoxCountTable::from_rows(eps_list.iter().map(|&eps| {
                let tx = Axis::new(t[0], t[t.len() - 1], eps, shift);
                let ty = Axis::new(y_lo, y_hi, eps, shift);
                (eps, count_graph(t, y, &tx, &ty))
            })))
        }
    }
}

fn count_graph(t: &[f64], y: &[f64], tx: &Axis, ty: &Axis) -> u64 {
    // per column: (lowest row, highest row)
    let mut span = vec![(i64::MAX, i64::MIN); tx.cells as usize];
    let mut mark = |col: i64, lo: i64, hi: i64| {
        let s = &mut span[col as usize];
        s.0 = s.0.min(lo);
        s.1 = s.1.max(hi);
    };
    let last = t.len() - 1;
    if last == 0 {
        mark(tx.index(t[0]), ty.index(y[0]), ty.index(y[0]));
    }
    for i in 0..last {
        let (ta, tb, ya, yb) = (t[i], t[i + 1], y[i], y[i + 1]);
        let closed_right = i + 1 == last;
        let lerp = |s: f64| ya + (yb - ya) * (s - ta) / (tb - ta);
        let mut left = ta;
        let mut col = tx.index(ta);
        loop {
            let boundary = tx.edge(col + 1);
            if col + 1 < tx.cells && boundary <= left {
                col += 1;
                continue;
            }
            let split = col + 1 < tx.cells && boundary < tb;
            let (right, right_closed) = if split { (boundary, false) } else { (tb, closed_right) };
            let (yl, yr) = (lerp(left), if split { lerp(right) } else { yb });
            let (lo, hi) = if yl == yr {
                (ty.index(yl), ty.index(yl))
            } else if right_closed {
                (ty.index(yl.min(yr)), ty.index(yl.max(yr)))
            } else if yr > yl {
                (ty.index(yl), ty.index_open_above(yr).max(ty.index(yl)))
            } else {
                (ty.index(yr), ty.index(yl))
            };
            mark(col, lo, hi);
            if !split {
                break;
            }
            left = right;
            col += 1;
        }
    }
    span.iter()
        .filter(|s| s.0 <= s.1)
        .map(|s| (s.1 - s.0 + 1) as u64)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxDimFit {
    pub dim: f64,
    pub intercept: f64,
    pub r2: f64,
    /// Slopes between consecutive rows.
    pub local_slopes: Vec<f64>,
    /// All counts equal; `dim` is reported as 0.
    pub degenerate: bool,
}

/// Least-squares slope of `log N` against `log(1/eps)`.
pub fn estimate_box_dimension(table: &BoxCountTable) -> Result<BoxDimFit> {
    if table.rows.len() < 4 {
        return Err(Error::InvalidScales(format!(
            "need at least 4 rows, got {}",
            table.rows.len()
        )));
    }
    if table.rows.iter().any(|r| r.count == 0) {
        return Err(Error::InvalidScales("zero box count".into()));
    }
    let x = ln_all(table.rows.iter().map(|r| 1.0 / r.eps));
    let y = ln_all(table.rows.iter().map(|r| r.count as f64));
    let local_slopes = x
        .windows(2)
        .zip(y.windows(2))
        .map(|(a, b)| (b[1] - b[0]) / (a[1] - a[0]))
        .collect();
    let degenerate = table.rows.windows(2).all(|r| r[0].count == r[1].count);
    let fit = fit_line(&x, &y);
    Ok(BoxDimFit {
        dim: if degenerate { 0.0 } else { fit.slope },
        intercept: fit.intercept,
        r2: fit.r2,
        local_slopes,
        degenerate,
    })
}
