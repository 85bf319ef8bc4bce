//! Smoothness and dimension of the first component `f1`.

mod boxcount;
mod holder;
mod oracle;

use alloc::vec::Vec;

pub use boxcount::{
    box_count, box_count_shifted, default_eps_list, estimate_box_dimension, BoxCountRow, BoxCountTable,
    BoxDimFit, Samples,
};
pub use holder::{default_scales, estimate_holder, holder_audit, HolderAudit, HolderEstimate};
pub use oracle::{classic_fif_oracle, ScalarFif};

/// Default slack for the dimension bound check.
pub const DEFAULT_SLACK: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub dim: f64,
    pub alpha: f64,
    pub slack: f64,
    /// `2 - alpha + slack`.
    pub bound: f64,
    /// `bound - dim`; non-negative when the check passes.
    pub margin: f64,
    pub passes: bool,
}

/// `dim <= 2 - alpha + slack`.
pub fn check_dimension_bound(dim: f64, alpha: f64, slack: f64) -> BoundCheck {
    let bound = 2.0 - alpha + slack;
    BoundCheck {
        dim,
        alpha,
        slack,
        bound,
        margin: bound - dim,
        passes: dim <= bound + crate::STRUCTURAL_TOL,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub rms: f64,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub(crate) fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    LineFit {
        slope,
        intercept,
        r2: if syy > 0.0 { 1.0 - sse / syy } else { 1.0 },
        rms: libm::sqrt(sse / n),
    }
}

pub(crate) fn ln_all(xs: impl IntoIterator<Item = f64>) -> Vec<f64> {
    xs.into_iter().map(libm::log).collect()
}
