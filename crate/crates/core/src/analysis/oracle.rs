use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

const ORACLE_TOL: f64 = 1e-13;
const ORACLE_MAX_ITER: usize = 100_000;

/// Scalar fractal interpolant sampled on a uniform grid over `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFif {
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub iterations: usize,
}

/// Classical scalar construction `f(L_j(t)) = b_j k f(t) + p_j(t)` with
/// affine `p_j`, solved by its own Picard loop on `points` uniform steps.
///
/// Knots must fall on the uniform grid. This deliberately shares no code
/// with the vector solver so the two can check each other.
pub fn classic_fif_oracle(t: &[f64], v: &[f64], b: &[f64], k: f64, points: usize) -> Result<ScalarFif> {
    let n = t.len().saturating_sub(1);
    if n < 2 || v.len() != t.len() || b.len() != n {
        return Err(Error::InvalidParameter(format!(
            "oracle needs N >= 2 intervals with matching v and b (t: {}, v: {}, b: {})",
            t.len(),
            v.len(),
            b.len()
        )));
    }
    if let Some(bj) = b.iter().find(|bj| !(bj.abs() * k.abs() < 1.0)) {
        return Err(Error::InvalidParameter(format!("|b_j| k = {} must be < 1", bj.abs() * k)));
    }
    let (t0, tn) = (t[0], t[n]);
    let h = (tn - t0) / points as f64;
    let grid: Vec<f64> = (0..=points).map(|i| t0 + h * i as f64).collect();
    // interval of each grid point; knots must be grid points
    let mut owner = Vec::with_capacity(points + 1);
    for j in 0..n {
        let at = (t[j + 1] - t0) / h;
        if (at - libm::round(at)).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("knot {} is not on the oracle grid", t[j + 1])));
        }
        let stop = libm::round(at) as usize;
        while owner.len() < stop.min(points + 1) {
            owner.push(j);
        }
    }
    owner.push(n - 1);
    owner.truncate(points + 1);

    let shift = |j: usize, u: f64| {
        let left = v[j] - b[j] * k * v[0];
        let right = v[j + 1] - b[j] * k * v[n];
        left + (right - left) * (u - t0) / (tn - t0)
    };
    let read = |f: &[f64], u: f64| {
        let x = ((u - t0) / h).clamp(0.0, points as f64);
        let i = (libm::floor(x) as usize).min(points - 1);
        let s = x - i as f64;
        f[i] * (1.0 - s) + f[i + 1] * s
    };

    let mut f: Vec<f64> = grid
        .iter()
        .zip(&owner)
        .map(|(&x, &j)| v[j] + (v[j + 1] - v[j]) * (x - t[j]) / (t[j + 1] - t[j]))
        .collect();
    for iter in 1..=ORACLE_MAX_ITER {
        let next: Vec<f64> = grid
            .iter()
            .zip(&owner)
            .map(|(&x, &j)| {
                let u = t0 + (x - t[j]) * (tn - t0) / (t[j + 1] - t[j]);
                b[j] * k * read(&f, u) + shift(j, u)
            })
            .collect();
        let change = f.iter().zip(&next).map(|(a, c)| (a - c).abs()).fold(0.0, f64::max);
        f = next;
        if change < ORACLE_TOL {
            return Ok(ScalarFif {
                t: grid,
                values: f,
                iterations: iter,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: ORACLE_MAX_ITER,
        last_change: f64::NAN,
        trace: Vec::new(),
    })
}
