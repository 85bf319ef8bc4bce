use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fit_line;
use crate::{Error, Result};

const K_INFLATION: f64 = 1.05;
const ENVELOPE_STEPS_PER_OCTAVE: usize = 8;

/// Fitted `|f(t) - f(t')| <= k_hat |t - t'|^alpha_hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolderEstimate {
    pub alpha_hat: f64,
    pub k_hat: f64,
    /// Scales used in the fit, ascending.
    pub scales: Vec<f64>,
    /// Maximal window oscillation at each scale.
    pub oscillations: Vec<f64>,
    pub raw_slope: f64,
    pub r2: f64,
    pub rms_residual: f64,
    /// Oscillation decreased somewhere and the fit was cut to the
    /// monotone range.
    pub non_monotone: bool,
}

impl HolderEstimate {
    pub fn scale_range(&self) -> (f64, f64) {
        (self.scales[0], self.scales[self.scales.len() - 1])
    }
}

/// `span * 2^-k` for `k` in `coarsest..=finest`, ascending.
pub fn default_scales(span: f64, coarsest: i32, finest: i32) -> Vec<f64> {
    (coarsest..=finest).rev().map(|k| span * libm::pow(2.0, -k as f64)).collect()
}

/// `max_i (max - min)` of `y` over windows `[t_i, t_i + delta]`.
fn max_oscillation(t: &[f64], y: &[f64], delta: f64) -> f64 {
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut end = 0;
    let mut best = 0.0f64;
    let slack = delta * 1e-12;
    for start in 0..t.len() {
        while end < t.len() && t[end] <= t[start] + delta + slack {
            while hi.back().is_some_and(|&k| y[k] <= y[end]) {
                hi.pop_back();
            }
            hi.push_back(end);
            while lo.back().is_some_and(|&k| y[k] >= y[end]) {
                lo.pop_back();
            }
            lo.push_back(end);
            end += 1;
        }
        while hi.front().is_some_and(|&k| k < start) {
            hi.pop_front();
        }
        while lo.front().is_some_and(|&k| k < start) {
            lo.pop_front();
        }
        best = best.max(y[hi[0]] - y[lo[0]]);
        if end == t.len() {
            break;
        }
    }
    best
}

/// Fits `log osc(delta)` against `log delta` over `scales`.
///
/// `alpha_hat` is the slope clamped to `(0, 1]`. `k_hat` is 1.05 times the
/// larger of the fitted constant and the envelope `osc(d) / d^alpha_hat`
/// sampled at eight sub-scales per octave across the fitted range.
pub fn estimate_holder(t: &[f64], y: &[f64], scales: &[f64]) -> Result<HolderEstimate> {
    if t.len() != y.len() || t.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 samples of equal length".into()));
    }
    let spacing = t.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let quarter = 0.25 * (t[t.len() - 1] - t[0]);
    let mut scales = scales.to_vec();
    scales.sort_by(f64::total_cmp);
    scales.dedup();
    if scales.len() < 2 {
        return Err(Error::InvalidScales("need at least two distinct scales".into()));
    }
    if scales[0] <= spacing || scales[scales.len() - 1] > quarter * (1.0 + 1e-12) {
        return Err(Error::InvalidScales(format!(
            "scales must lie in (grid spacing {spacing:e}, |I|/4 = {quarter:e}]: {scales:?}"
        )));
    }
    let mut osc: Vec<f64> = scales.iter().map(|&d| max_oscillation(t, y, d)).collect();
    let monotone_len = osc.windows(2).position(|w| w[1] < w[0]).map_or(osc.len(), |k| k + 1);
    let non_monotone = monotone_len < osc.len();
    scales.truncate(monotone_len.max(2));
    osc.truncate(scales.len());

    if osc.iter().all(|&o| o == 0.0) {
        return Ok(HolderEstimate {
            alpha_hat: 1.0,
            k_hat: f64::MIN_POSITIVE,
            scales,
            oscillations: osc,
            raw_slope: 0.0,
            r2: 1.0,
            rms_residual: 0.0,
            non_monotone,
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = scales
        .iter()
        .zip(&osc)
        .filter(|(_, &o)| o > 0.0)
        .map(|(&d, &o)| (libm::log(d), libm::log(o)))
        .unzip();
    let fit = fit_line(&xs, &ys);
    let alpha = fit.slope.clamp(1e-6, 1.0);
    let intercept = ys.iter().zip(&xs).map(|(y, x)| y - alpha * x).sum::<f64>() / xs.len() as f64;

    let (d_lo, d_hi) = (scales[0], scales[scales.len() - 1]);
    let octaves = libm::log2(d_hi / d_lo);
    let steps = (libm::ceil(octaves * ENVELOPE_STEPS_PER_OCTAVE as f64) as usize).max(1);
    let envelope = (0..=steps)
        .map(|i| d_lo * libm::pow(d_hi / d_lo, i as f64 / steps as f64))
        .map(|d| max_oscillation(t, y, d) / libm::pow(d, alpha))
        .fold(0.0, f64::max);

    Ok(HolderEstimate {
        alpha_hat: alpha,
        k_hat: K_INFLATION * libm::exp(intercept).max(envelope),
        scales,
        oscillations: osc,
        raw_slope: fit.slope,
        r2: fit.r2,
        rms_residual: fit.rms,
        non_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderAudit {
    pub pairs: usize,
    pub violations: usize,
    /// `max |f(t) - f(t')| / (k_hat |t - t'|^alpha_hat)`.
    pub max_ratio: f64,
}

impl HolderAudit {
    pub fn pass_fraction(&self) -> f64 {
        1.0 - self.violations as f64 / self.pairs.max(1) as f64
    }
}

fn lerp_read(t: &[f64], y: &[f64], x: f64) -> f64 {
    let i = t.partition_point(|&g| g <= x);
    if i == 0 {
        return y[0];
    }
    if i == t.len() {
        return y[i - 1];
    }
    let s = (x - t[i - 1]) / (t[i] - t[i - 1]);
    y[i - 1] + s * (y[i] - y[i - 1])
}

/// Checks the fitted inequality on random pairs whose separation is
/// log-uniform over the fitted scale range.
pub fn holder_audit(t: &[f64], y: &[f64], est: &HolderEstimate, n_pairs: usize, seed: u64) -> HolderAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (t[0], t[t.len() - 1]);
    let (d_lo, d_hi) = est.scale_range();
    let (ld_lo, ld_hi) = (libm::log(d_lo), libm::log(d_hi));
    let mut audit = HolderAudit {
        pairs: n_pairs,
        violations: 0,
        max_ratio: 0.0,
    };
    for _ in 0..n_pairs {
        let d = libm::exp(rng.random_range(ld_lo..=ld_hi));
        let a = rng.random_range(lo..=hi - d);
        let b = a + d;
        let diff = (lerp_read(t, y, a) - lerp_read(t, y, b)).abs();
        let ratio = diff / (est.k_hat * libm::pow(d, est.alpha_hat));
        audit.max_ratio = audit.max_ratio.max(ratio);
        if ratio > 1.0 {
            audit.violations += 1;
        }
    }
    audit
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, f: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let t: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
        let y = t.iter().map(|&x| f(x)).collect();
        (t, y)
    }

    fn brute_osc(t: &[f64], y: &[f64], d: f64) -> f64 {
        let mut best = 0.0f64;
        for i in 0..t.len() {
            let (mut lo, mut hi) = (y[i], y[i]);
            for k in i..t.len() {
                if t[k] > t[i] + d * (1.0 + 1e-12) {
                    break;
                }
                lo = lo.min(y[k]);
                hi = hi.max(y[k]);
            }
            best = best.max(hi - lo);
        }
        best
    }

    #[test]
    fn sliding_window_matches_brute_force() {
        let (t, y) = sample(500, |x| libm::sin(37.0 * x) + 0.3 * libm::cos(211.0 * x * x));
        for d in [0.004, 0.01, 0.05, 0.2] {
            assert_eq!(max_oscillation(&t, &y, d), brute_osc(&t, &y, d));
        }
    }

    #[test]
    fn linear_function_is_lipschitz_with_unit_constant() {
        let (t, y) = sample(4096, |x| x);
        let est = estimate_holder(&t, &y, &default_scales(1.0, 3, 9)).unwrap();
        assert!((est.alpha_hat - 1.0).abs() < 1e-9);
        assert!((est.k_hat - 1.0).abs() <= 0.05 + 1e-9, "{}", est.k_hat);
        let audit = holder_audit(&t, &y, &est, 10_000, 1);
        assert_eq!(audit.violations, 0);
    }

    #[test]
    fn broken_line_has_unit_exponent() {
        let (t, y) = sample(4096, |x| if x < 0.5 { 2.0 * x } else { 2.0 - 2.0 * x });
        let est = estimate_holder(&t, &y, &default_scales(1.0, 3, 9)).unwrap();
        assert!((est.alpha_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn square_root_cusp_has_half_exponent() {
        let (t, y) = sample(1 << 16, libm::sqrt);
        let est = estimate_holder(&t, &y, &default_scales(1.0, 3, 10)).unwrap();
        assert!((est.alpha_hat - 0.5).abs() < 0.01, "{}", est.alpha_hat);
        assert_eq!(holder_audit(&t, &y, &est, 10_000, 2).violations, 0);
    }

    #[test]
    fn scale_range_is_validated() {
        let (t, y) = sample(64, |x| x);
        assert!(estimate_holder(&t, &y, &[0.01, 0.1]).is_err());
        assert!(estimate_holder(&t, &y, &[0.1, 0.5]).is_err());
        assert!(estimate_holder(&t, &y, &[0.1]).is_err());
    }

    #[test]
    fn constant_function() {
        let (t, y) = sample(64, |_| 2.0);
        let est = estimate_holder(&t, &y, &[0.05, 0.1, 0.2]).unwrap();
        assert_eq!(est.alpha_hat, 1.0);
        assert!(est.k_hat > 0.0);
    }
}
