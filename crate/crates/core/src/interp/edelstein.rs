use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IfsMaps, Rect};
use crate::STRUCTURAL_TOL;

const MIN_SEPARATION: f64 = 1e-14;

/// Maximizing pair for the sampled ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdelsteinWitness {
    /// 0-based interval index.
    pub interval: usize,
    pub t: f64,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdelsteinReport {
    pub max_ratio: f64,
    pub witness: Option<EdelsteinWitness>,
    pub pairs: usize,
}

impl EdelsteinReport {
    /// `max_ratio < 1`, with ratios within `1e-12` of 1 counted as isometric.
    pub fn passes(&self) -> bool {
        self.max_ratio < 1.0 - STRUCTURAL_TOL
    }
}

/// Samples `||F_j(t, x) - F_j(t, y)||_1 / ||x - y||_1` over random
/// `t in I`, `x != y in region`, for every interval `j`.
///
/// There is no uniform modulus to certify; the report is the maximum seen.
pub fn verify_edelstein(maps: &IfsMaps, region: &Rect, n_pairs: usize, seed: u64) -> EdelsteinReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = maps.data().domain();
    let draw = |rng: &mut ChaCha8Rng| {
        [
            rng.random_range(region.v_lo..=region.v_hi),
            rng.random_range(region.w_lo..=region.w_hi),
        ]
    };
    let mut report = EdelsteinReport {
        max_ratio: 0.0,
        witness: None,
        pairs: 0,
    };
    let degenerate = region.width() + region.height() < MIN_SEPARATION;
    if degenerate {
        return report;
    }
    for _ in 0..n_pairs {
        let t = rng.random_range(lo..=hi);
        let x = draw(&mut rng);
        let mut y = draw(&mut rng);
        while l1(x, y) < MIN_SEPARATION {
            y = draw(&mut rng);
        }
        let dist = l1(x, y);
        for (j, m) in maps.maps().iter().enumerate() {
            let ratio = l1(m.eval(t, x[0], x[1]), m.eval(t, y[0], y[1])) / dist;
            if report.witness.is_none() || ratio > report.max_ratio {
                report.max_ratio = ratio;
                report.witness = Some(EdelsteinWitness {
                    interval: j,
                    t,
                    x,
                    y,
                    ratio,
                });
            }
        }
        report.pairs += 1;
    }
    report
}

#[inline]
fn l1(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).abs() + (a[1] - b[1]).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{compute_invariant_rect, Contraction, DataSet, IntervalParams};
    use alloc::vec;

    fn maps(p: IntervalParams) -> IfsMaps {
        let data = DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0], vec![0.0, -1.0, 0.0]).unwrap();
        IfsMaps::assemble(data, &[p, p]).unwrap()
    }

    const REGION: Rect = Rect {
        v_lo: -3.0,
        v_hi: 3.0,
        w_lo: -3.0,
        w_hi: 3.0,
    };

    #[test]
    fn zero_contraction_has_zero_ratio() {
        let m = maps(IntervalParams::constant(0.5, 0.2, 0.2, 0.5, Contraction::ZERO, Contraction::ZERO));
        let r = verify_edelstein(&m, &REGION, 2000, 7);
        assert_eq!(r.max_ratio, 0.0);
        assert!(r.passes());
        assert_eq!(r.pairs, 2000);
    }

    #[test]
    fn linear_half_is_bounded_by_column_sum() {
        let k = Contraction::Linear { k: 0.5 };
        let m = maps(IntervalParams::constant(0.6, 0.3, 0.4, 0.7, k, k));
        let r = verify_edelstein(&m, &REGION, 5000, 11);
        assert!(r.max_ratio <= 0.5 + 1e-12, "{}", r.max_ratio);
        assert!(r.max_ratio > 0.45);
        assert!(r.passes());
    }

    #[test]
    fn identity_is_rejected() {
        let id = Contraction::Linear { k: 1.0 };
        let m = maps(IntervalParams::constant(0.5, 0.0, 0.5, 1.0, id, id));
        let r = verify_edelstein(&m, &REGION, 500, 3);
        assert!((r.max_ratio - 1.0).abs() < 1e-12);
        assert!(!r.passes());
        assert!(r.witness.is_some());
    }

    #[test]
    fn catalog_contractions_pass_on_their_rectangle() {
        for c in [
            Contraction::BoundedRational { scale: 1.0 },
            Contraction::Tanh { scale: 1.0 },
            Contraction::Arctan { scale: 0.8 },
        ] {
            let m = maps(IntervalParams::constant(0.5, 0.2, 0.2, 0.5, c, c));
            let rect = compute_invariant_rect(&m, 1.25).unwrap().rect;
            let r = verify_edelstein(&m, &rect, 4000, 1);
            assert!(r.passes(), "{c:?}: {}", r.max_ratio);
        }
    }

    #[test]
    fn equal_seeds_give_identical_reports() {
        let c = Contraction::Tanh { scale: 1.0 };
        let m = maps(IntervalParams::constant(0.5, 0.2, 0.2, 0.5, c, c));
        assert_eq!(verify_edelstein(&m, &REGION, 300, 42), verify_edelstein(&m, &REGION, 300, 42));
    }
}
