use alloc::format;
use alloc::vec::Vec;

use super::IfsMaps;
use crate::{Error, Result};

pub const DEFAULT_MARGIN_GROWTH: f64 = 1.25;
const MAX_ATTEMPTS: usize = 40;
const T_SAMPLES: usize = 65;
const LATTICE: usize = 33;
const EDGE_SAMPLES: usize = 129;

/// Axis-aligned rectangle `[v_lo, v_hi] x [w_lo, w_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub v_lo: f64,
    pub v_hi: f64,
    pub w_lo: f64,
    pub w_hi: f64,
}

impl Rect {
    fn point(v: f64, w: f64) -> Self {
        Rect {
            v_lo: v,
            v_hi: v,
            w_lo: w,
            w_hi: w,
        }
    }

    pub fn contains(&self, v: f64, w: f64) -> bool {
        (self.v_lo..=self.v_hi).contains(&v) && (self.w_lo..=self.w_hi).contains(&w)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.contains(other.v_lo, other.w_lo) && self.contains(other.v_hi, other.w_hi)
    }

    fn include(&mut self, v: f64, w: f64) {
        self.v_lo = self.v_lo.min(v);
        self.v_hi = self.v_hi.max(v);
        self.w_lo = self.w_lo.min(w);
        self.w_hi = self.w_hi.max(w);
    }

    fn union(&self, other: &Rect) -> Rect {
        let mut r = *self;
        r.include(other.v_lo, other.w_lo);
        r.include(other.v_hi, other.w_hi);
        r
    }

    /// Scales both half-widths about the center.
    fn inflate(&self, factor: f64) -> Rect {
        let grow = |lo: f64, hi: f64| {
            let c = 0.5 * (lo + hi);
            let h = 0.5 * (hi - lo) * factor;
            (c - h, c + h)
        };
        let (v_lo, v_hi) = grow(self.v_lo, self.v_hi);
        let (w_lo, w_hi) = grow(self.w_lo, self.w_hi);
        Rect {
            v_lo,
            v_hi,
            w_lo,
            w_hi,
        }
    }

    pub fn width(&self) -> f64 {
        self.v_hi - self.v_lo
    }

    pub fn height(&self) -> f64 {
        self.w_hi - self.w_lo
    }

    /// Deterministic verification samples: a `33 x 33` lattice plus 129
    /// points along each edge.
    pub fn samples(&self) -> Vec<[f64; 2]> {
        let lerp = |lo: f64, hi: f64, i: usize, n: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
        let mut out = Vec::with_capacity(LATTICE * LATTICE + 4 * EDGE_SAMPLES);
        for i in 0..LATTICE {
            for k in 0..LATTICE {
                out.push([
                    lerp(self.v_lo, self.v_hi, i, LATTICE),
                    lerp(self.w_lo, self.w_hi, k, LATTICE),
                ]);
            }
        }
        for i in 0..EDGE_SAMPLES {
            let v = lerp(self.v_lo, self.v_hi, i, EDGE_SAMPLES);
            let w = lerp(self.w_lo, self.w_hi, i, EDGE_SAMPLES);
            out.extend([
                [v, self.w_lo],
                [v, self.w_hi],
                [self.v_lo, w],
                [self.v_hi, w],
            ]);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectSearch {
    pub rect: Rect,
    pub attempts: usize,
}

fn t_samples(maps: &IfsMaps) -> impl Iterator<Item = f64> + '_ {
    let (lo, hi) = maps.data().domain();
    (0..T_SAMPLES).map(move |i| lo + (hi - lo) * i as f64 / (T_SAMPLES - 1) as f64)
}

/// Bounding box of `F_j(t, v, w)` over all verification samples.
fn image_bounds(maps: &IfsMaps, rect: &Rect) -> Rect {
    let samples = rect.samples();
    let mut out: Option<Rect> = None;
    for t in t_samples(maps) {
        for m in maps.maps() {
            for &[v, w] in &samples {
                let [fv, fw] = m.eval(t, v, w);
                match &mut out {
                    Some(r) => r.include(fv, fw),
                    None => out = Some(Rect::point(fv, fw)),
                }
            }
        }
    }
    out.expect("at least one map and sample")
}

/// Checks `F_j(t, v, w) in rect` on the verification samples.
pub fn check_invariance(maps: &IfsMaps, rect: &Rect) -> Result<()> {
    let image = image_bounds(maps, rect);
    if rect.contains_rect(&image) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "rectangle {rect:?} is not invariant: image spans {image:?}"
        )))
    }
}

/// Finds a rectangle `K` with `F_j(I x K) in K` on the verification samples.
///
/// Starts from the bounding box of the data and the shift images
/// `(p_j(t), q_j(t))`; each failed attempt absorbs the observed image and
/// inflates the half-widths by `margin_growth`.
pub fn compute_invariant_rect(maps: &IfsMaps, margin_growth: f64) -> Result<RectSearch> {
    if !(margin_growth.is_finite() && margin_growth > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "margin growth must exceed 1, got {margin_growth}"
        )));
    }
    let data = maps.data();
    let mut rect = Rect::point(data.v()[0], data.w()[0]);
    for (&v, &w) in data.v().iter().zip(data.w()) {
        rect.include(v, w);
    }
    for t in t_samples(maps) {
        for m in maps.maps() {
            rect.include(m.q[0].eval(t), m.q[1].eval(t));
        }
    }
    for attempt in 1..=MAX_ATTEMPTS {
        let image = image_bounds(maps, &rect);
        if !image.v_lo.is_finite() || !image.w_lo.is_finite() || !image.v_hi.is_finite() || !image.w_hi.is_finite() {
            break;
        }
        if rect.contains_rect(&image) {
            return Ok(RectSearch {
                rect,
                attempts: attempt,
            });
        }
        rect = rect.union(&image).inflate(margin_growth);
    }
    Err(Error::NoInvariantRect {
        attempts: MAX_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{Contraction, DataSet, IntervalParams};
    use alloc::vec;

    fn maps_with(data: DataSet, p: IntervalParams) -> IfsMaps {
        let n = data.intervals();
        IfsMaps::assemble(data, &vec![p; n]).unwrap()
    }

    fn tri() -> DataSet {
        DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0], vec![0.0, -1.0, 0.0]).unwrap()
    }

    #[test]
    fn zero_contraction_passes_in_one_attempt() {
        let maps = maps_with(
            tri(),
            IntervalParams::constant(0.5, 0.2, 0.2, 0.5, Contraction::ZERO, Contraction::ZERO),
        );
        let found = compute_invariant_rect(&maps, DEFAULT_MARGIN_GROWTH).unwrap();
        assert_eq!(found.attempts, 1);
        assert_eq!(
            found.rect,
            Rect {
                v_lo: 0.0,
                v_hi: 1.0,
                w_lo: -1.0,
                w_hi: 0.0
            }
        );
    }

    #[test]
    fn bounded_contractions_pass_with_closed_form_margin() {
        let rational = Contraction::BoundedRational { scale: 1.0 };
        let maps = maps_with(tri(), IntervalParams::constant(0.5, 0.2, 0.2, 0.5, rational, rational));
        let (lo, hi) = maps.data().domain();
        let m = 1.0
            + maps
                .maps()
                .iter()
                .map(|f| f.q[0].sup_norm(lo, hi) + f.q[1].sup_norm(lo, hi))
                .fold(0.0, f64::max);
        let data = maps.data();
        let all = data.v().iter().chain(data.w());
        let min = all.clone().copied().fold(f64::INFINITY, f64::min);
        let max = all.copied().fold(f64::NEG_INFINITY, f64::max);
        let rect = Rect {
            v_lo: min - m,
            v_hi: max + m,
            w_lo: min - m,
            w_hi: max + m,
        };
        check_invariance(&maps, &rect).unwrap();
        let found = compute_invariant_rect(&maps, DEFAULT_MARGIN_GROWTH).unwrap();
        check_invariance(&maps, &found.rect).unwrap();
    }

    #[test]
    fn near_isometric_linear_needs_several_growths() {
        let data = DataSet::new(
            vec![0.0, 1.0, 2.0, 3.0],
            vec![-40.0, 25.0, -10.0, 60.0],
            vec![30.0, -50.0, 5.0, 0.0],
        )
        .unwrap();
        let k = Contraction::Linear { k: 0.99 };
        let maps = maps_with(data, IntervalParams::constant(0.6, 0.3, 0.3, 0.6, k, k));
        let found = compute_invariant_rect(&maps, DEFAULT_MARGIN_GROWTH).unwrap();
        assert!(found.attempts > 2, "attempts = {}", found.attempts);
        check_invariance(&maps, &found.rect).unwrap();
    }

    #[test]
    fn identity_with_unit_row_sums_finds_no_rectangle() {
        let id = Contraction::Linear { k: 1.0 };
        // F_j = (v + c_v, w + c_w) is a pure translation for nonconstant data
        let data = DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 3.0], vec![0.0, 0.0, 0.0]).unwrap();
        let maps = maps_with(data, IntervalParams::constant(1.0, 0.0, 0.0, 1.0, id, id));
        assert_eq!(
            compute_invariant_rect(&maps, DEFAULT_MARGIN_GROWTH),
            Err(Error::NoInvariantRect { attempts: 40 })
        );
    }

    #[test]
    fn growth_must_exceed_one() {
        let maps = maps_with(
            tri(),
            IntervalParams::constant(0.5, 0.2, 0.2, 0.5, Contraction::ZERO, Contraction::ZERO),
        );
        assert!(compute_invariant_rect(&maps, 1.0).is_err());
    }
}
