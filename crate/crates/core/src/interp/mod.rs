//! Assembly and validation of the hidden-variable IFS `{I x K; g_j}`.
//!
//! Interval indices are 0-based in the API (`j = 0` is the first interval
//! `[t_0, t_1]`); human-facing reports number intervals from 1.

mod contraction;
mod edelstein;
mod rect;
mod scalar;

use alloc::format;
use alloc::vec::Vec;

pub use contraction::Contraction;
pub use edelstein::{verify_edelstein, EdelsteinReport, EdelsteinWitness};
pub use rect::{check_invariance, compute_invariant_rect, Rect, RectSearch, DEFAULT_MARGIN_GROWTH};
pub use scalar::ScalarFn;

use crate::{Error, Result, STRUCTURAL_TOL};

/// Generalized data set `{(t_j, v_j, w_j)}`, `j = 0..=N`, with strictly
/// increasing abscissae and `N >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSet {
    t: Vec<f64>,
    v: Vec<f64>,
    w: Vec<f64>,
}

impl DataSet {
    pub fn new(t: Vec<f64>, v: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        if t.len() != v.len() || t.len() != w.len() {
            return Err(Error::InvalidData(format!(
                "t, v, w lengths differ ({}, {}, {})",
                t.len(),
                v.len(),
                w.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::InvalidData(format!(
                "need at least 3 points, got {}",
                t.len()
            )));
        }
        if t.iter().chain(&v).chain(&w).any(|x| !x.is_finite()) {
            return Err(Error::InvalidData("non-finite value".into()));
        }
        if let Some(k) = t.windows(2).position(|p| p[0] >= p[1]) {
            return Err(Error::InvalidData(format!(
                "abscissae not strictly increasing at index {}: {} >= {}",
                k + 1,
                t[k],
                t[k + 1]
            )));
        }
        if t.len() == 2 {
            return Err(Error::NonContractiveIntervalMap { intervals: 1 });
        }
        Ok(DataSet { t, v, w })
    }

    /// Number of intervals `N`.
    pub fn intervals(&self) -> usize {
        self.t.len() - 1
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn point(&self, j: usize) -> [f64; 3] {
        [self.t[j], self.v[j], self.w[j]]
    }

    pub fn first(&self) -> [f64; 3] {
        self.point(0)
    }

    pub fn last(&self) -> [f64; 3] {
        self.point(self.intervals())
    }

    /// `(t_0, t_N)`.
    pub fn domain(&self) -> (f64, f64) {
        (self.t[0], self.t[self.intervals()])
    }
}

/// `L_j(t) = a t + f`, mapping `I` onto `I_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalMap {
    pub a: f64,
    pub f: f64,
}

impl IntervalMap {
    #[inline]
    pub fn apply(&self, t: f64) -> f64 {
        self.a * t + self.f
    }

    #[inline]
    pub fn inverse(&self, t: f64) -> f64 {
        (t - self.f) / self.a
    }
}

pub fn derive_interval_maps(data: &DataSet) -> Vec<IntervalMap> {
    let t = data.t();
    let (t0, tn) = data.domain();
    t.windows(2)
        .map(|p| {
            let a = (p[1] - p[0]) / (tn - t0);
            IntervalMap { a, f: p[0] - a * t0 }
        })
        .collect()
}

/// The 2x2 matrix function `D_j(t) = [[b, c], [d, e]]`.
pub type MatrixFn = [[ScalarFn; 2]; 2];

/// User-chosen ingredients of `F_j`; the shift pair `Q_j` is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalParams {
    pub b: ScalarFn,
    pub c: ScalarFn,
    pub d: ScalarFn,
    pub e: ScalarFn,
    pub s: Contraction,
    pub r: Contraction,
}

impl IntervalParams {
    pub fn matrix(&self) -> MatrixFn {
        [[self.b, self.c], [self.d, self.e]]
    }

    /// Constant `D` with the given entries.
    pub fn constant(b: f64, c: f64, d: f64, e: f64, s: Contraction, r: Contraction) -> Self {
        IntervalParams {
            b: ScalarFn::Constant(b),
            c: ScalarFn::Constant(c),
            d: ScalarFn::Constant(d),
            e: ScalarFn::Constant(e),
            s,
            r,
        }
    }
}

/// `F_j(t, v, w) = D_j(t) S_j(v, w) + Q_j(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapF {
    pub d: MatrixFn,
    pub s: [Contraction; 2],
    pub q: [ScalarFn; 2],
}

impl MapF {
    #[inline]
    pub fn eval(&self, t: f64, v: f64, w: f64) -> [f64; 2] {
        let sv = self.s[0].eval(v);
        let rw = self.s[1].eval(w);
        let [[b, c], [d, e]] = &self.d;
        [
            b.eval(t) * sv + c.eval(t) * rw + self.q[0].eval(t),
            d.eval(t) * sv + e.eval(t) * rw + self.q[1].eval(t),
        ]
    }
}

/// Affine `(p_j, q_j)` fixed by the join-up conditions
/// `F_j(t_0, v_0, w_0) = (v_{j-1}, w_{j-1})` and `F_j(t_N, v_N, w_N) = (v_j, w_j)`.
pub fn derive_shift_functions(
    data: &DataSet,
    params: &[IntervalParams],
) -> Result<Vec<[ScalarFn; 2]>> {
    check_param_count(data, params)?;
    let [t0, v0, w0] = data.first();
    let [tn, vn, wn] = data.last();
    Ok(params
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let (s0, r0) = (p.s.eval(v0), p.r.eval(w0));
            let (sn, rn) = (p.s.eval(vn), p.r.eval(wn));
            let p_left = data.v[j] - p.b.eval(t0) * s0 - p.c.eval(t0) * r0;
            let p_right = data.v[j + 1] - p.b.eval(tn) * sn - p.c.eval(tn) * rn;
            let q_left = data.w[j] - p.d.eval(t0) * s0 - p.e.eval(t0) * r0;
            let q_right = data.w[j + 1] - p.d.eval(tn) * sn - p.e.eval(tn) * rn;
            [
                ScalarFn::affine_through(t0, p_left, tn, p_right),
                ScalarFn::affine_through(t0, q_left, tn, q_right),
            ]
        })
        .collect())
}

fn check_param_count(data: &DataSet, params: &[IntervalParams]) -> Result<()> {
    if params.len() != data.intervals() {
        return Err(Error::InvalidParameter(format!(
            "{} parameter blocks for {} intervals",
            params.len(),
            data.intervals()
        )));
    }
    if let Some(j) = params
        .iter()
        .position(|p| ![p.b, p.c, p.d, p.e].iter().all(ScalarFn::is_finite))
    {
        return Err(Error::InvalidParameter(format!(
            "non-finite D entry on interval {}",
            j + 1
        )));
    }
    Ok(())
}

/// Column sums `||b||+||d||` and `||c||+||e||` for each interval.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub column_sums: Vec<[f64; 2]>,
}

impl NormReport {
    pub fn passes(&self) -> bool {
        self.first_violation().is_none()
    }

    /// First offending `(interval, column, sum)`, interval numbered from 1.
    pub fn first_violation(&self) -> Option<(usize, &'static str, f64)> {
        self.column_sums.iter().enumerate().find_map(|(j, sums)| {
            sums.iter()
                .zip(["first", "second"])
                .find(|(s, _)| **s > 1.0 + STRUCTURAL_TOL)
                .map(|(s, col)| (j + 1, col, *s))
        })
    }

    pub fn check(&self) -> Result<()> {
        match self.first_violation() {
            None => Ok(()),
            Some((interval, column, sum)) => Err(Error::NormCondition {
                interval,
                column,
                sum,
            }),
        }
    }
}

/// Evaluates `||b_j||+||d_j|| <= 1` and `||c_j||+||e_j|| <= 1` with exact
/// sup-norms over `[lo, hi]`.
pub fn validate_norm_conditions(d: &[MatrixFn], lo: f64, hi: f64) -> NormReport {
    NormReport {
        column_sums: d
            .iter()
            .map(|[[b, c], [dd, e]]| {
                [
                    b.sup_norm(lo, hi) + dd.sup_norm(lo, hi),
                    c.sup_norm(lo, hi) + e.sup_norm(lo, hi),
                ]
            })
            .collect(),
    }
}

/// The maps `L_j`, `F_j` before an invariant rectangle is attached.
#[derive(Debug, Clone, PartialEq)]
pub struct IfsMaps {
    data: DataSet,
    interval_maps: Vec<IntervalMap>,
    maps: Vec<MapF>,
}

impl IfsMaps {
    pub fn assemble(data: DataSet, params: &[IntervalParams]) -> Result<Self> {
        let shifts = derive_shift_functions(&data, params)?;
        let maps = params
            .iter()
            .zip(shifts)
            .map(|(p, q)| MapF {
                d: p.matrix(),
                s: [p.s, p.r],
                q,
            })
            .collect();
        Ok(IfsMaps {
            interval_maps: derive_interval_maps(&data),
            data,
            maps,
        })
    }

    pub fn data(&self) -> &DataSet {
        &self.data
    }

    pub fn intervals(&self) -> usize {
        self.maps.len()
    }

    pub fn interval_maps(&self) -> &[IntervalMap] {
        &self.interval_maps
    }

    pub fn maps(&self) -> &[MapF] {
        &self.maps
    }

    pub fn matrices(&self) -> Vec<MatrixFn> {
        self.maps.iter().map(|m| m.d).collect()
    }

    pub fn norm_report(&self) -> NormReport {
        let (lo, hi) = self.data.domain();
        validate_norm_conditions(&self.matrices(), lo, hi)
    }

    /// Catalog parameter checks for every `s_j`, `r_j`.
    pub fn check_contractions(&self) -> Result<()> {
        for (j, m) in self.maps.iter().enumerate() {
            for (c, name) in m.s.iter().zip(["s", "r"]) {
                c.check().map_err(|e| match e {
                    Error::NotEdelstein(msg) => {
                        Error::NotEdelstein(format!("{name}_{}: {msg}", j + 1))
                    }
                    other => other,
                })?;
            }
        }
        Ok(())
    }

    fn map(&self, j: usize) -> Result<&MapF> {
        self.maps.get(j).ok_or(Error::IndexOutOfRange {
            index: j,
            intervals: self.maps.len(),
        })
    }

    pub fn eval_f(&self, j: usize, t: f64, v: f64, w: f64) -> Result<[f64; 2]> {
        Ok(self.map(j)?.eval(t, v, w))
    }

    /// `g_j(t, v, w) = (L_j(t), F_j(t, v, w))`.
    pub fn eval_g(&self, j: usize, t: f64, v: f64, w: f64) -> Result<[f64; 3]> {
        let [fv, fw] = self.eval_f(j, t, v, w)?;
        Ok([self.interval_maps[j].apply(t), fv, fw])
    }

    #[inline]
    pub(crate) fn g_unchecked(&self, j: usize, p: [f64; 3]) -> [f64; 3] {
        let [fv, fw] = self.maps[j].eval(p[0], p[1], p[2]);
        [self.interval_maps[j].apply(p[0]), fv, fw]
    }
}

/// The assembled system `{I x K; g_j}` with a verified invariant rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenIfs {
    maps: IfsMaps,
    rect: Rect,
}

impl HiddenIfs {
    /// Attaches `rect` after checking invariance on the sample lattice.
    pub fn new(maps: IfsMaps, rect: Rect) -> Result<Self> {
        check_invariance(&maps, &rect)?;
        Ok(HiddenIfs { maps, rect })
    }

    /// Full build: catalog and norm checks, shift derivation and the
    /// invariant rectangle search.
    pub fn assemble(data: DataSet, params: &[IntervalParams]) -> Result<Self> {
        let maps = IfsMaps::assemble(data, params)?;
        maps.check_contractions()?;
        maps.norm_report().check()?;
        let search = compute_invariant_rect(&maps, DEFAULT_MARGIN_GROWTH)?;
        Ok(HiddenIfs {
            maps,
            rect: search.rect,
        })
    }

    pub fn maps(&self) -> &IfsMaps {
        &self.maps
    }

    pub fn data(&self) -> &DataSet {
        &self.maps.data
    }

    pub fn intervals(&self) -> usize {
        self.maps.intervals()
    }

    pub fn interval_maps(&self) -> &[IntervalMap] {
        &self.maps.interval_maps
    }

    pub fn rect(&self) -> &Rect {
        &self.rect
    }

    pub fn eval_f(&self, j: usize, t: f64, v: f64, w: f64) -> Result<[f64; 2]> {
        self.maps.eval_f(j, t, v, w)
    }

    pub fn eval_g(&self, j: usize, t: f64, v: f64, w: f64) -> Result<[f64; 3]> {
        self.maps.eval_g(j, t, v, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= STRUCTURAL_TOL
    }

    pub(crate) fn tri_data() -> DataSet {
        DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.0], vec![0.0, -1.0, 0.0]).unwrap()
    }

    fn rational() -> Contraction {
        Contraction::BoundedRational { scale: 1.0 }
    }

    #[test]
    fn interval_maps_for_uniform_knots() {
        let maps = derive_interval_maps(&tri_data());
        assert_eq!(maps[0], IntervalMap { a: 0.5, f: 0.0 });
        assert_eq!(maps[1], IntervalMap { a: 0.5, f: 0.5 });
    }

    #[test]
    fn interval_maps_for_nonuniform_knots() {
        let data = DataSet::new(vec![1.0, 2.0, 4.0], vec![0.0; 3], vec![0.0; 3]).unwrap();
        let maps = derive_interval_maps(&data);
        assert!(close(maps[0].a, 1.0 / 3.0));
        assert!(close(maps[0].f, 2.0 / 3.0));
        assert!(close(maps[0].apply(4.0), 2.0));
        for (j, m) in maps.iter().enumerate() {
            assert!(close(m.apply(1.0), data.t()[j]));
            assert!(close(m.apply(4.0), data.t()[j + 1]));
            assert!(m.a.abs() < 1.0);
        }
    }

    #[test]
    fn single_interval_is_rejected() {
        let err = DataSet::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2]).unwrap_err();
        assert_eq!(err, Error::NonContractiveIntervalMap { intervals: 1 });
    }

    #[test]
    fn malformed_data_is_rejected() {
        assert!(DataSet::new(vec![0.0, 0.5, 0.5], vec![0.0; 3], vec![0.0; 3]).is_err());
        assert!(DataSet::new(vec![0.0, 0.7, 0.5], vec![0.0; 3], vec![0.0; 3]).is_err());
        assert!(DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0; 2], vec![0.0; 3]).is_err());
        assert!(DataSet::new(vec![0.0, 0.5, 1.0], vec![0.0, f64::NAN, 0.0], vec![0.0; 3]).is_err());
    }

    #[test]
    fn shift_functions_by_hand() {
        let p = IntervalParams::constant(0.5, 0.0, 0.0, 0.5, rational(), rational());
        let q = derive_shift_functions(&tri_data(), &[p, p]).unwrap();
        let [p1, q1] = q[0];
        assert!(close(p1.eval(0.0), 0.0));
        assert!(close(p1.eval(1.0), 1.0));
        assert!(close(p1.eval(0.3), 0.3));
        assert!(close(q1.eval(0.0), 0.0));
        assert!(close(q1.eval(1.0), -1.0));
    }

    #[test]
    fn shift_functions_without_scaling_interpolate_the_data() {
        let data = tri_data();
        let zero_d = IntervalParams::constant(0.0, 0.0, 0.0, 0.0, rational(), rational());
        let zero_s = IntervalParams::constant(0.5, 0.2, 0.2, 0.5, Contraction::ZERO, Contraction::ZERO);
        for params in [zero_d, zero_s] {
            let shifts = derive_shift_functions(&data, &[params, params]).unwrap();
            for (j, [p, q]) in shifts.iter().enumerate() {
                assert!(close(p.eval(0.0), data.v()[j]));
                assert!(close(p.eval(1.0), data.v()[j + 1]));
                assert!(close(q.eval(0.0), data.w()[j]));
                assert!(close(q.eval(1.0), data.w()[j + 1]));
            }
        }
    }

    #[test]
    fn norm_conditions() {
        let c = |x| ScalarFn::Constant(x);
        let ok: MatrixFn = [[c(0.5), c(0.0)], [c(0.0), c(0.5)]];
        let bad: MatrixFn = [[c(0.8), c(0.0)], [c(0.3), c(0.5)]];
        let edge: MatrixFn = [
            [
                ScalarFn::Affine {
                    slope: 0.4,
                    intercept: 0.0,
                },
                c(0.0),
            ],
            [c(0.6), c(0.0)],
        ];
        let r = validate_norm_conditions(&[ok, edge], 0.0, 1.0);
        assert!(r.passes());
        assert_eq!(r.column_sums[0][0], 0.5);
        assert!(close(r.column_sums[1][0], 1.0));

        let r = validate_norm_conditions(&[ok, bad], 0.0, 1.0);
        let (interval, column, sum) = r.first_violation().unwrap();
        assert_eq!((interval, column), (2, "first"));
        assert!((sum - 1.1).abs() < 1e-12);
        assert!(matches!(r.check(), Err(Error::NormCondition { interval: 2, .. })));
    }

    fn canonical_maps() -> IfsMaps {
        let p = IntervalParams::constant(0.5, 0.2, 0.2, 0.5, rational(), rational());
        IfsMaps::assemble(tri_data(), &[p, p]).unwrap()
    }

    #[test]
    fn eval_f_reproduces_data_at_the_ends() {
        let p = IntervalParams::constant(0.5, 0.0, 0.0, 0.5, rational(), rational());
        let maps = IfsMaps::assemble(tri_data(), &[p, p]).unwrap();
        let [a, b] = maps.eval_f(0, 1.0, 0.0, 0.0).unwrap();
        assert!(close(a, 1.0) && close(b, -1.0));

        let maps = canonical_maps();
        let data = maps.data().clone();
        let [t0, v0, w0] = data.first();
        let [tn, vn, wn] = data.last();
        for j in 0..maps.intervals() {
            let left = maps.eval_f(j, t0, v0, w0).unwrap();
            let right = maps.eval_f(j, tn, vn, wn).unwrap();
            assert!(close(left[0], data.v()[j]) && close(left[1], data.w()[j]));
            assert!(close(right[0], data.v()[j + 1]) && close(right[1], data.w()[j + 1]));
        }
        assert!(matches!(
            maps.eval_f(2, 0.0, 0.0, 0.0),
            Err(Error::IndexOutOfRange { index: 2, intervals: 2 })
        ));
    }

    #[test]
    fn zero_contraction_makes_f_the_shift() {
        let p = IntervalParams::constant(0.5, 0.2, 0.2, 0.5, Contraction::ZERO, Contraction::ZERO);
        let maps = IfsMaps::assemble(tri_data(), &[p, p]).unwrap();
        for (v, w) in [(3.0, -2.0), (0.0, 0.0), (-7.0, 1e3)] {
            let [a, b] = maps.eval_f(1, 0.25, v, w).unwrap();
            let [p2, q2] = maps.maps()[1].q;
            assert_eq!([a, b], [p2.eval(0.25), q2.eval(0.25)]);
        }
    }

    #[test]
    fn eval_g_fixes_anchors_and_maps_last_point_to_knots() {
        let maps = canonical_maps();
        let data = maps.data().clone();
        let [t0, v0, w0] = data.first();
        let [tn, vn, wn] = data.last();
        let g = maps.eval_g(0, t0, v0, w0).unwrap();
        assert!(g.iter().zip(data.first()).all(|(a, b)| close(*a, b)));
        let g = maps.eval_g(1, tn, vn, wn).unwrap();
        assert!(g.iter().zip(data.last()).all(|(a, b)| close(*a, b)));
        for j in 0..2 {
            let g = maps.eval_g(j, tn, vn, wn).unwrap();
            assert!(g.iter().zip(data.point(j + 1)).all(|(a, b)| close(*a, b)));
        }
    }

    #[test]
    fn hidden_ifs_assembles_canonical_and_rejects_bad_norms() {
        let ifs = HiddenIfs::assemble(
            tri_data(),
            &[IntervalParams::constant(0.5, 0.2, 0.2, 0.5, rational(), rational()); 2],
        )
        .unwrap();
        for j in 0..=2 {
            let [_, v, w] = ifs.data().point(j);
            assert!(ifs.rect().contains(v, w));
        }
        let err = HiddenIfs::assemble(
            tri_data(),
            &[IntervalParams::constant(0.8, 0.0, 0.3, 0.5, rational(), rational()); 2],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NormCondition { interval: 1, .. }));
        let err = HiddenIfs::assemble(
            tri_data(),
            &[IntervalParams::constant(0.5, 0.0, 0.5, 1.0, Contraction::Linear { k: 1.0 }, Contraction::Linear { k: 1.0 }); 2],
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotEdelstein(_)));
    }

    #[test]
    fn wrong_parameter_count_is_rejected() {
        let p = IntervalParams::constant(0.5, 0.2, 0.2, 0.5, rational(), rational());
        assert!(matches!(
            IfsMaps::assemble(tri_data(), &[p]),
            Err(Error::InvalidParameter(_))
        ));
    }
}
