//! Attractor of `{I x K; g_j}` rebuilt without the fixed-point solver.

mod kdtree;

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use kdtree::KdTree;

use crate::interp::HiddenIfs;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud<const D: usize> {
    pub points: Vec<[f64; D]>,
}

/// Points `(t, v, w)`.
pub type PointCloud3 = PointCloud<3>;
/// Points `(t, y)` of a projected graph.
pub type PointCloud2 = PointCloud<2>;

impl<const D: usize> PointCloud<D> {
    pub fn new(points: Vec<[f64; D]>) -> Self {
        PointCloud { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl PointCloud3 {
    /// The data triples, which lie on the attractor.
    pub fn seed(ifs: &HiddenIfs) -> Self {
        let data = ifs.data();
        PointCloud::new((0..=data.intervals()).map(|j| data.point(j)).collect())
    }
}

/// Keeps `cap` points at evenly spaced indices.
fn decimate<T: Copy>(points: Vec<T>, cap: usize) -> Vec<T> {
    if cap == 0 || points.len() <= cap {
        return points;
    }
    let n = points.len();
    (0..cap).map(|i| points[i * n / cap]).collect()
}

/// `cloud -> union_j g_j(cloud)`, stride-decimated to at most `cap` points
/// (`cap = 0` disables decimation).
pub fn hutchinson_step(ifs: &HiddenIfs, cloud: &PointCloud3, cap: usize) -> PointCloud3 {
    let maps = ifs.maps();
    let mut out = Vec::with_capacity(cloud.len() * maps.intervals());
    for j in 0..maps.intervals() {
        out.extend(cloud.points.iter().map(|&p| maps.g_unchecked(j, p)));
    }
    PointCloud::new(decimate(out, cap))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HutchinsonRun {
    pub cloud: PointCloud3,
    /// Hausdorff distance between consecutive clouds, one entry per step.
    pub displacements: Vec<f64>,
}

impl HutchinsonRun {
    pub fn final_displacement(&self) -> f64 {
        self.displacements.last().copied().unwrap_or(0.0)
    }
}

/// `depth` Hutchinson steps from the data triples.
pub fn iterate_hutchinson(ifs: &HiddenIfs, depth: usize, cap: usize) -> HutchinsonRun {
    let mut cloud = PointCloud3::seed(ifs);
    let mut displacements = Vec::with_capacity(depth);
    for _ in 0..depth {
        let next = hutchinson_step(ifs, &cloud, cap);
        displacements.push(hausdorff(&cloud, &next).expect("clouds are non-empty"));
        cloud = next;
    }
    HutchinsonRun {
        cloud,
        displacements,
    }
}

/// Random orbit `x_{k+1} = g_{j_k}(x_k)` with uniform `j_k`, started at the
/// first data triple. Runs `n_points` steps and keeps those after `burn_in`.
///
/// The data triples lie on the attractor and lead the returned cloud, so it
/// holds `N + 1 + n_points - burn_in` points.
pub fn chaos_game(ifs: &HiddenIfs, n_points: usize, burn_in: usize, seed: u64) -> Result<PointCloud3> {
    if n_points <= burn_in {
        return Err(Error::InvalidParameter(format!(
            "chaos game needs n_points > burn_in ({n_points} <= {burn_in})"
        )));
    }
    let maps = ifs.maps();
    let n = maps.intervals();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = ifs.data().first();
    let mut points = PointCloud3::seed(ifs).points;
    points.reserve(n_points - burn_in);
    for k in 0..n_points {
        x = maps.g_unchecked(rng.random_range(0..n), x);
        if k >= burn_in {
            points.push(x);
        }
    }
    Ok(PointCloud::new(points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

/// Drops `w` (first component, keeps `(t, v)`) or `v` (second, keeps `(t, w)`).
pub fn project_graph(cloud: &PointCloud3, component: Component) -> PointCloud2 {
    let k = match component {
        Component::First => 1,
        Component::Second => 2,
    };
    PointCloud::new(cloud.points.iter().map(|p| [p[0], p[k]]).collect())
}

/// `max_{a} min_{b} |a - b|` with Euclidean ground metric.
pub fn directed_hausdorff<const D: usize>(from: &PointCloud<D>, to: &KdTree<D>) -> f64 {
    let d2 = from
        .points
        .iter()
        .map(|p| to.nearest_sq(p))
        .fold(0.0, f64::max);
    libm::sqrt(d2)
}

pub fn hausdorff<const D: usize>(a: &PointCloud<D>, b: &PointCloud<D>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let (ta, tb) = (KdTree::new(&a.points), KdTree::new(&b.points));
    Ok(directed_hausdorff(a, &tb).max(directed_hausdorff(b, &ta)))
}
