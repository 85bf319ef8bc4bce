use alloc::vec::Vec;

const LEAF: usize = 8;

/// Static k-d tree over `[f64; D]` points, laid out implicitly by median
/// splits on `depth % D`.
#[derive(Debug, Clone)]
pub struct KdTree<const D: usize> {
    points: Vec<[f64; D]>,
}

impl<const D: usize> KdTree<D> {
    pub fn new(points: &[[f64; D]]) -> Self {
        let mut points = points.to_vec();
        build(&mut points, 0);
        KdTree { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Squared Euclidean distance to the nearest stored point
    /// (`f64::INFINITY` when empty).
    pub fn nearest_sq(&self, q: &[f64; D]) -> f64 {
        let mut best = f64::INFINITY;
        search(&self.points, q, 0, &mut best);
        best
    }
}

fn build<const D: usize>(pts: &mut [[f64; D]], depth: usize) {
    if pts.len() <= LEAF {
        return;
    }
    let dim = depth % D;
    let mid = pts.len() / 2;
    pts.select_nth_unstable_by(mid, |a, b| a[dim].total_cmp(&b[dim]));
    let (left, right) = pts.split_at_mut(mid);
    build(left, depth + 1);
    build(&mut right[1..], depth + 1);
}

fn search<const D: usize>(pts: &[[f64; D]], q: &[f64; D], depth: usize, best: &mut f64) {
    if pts.len() <= LEAF {
        for p in pts {
            *best = best.min(dist_sq(p, q));
        }
        return;
    }
    let dim = depth % D;
    let mid = pts.len() / 2;
    let pivot = &pts[mid];
    *best = best.min(dist_sq(pivot, q));
    let diff = q[dim] - pivot[dim];
    let (near, far) = if diff < 0.0 {
        (&pts[..mid], &pts[mid + 1..])
    } else {
        (&pts[mid + 1..], &pts[..mid])
    };
    search(near, q, depth + 1, best);
    if diff * diff < *best {
        search(far, q, depth + 1, best);
    }
}

#[inline]
pub(crate) fn dist_sq<const D: usize>(a: &[f64; D], b: &[f64; D]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
