//! Clustering from point coordinates instead of a stored matrix.
//!
//! Single linkage computes distances on the fly during the spanning tree
//! walk. Ward, centroid and median linkage work with cluster centers: the
//! generic variant gives every merged cluster a fresh slot that ranks before
//! all existing ones, and Ward's method can also run through the
//! nearest-neighbor chain.

use std::fmt;
use std::sync::Arc;

use crate::active::ActiveList;
use crate::condensed::CondensedMatrix;
use crate::dendrogram::{Step, StepwiseDendrogram, UnsortedDendrogram};
use crate::linkage::{Algorithm, LinkageStats};
use crate::method::Method;
use crate::mst::mst_core_by;
use crate::nnchain::{run_chain, ChainSpace};
use crate::postprocess;
use crate::queue::MinPriorityQueue;
use crate::{Error, Result};

/// `n` points in `dim` dimensions, stored row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorDataset {
    n: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl VectorDataset {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<VectorDataset> {
        if dim == 0 {
            return Err(Error::InvalidArgument("points need at least one coordinate".into()));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates do not form a nonempty set of {}-dimensional points",
                coords.len(),
                dim
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidData(format!(
                "coordinate {} of point {} is not finite",
                pos % dim,
                pos / dim
            )));
        }
        Ok(VectorDataset {
            n: coords.len() / dim,
            dim,
            coords,
        })
    }

    /// Builds a dataset from equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<VectorDataset> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(p) = rows.iter().position(|r| r.as_ref().len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "point {} has {} coordinates, expected {}",
                p,
                rows[p].as_ref().len(),
                dim
            )));
        }
        VectorDataset::new(dim, rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

type MetricFn = dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync;

/// Dissimilarity between two points.
#[derive(Clone)]
pub enum Metric {
    Euclidean,
    SquaredEuclidean,
    Custom(Arc<MetricFn>),
}

impl Metric {
    pub fn custom<F>(f: F) -> Metric
    where
        F: Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static,
    {
        Metric::Custom(Arc::new(f))
    }

    /// Evaluates the metric and rejects negative or non-finite results.
    pub fn eval(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        let v = match self {
            Metric::Euclidean => squared_distance(p, q).sqrt(),
            Metric::SquaredEuclidean => squared_distance(p, q),
            Metric::Custom(f) => f(p, q),
        };
        if v.is_finite() && v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidData(format!(
                "metric returned {}; dissimilarities must be finite and nonnegative",
                v
            )))
        }
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Euclidean => f.write_str("Euclidean"),
            Metric::SquaredEuclidean => f.write_str("SquaredEuclidean"),
            Metric::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

#[inline]
fn squared_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// The full condensed matrix of `metric` over the points of `ds`.
pub fn pairwise_dissimilarity(ds: &VectorDataset, metric: &Metric) -> Result<CondensedMatrix> {
    let n = ds.n();
    let mut values = Vec::with_capacity(crate::condensed_len(n));
    for i in 0..n {
        for j in i + 1..n {
            values.push(metric.eval(ds.point(i), ds.point(j))?);
        }
    }
    CondensedMatrix::new(n, values)
}

/// Single linkage of the points under `metric`, without storing the
/// distance matrix.
pub fn mst_linkage_vectors(ds: &VectorDataset, metric: &Metric) -> Result<StepwiseDendrogram> {
    Ok(mst_linkage_vectors_with_stats(ds, metric)?.0)
}

pub fn mst_linkage_vectors_with_stats(
    ds: &VectorDataset,
    metric: &Metric,
) -> Result<(StepwiseDendrogram, LinkageStats)> {
    let mut stats = LinkageStats::default();
    let merges = mst_core_by(ds.n(), 0, |i, j| metric.eval(ds.point(i), ds.point(j)), &mut stats)?;
    Ok((postprocess::finish(UnsortedDendrogram::new(ds.n(), merges))?, stats))
}

/// Cluster centers and sizes, indexed by slot.
struct Centers {
    dim: usize,
    method: Method,
    coords: Vec<f64>,
    size: Vec<f64>,
}

impl Centers {
    fn new(ds: &VectorDataset, method: Method, capacity: usize) -> Centers {
        let mut coords = vec![0.0; capacity * ds.dim()];
        coords[..ds.coords().len()].copy_from_slice(ds.coords());
        let mut size = vec![0.0; capacity];
        size[..ds.n()].fill(1.0);
        Centers {
            dim: ds.dim(),
            method,
            coords,
            size,
        }
    }

    fn center(&self, x: usize) -> &[f64] {
        &self.coords[x * self.dim..(x + 1) * self.dim]
    }

    /// Squared center distance, scaled for Ward's criterion.
    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        let sq = squared_distance(self.center(a), self.center(b));
        match self.method {
            Method::Ward => {
                let (sa, sb) = (self.size[a], self.size[b]);
                2.0 * sa * sb / (sa + sb) * sq
            }
            _ => sq,
        }
    }

    /// Writes the center of `a ∪ b` into slot `target`.
    fn combine(&mut self, a: usize, b: usize, target: usize) {
        let (sa, sb) = (self.size[a], self.size[b]);
        let (wa, wb) = match self.method {
            Method::Median => (0.5, 0.5),
            _ => (sa / (sa + sb), sb / (sa + sb)),
        };
        for k in 0..self.dim {
            let v = wa * self.coords[a * self.dim + k] + wb * self.coords[b * self.dim + k];
            self.coords[target * self.dim + k] = v;
        }
        self.size[target] = sa + sb;
    }
}

fn check_geometric(method: Method) -> Result<()> {
    Algorithm::GenericVariant.supports(method)
}

/// Ward, centroid or median linkage of Euclidean points, computed from
/// cluster centers with the generic variant.
pub fn generic_linkage_variant(ds: &VectorDataset, method: Method) -> Result<StepwiseDendrogram> {
    Ok(generic_linkage_variant_with_stats(ds, method)?.0)
}

pub fn generic_linkage_variant_with_stats(
    ds: &VectorDataset,
    method: Method,
) -> Result<(StepwiseDendrogram, LinkageStats)> {
    check_geometric(method)?;
    Ok(variant(ds, method, |_, _| {}))
}

/// Slot `x`'s nearest successor in list order, first in list order on ties.
fn nearest_after(centers: &Centers, active: &ActiveList, x: usize, scanned: &mut u64) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for y in active.after(x) {
        *scanned += 1;
        let v = centers.dist(x, y);
        if best.is_none_or(|(_, m)| v < m) {
            best = Some((y, v));
        }
    }
    best
}

/// Slots are SciPy labels: points `0..n`, merge `i` creates slot `n + i`.
/// `on_merge` sees each new slot with its center.
fn variant<F>(ds: &VectorDataset, method: Method, mut on_merge: F) -> (StepwiseDendrogram, LinkageStats)
where
    F: FnMut(usize, &[f64]),
{
    let n = ds.n();
    let capacity = 2 * n - 1;
    let mut stats = LinkageStats::default();
    let mut centers = Centers::new(ds, method, capacity);
    let mut active = ActiveList::with_capacity(n, capacity);
    let mut queue = MinPriorityQueue::with_capacity(capacity);
    let mut nnghbr = vec![0usize; capacity];
    let mut mindist = vec![f64::INFINITY; capacity];
    for x in 0..n.saturating_sub(1) {
        let (y, v) = nearest_after(&centers, &active, x, &mut stats.scanned).expect("x is not last");
        nnghbr[x] = y;
        mindist[x] = v;
        queue.insert(x, v).expect("fresh slot");
    }
    let mut steps = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        // Distances between live clusters never change, so a candidate is
        // stale exactly when it has been merged away.
        let (a, b) = loop {
            let a = queue.argmin().expect("some live cluster has a successor");
            let b = nnghbr[a];
            if active.contains(b) {
                break (a, b);
            }
            stats.recalculations += 1;
            match nearest_after(&centers, &active, a, &mut stats.scanned) {
                Some((y, v)) => {
                    nnghbr[a] = y;
                    mindist[a] = v;
                    queue.set(a, v);
                }
                None => {
                    queue.remove_min();
                }
            }
        };
        let delta = mindist[a];
        queue.remove_min();
        if queue.contains(b) {
            queue.remove(b).expect("queued");
        }
        steps.push(Step::new(a as i64, b as i64, delta.sqrt()));

        let new = n + i;
        centers.combine(a, b, new);
        on_merge(new, centers.center(new));
        active.remove(a);
        active.remove(b);
        active.push_front(new);
        if active.len() > 1 {
            let (y, v) = nearest_after(&centers, &active, new, &mut stats.scanned).expect("new slot is first");
            nnghbr[new] = y;
            mindist[new] = v;
            queue.insert(new, v).expect("fresh slot");
        }
    }
    (StepwiseDendrogram::from_scipy_unchecked(n, steps), stats)
}

struct WardSpace(Centers);

impl ChainSpace for WardSpace {
    fn len(&self) -> usize {
        self.0.size.len()
    }

    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.0.dist(a, b)
    }

    fn merge(&mut self, a: usize, b: usize, keep: usize, _active: &ActiveList) {
        self.0.combine(a, b, keep);
    }

    fn to_external(&self, d: f64) -> f64 {
        d.sqrt()
    }
}

/// Ward linkage of Euclidean points with the nearest-neighbor chain over
/// cluster centroids.
pub fn nn_chain_ward_vectors(ds: &VectorDataset) -> Result<StepwiseDendrogram> {
    Ok(nn_chain_ward_vectors_with_stats(ds)?.0)
}

pub fn nn_chain_ward_vectors_with_stats(ds: &VectorDataset) -> Result<(StepwiseDendrogram, LinkageStats)> {
    let mut space = WardSpace(Centers::new(ds, Method::Ward, ds.n()));
    let (unsorted, stats) = run_chain(&mut space, |_| {});
    Ok((postprocess::finish(unsorted)?, stats))
}
