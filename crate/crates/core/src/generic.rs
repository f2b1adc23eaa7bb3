//! The generic clustering algorithm: nearest-neighbor *candidates* with
//! lower bounds on their distances, kept in a priority queue, so that
//! neighbor searches are deferred until a stale bound reaches the front.
//!
//! Works with every update scheme, including those that produce
//! inversions.

use crate::active::ActiveList;
use crate::condensed::{CondensedMatrix, Working};
use crate::dendrogram::{Step, StepwiseDendrogram};
use crate::formulas::lance_williams;
use crate::linkage::LinkageStats;
use crate::method::Method;
use crate::queue::MinPriorityQueue;
use crate::Result;

/// Read-only view of the algorithm state at the top of a main-loop
/// iteration. Dissimilarities are on the internal scale (squared for the
/// geometric schemes).
pub struct Snapshot<'a> {
    d: &'a Working,
    active: &'a ActiveList,
    nnghbr: &'a [usize],
    mindist: &'a [f64],
    queue: &'a MinPriorityQueue,
}

impl Snapshot<'_> {
    /// Live cluster slots in increasing order.
    pub fn active(&self) -> Vec<usize> {
        self.active.iter().collect()
    }

    /// Current neighbor candidate of slot `x`.
    pub fn candidate(&self, x: usize) -> usize {
        self.nnghbr[x]
    }

    /// Current lower bound of slot `x`.
    pub fn bound(&self, x: usize) -> f64 {
        self.mindist[x]
    }

    /// Key of `x` in the priority queue, if queued.
    pub fn queued(&self, x: usize) -> Option<f64> {
        self.queue.key(x)
    }

    pub fn dissimilarity(&self, x: usize, y: usize) -> f64 {
        self.d.get(x, y)
    }
}

/// Clusters `d0` with the generic algorithm.
pub fn generic_linkage(d0: &CondensedMatrix, method: Method) -> Result<StepwiseDendrogram> {
    Ok(run(d0, method, |_| {}).0)
}

/// [`generic_linkage`] that also reports the work counters.
pub fn generic_linkage_with_stats(d0: &CondensedMatrix, method: Method) -> Result<(StepwiseDendrogram, LinkageStats)> {
    Ok(run(d0, method, |_| {}))
}

/// [`generic_linkage_with_stats`] calling `observer` at the top of every
/// main-loop iteration.
pub fn generic_linkage_observed<F>(
    d0: &CondensedMatrix,
    method: Method,
    observer: F,
) -> Result<(StepwiseDendrogram, LinkageStats)>
where
    F: FnMut(&Snapshot<'_>),
{
    Ok(run(d0, method, observer))
}

/// Nearest live slot after `x`, lowest index on ties.
#[inline]
fn nearest_after(d: &Working, active: &ActiveList, x: usize, scanned: &mut u64) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for y in active.after(x) {
        let v = d.upper(x, y);
        *scanned += 1;
        if v < best.1 || best.0 == usize::MAX {
            best = (y, v);
        }
    }
    best
}

fn run<F>(d0: &CondensedMatrix, method: Method, mut observer: F) -> (StepwiseDendrogram, LinkageStats)
where
    F: FnMut(&Snapshot<'_>),
{
    let n = d0.n();
    let mut stats = LinkageStats::default();
    if n == 1 {
        return (StepwiseDendrogram::empty(1), stats);
    }
    let mut d = Working::from_matrix(d0, method.uses_squared());
    let mut active = ActiveList::new(n);
    let mut size = vec![1.0; n];
    let mut label: Vec<usize> = (0..n).collect();
    let mut nnghbr = vec![0usize; n];
    let mut mindist = vec![f64::INFINITY; n];
    for x in 0..n - 1 {
        let (y, v) = nearest_after(&d, &active, x, &mut stats.scanned);
        nnghbr[x] = y;
        mindist[x] = v;
    }
    // The last slot is never the smaller of a merged pair, so it is never
    // queued.
    let mut queue = MinPriorityQueue::new(mindist[..n - 1].to_vec());
    let mut steps = Vec::with_capacity(n - 1);

    for i in 0..n - 1 {
        observer(&Snapshot {
            d: &d,
            active: &active,
            nnghbr: &nnghbr,
            mindist: &mindist,
            queue: &queue,
        });
        let mut a = queue.argmin().expect("queue holds a live slot");
        let mut b = nnghbr[a];
        let mut delta = mindist[a];
        // Exact comparison on purpose: bounds are copies of matrix entries.
        while delta != d.upper(a, b) {
            stats.recalculations += 1;
            let (y, v) = nearest_after(&d, &active, a, &mut stats.scanned);
            nnghbr[a] = y;
            mindist[a] = v;
            queue.set(a, v);
            a = queue.argmin().expect("queue holds a live slot");
            b = nnghbr[a];
            delta = mindist[a];
        }
        queue.remove_min();
        steps.push(Step::new(label[a] as i64, label[b] as i64, method.to_external(delta)));

        active.remove(a);
        let (size_a, size_b) = (size[a], size[b]);
        for x in active.iter() {
            if x == b {
                continue;
            }
            let v = lance_williams(&method, d.get(a, x), d.get(b, x), delta, size_a, size_b, size[x]);
            d.set(b, x, v);
        }
        size[b] = size_a + size_b;
        label[b] = n + i;

        for x in active.iter() {
            if x >= b {
                break;
            }
            if x < a && nnghbr[x] == a {
                nnghbr[x] = b;
            }
            let v = d.upper(x, b);
            if v < mindist[x] {
                nnghbr[x] = b;
                mindist[x] = v;
                queue.set(x, v);
            }
        }
        if b < n - 1 {
            let (y, v) = nearest_after(&d, &active, b, &mut stats.scanned);
            nnghbr[b] = y;
            mindist[b] = v;
            queue.set(b, v);
        }
    }
    (StepwiseDendrogram::from_scipy_unchecked(n, steps), stats)
}
