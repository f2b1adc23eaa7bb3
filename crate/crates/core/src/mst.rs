//! Single linkage through a Prim-style minimum spanning tree walk. The
//! input is only read, and each dissimilarity exactly once; scratch space
//! is linear in the number of points.

use crate::condensed::CondensedMatrix;
use crate::dendrogram::{Merge, StepwiseDendrogram, UnsortedDendrogram};
use crate::linkage::LinkageStats;
use crate::postprocess;
use crate::{Error, Result};

/// Walk over `n` points starting at `start`, reading dissimilarities
/// through `dist`. Each row is `(c, next, D[next])`, where `D` holds the
/// distance from the points visited so far to every other point.
pub(crate) fn mst_core_by<F>(n: usize, start: usize, mut dist: F, stats: &mut LinkageStats) -> Result<Vec<Merge>>
where
    F: FnMut(usize, usize) -> Result<f64>,
{
    if start >= n {
        return Err(Error::InvalidArgument(format!(
            "start point {} out of range for {} points",
            start, n
        )));
    }
    let mut remaining: Vec<usize> = (0..n).filter(|&s| s != start).collect();
    let mut reach = vec![f64::INFINITY; n];
    let mut merges = Vec::with_capacity(n - 1);
    let mut c = start;
    while !remaining.is_empty() {
        let mut best = 0;
        for (p, &s) in remaining.iter().enumerate() {
            let v = dist(s, c)?;
            if v < reach[s] {
                reach[s] = v;
            }
            if reach[s] < reach[remaining[best]] {
                best = p;
            }
        }
        stats.scanned += remaining.len() as u64;
        let next = remaining.remove(best);
        merges.push(Merge::new(c, next, reach[next]));
        c = next;
    }
    Ok(merges)
}

/// The unsorted single linkage dendrogram of the walk from `start`.
pub fn mst_linkage_core(d0: &CondensedMatrix, start: usize) -> Result<UnsortedDendrogram> {
    let merges = mst_core_by(d0.n(), start, |i, j| Ok(d0.get(i, j)), &mut LinkageStats::default())?;
    Ok(UnsortedDendrogram::new(d0.n(), merges))
}

/// Single linkage clustering of `d0`.
pub fn mst_linkage(d0: &CondensedMatrix) -> Result<StepwiseDendrogram> {
    Ok(mst_linkage_with_stats(d0, 0)?.0)
}

/// [`mst_linkage`] with the walk starting at `start`.
pub fn mst_linkage_from(d0: &CondensedMatrix, start: usize) -> Result<StepwiseDendrogram> {
    Ok(mst_linkage_with_stats(d0, start)?.0)
}

pub fn mst_linkage_with_stats(d0: &CondensedMatrix, start: usize) -> Result<(StepwiseDendrogram, LinkageStats)> {
    let mut stats = LinkageStats::default();
    let merges = mst_core_by(d0.n(), start, |i, j| Ok(d0.get(i, j)), &mut stats)?;
    Ok((postprocess::finish(UnsortedDendrogram::new(d0.n(), merges))?, stats))
}
