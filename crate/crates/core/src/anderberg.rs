//! Anderberg's algorithm: every cluster keeps its exact nearest neighbor
//! among the higher slots, and neighbors invalidated by a merge are
//! searched again right away. Kept as the baseline the generic algorithm
//! improves on.

use crate::active::ActiveList;
use crate::condensed::{CondensedMatrix, Working};
use crate::dendrogram::{Step, StepwiseDendrogram};
use crate::formulas::lance_williams;
use crate::linkage::LinkageStats;
use crate::method::Method;
use crate::Result;

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

pub fn anderberg_linkage(d0: &CondensedMatrix, method: Method) -> Result<StepwiseDendrogram> {
    Ok(anderberg_linkage_with_stats(d0, method)?.0)
}

/// [`anderberg_linkage`] that also reports the work counters.
/// `recalculations` counts searches forced by an invalidated neighbor.
pub fn anderberg_linkage_with_stats(
    d0: &CondensedMatrix,
    method: Method,
) -> Result<(StepwiseDendrogram, LinkageStats)> {
    let n = d0.n();
    let mut stats = LinkageStats::default();
    if n == 1 {
        return Ok((StepwiseDendrogram::empty(1), stats));
    }
    let mut d = Working::from_matrix(d0, method.uses_squared());
    let mut active = ActiveList::new(n);
    let mut size = vec![1.0; n];
    let mut label: Vec<usize> = (0..n).collect();
    let mut nnghbr = vec![0usize; n];
    let mut mindist = vec![f64::INFINITY; n];
    for x in 0..n - 1 {
        (nnghbr[x], mindist[x]) = nearest_after(&d, &active, x, &mut stats.scanned);
    }
    let mut steps = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        // The last slot has no higher neighbors and is never the smaller of
        // a merged pair.
        let mut a = usize::MAX;
        for x in active.iter() {
            if x == n - 1 {
                continue;
            }
            stats.scanned += 1;
            if a == usize::MAX || mindist[x] < mindist[a] {
                a = x;
            }
        }
        let b = nnghbr[a];
        let delta = mindist[a];
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
            let v = d.upper(x, b);
            if nnghbr[x] == a || nnghbr[x] == b {
                if v <= mindist[x] {
                    nnghbr[x] = b;
                    mindist[x] = v;
                } else {
                    stats.recalculations += 1;
                    (nnghbr[x], mindist[x]) = nearest_after(&d, &active, x, &mut stats.scanned);
                }
            } else if v < mindist[x] {
                nnghbr[x] = b;
                mindist[x] = v;
            }
        }
        if b < n - 1 {
            (nnghbr[b], mindist[b]) = nearest_after(&d, &active, b, &mut stats.scanned);
        }
    }
    Ok((StepwiseDendrogram::from_scipy_unchecked(n, steps), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::validate;

    #[test]
    fn two_points() {
        let d0 = CondensedMatrix::new(2, vec![5.0]).unwrap();
        assert_eq!(
            anderberg_linkage(&d0, Method::Median).unwrap().scipy_rows(),
            vec![(0, 1, 5.0)]
        );
    }

    #[test]
    fn centroid_inversion() {
        let d = anderberg_linkage(&fixtures::equilateral(), Method::Centroid).unwrap();
        assert!(validate(&fixtures::equilateral(), Method::Centroid, &d).is_valid());
        assert!(d.has_inversion());
    }

    #[test]
    fn dataset_a() {
        let d = anderberg_linkage(&fixtures::dataset_a(), Method::Single).unwrap();
        assert!(validate(&fixtures::dataset_a(), Method::Single, &d).is_valid());
    }
}
