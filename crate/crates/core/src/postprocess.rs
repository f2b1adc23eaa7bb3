//! Turning representative-labelled merge lists into stepwise dendrograms:
//! a stable sort by merge height followed by union-find relabelling.

use crate::dendrogram::{Step, StepwiseDendrogram, UnsortedDendrogram};
use crate::{Error, Result};

/// Sorts merges by height, keeping equal heights in their original order.
///
/// Stability matters: the order of equal-height merges produced by the core
/// algorithms is what makes the relabelled result a valid dendrogram.
pub fn stable_sort_by_delta(mut u: UnsortedDendrogram) -> UnsortedDendrogram {
    // slice::sort_by is a stable sort.
    u.merges.sort_by(|x, y| x.delta.total_cmp(&y.delta));
    u
}

/// Union-find over the `2N - 1` node labels of a dendrogram. Every union
/// creates a fresh label, numbered consecutively from `N`.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    next_label: usize,
}

const ROOT: usize = usize::MAX;

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: vec![ROOT; (2 * n).saturating_sub(1)],
            next_label: n,
        }
    }

    pub fn next_label(&self) -> usize {
        self.next_label
    }

    /// Label of the cluster that currently contains `x`.
    pub fn find(&mut self, x: usize) -> Result<usize> {
        if x >= self.next_label {
            return Err(Error::InvalidArgument(format!(
                "label {} has not been created yet (next label is {})",
                x, self.next_label
            )));
        }
        Ok(self.root(x))
    }

    /// Joins two clusters, given by their current root labels, under a new
    /// label and returns it.
    pub fn union(&mut self, m: usize, n: usize) -> Result<usize> {
        for x in [m, n] {
            if x >= self.next_label || self.parent[x] != ROOT {
                return Err(Error::InvalidArgument(format!("label {} is not a current cluster", x)));
            }
        }
        if m == n || self.next_label >= self.parent.len() {
            return Err(Error::InvalidArgument(format!("cannot join {} with {}", m, n)));
        }
        Ok(self.join(m, n))
    }

    #[inline]
    fn join(&mut self, m: usize, n: usize) -> usize {
        let label = self.next_label;
        self.parent[m] = label;
        self.parent[n] = label;
        self.next_label += 1;
        label
    }

    /// Root lookup with path compression.
    #[inline]
    fn root(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != ROOT {
            root = self.parent[root];
        }
        let mut p = x;
        while p != root {
            let next = self.parent[p];
            if next != root {
                self.parent[p] = root;
            }
            p = next;
        }
        root
    }

    /// The uncompressed walk to the root; only used to cross-check `root`.
    #[cfg(test)]
    fn find_naive(&self, mut x: usize) -> usize {
        while self.parent[x] != ROOT {
            x = self.parent[x];
        }
        x
    }
}

/// Converts representative merges into a SciPy-labelled dendrogram. Rows
/// keep their order, and each row keeps its pair order.
pub fn label(sorted: &UnsortedDendrogram) -> Result<StepwiseDendrogram> {
    let n = sorted.n;
    if n == 0 {
        return Err(Error::InvalidArgument("dendrogram over zero points".into()));
    }
    if sorted.merges.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "{} points need {} merges, found {}",
            n,
            n - 1,
            sorted.merges.len()
        )));
    }
    let mut uf = UnionFind::new(n);
    let mut steps = Vec::with_capacity(n - 1);
    for (i, m) in sorted.merges.iter().enumerate() {
        if m.a >= n || m.b >= n {
            return Err(Error::InvalidArgument(format!(
                "merge {}: representative out of range for {} points",
                i, n
            )));
        }
        let (a, b) = (uf.root(m.a), uf.root(m.b));
        if a == b {
            return Err(Error::InvalidArgument(format!(
                "merge {}: points {} and {} are already in one cluster",
                i, m.a, m.b
            )));
        }
        steps.push(Step::new(a as i64, b as i64, m.delta));
        uf.join(a, b);
    }
    Ok(StepwiseDendrogram::from_scipy_unchecked(n, steps))
}

/// Stable sort followed by relabelling.
pub fn finish(u: UnsortedDendrogram) -> Result<StepwiseDendrogram> {
    label(&stable_sort_by_delta(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dendrogram::Merge;
    use proptest::prelude::*;

    fn unsorted(n: usize, rows: &[(usize, usize, f64)]) -> UnsortedDendrogram {
        UnsortedDendrogram::new(n, rows.iter().map(|&(a, b, d)| Merge::new(a, b, d)).collect())
    }

    fn scipy(d: &StepwiseDendrogram) -> Vec<(usize, usize, f64)> {
        d.scipy_rows()
    }

    #[test]
    fn sort_examples() {
        let u = stable_sort_by_delta(unsorted(3, &[(0, 1, 2.0), (1, 2, 2.0)]));
        assert_eq!(u, unsorted(3, &[(0, 1, 2.0), (1, 2, 2.0)]));
        let u = stable_sort_by_delta(unsorted(3, &[(0, 1, 1.0), (1, 2, 0.5)]));
        assert_eq!(u, unsorted(3, &[(1, 2, 0.5), (0, 1, 1.0)]));
        let u = stable_sort_by_delta(unsorted(4, &[(0, 1, 3.0), (1, 2, 1.0), (2, 3, 3.0)]));
        assert_eq!(u, unsorted(4, &[(1, 2, 1.0), (0, 1, 3.0), (2, 3, 3.0)]));
    }

    #[test]
    fn union_find_examples() {
        let mut uf = UnionFind::new(3);
        assert_eq!(uf.find(2).unwrap(), 2);
        assert!(uf.find(3).is_err());
        let l = uf.union(0, 1).unwrap();
        assert_eq!(l, 3);
        assert_eq!(uf.find(0).unwrap(), 3);
        assert_eq!(uf.find(1).unwrap(), 3);
        uf.union(3, 2).unwrap();
        assert_eq!(uf.find(0).unwrap(), 4);
        assert_eq!(uf.next_label(), 5);
        assert!(uf.union(4, 4).is_err());
        assert!(uf.union(0, 4).is_err());
    }

    #[test]
    fn label_examples() {
        let d = label(&unsorted(3, &[(0, 1, 1.0), (1, 2, 3.0)])).unwrap();
        assert_eq!(scipy(&d), vec![(0, 1, 1.0), (3, 2, 3.0)]);
        let d = label(&unsorted(3, &[(1, 2, 0.5), (0, 1, 1.0)])).unwrap();
        assert_eq!(scipy(&d), vec![(1, 2, 0.5), (0, 3, 1.0)]);
        let d = label(&unsorted(2, &[(0, 1, 7.0)])).unwrap();
        assert_eq!(scipy(&d), vec![(0, 1, 7.0)]);
        assert!(label(&unsorted(2, &[(0, 2, 7.0)])).is_err());
        assert!(label(&unsorted(3, &[(0, 1, 1.0), (1, 0, 1.0)])).is_err());
        assert!(label(&unsorted(1, &[])).unwrap().is_empty());
    }

    #[test]
    fn labelling_uses_every_label() {
        let d = label(&unsorted(5, &[(0, 1, 1.0), (2, 3, 1.0), (1, 3, 2.0), (4, 0, 3.0)])).unwrap();
        let mut seen: Vec<i64> = d.steps().iter().flat_map(|s| [s.a, s.b]).collect();
        seen.sort();
        assert_eq!(seen, (0..8).collect::<Vec<_>>());
    }

    proptest! {
        // Path-compressed lookups agree with the plain walk on random
        // union sequences, and next_label ends at 2N - 1.
        #[test]
        fn compressed_find_matches_naive(n in 1usize..30, picks in proptest::collection::vec((0usize..1000, 0usize..1000), 0..30), queries in proptest::collection::vec(0usize..1000, 0..60)) {
            let mut uf = UnionFind::new(n);
            let mut roots: Vec<usize> = (0..n).collect();
            for (p, q) in picks {
                if roots.len() < 2 {
                    break;
                }
                let i = p % roots.len();
                let a = roots.swap_remove(i);
                let j = q % roots.len();
                let b = roots.swap_remove(j);
                roots.push(uf.union(a, b).unwrap());
                for &x in &queries {
                    let x = x % uf.next_label();
                    let naive = uf.find_naive(x);
                    prop_assert_eq!(uf.find(x).unwrap(), naive);
                }
            }
            while roots.len() >= 2 {
                let a = roots.pop().unwrap();
                let b = roots.pop().unwrap();
                roots.push(uf.union(a, b).unwrap());
            }
            prop_assert_eq!(uf.next_label(), 2 * n - 1);
        }
    }
}
