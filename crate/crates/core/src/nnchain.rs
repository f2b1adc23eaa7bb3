//! The nearest-neighbor chain algorithm. It follows nearest neighbors until
//! it reaches a reciprocal pair, merges it, and resumes from the remaining
//! chain.
//!
//! Correct only for update schemes that are reducible *and* whose cluster
//! dissimilarities do not depend on the merge order, which is why the
//! checked entry points accept single, complete, average, weighted and
//! Ward only.

use crate::active::{ActiveList, NONE};
use crate::condensed::{CondensedMatrix, Working};
use crate::dendrogram::{Merge, StepwiseDendrogram, UnsortedDendrogram};
use crate::formulas::lance_williams;
use crate::linkage::{Algorithm, LinkageStats};
use crate::method::Method;
use crate::postprocess;
use crate::Result;

/// Cluster dissimilarities as seen by the chain.
pub(crate) trait ChainSpace {
    fn len(&self) -> usize;
    /// Dissimilarity on the internal scale.
    fn dist(&self, a: usize, b: usize) -> f64;
    /// Forms `a ∪ b` (as I and J) in slot `keep`, which is `a` or `b`.
    fn merge(&mut self, a: usize, b: usize, keep: usize, active: &ActiveList);
    fn to_external(&self, d: f64) -> f64;
}

pub(crate) struct MatrixSpace {
    method: Method,
    d: Working,
    size: Vec<f64>,
}

impl MatrixSpace {
    pub(crate) fn new(d0: &CondensedMatrix, method: Method) -> MatrixSpace {
        MatrixSpace {
            method,
            d: Working::from_matrix(d0, method.uses_squared()),
            size: vec![1.0; d0.n()],
        }
    }
}

impl ChainSpace for MatrixSpace {
    fn len(&self) -> usize {
        self.size.len()
    }

    #[inline]
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.d.get(a, b)
    }

    fn merge(&mut self, a: usize, b: usize, keep: usize, active: &ActiveList) {
        let d_ab = self.d.get(a, b);
        let (size_a, size_b) = (self.size[a], self.size[b]);
        for x in active.iter() {
            if x == a || x == b {
                continue;
            }
            let v = lance_williams(
                &self.method,
                self.d.get(a, x),
                self.d.get(b, x),
                d_ab,
                size_a,
                size_b,
                self.size[x],
            );
            self.d.set(keep, x, v);
        }
        self.size[keep] = size_a + size_b;
    }

    fn to_external(&self, d: f64) -> f64 {
        self.method.to_external(d)
    }
}

/// The chain at the moment a node is appended. Dissimilarities are on the
/// internal scale.
pub struct ChainView<'a> {
    chain: &'a [usize],
    active: &'a ActiveList,
    space: &'a dyn ChainSpace,
}

impl ChainView<'_> {
    pub fn chain(&self) -> &[usize] {
        self.chain
    }

    pub fn active(&self) -> Vec<usize> {
        self.active.iter().collect()
    }

    pub fn dissimilarity(&self, x: usize, y: usize) -> f64 {
        self.space.dist(x, y)
    }
}

pub(crate) fn run_chain<S, F>(space: &mut S, mut observer: F) -> (UnsortedDendrogram, LinkageStats)
where
    S: ChainSpace,
    F: FnMut(&ChainView<'_>),
{
    let n = space.len();
    let mut stats = LinkageStats::default();
    let mut active = ActiveList::new(n);
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    while active.len() > 1 {
        let (mut a, mut b);
        if chain.len() <= 3 {
            a = active.first();
            chain.clear();
            chain.push(a);
            b = active.succ(a);
        } else {
            // Drop the merged pair (x, y, x) and resume from its predecessor,
            // preferring the node that led to it.
            chain.truncate(chain.len() - 3);
            a = chain[chain.len() - 1];
            b = if chain.len() >= 2 { chain[chain.len() - 2] } else { NONE };
        }
        loop {
            let (mut c, mut best) = if b == NONE {
                (NONE, f64::INFINITY)
            } else {
                (b, space.dist(a, b))
            };
            for x in active.iter() {
                if x == a {
                    continue;
                }
                stats.scanned += 1;
                let v = space.dist(a, x);
                if v < best || c == NONE {
                    c = x;
                    best = v;
                }
            }
            b = a;
            a = c;
            chain.push(a);
            observer(&ChainView {
                chain: &chain,
                active: &active,
                space: &*space,
            });
            if chain.len() >= 3 && a == chain[chain.len() - 3] {
                break;
            }
        }
        let delta = space.dist(a, b);
        merges.push(Merge::new(a, b, space.to_external(delta)));
        let (keep, gone) = if a > b { (a, b) } else { (b, a) };
        space.merge(a, b, keep, &active);
        active.remove(gone);
    }
    (UnsortedDendrogram::new(n, merges), stats)
}

/// The chain core: `N - 1` merges of reciprocal nearest neighbors, named by
/// cluster representatives and in the order they were found.
pub fn nn_chain_core(d0: &CondensedMatrix, method: Method) -> Result<UnsortedDendrogram> {
    Algorithm::NnChain.supports(method)?;
    Ok(nn_chain_core_unchecked(d0, method))
}

/// [`nn_chain_core`] without the method whitelist. With an inadmissible
/// update the output is generally not a valid dendrogram; this exists to
/// demonstrate exactly that.
pub fn nn_chain_core_unchecked(d0: &CondensedMatrix, method: Method) -> UnsortedDendrogram {
    run_chain(&mut MatrixSpace::new(d0, method), |_| {}).0
}

/// Clusters `d0` with the nearest-neighbor chain.
pub fn nn_chain_linkage(d0: &CondensedMatrix, method: Method) -> Result<StepwiseDendrogram> {
    Ok(nn_chain_linkage_with_stats(d0, method)?.0)
}

pub fn nn_chain_linkage_with_stats(d0: &CondensedMatrix, method: Method) -> Result<(StepwiseDendrogram, LinkageStats)> {
    nn_chain_linkage_observed(d0, method, |_| {})
}

/// [`nn_chain_linkage_with_stats`] calling `observer` after every append to
/// the chain.
pub fn nn_chain_linkage_observed<F>(
    d0: &CondensedMatrix,
    method: Method,
    observer: F,
) -> Result<(StepwiseDendrogram, LinkageStats)>
where
    F: FnMut(&ChainView<'_>),
{
    Algorithm::NnChain.supports(method)?;
    let (unsorted, stats) = run_chain(&mut MatrixSpace::new(d0, method), observer);
    Ok((postprocess::finish(unsorted)?, stats))
}
