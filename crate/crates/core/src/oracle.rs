//! The primitive Θ(N³) clustering procedure and the reference checks built
//! on it: a replay validator and an exhaustive enumerator of tie choices.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::active::NONE;
use crate::condensed::{CondensedMatrix, Working};
use crate::dendrogram::{Step, StepwiseDendrogram};
use crate::formulas::lance_williams;
use crate::method::Method;
use crate::{Error, Result};

/// Relative tolerance used by [`validate`] and the enumerator. Differences
/// are measured against the larger of the two values and the largest input
/// dissimilarity.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Largest input accepted by [`enumerate_valid_dendrograms`].
pub const ENUMERATION_LIMIT: usize = 8;

/// How [`primitive_clustering`] picks among several closest pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// The pair `(a, b)`, `a < b`, that is smallest in lexicographic label
    /// order.
    #[default]
    Lexicographic,
    /// The lexicographically largest pair.
    ReverseLexicographic,
    /// A pseudo-random closest pair, reproducible from the seed.
    Random(u64),
}

/// Alg. 1 state: clusters live in slots; a merge reuses the slot of its
/// second node.
#[derive(Clone)]
struct Replay {
    method: Method,
    d: Working,
    size: Vec<f64>,
    slot_of: Vec<usize>,
    label_of: Vec<usize>,
    next_label: usize,
    /// Largest input dissimilarity on the internal scale; floors the
    /// tolerance so that values near zero compare sensibly.
    scale: f64,
}

impl Replay {
    fn new(d0: &CondensedMatrix, method: Method) -> Replay {
        let n = d0.n();
        let mut slot_of = vec![NONE; 2 * n - 1];
        for (i, s) in slot_of.iter_mut().take(n).enumerate() {
            *s = i;
        }
        Replay {
            method,
            d: Working::from_matrix(d0, method.uses_squared()),
            size: vec![1.0; n],
            slot_of,
            label_of: (0..n).collect(),
            next_label: n,
            scale: d0.values().iter().fold(0.0, |m, &v| f64::max(m, method.to_internal(v))),
        }
    }

    /// Live labels in increasing order, with their slots.
    fn live(&self) -> Vec<(usize, usize)> {
        let mut live: Vec<(usize, usize)> = self
            .label_of
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l != NONE)
            .map(|(slot, &l)| (l, slot))
            .collect();
        live.sort_unstable();
        live
    }

    fn is_live(&self, label: usize) -> bool {
        label < self.next_label && self.slot_of[label] != NONE
    }

    fn dist(&self, a: usize, b: usize) -> f64 {
        self.d.get(self.slot_of[a], self.slot_of[b])
    }

    /// Every live pair `(a, b)`, `a < b`, in lexicographic order.
    fn pairs(&self) -> Vec<(usize, usize, f64)> {
        let live = self.live();
        let mut out = Vec::with_capacity(live.len() * live.len().saturating_sub(1) / 2);
        for (p, &(a, sa)) in live.iter().enumerate() {
            for &(b, sb) in &live[p + 1..] {
                out.push((a, b, self.d.get(sa, sb)));
            }
        }
        out
    }

    fn minimum(&self) -> f64 {
        self.pairs().iter().map(|p| p.2).fold(f64::INFINITY, f64::min)
    }

    /// Joins live labels `a` (as I) and `b` (as J).
    fn merge(&mut self, a: usize, b: usize) {
        let (sa, sb) = (self.slot_of[a], self.slot_of[b]);
        let d_ab = self.d.get(sa, sb);
        let (size_a, size_b) = (self.size[sa], self.size[sb]);
        for x in 0..self.label_of.len() {
            if x == sa || x == sb || self.label_of[x] == NONE {
                continue;
            }
            let v = lance_williams(
                &self.method,
                self.d.get(sa, x),
                self.d.get(sb, x),
                d_ab,
                size_a,
                size_b,
                self.size[x],
            );
            self.d.set(sb, x, v);
        }
        self.size[sb] = size_a + size_b;
        self.label_of[sa] = NONE;
        self.label_of[sb] = self.next_label;
        self.slot_of[a] = NONE;
        self.slot_of[b] = NONE;
        self.slot_of[self.next_label] = sb;
        self.next_label += 1;
    }
}

/// Runs the primitive algorithm: in each of the `N - 1` steps merge a
/// closest pair of clusters and update all dissimilarities.
///
/// Rows are `(a, b, delta)` with `a < b` in SciPy numbering.
pub fn primitive_clustering(d0: &CondensedMatrix, method: Method, tie_break: TieBreak) -> Result<StepwiseDendrogram> {
    let n = d0.n();
    let mut state = Replay::new(d0, method);
    let mut rng = match tie_break {
        TieBreak::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut steps = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let pairs = state.pairs();
        let min = pairs.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
        let mut ties = pairs.iter().filter(|p| p.2 == min);
        let &(a, b, delta) = match (tie_break, rng.as_mut()) {
            (TieBreak::Lexicographic, _) => ties.next(),
            (TieBreak::ReverseLexicographic, _) => ties.next_back(),
            (TieBreak::Random(_), Some(rng)) => {
                let ties: Vec<_> = ties.collect();
                Some(ties[rng.random_range(0..ties.len())])
            }
            (TieBreak::Random(_), None) => unreachable!(),
        }
        .expect("at least one live pair");
        steps.push(Step::new(a as i64, b as i64, method.to_external(delta)));
        state.merge(a, b);
    }
    Ok(StepwiseDendrogram::from_scipy_unchecked(n, steps))
}

/// Why a candidate dendrogram was rejected.
#[derive(Clone, Debug, PartialEq)]
pub enum InvalidReason {
    /// The candidate is not a well-formed dendrogram for this input.
    Structure(String),
    /// The row names a node that does not exist or was already merged.
    NotLive { label: i64 },
    /// The pair is not a closest pair at this step.
    NotMinimal { a: i64, b: i64, value: f64, minimum: f64 },
    /// The recorded height differs from the pair's dissimilarity.
    HeightMismatch { recorded: f64, expected: f64 },
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::Structure(msg) => write!(f, "malformed dendrogram: {}", msg),
            InvalidReason::NotLive { label } => write!(f, "node {} is not an active cluster", label),
            InvalidReason::NotMinimal { a, b, value, minimum } => write!(
                f,
                "pair ({}, {}) is at dissimilarity {}, but the closest pair is at {}",
                a, b, value, minimum
            ),
            InvalidReason::HeightMismatch { recorded, expected } => write!(
                f,
                "recorded height {} differs from the dissimilarity {}",
                recorded, expected
            ),
        }
    }
}

/// Result of [`validate_dendrogram`].
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Valid,
    Invalid { step: usize, reason: InvalidReason },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => f.write_str("valid"),
            Verdict::Invalid { step, reason } => write!(f, "invalid at step {}: {}", step, reason),
        }
    }
}

#[inline]
fn within(x: f64, y: f64, tol: f64, scale: f64) -> bool {
    x == y || (x - y).abs() <= tol * x.abs().max(y.abs()).max(scale)
}

/// Replays the primitive algorithm along the merges of `cand` and reports
/// the first step that the primitive algorithm could not have taken.
///
/// A step passes if both nodes are live, their dissimilarity is a global
/// minimum up to the tolerance `tol` (see [`DEFAULT_TOLERANCE`]), and the recorded height
/// matches it up to `tol`. Heights of the geometric schemes are compared
/// after squaring. A tolerance of `0` demands exact agreement.
pub fn validate_dendrogram(d0: &CondensedMatrix, method: Method, cand: &StepwiseDendrogram, tol: f64) -> Verdict {
    let invalid = |step, reason| Verdict::Invalid { step, reason };
    if cand.n() != d0.n() {
        return invalid(
            0,
            InvalidReason::Structure(format!(
                "{} points in the dendrogram, {} in the input",
                cand.n(),
                d0.n()
            )),
        );
    }
    if let Err(e) = cand.check_structure() {
        return invalid(0, InvalidReason::Structure(e.to_string()));
    }
    let scipy = cand.convert(crate::dendrogram::Convention::Scipy);
    let original = cand.steps();
    let mut state = Replay::new(d0, method);
    for (i, step) in scipy.steps().iter().enumerate() {
        let (a, b) = (step.a as usize, step.b as usize);
        for (label, shown) in [(a, original[i].a), (b, original[i].b)] {
            if !state.is_live(label) {
                return invalid(i, InvalidReason::NotLive { label: shown });
            }
        }
        let value = state.dist(a, b);
        let minimum = state.minimum();
        if !(value <= minimum || within(value, minimum, tol, state.scale)) {
            return invalid(
                i,
                InvalidReason::NotMinimal {
                    a: original[i].a,
                    b: original[i].b,
                    value: method.to_external(value),
                    minimum: method.to_external(minimum),
                },
            );
        }
        let recorded = method.to_internal(step.delta);
        if !within(recorded, value, tol, state.scale) {
            return invalid(
                i,
                InvalidReason::HeightMismatch {
                    recorded: step.delta,
                    expected: method.to_external(value),
                },
            );
        }
        state.merge(a, b);
    }
    Verdict::Valid
}

/// [`validate_dendrogram`] with [`DEFAULT_TOLERANCE`].
pub fn validate(d0: &CondensedMatrix, method: Method, cand: &StepwiseDendrogram) -> Verdict {
    validate_dendrogram(d0, method, cand, DEFAULT_TOLERANCE)
}

/// All stepwise dendrograms the primitive algorithm can produce on one
/// input, keyed by their merge pairs.
///
/// For methods that treat both merged clusters alike, the pairs are stored
/// smaller label first and rows are matched regardless of pair order.
#[derive(Clone, Debug)]
pub struct DendrogramSet {
    n: usize,
    method: Method,
    scale: f64,
    members: BTreeMap<Vec<(usize, usize)>, Vec<f64>>,
}

impl DendrogramSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn key(&self, rows: &[(usize, usize, f64)]) -> Vec<(usize, usize)> {
        rows.iter()
            .map(|&(a, b, _)| {
                if self.method.is_symmetric() && b < a {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect()
    }

    /// True if `cand` has the merges of a member and its heights agree
    /// within the relative tolerance `tol`.
    pub fn contains(&self, cand: &StepwiseDendrogram, tol: f64) -> bool {
        if cand.n() != self.n || cand.check_structure().is_err() {
            return false;
        }
        let rows = cand.scipy_rows();
        match self.members.get(&self.key(&rows)) {
            Some(heights) => rows
                .iter()
                .zip(heights)
                .all(|(r, &h)| within(self.method.to_internal(r.2), h, tol, self.scale)),
            None => false,
        }
    }

    /// The members as SciPy-labelled dendrograms.
    pub fn iter(&self) -> impl Iterator<Item = StepwiseDendrogram> + '_ {
        self.members.iter().map(move |(pairs, heights)| {
            let steps = pairs
                .iter()
                .zip(heights)
                .map(|(&(a, b), &h)| Step::new(a as i64, b as i64, self.method.to_external(h)))
                .collect();
            StepwiseDendrogram::from_scipy_unchecked(self.n, steps)
        })
    }
}

/// Follows every tie choice of the primitive algorithm and collects the
/// resulting dendrograms. Pairs within [`DEFAULT_TOLERANCE`] of the minimum
/// count as tied, matching [`validate`].
pub fn enumerate_valid_dendrograms(d0: &CondensedMatrix, method: Method) -> Result<DendrogramSet> {
    let n = d0.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let root = Replay::new(d0, method);
    let mut set = DendrogramSet {
        n,
        method,
        scale: root.scale,
        members: BTreeMap::new(),
    };
    let mut pairs = Vec::with_capacity(n);
    let mut heights = Vec::with_capacity(n);
    explore(root, n, &mut pairs, &mut heights, &mut set.members);
    Ok(set)
}

fn explore(
    state: Replay,
    n: usize,
    pairs: &mut Vec<(usize, usize)>,
    heights: &mut Vec<f64>,
    out: &mut BTreeMap<Vec<(usize, usize)>, Vec<f64>>,
) {
    if pairs.len() + 1 >= n {
        out.entry(pairs.clone()).or_insert_with(|| heights.clone());
        return;
    }
    let candidates = state.pairs();
    let min = candidates.iter().map(|p| p.2).fold(f64::INFINITY, f64::min);
    let orientations: &[bool] = if state.method.is_symmetric() {
        &[false]
    } else {
        &[false, true]
    };
    for &(a, b, v) in candidates
        .iter()
        .filter(|p| p.2 <= min || within(p.2, min, DEFAULT_TOLERANCE, state.scale))
    {
        for &flip in orientations {
            let (i, j) = if flip { (b, a) } else { (a, b) };
            let mut next = state.clone();
            next.merge(i, j);
            pairs.push((i, j));
            heights.push(v);
            explore(next, n, pairs, heights, out);
            pairs.pop();
            heights.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::method::FlexibleCoefficients;

    fn rows(d: &StepwiseDendrogram) -> Vec<(usize, usize, f64)> {
        d.scipy_rows()
    }

    #[test]
    fn two_points() {
        let d0 = CondensedMatrix::new(2, vec![5.0]).unwrap();
        for m in Method::NAMED {
            let d = primitive_clustering(&d0, m, TieBreak::default()).unwrap();
            assert_eq!(rows(&d), vec![(0, 1, 5.0)], "{}", m);
        }
        assert_eq!(enumerate_valid_dendrograms(&d0, Method::Single).unwrap().len(), 1);
    }

    #[test]
    fn additive_counterexample_primitive() {
        let additive = Method::Flexible(FlexibleCoefficients::new(1.0, 1.0, 1.0, 0.0));
        let d = primitive_clustering(&fixtures::additive_counterexample(), additive, TieBreak::default()).unwrap();
        assert_eq!(rows(&d), vec![(2, 3, 1.0), (0, 1, 3.0), (5, 6, 27.0), (4, 7, 85.0)]);
    }

    #[test]
    fn tie_dataset_a() {
        let d = primitive_clustering(&fixtures::dataset_a(), Method::Single, TieBreak::default()).unwrap();
        assert_eq!(rows(&d), vec![(0, 1, 2.0), (2, 3, 2.0)]);
    }

    #[test]
    fn validator_examples() {
        let cand = StepwiseDendrogram::from_scipy(3, &[(0, 1, 2.0), (2, 3, 2.0)]).unwrap();
        assert_eq!(validate(&fixtures::dataset_a(), Method::Single, &cand), Verdict::Valid);
        match validate(&fixtures::dataset_c(), Method::Single, &cand) {
            Verdict::Invalid {
                step: 0,
                reason: InvalidReason::NotMinimal { value, minimum, .. },
            } => assert_eq!((value, minimum), (3.0, 2.0)),
            other => panic!("unexpected verdict {:?}", other),
        }

        let additive = Method::Flexible(FlexibleCoefficients::new(1.0, 1.0, 1.0, 0.0));
        let wrong = StepwiseDendrogram::from_scipy(5, &[(2, 3, 1.0), (0, 1, 3.0), (5, 4, 28.0), (6, 7, 87.0)]).unwrap();
        assert!(matches!(
            validate_dendrogram(&fixtures::additive_counterexample(), additive, &wrong, 0.0),
            Verdict::Invalid { step: 2, .. }
        ));
    }

    #[test]
    fn validator_rejects_wrong_heights_and_shapes() {
        let d0 = fixtures::dataset_a();
        let cand = StepwiseDendrogram::from_scipy(3, &[(0, 1, 2.5), (2, 3, 2.0)]).unwrap();
        assert!(matches!(
            validate(&d0, Method::Single, &cand),
            Verdict::Invalid {
                step: 0,
                reason: InvalidReason::HeightMismatch { .. }
            }
        ));
        let other_size = StepwiseDendrogram::from_scipy(2, &[(0, 1, 2.0)]).unwrap();
        assert!(matches!(
            validate(&d0, Method::Single, &other_size),
            Verdict::Invalid {
                step: 0,
                reason: InvalidReason::Structure(_)
            }
        ));
    }

    #[test]
    fn validator_accepts_other_conventions() {
        let cand = StepwiseDendrogram::from_scipy(3, &[(0, 1, 2.0), (2, 3, 2.0)]).unwrap();
        for c in [crate::Convention::R, crate::Convention::Matlab] {
            assert!(validate(&fixtures::dataset_a(), Method::Single, &cand.convert(c)).is_valid());
        }
    }

    #[test]
    fn enumeration_examples() {
        let set = enumerate_valid_dendrograms(&fixtures::dataset_c(), Method::Single).unwrap();
        assert_eq!(set.len(), 2);
        let first = StepwiseDendrogram::from_scipy(3, &[(0, 2, 2.0), (1, 3, 2.0)]).unwrap();
        let second = StepwiseDendrogram::from_scipy(3, &[(2, 1, 2.0), (3, 0, 2.0)]).unwrap();
        assert!(set.contains(&first, 0.0));
        assert!(set.contains(&second, 0.0));

        let equal = CondensedMatrix::new(3, vec![1.0; 3]).unwrap();
        let set = enumerate_valid_dendrograms(&equal, Method::Single).unwrap();
        assert_eq!(set.len(), 3);
        for d in set.iter() {
            assert!(validate(&equal, Method::Single, &d).is_valid());
        }

        let big = CondensedMatrix::new(9, vec![1.0; 36]).unwrap();
        assert!(matches!(
            enumerate_valid_dendrograms(&big, Method::Single),
            Err(Error::TooLarge { n: 9, limit: 8 })
        ));
    }

    #[test]
    fn primitive_tie_rules_are_valid() {
        let d0 = CondensedMatrix::new(4, vec![1.0; 6]).unwrap();
        let set = enumerate_valid_dendrograms(&d0, Method::Average).unwrap();
        // 6 first merges, then 3, then 1.
        assert_eq!(set.len(), 18);
        for rule in [
            TieBreak::Lexicographic,
            TieBreak::ReverseLexicographic,
            TieBreak::Random(3),
        ] {
            let d = primitive_clustering(&d0, Method::Average, rule).unwrap();
            assert!(set.contains(&d, 0.0), "{:?}", rule);
        }
    }
}
