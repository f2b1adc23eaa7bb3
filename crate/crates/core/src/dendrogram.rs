use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Node numbering scheme of a stepwise dendrogram.
///
/// | convention | points        | merged nodes     |
/// |------------|---------------|------------------|
/// | `Scipy`    | `0..N-1`      | `N..2N-2`        |
/// | `R`        | `-1..-N`      | `1..N-1`         |
/// | `Matlab`   | `1..N`        | `N+1..2N-1`      |
#[derive(Clone, Copy, Debug, Eq, PartialEq, Hash, Default)]
pub enum Convention {
    #[default]
    Scipy,
    R,
    Matlab,
}

impl Convention {
    /// Maps a label of this convention to its SciPy number.
    fn to_scipy(self, label: i64, n: usize) -> Option<usize> {
        let n = n as i64;
        let scipy = match self {
            Convention::Scipy => label,
            Convention::R if label < 0 => -label - 1,
            Convention::R if label > 0 => n + label - 1,
            Convention::R => return None,
            Convention::Matlab => label - 1,
        };
        if (0..2 * n - 1).contains(&scipy) {
            Some(scipy as usize)
        } else {
            None
        }
    }

    fn label_from_scipy(self, label: usize, n: usize) -> i64 {
        let (label, n) = (label as i64, n as i64);
        match self {
            Convention::Scipy => label,
            Convention::R if label < n => -(label + 1),
            Convention::R => label - n + 1,
            Convention::Matlab => label + 1,
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Scipy => "scipy",
            Convention::R => "r",
            Convention::Matlab => "matlab",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Convention> {
        match s.to_ascii_lowercase().as_str() {
            "scipy" => Ok(Convention::Scipy),
            "r" => Ok(Convention::R),
            "matlab" => Ok(Convention::Matlab),
            _ => Err(Error::InvalidArgument(format!("unknown label convention '{}'", s))),
        }
    }
}

/// One row of a stepwise dendrogram: nodes `a` and `b` joined at height
/// `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub a: i64,
    pub b: i64,
    pub delta: f64,
}

impl Step {
    pub fn new(a: i64, b: i64, delta: f64) -> Step {
        Step { a, b, delta }
    }

    /// The pair with the smaller label first.
    pub fn ordered_pair(&self) -> (i64, i64) {
        if self.a <= self.b {
            (self.a, self.b)
        } else {
            (self.b, self.a)
        }
    }
}

/// The `N - 1` merge steps of a clustering of `N` points, in merge order.
///
/// Merge heights need not be monotone: the centroid, median and flexible
/// schemes can produce inversions.
#[derive(Clone, Debug, PartialEq)]
pub struct StepwiseDendrogram {
    n: usize,
    convention: Convention,
    steps: Vec<Step>,
}

impl StepwiseDendrogram {
    /// Builds a dendrogram and checks it structurally.
    pub fn new(n: usize, convention: Convention, steps: Vec<Step>) -> Result<StepwiseDendrogram> {
        let d = StepwiseDendrogram { n, convention, steps };
        d.check_structure()?;
        Ok(d)
    }

    /// Builds a SciPy-labelled dendrogram from `(a, b, delta)` triples.
    pub fn from_scipy(n: usize, rows: &[(usize, usize, f64)]) -> Result<StepwiseDendrogram> {
        let steps = rows
            .iter()
            .map(|&(a, b, delta)| Step::new(a as i64, b as i64, delta))
            .collect();
        StepwiseDendrogram::new(n, Convention::Scipy, steps)
    }

    pub(crate) fn from_scipy_unchecked(n: usize, steps: Vec<Step>) -> StepwiseDendrogram {
        let d = StepwiseDendrogram {
            n,
            convention: Convention::Scipy,
            steps,
        };
        debug_assert!(d.check_structure().is_ok(), "{:?}", d.check_structure());
        d
    }

    /// An empty dendrogram for a single point.
    pub fn empty(n: usize) -> StepwiseDendrogram {
        StepwiseDendrogram {
            n,
            convention: Convention::Scipy,
            steps: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// True if some merge happens below the height of an earlier one.
    pub fn has_inversion(&self) -> bool {
        self.steps.windows(2).any(|w| w[1].delta < w[0].delta)
    }

    /// Checks the structural invariants: `n - 1` rows, labels in range,
    /// every referenced node exists at that step, and no node is merged
    /// twice.
    pub fn check_structure(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("a dendrogram needs at least one point".into()));
        }
        if self.steps.len() != self.n - 1 {
            return Err(Error::InvalidArgument(format!(
                "{} points need {} merge steps, found {}",
                self.n,
                self.n - 1,
                self.steps.len()
            )));
        }
        let mut used = vec![false; 2 * self.n - 1];
        for (i, step) in self.steps.iter().enumerate() {
            let mut pair = [0usize; 2];
            for (slot, label) in pair.iter_mut().zip([step.a, step.b]) {
                let scipy = self.convention.to_scipy(label, self.n).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "step {}: label {} is outside the {} range for {} points",
                        i, label, self.convention, self.n
                    ))
                })?;
                if scipy >= self.n + i {
                    return Err(Error::InvalidArgument(format!(
                        "step {}: node {} does not exist yet",
                        i, label
                    )));
                }
                if used[scipy] {
                    return Err(Error::InvalidArgument(format!(
                        "step {}: node {} was already merged",
                        i, label
                    )));
                }
                used[scipy] = true;
                *slot = scipy;
            }
            if pair[0] == pair[1] {
                return Err(Error::InvalidArgument(format!(
                    "step {}: node {} merged with itself",
                    i, step.a
                )));
            }
            if step.delta.is_nan() {
                return Err(Error::InvalidArgument(format!("step {}: merge height is NaN", i)));
            }
        }
        Ok(())
    }

    /// Relabels the nodes under `target`; heights and row order are kept.
    pub fn convert(&self, target: Convention) -> StepwiseDendrogram {
        let n = self.n;
        let relabel = |label: i64| {
            let scipy = self
                .convention
                .to_scipy(label, n)
                .expect("structurally valid dendrogram");
            target.label_from_scipy(scipy, n)
        };
        StepwiseDendrogram {
            n,
            convention: target,
            steps: self
                .steps
                .iter()
                .map(|s| Step::new(relabel(s.a), relabel(s.b), s.delta))
                .collect(),
        }
    }

    /// Rows as SciPy node numbers, converting if necessary.
    pub fn scipy_rows(&self) -> Vec<(usize, usize, f64)> {
        let scipy;
        let d = if self.convention == Convention::Scipy {
            self
        } else {
            scipy = self.convert(Convention::Scipy);
            &scipy
        };
        d.steps.iter().map(|s| (s.a as usize, s.b as usize, s.delta)).collect()
    }

    /// Rows with each pair ordered smaller label first.
    pub fn with_ordered_pairs(&self) -> StepwiseDendrogram {
        StepwiseDendrogram {
            n: self.n,
            convention: self.convention,
            steps: self
                .steps
                .iter()
                .map(|s| {
                    let (a, b) = s.ordered_pair();
                    Step::new(a, b, s.delta)
                })
                .collect(),
        }
    }
}

/// Free-function form of [`StepwiseDendrogram::convert`].
pub fn convert_convention(d: &StepwiseDendrogram, target: Convention) -> StepwiseDendrogram {
    d.convert(target)
}

/// A merge recorded by cluster representatives: `a` and `b` are original
/// point indices belonging to the two merged clusters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub delta: f64,
}

impl Merge {
    pub fn new(a: usize, b: usize, delta: f64) -> Merge {
        Merge { a, b, delta }
    }
}

/// Core algorithm output before sorting and relabelling.
#[derive(Clone, Debug, PartialEq)]
pub struct UnsortedDendrogram {
    pub n: usize,
    pub merges: Vec<Merge>,
}

impl UnsortedDendrogram {
    pub fn new(n: usize, merges: Vec<Merge>) -> UnsortedDendrogram {
        UnsortedDendrogram { n, merges }
    }
}
