use crate::{Error, Result};

/// Offset of the pair `(i, j)`, `i < j`, inside a condensed matrix over `n`
/// points.
///
/// The condensed layout stores the strict upper triangle row by row, so row
/// `i` starts at `n*i - i*(i+1)/2` and holds the `n - i - 1` entries
/// `(i, i+1) .. (i, n-1)`.
pub fn condensed_index(i: usize, j: usize, n: usize) -> Result<usize> {
    if i >= j {
        return Err(Error::InvalidArgument(format!(
            "condensed index requires i < j, got ({}, {})",
            i, j
        )));
    }
    if j >= n {
        return Err(Error::InvalidArgument(format!(
            "index {} out of range for {} points",
            j, n
        )));
    }
    Ok(offset(i, j, n))
}

#[inline(always)]
pub(crate) fn offset(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    n * i - i * (i + 1) / 2 + (j - i - 1)
}

/// Number of entries in a condensed matrix over `n` points.
#[inline]
pub fn condensed_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Pairwise dissimilarities between `n` points, stored as the strict upper
/// triangle in row-major order.
///
/// Symmetry and the zero diagonal are implied by the layout. Every stored
/// value is finite and nonnegative; the triangle inequality is not required
/// and distinct points may be at distance zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CondensedMatrix {
    n: usize,
    values: Vec<f64>,
}

impl CondensedMatrix {
    /// Wraps `values` as the condensed matrix of `n` points.
    pub fn new(n: usize, values: Vec<f64>) -> Result<CondensedMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "a dissimilarity matrix needs at least one point".into(),
            ));
        }
        let expected = condensed_len(n);
        if values.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{} points need {} dissimilarities, found {}",
                n,
                expected,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidData(format!(
                "dissimilarity at offset {} is {}; values must be finite and nonnegative",
                pos, values[pos]
            )));
        }
        Ok(CondensedMatrix { n, values })
    }

    /// Infers `n` from the length of `values`.
    pub fn from_condensed(values: Vec<f64>) -> Result<CondensedMatrix> {
        // Solve n(n-1)/2 = len.
        let len = values.len();
        let n = ((1.0 + (1.0 + 8.0 * len as f64).sqrt()) / 2.0).round() as usize;
        if condensed_len(n) != len {
            return Err(Error::InvalidArgument(format!(
                "{} is not a triangular number of pairwise dissimilarities",
                len
            )));
        }
        CondensedMatrix::new(n.max(1), values)
    }

    /// Builds a matrix by evaluating `f(i, j)` for every pair `i < j`.
    pub fn from_fn<F>(n: usize, mut f: F) -> Result<CondensedMatrix>
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut values = Vec::with_capacity(condensed_len(n));
        for i in 0..n {
            for j in i + 1..n {
                values.push(f(i, j));
            }
        }
        CondensedMatrix::new(n, values)
    }

    /// Number of points.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Dissimilarity between two distinct points, in either order.
    ///
    /// # Panics
    ///
    /// Panics if `i == j` or either index is out of range.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < self.n && j < self.n, "bad pair ({}, {})", i, j);
        if i < j {
            self.values[offset(i, j, self.n)]
        } else {
            self.values[offset(j, i, self.n)]
        }
    }

    /// True if every entry is an integer, which makes tie behavior exact.
    pub fn is_integer_valued(&self) -> bool {
        self.values.iter().all(|v| v.fract() == 0.0)
    }
}

/// A mutable working copy of a condensed matrix used by the in-place
/// algorithms. Indices are point slots; a slot is reused for the cluster
/// formed by merging into it.
#[derive(Clone, Debug)]
pub(crate) struct Working {
    n: usize,
    values: Vec<f64>,
}

impl Working {
    pub(crate) fn new(n: usize, values: Vec<f64>) -> Working {
        debug_assert_eq!(values.len(), condensed_len(n));
        Working { n, values }
    }

    /// Copies `matrix`, squaring every entry when `squared` is set.
    pub(crate) fn from_matrix(matrix: &CondensedMatrix, squared: bool) -> Working {
        let values = if squared {
            matrix.values.iter().map(|v| v * v).collect()
        } else {
            matrix.values.clone()
        };
        Working::new(matrix.n, values)
    }

    #[inline(always)]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        if i < j {
            self.values[offset(i, j, self.n)]
        } else {
            self.values[offset(j, i, self.n)]
        }
    }

    #[inline(always)]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = if i < j {
            offset(i, j, self.n)
        } else {
            offset(j, i, self.n)
        };
        self.values[k] = value;
    }

    /// Entry for `i < j` without the ordering branch.
    #[inline(always)]
    pub(crate) fn upper(&self, i: usize, j: usize) -> f64 {
        self.values[offset(i, j, self.n)]
    }
}
