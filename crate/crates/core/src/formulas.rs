//! Lance-Williams distance updates, closed-form cluster dissimilarities and a
//! sampled reducibility check.
//!
//! For `Ward`, `Centroid` and `Median` every dissimilarity handled here is a
//! *squared* Euclidean-style value; the recurrences are exact in that form.
//! The algorithms square their input once and take the square root only
//! when a merge height is emitted.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::condensed::CondensedMatrix;
use crate::method::{FlexibleCoefficients, Method};
use crate::{Error, Result};

/// Cardinalities of the merged clusters `I`, `J` and a third cluster `K`.
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub struct SizeTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl SizeTriple {
    pub fn new(i: usize, j: usize, k: usize) -> Result<SizeTriple> {
        if i == 0 || j == 0 || k == 0 {
            return Err(Error::InvalidArgument(format!(
                "cluster sizes must be positive, got ({}, {}, {})",
                i, j, k
            )));
        }
        Ok(SizeTriple { i, j, k })
    }

    pub fn singletons() -> SizeTriple {
        SizeTriple { i: 1, j: 1, k: 1 }
    }
}

/// Dissimilarity from `I ∪ J` to `K` for the given scheme.
///
/// Geometric schemes expect and return squared values.
pub fn update_distance(method: Method, d_ik: f64, d_jk: f64, d_ij: f64, sizes: SizeTriple) -> Result<f64> {
    let sizes = SizeTriple::new(sizes.i, sizes.j, sizes.k)?;
    Ok(lance_williams(
        &method,
        d_ik,
        d_jk,
        d_ij,
        sizes.i as f64,
        sizes.j as f64,
        sizes.k as f64,
    ))
}

#[inline(always)]
pub(crate) fn lance_williams(method: &Method, d_ik: f64, d_jk: f64, d_ij: f64, n_i: f64, n_j: f64, n_k: f64) -> f64 {
    match method {
        Method::Single => d_ik.min(d_jk),
        Method::Complete => d_ik.max(d_jk),
        Method::Average => (n_i * d_ik + n_j * d_jk) / (n_i + n_j),
        Method::Weighted => 0.5 * (d_ik + d_jk),
        Method::Ward => ((n_i + n_k) * d_ik + (n_j + n_k) * d_jk - n_k * d_ij) / (n_i + n_j + n_k),
        Method::Centroid => {
            let n_ij = n_i + n_j;
            (n_i * d_ik + n_j * d_jk) / n_ij - (n_i * n_j * d_ij) / (n_ij * n_ij)
        }
        Method::Median => 0.5 * (d_ik + d_jk) - 0.25 * d_ij,
        Method::Flexible(c) => c.apply(d_ik, d_jk, d_ij),
    }
}

/// Size-dependent Lance-Williams coefficients of a named scheme.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoefficientRule {
    method: Method,
}

impl CoefficientRule {
    pub fn method(&self) -> Method {
        self.method
    }

    /// Coefficients for clusters of the given sizes.
    pub fn at(&self, sizes: SizeTriple) -> FlexibleCoefficients {
        let (n_i, n_j, n_k) = (sizes.i as f64, sizes.j as f64, sizes.k as f64);
        match self.method {
            Method::Single => FlexibleCoefficients::new(0.5, 0.5, 0.0, -0.5),
            Method::Complete => FlexibleCoefficients::new(0.5, 0.5, 0.0, 0.5),
            Method::Average => FlexibleCoefficients::new(n_i / (n_i + n_j), n_j / (n_i + n_j), 0.0, 0.0),
            Method::Weighted => FlexibleCoefficients::new(0.5, 0.5, 0.0, 0.0),
            Method::Ward => {
                let t = n_i + n_j + n_k;
                FlexibleCoefficients::new((n_i + n_k) / t, (n_j + n_k) / t, -n_k / t, 0.0)
            }
            Method::Centroid => {
                let s = n_i + n_j;
                FlexibleCoefficients::new(n_i / s, n_j / s, -(n_i * n_j) / (s * s), 0.0)
            }
            Method::Median => FlexibleCoefficients::new(0.5, 0.5, -0.25, 0.0),
            Method::Flexible(c) => c,
        }
    }
}

/// The combined-formula coefficients that reproduce a named scheme.
pub fn flexible_coefficients(method: Method) -> Result<CoefficientRule> {
    if let Method::Flexible(_) = method {
        return Err(Error::InvalidArgument(
            "flexible already carries its own coefficients".into(),
        ));
    }
    Ok(CoefficientRule { method })
}

/// Non-iterative dissimilarity between point sets `a` and `b` under the
/// original input `d0`.
///
/// Supported for single, complete, average and Ward; Ward uses the general
/// form that holds for any dissimilarity index, not only Euclidean ones.
/// The result is on the input (unsquared) scale.
pub fn closed_form_dissimilarity(method: Method, a: &[usize], b: &[usize], d0: &CondensedMatrix) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("clusters must be nonempty".into()));
    }
    let n = d0.n();
    let mut seen = vec![false; n];
    for &x in a.iter().chain(b) {
        if x >= n {
            return Err(Error::InvalidArgument(format!("point {} out of range", x)));
        }
        if seen[x] {
            return Err(Error::InvalidArgument(format!(
                "point {} appears twice; clusters must be disjoint",
                x
            )));
        }
        seen[x] = true;
    }
    let cross = || a.iter().flat_map(|&x| b.iter().map(move |&y| d0.get(x, y)));
    match method {
        Method::Single => Ok(cross().fold(f64::INFINITY, f64::min)),
        Method::Complete => Ok(cross().fold(f64::NEG_INFINITY, f64::max)),
        Method::Average => Ok(cross().sum::<f64>() / (a.len() * b.len()) as f64),
        Method::Ward => {
            let (size_a, size_b) = (a.len() as f64, b.len() as f64);
            let within = |s: &[usize]| {
                let mut total = 0.0;
                for (p, &x) in s.iter().enumerate() {
                    for &y in &s[p + 1..] {
                        total += d0.get(x, y).powi(2);
                    }
                }
                // Ordered pairs count each unordered pair twice.
                2.0 * total
            };
            let between: f64 = cross().map(|v| v * v).sum();
            let squared =
                (2.0 * between - size_b / size_a * within(a) - size_a / size_b * within(b)) / (size_a + size_b);
            Ok(squared.max(0.0).sqrt())
        }
        other => Err(Error::UnsupportedMethod {
            algorithm: "closed form",
            method: other.to_string(),
            reason: "the cluster dissimilarity depends on the merge order or needs vector input",
        }),
    }
}

/// A sampled violation of the reducibility property.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducibilityCounterexample {
    pub d_ik: f64,
    pub d_jk: f64,
    pub d_ij: f64,
    pub sizes: SizeTriple,
    pub merged: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reducibility {
    Pass { trials: usize },
    Fail(ReducibilityCounterexample),
}

impl Reducibility {
    pub fn passed(&self) -> bool {
        matches!(self, Reducibility::Pass { .. })
    }
}

/// Falsification search for the reducibility property
///
/// ```text
/// d(I,J) <= min(d(I,K), d(J,K))  =>  min(d(I,K), d(J,K)) <= d(I∪J, K)
/// ```
///
/// Triples and cluster sizes (with `n_i + n_j + n_k <= n`) are sampled at
/// random, half of them from a coarse integer grid so that ties occur. The
/// all-equal singleton triple is always tried first. Values are on the
/// internal scale (squared for the geometric schemes), which leaves the
/// property unchanged.
pub fn check_reducibility(method: Method, trials: usize, n: usize, seed: u64) -> Result<Reducibility> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "three disjoint clusters need at least 3 points, got {}",
            n
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let (sizes, mut triple) = if t == 0 {
            (SizeTriple::singletons(), [1.0, 1.0, 1.0])
        } else {
            let i = rng.random_range(1..=n - 2);
            let j = rng.random_range(1..=n - 1 - i);
            let k = rng.random_range(1..=n - i - j);
            let triple = if rng.random_bool(0.5) {
                [0, 1, 2].map(|_| rng.random_range(0..4) as f64)
            } else {
                [0, 1, 2].map(|_| rng.random::<f64>())
            };
            (SizeTriple { i, j, k }, triple)
        };
        triple.sort_by(f64::total_cmp);
        let d_ij = triple[0];
        let (d_ik, d_jk) = if rng.random_bool(0.5) {
            (triple[1], triple[2])
        } else {
            (triple[2], triple[1])
        };
        let merged = lance_williams(
            &method,
            d_ik,
            d_jk,
            d_ij,
            sizes.i as f64,
            sizes.j as f64,
            sizes.k as f64,
        );
        let bound = d_ik.min(d_jk);
        let slack = 1e-12 * bound.abs().max(merged.abs());
        if merged < bound - slack {
            return Ok(Reducibility::Fail(ReducibilityCounterexample {
                d_ik,
                d_jk,
                d_ij,
                sizes,
                merged,
            }));
        }
    }
    Ok(Reducibility::Pass { trials })
}
