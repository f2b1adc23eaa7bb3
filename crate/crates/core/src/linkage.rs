//! Algorithm selection and the method whitelists.

use std::fmt;
use std::str::FromStr;

use crate::condensed::CondensedMatrix;
use crate::dendrogram::StepwiseDendrogram;
use crate::method::Method;
use crate::oracle::{primitive_clustering, TieBreak};
use crate::vector::{Metric, VectorDataset};
use crate::{anderberg, generic, mst, nnchain, vector, Error, Result};

/// Work counters reported by the `*_with_stats` entry points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LinkageStats {
    /// Nearest-neighbor searches caused by stale or invalidated neighbor
    /// information (generic, generic variant and Anderberg only).
    pub recalculations: u64,
    /// Dissimilarity entries examined by neighbor and minimum searches.
    pub scanned: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Primitive,
    Generic,
    NnChain,
    Mst,
    Anderberg,
    GenericVariant,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Primitive,
        Algorithm::Generic,
        Algorithm::NnChain,
        Algorithm::Mst,
        Algorithm::Anderberg,
        Algorithm::GenericVariant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Primitive => "primitive",
            Algorithm::Generic => "generic",
            Algorithm::NnChain => "nnchain",
            Algorithm::Mst => "mst",
            Algorithm::Anderberg => "anderberg",
            Algorithm::GenericVariant => "generic-variant",
        }
    }

    /// Checks that the algorithm produces correct results for `method`.
    pub fn supports(&self, method: Method) -> Result<()> {
        let unsupported = |reason| {
            Err(Error::UnsupportedMethod {
                algorithm: self.name(),
                method: method.to_string(),
                reason,
            })
        };
        match self {
            Algorithm::Primitive | Algorithm::Generic | Algorithm::Anderberg => Ok(()),
            Algorithm::NnChain => match method {
                Method::Single | Method::Complete | Method::Average | Method::Weighted | Method::Ward => Ok(()),
                _ => unsupported(
                    "the nearest-neighbor chain needs a reducible update whose cluster dissimilarities do not \
                     depend on the merge order; use it with single, complete, average, weighted or ward",
                ),
            },
            Algorithm::Mst => match method {
                Method::Single => Ok(()),
                _ => unsupported("the minimum spanning tree algorithm computes single linkage only"),
            },
            Algorithm::GenericVariant => match method {
                Method::Ward | Method::Centroid | Method::Median => Ok(()),
                _ => {
                    unsupported("the variant works on cluster centers, which exist for ward, centroid and median only")
                }
            },
        }
    }

    /// The fastest correct algorithm for `method` on a dissimilarity
    /// matrix.
    pub fn recommended(method: Method) -> Algorithm {
        match method {
            Method::Single => Algorithm::Mst,
            Method::Complete | Method::Average | Method::Weighted | Method::Ward => Algorithm::NnChain,
            Method::Centroid | Method::Median | Method::Flexible(_) => Algorithm::Generic,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm '{}'", s)))
    }
}

/// Clusters a dissimilarity matrix with the chosen algorithm.
pub fn linkage(d0: &CondensedMatrix, algorithm: Algorithm, method: Method) -> Result<StepwiseDendrogram> {
    Ok(linkage_with_stats(d0, algorithm, method)?.0)
}

pub fn linkage_with_stats(
    d0: &CondensedMatrix,
    algorithm: Algorithm,
    method: Method,
) -> Result<(StepwiseDendrogram, LinkageStats)> {
    algorithm.supports(method)?;
    match algorithm {
        Algorithm::Primitive => Ok((
            primitive_clustering(d0, method, TieBreak::default())?,
            LinkageStats::default(),
        )),
        Algorithm::Generic => generic::generic_linkage_with_stats(d0, method),
        Algorithm::NnChain => nnchain::nn_chain_linkage_with_stats(d0, method),
        Algorithm::Mst => mst::mst_linkage_with_stats(d0, 0),
        Algorithm::Anderberg => anderberg::anderberg_linkage_with_stats(d0, method),
        Algorithm::GenericVariant => Err(Error::InvalidArgument(
            "generic-variant clusters vector data; it cannot run on a dissimilarity matrix".into(),
        )),
    }
}

/// Clusters vector data under the Euclidean metric.
///
/// MST single linkage, the generic variant and Ward's method with the
/// nearest-neighbor chain work on the points directly. Every other
/// combination clusters the materialized distance matrix.
pub fn linkage_vectors(ds: &VectorDataset, algorithm: Algorithm, method: Method) -> Result<StepwiseDendrogram> {
    Ok(linkage_vectors_with_stats(ds, algorithm, method)?.0)
}

/// [`linkage_vectors`] that also reports the work counters.
pub fn linkage_vectors_with_stats(
    ds: &VectorDataset,
    algorithm: Algorithm,
    method: Method,
) -> Result<(StepwiseDendrogram, LinkageStats)> {
    algorithm.supports(method)?;
    match (algorithm, method) {
        (Algorithm::Mst, _) => vector::mst_linkage_vectors_with_stats(ds, &Metric::Euclidean),
        (Algorithm::GenericVariant, _) => vector::generic_linkage_variant_with_stats(ds, method),
        (Algorithm::NnChain, Method::Ward) => vector::nn_chain_ward_vectors_with_stats(ds),
        _ => {
            let d0 = vector::pairwise_dissimilarity(ds, &Metric::Euclidean)?;
            linkage_with_stats(&d0, algorithm, method)
        }
    }
}
