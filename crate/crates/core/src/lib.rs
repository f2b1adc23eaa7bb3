//! Sequential agglomerative hierarchical clustering (SAHN) on condensed
//! dissimilarity matrices and on vector data.
//!
//! The crate provides
//!
//! * [`generic_linkage`], which handles every scheme including the
//!   inverting `centroid`, `median` and flexible recurrences,
//! * [`nn_chain_linkage`] for `single`, `complete`, `average`, `weighted` and
//!   `ward`,
//! * [`mst_linkage`] for single linkage without a working copy of the input,
//! * [`anderberg_linkage`] and [`primitive_clustering`] as baselines,
//! * [`validate_dendrogram`], which decides whether a stepwise dendrogram is
//!   one of the outputs the primitive algorithm could have produced, ties
//!   included.
//!
//! ```
//! use sahn::{CondensedMatrix, Method, nn_chain_linkage};
//!
//! let d = CondensedMatrix::new(3, vec![1.0, 2.0, 4.0]).unwrap();
//! let tree = nn_chain_linkage(&d, Method::Average).unwrap();
//! assert_eq!(tree.scipy_rows(), vec![(0, 1, 1.0), (3, 2, 3.0)]);
//! ```

mod active;
pub mod anderberg;
pub mod condensed;
pub mod dendrogram;
pub mod fixtures;
pub mod formulas;
pub mod generic;
pub mod linkage;
pub mod method;
pub mod mst;
pub mod nnchain;
pub mod oracle;
pub mod postprocess;
pub mod queue;
pub mod vector;

pub use anderberg::{anderberg_linkage, anderberg_linkage_with_stats};
pub use condensed::{condensed_index, condensed_len, CondensedMatrix};
pub use dendrogram::{convert_convention, Convention, Merge, Step, StepwiseDendrogram, UnsortedDendrogram};
pub use formulas::{
    check_reducibility, closed_form_dissimilarity, flexible_coefficients, update_distance, Reducibility, SizeTriple,
};
pub use generic::{generic_linkage, generic_linkage_with_stats};
pub use linkage::{linkage, Algorithm, LinkageStats};
pub use method::{FlexibleCoefficients, Method, MethodKind};
pub use mst::{mst_linkage, mst_linkage_core};
pub use nnchain::{nn_chain_core, nn_chain_linkage};
pub use oracle::{enumerate_valid_dendrograms, primitive_clustering, validate_dendrogram, TieBreak, Verdict};
pub use postprocess::{label, stable_sort_by_delta, UnionFind};
pub use queue::MinPriorityQueue;
pub use vector::{generic_linkage_variant, mst_linkage_vectors, pairwise_dissimilarity, Metric, VectorDataset};

/// Errors reported by the clustering routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("{algorithm} does not support the {method} method: {reason}")]
    UnsupportedMethod {
        algorithm: &'static str,
        method: String,
        reason: &'static str,
    },
    #[error("input of {n} points exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
