//! Randomized decomposition of drawn graphs into `k` planes with small
//! local crossing number, with exact checks and bound calculators.

// Argument checks use `!(x >= 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod decompose;
pub mod drawing;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod montecarlo;
pub mod oracle;
pub mod svg;
pub mod weights;

mod rng;

pub use rng::derive_seed;

pub use decompose::{
    decompose_by_coloring, decompose_combined, decompose_lcr, decompose_via_degree_partition,
    degree_partition, Decomposition, DecompositionReport, Method, PlaneAssignment, SearchConfig,
    StopRule, VertexLabeling,
};
pub use drawing::{Crossing, Drawing, IntersectionGraph};
pub use error::{Degeneracy, Error, Result};
pub use graph::Graph;
pub use montecarlo::{run_montecarlo, MonteCarloConfig, MonteCarloSummary};
pub use oracle::{LabelingObjective, OracleResult};
pub use weights::{optimal_weights, WeightVector};
