//! Dyadic-cube geometry: domains as cell masks, boundary generators with
//! exact rational distance queries, Whitney decomposition, the domain tree
//! with matched-scale annotations, its partition into distance bands, and
//! the quotient tree fed to the discrete Hardy machinery.
//!
//! All geometric predicates that feed structural assertions (non-overlap,
//! neighbor level gaps, the dyadic distance bracket behind `k`) are computed
//! in integer or rational arithmetic; floating point only appears in
//! measured ratios.

mod domain;
mod dtree;
mod gamma;
mod whitney;

pub use domain::DomainSpec;
pub use dtree::{
    annotation_checks, block_distance_ratios, blocks_and_quotient, build_domain_tree,
    counting_checks, domain_tree_json, partition, AnnotationChecks, Block, CountingReport,
    DomainTree, Partition, Quotient, DEFAULT_C_CAL,
};
pub use gamma::{GammaSet, GammaSpec};
pub use whitney::{whitney_decompose, DyadicCube, WhitneyDecomposition};
