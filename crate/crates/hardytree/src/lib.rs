//! Weighted Hardy-type operators on rooted trees, Whitney decompositions of
//! cube domains with fractal boundary annotations, and the tree-partition
//! pipeline that turns the two into embedding-constant experiments.
//!
//! The crate is organized around the pipeline:
//!
//! 1. [`tree`] - rooted combinatorial trees and the admissible subtree
//!    family behind the norm characterization.
//! 2. [`weights`] - the exponent/weight parameter pack, level weights, and
//!    the integer level profile driving regular trees.
//! 3. [`hardy`] - the discrete Hardy operator, exact and optimization-based
//!    `l_p -> l_q` norms, and the two-weight sequence inequality.
//! 4. [`ehp`] - the subtree recursion, its variational oracle, and the
//!    reduction brackets.
//! 5. [`regular`] - regular comparison trees and symmetrization.
//! 6. [`geometry`] - dyadic cubes, Whitney decomposition, the domain tree,
//!    its partition into distance bands, and the quotient tree.
//! 7. [`embed`] - embedding-constant estimates, scaling sweeps, grid checks,
//!    and the unboundedness witness.
//! 8. [`scenario`] / [`suite`] - named end-to-end setups and the acceptance
//!    checks the CLI exposes as `suite`.
//!
//! Heavy inner loops (oracle restarts, per-subtree scalar sweeps, distance
//! annotation, parameter sweeps) run on rayon when the default `parallel`
//! feature is on and fall back to sequential loops without it; outputs are
//! identical either way.

pub mod error;
pub mod par;

pub mod tree;
pub mod weights;

pub mod hardy;

pub mod ehp;

pub mod regular;

pub mod geometry;

pub mod embed;

pub mod scenario;
pub mod suite;

pub use error::{Error, Result};
