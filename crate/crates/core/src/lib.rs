//! Finite-scale machinery for decomposition complexity over word metrics.
//!
//! The crate realizes, on finite carriers, the metric geometry used to study
//! finite decomposition complexity of groups and their box spaces:
//!
//! - [`metric`]: exact integer metric spaces, subsets, neighborhoods,
//!   r-disjointness and Lebesgue numbers;
//! - [`group`]: group models (integer lattices, finite tables, permutation
//!   groups) with proper word-length functions, subgroups and quotient
//!   metrics, each quotient cross-checked against an independent
//!   coset-minimum oracle;
//! - [`boxspace`]: residually finite chains, truncated box spaces with the
//!   exact cross-piece metric, and injectivity radii;
//! - [`decomp`]: decomposition verifiers (ordinary, full, invariant), the
//!   ordinary/full transform constructions, equi-variant pullback and
//!   pushforward along quotient maps, and an exact fixed-scale dimension
//!   solver;
//! - [`game`]: the two-player decomposition game with pluggable strategies
//!   and verified, replayable transcripts;
//! - [`maps`]: empirical expansion/properness moduli for maps of families,
//!   coarse-equivalence checks, and the metric check for canonical
//!   subquotient isomorphisms.
//!
//! Everything is exact: distances are non-negative integers, infinity is an
//! explicit marker, and every verifier reports witnesses on failure.

pub mod boxspace;
pub mod decomp;
pub mod error;
pub mod game;
pub mod group;
pub mod maps;
pub mod metric;

pub use error::{Error, Result};
