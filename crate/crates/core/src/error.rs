//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by construction and verification operations.
///
/// Verdicts (a check that ran and came out negative) are not errors; they
/// are returned as explicit verdict values by the individual operations.
/// An `Error` means the operation could not be carried out at all.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live on different carrier spaces.
    #[error("carrier mismatch: operands live on different metric spaces")]
    CarrierMismatch,

    /// A family that was required to cover a region does not.
    #[error("family does not cover the region: {missing} point(s) uncovered, first is {first}")]
    NotACover { missing: usize, first: String },

    /// A BFS window was too small for the requested computation.
    #[error("window exhausted while {context}: needed radius {needed}, window is {window}")]
    OutOfWindow {
        needed: u32,
        window: u32,
        context: String,
    },

    /// A metric axiom failed on a constructed space.
    #[error("metric axiom violated ({axiom}) at {witness}")]
    MetricAxiom { axiom: String, witness: String },

    /// A quotient was requested along a subgroup of infinite index.
    #[error("subgroup has infinite index in {context}; quotient is not finite")]
    InfiniteIndex { context: String },

    /// A subgroup failed a normality check.
    #[error("subgroup is not normal: conjugate of {witness} escapes")]
    NotNormal { witness: String },

    /// A chain failed the nesting requirement.
    #[error("chain is not nested at level {level}: {witness} is not in the previous subgroup")]
    NotNested { level: usize, witness: String },

    /// A declared generating set is not closed under inverses.
    #[error("generator set is not symmetric: inverse of {witness} is missing")]
    GeneratorsNotSymmetric { witness: String },

    /// The declared generators do not generate the group.
    #[error("generators do not generate: {witness} is unreachable")]
    NotGenerating { witness: String },

    /// Two independent routes to the same quantity disagreed.
    #[error("cross-check failed while {context}: {witness}")]
    CrossCheckFailed { context: String, witness: String },

    /// An enumeration cap was hit; raise the cap to proceed.
    #[error("{what} has size {actual}, above the configured cap {cap}; raise the cap to enumerate it")]
    CapExceeded {
        what: String,
        cap: usize,
        actual: usize,
    },

    /// The open ball required by a coset decomposition escapes the subgroup.
    #[error("ball condition fails: {element} has length below {radius} but is outside the subgroup")]
    BallEscapesSubgroup { element: String, radius: u32 },

    /// The separation constant of an equi-variant construction is violated.
    #[error("separation fails at scale {scale}: nontrivial subgroup element {witness} has length {length} < {scale}")]
    SeparationViolated {
        scale: u32,
        witness: String,
        length: u32,
    },

    /// A piece is too large for the requested equi-variant construction.
    #[error("piece {piece} has diameter {diameter}, not below the separation constant {bound}")]
    PieceTooLarge {
        piece: String,
        diameter: u32,
        bound: u32,
    },

    /// A transform was fed a sequence that fails its stage verification.
    #[error("input sequence fails verification at stage {stage}: {details}")]
    StageUnverified { stage: usize, details: String },

    /// A construction argument was structurally invalid.
    #[error("invalid construction: {0}")]
    Invalid(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
