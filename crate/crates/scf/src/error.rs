//! Error type shared across the crate.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A reduction (log-sum-exp, choice, ...) over an empty collection.
    #[error("empty reduction")]
    EmptyReduction,

    /// Random choice from an empty candidate set.
    #[error("empty selection set")]
    EmptySelectionSet,

    /// An operation needs more samples than it got.
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// Index past the end of a container.
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    /// Matrix or batch dimensions do not line up.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// A value that must be finite is NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: String },

    /// Contrastive loss over a batch too small to contrast.
    #[error("no contrast possible: batch has {got} samples, need at least 2")]
    NoContrast { got: usize },

    /// A positive map entry points an anchor at itself.
    #[error("positive map entry {index} references itself")]
    SelfPositive { index: usize },

    /// Supervised contrastive loss over a class with a single member.
    #[error("anchor without positive: label {label} has a single sample")]
    AnchorWithoutPositive { label: u8 },

    /// An anchor with no different-class samples to contrast against.
    #[error("empty negative set for anchor {anchor}")]
    EmptyNegativeSet { anchor: usize },

    /// A configuration value violates its invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Invalid argument to an operation.
    #[error("invalid argument: {0}")]
    InvalidArg(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A serialized file failed validation; `field` names the offending part.
    #[error("format error in field `{field}`: {detail}")]
    Format { field: &'static str, detail: String },

    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}, step {step}: loss = {value}")]
    Diverged { epoch: usize, step: usize, value: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
