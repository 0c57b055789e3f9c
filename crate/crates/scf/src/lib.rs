//! Contrastive representation learning for cover/stego classification.
//!
//! This crate implements a compact, fully deterministic steganalysis
//! training stack around one idea: *contrastive losses are sums of
//! single-positive log terms*, and how many terms a loss spends decides
//! what it costs. The pieces:
//!
//! - [`numkit`] — dense `f64` matrices, stable reductions, seeded
//!   randomness with named substreams, 2-D PCA, and a finite-difference
//!   gradient checker.
//! - [`rss`] — a union-find forest and the random positive sampler that
//!   picks one same-class positive per anchor, spanning each class with
//!   `C - 1` pairs instead of `C * (C - 1)` ordered ones.
//! - [`losses`] — self-supervised, supervised and spanning-tree
//!   contrastive losses plus softmax cross-entropy, each with an exact
//!   analytic gradient and a brute-force oracle.
//! - [`model`] — a small convolutional network with a fixed high-pass
//!   preprocessing stencil and a hand-written backward pass.
//! - [`data`] — a synthetic cover/stego dataset: smooth random covers,
//!   a plus/minus-one embedder, deterministic 6:1:3 splits, and a
//!   byte-exact file format.
//! - [`trainer`] — the joint cross-entropy + contrastive training loop,
//!   the minimum-error-probability metric, silhouette scoring and
//!   cross-payload evaluation.
//! - [`bench`] — exact per-loss term counting and single-threaded
//!   wall-clock micro-benchmarks of loss evaluation.
//!
//! The [`guide`] module mirrors the chapters of the book under `book/`;
//! its code blocks compile and run as doc-tests.

pub mod error;
pub mod losses;
pub mod numkit;
pub mod rss;

mod codec;
mod par;

pub use error::{Error, Result};
