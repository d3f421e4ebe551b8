//! Executable combinatorics behind concrete independence results for Peano
//! arithmetic: ordinals up to ε₀, the Hardy hierarchy, Goodstein sequences,
//! Paris–Harrington and Kanamori–McAloon arrows, the worm game, and tree
//! embeddings with regal/kiralic indicators.
//!
//! Every operation is exact and deterministic. Searches that can blow up
//! take an explicit fuel or budget and report exhaustion as a distinct
//! outcome, never as a negative answer.

pub mod goodstein;
pub mod hardy;
pub mod ordinal;
pub mod ramsey;
pub mod trees;
pub mod worm;

pub use ordinal::{Cnf, Nat, Ordinal, OrdinalError};
