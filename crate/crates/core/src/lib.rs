//! Densities, distribution functions and polyadic analysis of integer-indexed
//! sequences, computed on finite windows with explicit diagnostics.

pub mod apset;
pub mod density;
pub mod dist;
pub mod error;
pub mod experiments;
pub mod func;
pub mod ladder;
pub mod polyadic;
pub mod seqgen;
pub mod sieve;

pub use apset::{APSet, Progression};
pub use error::{Error, Result};
pub use func::TestFn;
pub use ladder::Ladder;
pub use seqgen::{BaseChain, Generator, GeneratorSpec, SequenceWindow};
pub use dist::Edf;
pub use experiments::ExperimentReport;
pub use polyadic::{DyadicRational, OmegaPoint};
