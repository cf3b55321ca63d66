//! Learning patterns from examples and mining them from a corpus.

pub mod mining;
pub mod refine;
pub mod session;

pub use mining::{generalizations, mine_patterns, GeneralizationConfig, MinedPattern};
pub use refine::{generalize, refine, store_matches, LearnError, RefineParams};
pub use session::{select_candidate, Criterion, Session};
