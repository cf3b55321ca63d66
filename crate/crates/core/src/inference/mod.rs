//! Knowledge extraction on top of parsed edges: conjunction splitting, open
//! information extraction, claims, conflicts and factions.

pub mod claims;
pub mod conjunctions;
pub mod factions;
pub mod oie;
pub mod text;

pub use claims::{
    actor_category, detect_claim, detect_conflict, extract_claim_context, inspect_predicate,
    resolve_anaphora, ActorCategory, Claim, Conflict, LemmaSets, Pronoun, Tense,
};
pub use conjunctions::{decompose_conjunctions, decompose_fully};
pub use factions::{detect_factions, ConflictEdge, ConflictNetwork, EmptyNetwork, Factions};
pub use oie::{extract_oie, oie_patterns, OieTuple};
pub use text::render_text;
