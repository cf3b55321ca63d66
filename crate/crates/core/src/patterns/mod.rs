//! Pattern language over hyperedges: variables, typed wildcards, role
//! constraints, sequences, and `lhs |- rhs` rewrite rules.
//!
//! ```
//! use shg::patterns::{match_pattern, Pattern};
//! let p: Pattern = "(is/P.{sc} SUBJ PROP/C ...)".parse().unwrap();
//! let e = "(is/P.sc (the/M sky/C) blue/C)".parse().unwrap();
//! let b = &match_pattern(&e, &p)[0];
//! assert_eq!(b.edge("PROP").unwrap().to_string(), "blue/C");
//! ```

mod matcher;
mod rules;
mod syntax;

pub use matcher::{match_pattern, match_with, matches, substitute, Binding, Value};
pub use rules::{
    apply_rule, apply_rule_with, instantiate, match_all, parse_rules, EdgeCollection, Query, Rule,
    RuleError,
};
pub use syntax::{is_var_name, parse_pattern, AtomPattern, Pattern, PatternError, RoleSpec, RootSpec};
