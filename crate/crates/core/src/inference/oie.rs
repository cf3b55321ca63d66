//! Open information extraction: ⟨arg1, relation, arg2[, arg3]⟩ tuples from edges.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::conjunctions::decompose_fully;
use super::text::render_text;
use crate::hedge::Hyperedge;
use crate::patterns::{match_pattern, Binding, Pattern, Value};
use crate::store::Store;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OieTuple {
    pub rel: String,
    pub args: Vec<String>,
}

impl OieTuple {
    /// Tab-separated `rel, arg1, arg2[, arg3]`.
    pub fn to_tsv(&self) -> String {
        let mut v = vec![self.rel.clone()];
        v.extend(self.args.iter().cloned());
        v.join("\t")
    }
}

impl fmt::Display for OieTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut v = vec![self.args[0].clone(), self.rel.clone()];
        v.extend(self.args[1..].iter().cloned());
        write!(f, "⟨{}⟩", v.join(", "))
    }
}

const RELATION_PATTERNS: [&str; 4] = [
    "(REL/P.{[sp][cora]x} ARG1/C ARG2 ARG3...)",
    "(REL1/P.{sx}-oc ARG1/C (REL2/T ARG2))",
    "(REL1/P.{px} ARG1/C (REL2/T ARG2))",
    "(REL1/P.{sc} ARG1/C (REL3/B REL2/C ARG2/C))",
];

const CONCEPT_PATTERN: &str = "(+/B.{m[ma]} (ARG1/C...) (ARG2/C...))";

fn compiled() -> &'static (Vec<Pattern>, Pattern) {
    static P: OnceLock<(Vec<Pattern>, Pattern)> = OnceLock::new();
    P.get_or_init(|| {
        (
            RELATION_PATTERNS.iter().map(|s| s.parse().unwrap()).collect(),
            CONCEPT_PATTERN.parse().unwrap(),
        )
    })
}

/// The extraction patterns, relation patterns first.
pub fn oie_patterns() -> Vec<Pattern> {
    let (rels, concept) = compiled();
    let mut v = vec![rels[0].clone(), concept.clone()];
    v.extend(rels[1..].iter().cloned());
    v
}

fn tuple(b: &Binding, store: Option<&Store>) -> Option<OieTuple> {
    let text = |v: &Value| {
        v.edges()
            .iter()
            .map(|e| render_text(e, store))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut rels: Vec<(&String, &Value)> = b.iter().filter(|(k, _)| k.starts_with("REL")).collect();
    rels.sort_by(|a, b| a.0.cmp(b.0));
    let rel = if rels.is_empty() {
        "is".to_string()
    } else {
        rels.iter().map(|(_, v)| text(v)).collect::<Vec<_>>().join(" ")
    };
    let mut args = vec![text(b.get("ARG1")?), text(b.get("ARG2")?)];
    if let Some(v) = b.get("ARG3") {
        let t = text(v);
        if !t.is_empty() {
            args.push(t);
        }
    }
    Some(OieTuple { rel, args })
}

/// Tuples for one edge. Conjunctions are decomposed first; relation patterns
/// apply to each resulting edge, the concept pattern to all their sub-edges.
pub fn extract_oie(edge: &Hyperedge, store: Option<&Store>) -> Vec<OieTuple> {
    let (rels, concept) = compiled();
    let mut out: Vec<OieTuple> = Vec::new();
    let mut push = |t: Option<OieTuple>| {
        if let Some(t) = t {
            if !out.contains(&t) {
                out.push(t);
            }
        }
    };
    for e in decompose_fully(edge) {
        for p in rels {
            for b in match_pattern(&e, p) {
                push(tuple(&b, store));
            }
        }
        for sub in e.subedges() {
            for b in match_pattern(sub, concept) {
                push(tuple(&b, store));
            }
        }
    }
    out
}
