//! Claims ("X says Y") and conflicts ("X accuses Y over Z").

use serde::{Deserialize, Serialize};

use crate::hedge::{Hyperedge, TypeCode};
use crate::patterns::{Pattern, Query};
use crate::store::Store;

/// Lemmas that mark claim and conflict predicates, and the triggers that introduce a conflict topic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaSets {
    pub claim: Vec<String>,
    pub conflict: Vec<String>,
    pub conflict_triggers: Vec<String>,
}

impl Default for LemmaSets {
    fn default() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect();
        LemmaSets {
            claim: s(&["say", "claim"]),
            conflict: s(&["accuse", "arrest", "clash", "condemn", "kill", "slam", "warn"]),
            conflict_triggers: s(&["against", "for", "of", "over"]),
        }
    }
}

impl LemmaSets {
    pub fn claim_query(&self) -> Query {
        let s = format!(
            "(PRED/P.{{sr}} ACTOR/C CLAIM/[RS]) & (lemma/J >PRED/P [{}]/P)",
            self.claim.join(",")
        );
        s.parse().expect("claim query")
    }

    pub fn conflict_query(&self) -> Query {
        let s = format!(
            "(PRED/P.{{so,x}} SOURCE/C TARGET/C ([{}]/T TOPIC)) & (lemma/J >PRED/P [{}]/P)",
            self.conflict_triggers.join(","),
            self.conflict.join(",")
        );
        s.parse().expect("conflict query")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pronoun {
    He,
    She,
    It,
    They,
}

impl Pronoun {
    pub fn from_root(root: &str) -> Option<Pronoun> {
        Some(match root {
            "he" => Pronoun::He,
            "she" => Pronoun::She,
            "it" => Pronoun::It,
            "they" => Pronoun::They,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActorCategory {
    Male,
    Female,
    NonHuman,
    Group,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub actor: Hyperedge,
    pub predicate: Hyperedge,
    /// The claimed content, with a leading pronoun subject replaced by the actor.
    pub claim: Hyperedge,
    pub contexts: Vec<Hyperedge>,
    pub specifications: Vec<Hyperedge>,
    pub tense: Tense,
    pub negated: bool,
    pub pronoun: Option<Pronoun>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub source: Hyperedge,
    pub target: Hyperedge,
    pub predicate: Hyperedge,
    /// The trigger specification, e.g. `(over/T syria/C)`.
    pub topic: Hyperedge,
    pub trigger: String,
}

impl Conflict {
    /// The topic without its trigger.
    pub fn topic_content(&self) -> &Hyperedge {
        self.topic.args().first().unwrap_or(&self.topic)
    }
}

fn is_colon_conjunction(e: &Hyperedge) -> bool {
    matches!(e.connector().and_then(|c| c.as_atom()), Some(a) if a.root == ":" && a.code == TypeCode::J)
}

/// Peels nested `:/J` edges into a flat list of items, in order.
fn flatten(e: &Hyperedge, out: &mut Vec<Hyperedge>) {
    if is_colon_conjunction(e) {
        for a in e.args() {
            flatten(a, out);
        }
    } else {
        out.push(e.clone());
    }
}

fn x_args(e: &Hyperedge) -> Vec<Hyperedge> {
    if e.is_atom() || e.infer_type().ok() != Some(TypeCode::R) {
        return Vec::new();
    }
    let roles: Vec<char> = e.connector_roles().unwrap_or("").chars().collect();
    e.args()
        .iter()
        .enumerate()
        .filter(|(i, _)| roles.get(*i) == Some(&'x'))
        .map(|(_, a)| a.clone())
        .collect()
}

/// Splits an outer edge into its first relation, the other `:/J`-connected
/// items, and the `x`-role specifications of all of them.
pub fn extract_claim_context(outer: &Hyperedge) -> Option<(Hyperedge, Vec<Hyperedge>, Vec<Hyperedge>)> {
    let mut items = Vec::new();
    flatten(outer, &mut items);
    let i = items
        .iter()
        .position(|e| !e.is_atom() && e.infer_type().ok() == Some(TypeCode::R))?;
    Some(split_items(items, i))
}

fn split_items(mut items: Vec<Hyperedge>, i: usize) -> (Hyperedge, Vec<Hyperedge>, Vec<Hyperedge>) {
    let claim = items.remove(i);
    let mut specs = x_args(&claim);
    for c in &items {
        for s in x_args(c) {
            if !specs.contains(&s) {
                specs.push(s);
            }
        }
    }
    (claim, items, specs)
}

/// Tense and negation read off a predicate.
pub fn inspect_predicate(pred: &Hyperedge) -> (Tense, bool) {
    let atoms = pred.atoms();
    let negated = atoms
        .iter()
        .any(|a| a.code == TypeCode::M && (a.root == "not" || a.root == "n't"));
    let tense = if atoms.iter().any(|a| a.code == TypeCode::M && a.root == "will") {
        Tense::Future
    } else if atoms.iter().any(|a| a.code == TypeCode::P && a.root == "was") {
        Tense::Past
    } else {
        Tense::Present
    };
    (tense, negated)
}

/// Replaces a pronoun subject of `claim` with `actor`.
pub fn resolve_anaphora(claim: &Hyperedge, actor: &Hyperedge) -> (Hyperedge, Option<Pronoun>) {
    let Some(roles) = claim.connector_roles() else {
        return (claim.clone(), None);
    };
    let Some(i) = roles.find('s').or_else(|| roles.find('p')) else {
        return (claim.clone(), None);
    };
    let Some(subj) = claim.args().get(i) else {
        return (claim.clone(), None);
    };
    let pronoun = subj
        .as_atom()
        .filter(|a| a.code == TypeCode::C)
        .and_then(|a| Pronoun::from_root(&a.root));
    match pronoun {
        Some(p) => (claim.replace_at(&[i + 1], actor.clone()), Some(p)),
        None => (claim.clone(), None),
    }
}

/// Majority category from pronoun evidence; ties or no evidence give `Unknown`.
pub fn actor_category(evidence: &[Pronoun]) -> ActorCategory {
    let cat = |p: &Pronoun| match p {
        Pronoun::He => ActorCategory::Male,
        Pronoun::She => ActorCategory::Female,
        Pronoun::It => ActorCategory::NonHuman,
        Pronoun::They => ActorCategory::Group,
    };
    let mut counts = std::collections::BTreeMap::new();
    for p in evidence {
        *counts.entry(cat(p)).or_insert(0usize) += 1;
    }
    let Some(max) = counts.values().max().copied() else {
        return ActorCategory::Unknown;
    };
    let top: Vec<_> = counts.iter().filter(|(_, c)| **c == max).collect();
    if top.len() == 1 {
        *top[0].0
    } else {
        ActorCategory::Unknown
    }
}

fn first_match(
    edge: &Hyperedge,
    store: &Store,
    q: &Query,
) -> Option<(Vec<Hyperedge>, usize, crate::patterns::Binding)> {
    let mut items = Vec::new();
    flatten(edge, &mut items);
    for (i, it) in items.iter().enumerate() {
        if let Some(b) = q.matches(it, store).into_iter().next() {
            return Some((items, i, b));
        }
    }
    None
}

pub fn detect_claim(edge: &Hyperedge, store: &Store, sets: &LemmaSets) -> Option<Claim> {
    let (items, i, b) = first_match(edge, store, &sets.claim_query())?;
    let actor = b.edge("ACTOR")?.clone();
    let predicate = b.edge("PRED")?.clone();
    let raw = b.edge("CLAIM")?.clone();
    let (claim_rel, contexts, mut specifications) = split_items(items, i);
    for s in x_args(&raw) {
        if !specifications.contains(&s) {
            specifications.push(s);
        }
    }
    let _ = claim_rel;
    let (tense, negated) = if raw.infer_type().ok() == Some(TypeCode::R) {
        inspect_predicate(&raw.elements()[0])
    } else {
        (Tense::Present, false)
    };
    let (claim, pronoun) = resolve_anaphora(&raw, &actor);
    Some(Claim {
        actor,
        predicate,
        claim,
        contexts,
        specifications,
        tense,
        negated,
        pronoun,
    })
}

pub fn detect_conflict(edge: &Hyperedge, store: &Store, sets: &LemmaSets) -> Option<Conflict> {
    let (items, i, b) = first_match(edge, store, &sets.conflict_query())?;
    let rel = &items[i];
    let topic_inner = b.edge("TOPIC")?;
    let topic = x_args(rel).into_iter().find(|a| {
        a.args().first() == Some(topic_inner)
            && a.connector()
                .and_then(|c| c.as_atom())
                .map(|c| c.code == TypeCode::T && sets.conflict_triggers.contains(&c.root))
                .unwrap_or(false)
    })?;
    let trigger = topic.elements()[0].as_atom()?.root.clone();
    Some(Conflict {
        source: b.edge("SOURCE")?.clone(),
        target: b.edge("TARGET")?.clone(),
        predicate: b.edge("PRED")?.clone(),
        topic,
        trigger,
    })
}

/// Pattern text used for claims, for display.
pub fn claim_patterns(sets: &LemmaSets) -> Vec<Pattern> {
    let q = sets.claim_query();
    let mut v = vec![q.main];
    v.extend(q.aux);
    v
}
