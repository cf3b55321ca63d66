//! A multiset of hyperedges with containment and lemma indices.
//!
//! Every non-atomic sub-edge of a stored edge is part of the hypergraph, so
//! `edges_containing` works at any depth.

mod metrics;
mod persist;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::hedge::{Atom, Hyperedge, TypeCode};

pub use persist::{StoreError, HEADER};

/// Prefix of attribute tags holding the surface text of a sub-edge.
pub const SPAN_TAG: &str = "span:";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeAttributes {
    pub count: u64,
    pub text: Option<String>,
    pub tags: BTreeMap<String, String>,
}

#[derive(Default)]
pub struct Store {
    edges: BTreeMap<Hyperedge, EdgeAttributes>,
    // child -> (parent -> number of distinct top-level edges holding that link)
    parents: HashMap<Hyperedge, BTreeMap<Hyperedge, usize>>,
    // every edge present at any depth -> number of distinct top-level edges containing it
    members: HashMap<Hyperedge, usize>,
    // word (roles stripped) -> (lemma -> refcount)
    lemmas: HashMap<Atom, BTreeMap<Atom, usize>>,
    labels: HashMap<Hyperedge, String>,
    delta_cache: Mutex<HashMap<Hyperedge, BTreeSet<Hyperedge>>>,
}

impl Clone for Store {
    fn clone(&self) -> Self {
        Store {
            edges: self.edges.clone(),
            parents: self.parents.clone(),
            members: self.members.clone(),
            lemmas: self.lemmas.clone(),
            labels: self.labels.clone(),
            delta_cache: Mutex::new(HashMap::new()),
        }
    }
}

impl std::fmt::Debug for Store {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Store").field("edges", &self.edges).finish()
    }
}

impl PartialEq for Store {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
    }
}

/// Splits `(lemma/J word lemma)` into its word and lemma atoms.
pub fn as_lemma_edge(e: &Hyperedge) -> Option<(&Atom, &Atom)> {
    let v = e.elements();
    if v.len() != 3 {
        return None;
    }
    let c = v[0].as_atom()?;
    if c.root != "lemma" || c.code != TypeCode::J {
        return None;
    }
    Some((v[1].as_atom()?, v[2].as_atom()?))
}

fn links(e: &Hyperedge) -> (BTreeSet<(Hyperedge, Hyperedge)>, BTreeSet<Hyperedge>) {
    let mut pairs = BTreeSet::new();
    let mut subs = BTreeSet::new();
    for s in e.subedges() {
        subs.insert(s.clone());
        for c in s.elements() {
            pairs.insert((c.clone(), s.clone()));
        }
    }
    (pairs, subs)
}

impl Store {
    pub fn new() -> Store {
        Store::default()
    }

    /// Adds one occurrence; returns the new count.
    pub fn add(&mut self, edge: Hyperedge) -> u64 {
        self.add_with(edge, None, BTreeMap::new())
    }

    /// Adds one occurrence carrying source text and tags (merged into existing ones).
    pub fn add_with(
        &mut self,
        edge: Hyperedge,
        text: Option<String>,
        tags: BTreeMap<String, String>,
    ) -> u64 {
        let fresh = !self.edges.contains_key(&edge);
        if fresh {
            self.index(&edge, 1);
        }
        for (k, v) in &tags {
            if let Some(span) = k.strip_prefix(SPAN_TAG) {
                if let Ok(sub) = span.parse::<Hyperedge>() {
                    self.labels.insert(sub, v.clone());
                }
            }
        }
        let attrs = self.edges.entry(edge).or_default();
        attrs.count += 1;
        if text.is_some() {
            attrs.text = text;
        }
        attrs.tags.extend(tags);
        attrs.count
    }

    /// Inserts an edge with explicit attributes, replacing any previous record.
    pub fn insert(&mut self, edge: Hyperedge, attrs: EdgeAttributes) {
        self.remove_all(&edge);
        if attrs.count == 0 {
            return;
        }
        let count = attrs.count;
        self.add_with(edge.clone(), attrs.text, attrs.tags);
        self.edges.get_mut(&edge).unwrap().count = count;
    }

    /// Removes one occurrence. Returns false when the edge was absent.
    pub fn remove(&mut self, edge: &Hyperedge) -> bool {
        let Some(a) = self.edges.get_mut(edge) else {
            return false;
        };
        a.count -= 1;
        if a.count == 0 {
            self.edges.remove(edge);
            self.index(edge, -1);
        }
        true
    }

    pub fn remove_all(&mut self, edge: &Hyperedge) -> bool {
        if self.edges.remove(edge).is_some() {
            self.index(edge, -1);
            true
        } else {
            false
        }
    }

    fn index(&mut self, edge: &Hyperedge, delta: i64) {
        self.delta_cache.lock().unwrap().clear();
        let (pairs, subs) = links(edge);
        for (child, parent) in pairs {
            let m = self.parents.entry(child.clone()).or_default();
            bump(m, parent, delta);
            if m.is_empty() {
                self.parents.remove(&child);
            }
        }
        for s in subs {
            bump(&mut self.members, s, delta);
        }
        if let Some((w, l)) = as_lemma_edge(edge) {
            let key = w.without_roles();
            let m = self.lemmas.entry(key.clone()).or_default();
            bump(m, l.without_roles(), delta);
            if m.is_empty() {
                self.lemmas.remove(&key);
            }
        }
        if delta < 0 {
            let members = &self.members;
            self.labels.retain(|k, _| members.contains_key(k));
        }
    }

    pub fn contains(&self, edge: &Hyperedge) -> bool {
        self.edges.contains_key(edge)
    }

    /// True if the edge occurs at any depth.
    pub fn contains_deep(&self, edge: &Hyperedge) -> bool {
        self.members.contains_key(edge)
    }

    pub fn count(&self, edge: &Hyperedge) -> u64 {
        self.edges.get(edge).map(|a| a.count).unwrap_or(0)
    }

    pub fn attributes(&self, edge: &Hyperedge) -> Option<&EdgeAttributes> {
        self.edges.get(edge)
    }

    /// Number of distinct top-level edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Top-level edges in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = (&Hyperedge, &EdgeAttributes)> {
        self.edges.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Hyperedge> {
        self.edges.keys()
    }

    /// Every edge present at any depth (atoms included), sorted.
    pub fn all_edges(&self) -> Vec<Hyperedge> {
        let mut v: Vec<Hyperedge> = self.members.keys().cloned().collect();
        v.sort();
        v
    }

    /// D_e: the edges that have `e` as an immediate element.
    pub fn edges_containing(&self, e: &Hyperedge) -> Vec<Hyperedge> {
        self.parents
            .get(e)
            .map(|m| m.keys().cloned().collect())
            .unwrap_or_default()
    }

    /// Surface text recorded for a sub-edge by the parser, else the edge's own text.
    pub fn label(&self, e: &Hyperedge) -> Option<&str> {
        self.labels
            .get(e)
            .or_else(|| self.edges.get(e).and_then(|a| a.text.as_ref()))
            .map(String::as_str)
    }

    /// Lemma of an atom, comparing root, type and namespace but not roles.
    pub fn lemma_of(&self, atom: &Atom) -> Option<Atom> {
        self.lemmas
            .get(&atom.without_roles())
            .and_then(|m| m.keys().next().cloned())
    }

    /// The stored `(lemma/J word lemma)` edges for a word atom.
    pub fn lemma_edges(&self, atom: &Atom) -> Vec<Hyperedge> {
        let w = atom.without_roles();
        self.lemmas
            .get(&w)
            .map(|m| {
                m.keys()
                    .map(|l| {
                        Hyperedge::Edge(vec![
                            Hyperedge::atom("lemma", TypeCode::J),
                            Hyperedge::Atom(w.clone()),
                            Hyperedge::Atom(l.clone()),
                        ])
                    })
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Concepts whose main argument (builder) or argument (modifier) is `concept`.
    pub fn hyponyms(&self, concept: &Hyperedge) -> Vec<Hyperedge> {
        self.edges_containing(concept)
            .into_iter()
            .filter(|p| p.main_concept().map(|m| m == concept).unwrap_or(false))
            .collect()
    }

    pub fn hypernym(&self, concept: &Hyperedge) -> Option<Hyperedge> {
        concept.main_concept().ok().cloned()
    }
}

fn bump<K: Ord + std::hash::Hash + Clone, M: CountMap<K>>(m: &mut M, k: K, delta: i64) {
    let c = m.slot(k.clone());
    let n = *c as i64 + delta;
    if n <= 0 {
        m.drop_key(&k);
    } else {
        *m.slot(k) = n as usize;
    }
}

trait CountMap<K> {
    fn slot(&mut self, k: K) -> &mut usize;
    fn drop_key(&mut self, k: &K);
}

impl<K: Ord> CountMap<K> for BTreeMap<K, usize> {
    fn slot(&mut self, k: K) -> &mut usize {
        self.entry(k).or_insert(0)
    }
    fn drop_key(&mut self, k: &K) {
        self.remove(k);
    }
}

impl<K: std::hash::Hash + Eq> CountMap<K> for HashMap<K, usize> {
    fn slot(&mut self, k: K) -> &mut usize {
        self.entry(k).or_insert(0)
    }
    fn drop_key(&mut self, k: &K) {
        self.remove(k);
    }
}
