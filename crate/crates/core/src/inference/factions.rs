//! Conflict networks and a two-faction split.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use super::claims::Conflict;
use crate::hedge::Hyperedge;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictEdge {
    pub source: Hyperedge,
    pub target: Hyperedge,
    pub topic: Option<Hyperedge>,
}

/// Directed conflicts between actors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConflictNetwork {
    pub edges: Vec<ConflictEdge>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Factions {
    pub a: BTreeSet<Hyperedge>,
    pub b: BTreeSet<Hyperedge>,
    pub unassigned: BTreeSet<Hyperedge>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("conflict network is empty")]
pub struct EmptyNetwork;

impl ConflictNetwork {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, source: Hyperedge, target: Hyperedge, topic: Option<Hyperedge>) {
        self.edges.push(ConflictEdge { source, target, topic });
    }

    pub fn from_conflicts<'a>(conflicts: impl IntoIterator<Item = &'a Conflict>) -> Self {
        let mut n = Self::new();
        for c in conflicts {
            n.add(c.source.clone(), c.target.clone(), Some(c.topic_content().clone()));
        }
        n
    }

    pub fn nodes(&self) -> BTreeSet<Hyperedge> {
        self.edges
            .iter()
            .flat_map(|e| [e.source.clone(), e.target.clone()])
            .collect()
    }

    /// In- plus out-degree.
    pub fn degrees(&self) -> BTreeMap<Hyperedge, usize> {
        let mut d = BTreeMap::new();
        for e in &self.edges {
            *d.entry(e.source.clone()).or_insert(0) += 1;
            *d.entry(e.target.clone()).or_insert(0) += 1;
        }
        d
    }

    pub fn in_conflict(&self, x: &Hyperedge, y: &Hyperedge) -> bool {
        self.edges
            .iter()
            .any(|e| (&e.source == x && &e.target == y) || (&e.source == y && &e.target == x))
    }

    /// Graphviz rendering, faction A red, B blue, the rest gray.
    pub fn to_dot(&self, factions: Option<&Factions>) -> String {
        let mut s = String::from("digraph conflicts {\n");
        let deg = self.degrees();
        for (n, d) in &deg {
            let color = match factions {
                Some(f) if f.a.contains(n) => "red",
                Some(f) if f.b.contains(n) => "blue",
                _ => "gray",
            };
            let _ = writeln!(s, "  {:?} [color={}, width={}];", n.to_string(), color, d);
        }
        for e in &self.edges {
            let label = e.topic.as_ref().map(|t| t.to_string()).unwrap_or_default();
            let _ = writeln!(
                s,
                "  {:?} -> {:?} [label={:?}];",
                e.source.to_string(),
                e.target.to_string(),
                label
            );
        }
        s.push_str("}\n");
        s
    }
}

/// Splits actors into two factions. Edges are visited by `min(d_i, d_j)`
/// descending, ties broken on the endpoint notations. The first edge seeds
/// both factions; afterwards an endpoint joins a faction when it has no
/// conflict inside it and at least one with the other side, in one pass.
pub fn detect_factions(net: &ConflictNetwork) -> Result<Factions, EmptyNetwork> {
    if net.edges.is_empty() {
        return Err(EmptyNetwork);
    }
    let deg = net.degrees();
    let mut order: Vec<&ConflictEdge> = net.edges.iter().collect();
    order.sort_by(|x, y| {
        let sx = deg[&x.source].min(deg[&x.target]);
        let sy = deg[&y.source].min(deg[&y.target]);
        sy.cmp(&sx)
            .then_with(|| x.source.to_string().cmp(&y.source.to_string()))
            .then_with(|| x.target.to_string().cmp(&y.target.to_string()))
    });
    let mut f = Factions::default();
    let seed = order[0];
    f.a.insert(seed.source.clone());
    if seed.target != seed.source {
        f.b.insert(seed.target.clone());
    }

    let fits = |n: &Hyperedge, own: &BTreeSet<Hyperedge>, other: &BTreeSet<Hyperedge>| {
        !own.iter().any(|m| net.in_conflict(n, m)) && other.iter().any(|m| net.in_conflict(n, m))
    };
    for e in &order[1..] {
        for n in [&e.source, &e.target] {
            if f.a.contains(n) || f.b.contains(n) {
                continue;
            }
            if fits(n, &f.a, &f.b) {
                f.a.insert(n.clone());
            } else if fits(n, &f.b, &f.a) {
                f.b.insert(n.clone());
            }
        }
    }
    f.unassigned = net
        .nodes()
        .into_iter()
        .filter(|n| !f.a.contains(n) && !f.b.contains(n))
        .collect();
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(pairs: &[(&str, &str)]) -> ConflictNetwork {
        let mut n = ConflictNetwork::new();
        for (a, b) in pairs {
            n.add(format!("{a}/C").parse().unwrap(), format!("{b}/C").parse().unwrap(), None);
        }
        n
    }

    fn names(s: &BTreeSet<Hyperedge>) -> Vec<String> {
        s.iter().map(|h| h.as_atom().unwrap().root.clone()).collect()
    }

    #[test]
    fn single_edge() {
        let f = detect_factions(&net(&[("a", "b")])).unwrap();
        assert_eq!(names(&f.a), ["a"]);
        assert_eq!(names(&f.b), ["b"]);
    }

    #[test]
    fn triangle() {
        let f = detect_factions(&net(&[("a", "b"), ("b", "c"), ("a", "c")])).unwrap();
        assert_eq!(names(&f.a), ["a"]);
        assert_eq!(names(&f.b), ["b"]);
        assert_eq!(names(&f.unassigned), ["c"]);
    }

    #[test]
    fn star() {
        let f = detect_factions(&net(&[("hub", "x"), ("hub", "y"), ("hub", "z")])).unwrap();
        assert_eq!(names(&f.a), ["hub"]);
        assert_eq!(names(&f.b), ["x", "y", "z"]);
    }

    #[test]
    fn empty() {
        assert_eq!(detect_factions(&ConflictNetwork::new()), Err(EmptyNetwork));
    }
}
