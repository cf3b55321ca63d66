//! Coreference among compound concepts that share a main concept (the seed).
//!
//! Auxiliary concepts that occur together in some compound are linked; the
//! maximal cliques of that graph group compounds into coreference sets. The
//! seed itself joins the dominant set when it is both popular enough and used
//! on its own often enough.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::hedge::{Hyperedge, TypeCode};
use crate::store::Store;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorefParams {
    pub theta: f64,
    pub theta_prime: f64,
    /// Largest co-occurrence graph handled before giving up.
    pub max_nodes: usize,
}

impl Default for CorefParams {
    fn default() -> Self {
        CorefParams { theta: 0.7, theta_prime: 0.05, max_nodes: 64 }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CorefError {
    #[error("co-occurrence graph for {seed} has {nodes} nodes, limit is {limit}")]
    TooLarge { seed: String, nodes: usize, limit: usize },
    #[error("empty coreference set")]
    EmptySet,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorefSet {
    pub members: Vec<Hyperedge>,
    pub clique: Vec<Hyperedge>,
    pub total_degree: usize,
    pub p: f64,
    pub label: Hyperedge,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedAssignment {
    pub seed: Hyperedge,
    /// Index into the seed's sets.
    pub assigned: Option<usize>,
    pub best_p: f64,
    pub degree: usize,
    pub deep_degree: usize,
    pub theta: f64,
    pub theta_prime: f64,
}

impl SeedAssignment {
    /// d_s / δ_s, or `None` when δ_s is zero.
    pub fn ratio(&self) -> Option<f64> {
        (self.deep_degree > 0).then(|| self.degree as f64 / self.deep_degree as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorefReport {
    pub seed: Hyperedge,
    pub sets: Vec<CorefSet>,
    pub assignment: SeedAssignment,
}

fn is_compound(e: &Hyperedge) -> bool {
    matches!(e.connector().and_then(|c| c.as_atom()), Some(a) if a.root == "+" && a.code == TypeCode::B)
        && e.connector_roles().is_some()
}

/// Follows main concepts through nested `+/B` compounds.
fn main_chain(e: &Hyperedge) -> Vec<&Hyperedge> {
    let mut chain = vec![e];
    let mut cur = e;
    while is_compound(cur) {
        match cur.main_concept() {
            Ok(m) => {
                chain.push(m);
                cur = m;
            }
            Err(_) => break,
        }
    }
    chain
}

/// Whether `e` is a compound whose chain of main concepts reaches `seed`.
pub fn has_seed(e: &Hyperedge, seed: &Hyperedge) -> bool {
    is_compound(e) && main_chain(e)[1..].contains(&seed)
}

/// Auxiliary arguments met along the chain from `e` down to `seed`.
pub fn auxiliaries(e: &Hyperedge, seed: &Hyperedge) -> BTreeSet<Hyperedge> {
    let mut out = BTreeSet::new();
    for c in main_chain(e) {
        if c == seed || !is_compound(c) {
            break;
        }
        let roles: Vec<char> = c.connector_roles().unwrap_or("").chars().collect();
        for (i, a) in c.args().iter().enumerate() {
            if roles.get(i) != Some(&'m') {
                out.insert(a.clone());
            }
        }
    }
    out
}

/// Atoms that are the main argument of at least one `+/B` compound.
pub fn seed_concepts(store: &Store) -> Vec<Hyperedge> {
    let mut seeds = BTreeSet::new();
    for e in store.all_edges() {
        if is_compound(&e) {
            if let Ok(m) = e.main_concept() {
                if m.is_atom() && m.infer_type().ok() == Some(TypeCode::C) {
                    seeds.insert(m.clone());
                }
            }
        }
    }
    seeds.into_iter().collect()
}

/// Compounds in the store whose main-concept chain reaches `seed`.
pub fn compounds_of(store: &Store, seed: &Hyperedge) -> Vec<Hyperedge> {
    store.all_edges().into_iter().filter(|e| has_seed(e, seed)).collect()
}

/// Adjacency over auxiliary concepts: linked when they share a compound.
pub fn cooccurrence_graph(store: &Store, seed: &Hyperedge) -> BTreeMap<Hyperedge, BTreeSet<Hyperedge>> {
    let mut g: BTreeMap<Hyperedge, BTreeSet<Hyperedge>> = BTreeMap::new();
    for c in compounds_of(store, seed) {
        let aux = auxiliaries(&c, seed);
        for a in &aux {
            let n = g.entry(a.clone()).or_default();
            n.extend(aux.iter().filter(|b| *b != a).cloned());
        }
    }
    g
}

/// All maximal cliques, each sorted, in sorted order.
pub fn maximal_cliques(g: &BTreeMap<Hyperedge, BTreeSet<Hyperedge>>) -> Vec<Vec<Hyperedge>> {
    fn bk(
        g: &BTreeMap<Hyperedge, BTreeSet<Hyperedge>>,
        r: &mut Vec<Hyperedge>,
        mut p: BTreeSet<Hyperedge>,
        mut x: BTreeSet<Hyperedge>,
        out: &mut Vec<Vec<Hyperedge>>,
    ) {
        if p.is_empty() && x.is_empty() {
            let mut c = r.clone();
            c.sort();
            out.push(c);
            return;
        }
        let pivot = p.union(&x).max_by_key(|u| g[*u].intersection(&p).count()).cloned().unwrap();
        let candidates: Vec<Hyperedge> = p.difference(&g[&pivot]).cloned().collect();
        for v in candidates {
            r.push(v.clone());
            let np = p.intersection(&g[&v]).cloned().collect();
            let nx = x.intersection(&g[&v]).cloned().collect();
            bk(g, r, np, nx, out);
            r.pop();
            p.remove(&v);
            x.insert(v);
        }
    }
    let mut out = Vec::new();
    bk(g, &mut Vec::new(), g.keys().cloned().collect(), BTreeSet::new(), &mut out);
    out.sort();
    out
}

/// Highest degree first, then fewest atoms, then notation order.
pub fn coref_label(members: &[Hyperedge], store: &Store) -> Result<Hyperedge, CorefError> {
    members
        .iter()
        .min_by(|a, b| {
            store
                .degree(b)
                .cmp(&store.degree(a))
                .then_with(|| a.size().cmp(&b.size()))
                .then_with(|| a.to_string().cmp(&b.to_string()))
        })
        .cloned()
        .ok_or(CorefError::EmptySet)
}

/// Coreference sets of a seed, in clique order. Sets with no members are dropped.
pub fn coref_sets(store: &Store, seed: &Hyperedge, params: &CorefParams) -> Result<Vec<CorefSet>, CorefError> {
    let g = cooccurrence_graph(store, seed);
    if g.len() > params.max_nodes {
        return Err(CorefError::TooLarge { seed: seed.to_string(), nodes: g.len(), limit: params.max_nodes });
    }
    let cliques = maximal_cliques(&g);
    let compounds = compounds_of(store, seed);
    let mut members: Vec<Vec<Hyperedge>> = vec![Vec::new(); cliques.len()];
    let mut overlapping = Vec::new();
    for c in &compounds {
        let aux = auxiliaries(c, seed);
        let fits: Vec<usize> = (0..cliques.len())
            .filter(|&k| aux.iter().all(|a| cliques[k].contains(a)))
            .collect();
        match fits.as_slice() {
            [] => {}
            [k] => members[*k].push(c.clone()),
            _ => overlapping.push((c.clone(), fits)),
        }
    }
    // overlaps go to the heaviest clique (first in clique order on ties)
    let weight = |m: &[Hyperedge]| m.iter().map(|e| store.degree(e)).sum::<usize>();
    let weights: Vec<usize> = members.iter().map(|m| weight(m)).collect();
    for (c, fits) in overlapping {
        let k = *fits.iter().max_by(|a, b| weights[**a].cmp(&weights[**b]).then(b.cmp(a))).unwrap();
        members[k].push(c);
    }
    let total: usize = compounds.iter().map(|e| store.degree(e)).sum();
    let mut sets = Vec::new();
    for (k, mut m) in members.into_iter().enumerate() {
        if m.is_empty() {
            continue;
        }
        m.sort();
        let td = weight(&m);
        sets.push(CorefSet {
            label: coref_label(&m, store)?,
            p: if total == 0 { 0.0 } else { td as f64 / total as f64 },
            total_degree: td,
            clique: cliques[k].clone(),
            members: m,
        });
    }
    Ok(sets)
}

/// Assigns the seed to its highest-p set when `p > θ` and `d_s/δ_s > θ′`.
pub fn assign_seed(store: &Store, seed: &Hyperedge, sets: &[CorefSet], params: &CorefParams) -> SeedAssignment {
    let best = (0..sets.len()).max_by(|&a, &b| {
        sets[a]
            .p
            .partial_cmp(&sets[b].p)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.cmp(&a))
    });
    let mut s = SeedAssignment {
        seed: seed.clone(),
        assigned: None,
        best_p: best.map(|b| sets[b].p).unwrap_or(0.0),
        degree: store.degree(seed),
        deep_degree: store.deep_degree(seed),
        theta: params.theta,
        theta_prime: params.theta_prime,
    };
    if let (Some(b), Some(r)) = (best, s.ratio()) {
        if sets[b].p > params.theta && r > params.theta_prime {
            s.assigned = Some(b);
        }
    }
    s
}

pub fn resolve(store: &Store, seed: &Hyperedge, params: &CorefParams) -> Result<CorefReport, CorefError> {
    let sets = coref_sets(store, seed, params)?;
    let assignment = assign_seed(store, seed, &sets, params);
    Ok(CorefReport { seed: seed.clone(), sets, assignment })
}
