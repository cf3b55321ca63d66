//! Turning a labeled example into a pattern, and specializing that pattern
//! until it rejects known bad matches.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::hedge::{Hyperedge, TypeCode};
use crate::patterns::{AtomPattern, Pattern, Query, RoleSpec, RootSpec};
use crate::store::Store;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LearnError {
    #[error("{0} is not a sub-edge of the example")]
    NotSubedge(String),
    #[error("no positive examples")]
    NoPositives,
    #[error("{0} is labeled both positive and negative")]
    Contradiction(String),
    #[error("no specialization separates the examples within the search bounds")]
    Impossible,
    #[error("store is empty")]
    EmptyStore,
}

/// Variables keep their names; everything off the path to an assigned
/// sub-edge becomes a typed wildcard. Connectors on that path keep their root,
/// with roles as an unordered set.
pub fn generalize(edge: &Hyperedge, assignments: &BTreeMap<String, Hyperedge>) -> Result<Pattern, LearnError> {
    for (_, sub) in assignments {
        if !edge.contains_deep(sub) && edge != sub {
            return Err(LearnError::NotSubedge(sub.to_string()));
        }
    }
    let by_edge: BTreeMap<&Hyperedge, &String> = assignments.iter().map(|(k, v)| (v, k)).collect();
    Ok(gen(edge, &by_edge, true))
}

fn holds_assignment(e: &Hyperedge, by_edge: &BTreeMap<&Hyperedge, &String>) -> bool {
    by_edge.keys().any(|s| e == *s || e.contains_deep(s))
}

fn typed_wildcard(e: &Hyperedge) -> AtomPattern {
    AtomPattern::wildcard(e.infer_type().ok().map(|t| vec![t]))
}

fn unordered(roles: &str) -> Option<RoleSpec> {
    (!roles.is_empty()).then(|| RoleSpec { ordered: false, ..RoleSpec::exact(roles) })
}

fn gen(e: &Hyperedge, by_edge: &BTreeMap<&Hyperedge, &String>, top: bool) -> Pattern {
    if let Some(name) = by_edge.get(e) {
        return Pattern::Atom(AtomPattern::var(name, None));
    }
    let on_path = holds_assignment(e, by_edge);
    if e.is_atom() || !(top || on_path) {
        return Pattern::Atom(typed_wildcard(e));
    }
    let conn = &e.elements()[0];
    let roles = e.connector_roles().and_then(unordered);
    let c = match by_edge.get(conn) {
        Some(name) => {
            let mut p = AtomPattern::var(name, None);
            p.roles = roles;
            p
        }
        None => {
            let mut p = match conn.as_atom() {
                Some(a) if on_path => AtomPattern::literal(&a.without_roles()),
                _ => typed_wildcard(conn),
            };
            p.roles = roles;
            p
        }
    };
    let mut v = vec![Pattern::Atom(c)];
    v.extend(e.args().iter().map(|a| gen(a, by_edge, false)));
    Pattern::Edge(v)
}

/// Top-level store edges matching the query.
pub fn store_matches(q: &Query, store: &Store) -> Vec<Hyperedge> {
    store.edges().filter(|e| !q.matches(e, store).is_empty()).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RefineParams {
    pub max_depth: usize,
    /// Patterns examined before giving up.
    pub budget: usize,
}

impl Default for RefineParams {
    fn default() -> Self {
        RefineParams { max_depth: 4, budget: 5000 }
    }
}

fn consistent(q: &Query, pos: &[Hyperedge], neg: &[Hyperedge], store: &Store) -> bool {
    pos.iter().all(|e| !q.matches(e, store).is_empty()) && neg.iter().all(|e| q.matches(e, store).is_empty())
}

/// Paths to every atom pattern, connectors included.
fn atom_paths(p: &Pattern, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    match p {
        Pattern::Atom(_) => out.push(prefix.clone()),
        Pattern::Edge(v) => {
            for (i, c) in v.iter().enumerate() {
                prefix.push(i);
                atom_paths(c, prefix, out);
                prefix.pop();
            }
        }
        _ => {}
    }
}

fn at<'a>(p: &'a Pattern, path: &[usize]) -> Option<&'a Pattern> {
    match path.split_first() {
        None => Some(p),
        Some((i, rest)) => match p {
            Pattern::Edge(v) => at(v.get(*i)?, rest),
            _ => None,
        },
    }
}

fn replace(p: &Pattern, path: &[usize], with: Pattern) -> Pattern {
    match path.split_first() {
        None => with,
        Some((i, rest)) => match p {
            Pattern::Edge(v) => {
                let mut v = v.clone();
                v[*i] = replace(&v[*i], rest, with);
                Pattern::Edge(v)
            }
            _ => p.clone(),
        },
    }
}

const PROBE: &str = "PROBE__";

/// What the atom pattern at `path` binds to in `e`, if the query matches.
fn observe(q: &Query, path: &[usize], e: &Hyperedge, store: &Store) -> Option<Hyperedge> {
    let Some(Pattern::Atom(a)) = at(&q.main, path) else { return None };
    let name = match &a.root {
        RootSpec::Var(n) => n.clone(),
        _ => {
            let mut probe = a.clone();
            probe.root = RootSpec::Var(PROBE.into());
            let main = replace(&q.main, path, Pattern::Atom(probe));
            let q2 = Query { main, aux: q.aux.clone() };
            return q2.matches(e, store).first()?.edge(PROBE).cloned();
        }
    };
    q.matches(e, store).first()?.edge(&name).cloned()
}

fn fresh_var(q: &Query, base: &str) -> String {
    let used: BTreeSet<String> = q.main.variables().into_iter().chain(q.aux.iter().flat_map(|p| p.variables())).collect();
    if !used.contains(base) {
        return base.into();
    }
    (2..).map(|i| format!("{base}{i}")).find(|n| !used.contains(n)).unwrap()
}

fn innermost_roles(e: &Hyperedge) -> String {
    e.innermost_atom().map(|a| a.roles_str().to_string()).unwrap_or_default()
}

/// One-step specializations of `q`, in a fixed order.
fn moves(q: &Query, pos: &[Hyperedge], neg: &[Hyperedge], store: &Store) -> Vec<Query> {
    let mut out = Vec::new();
    let mut paths = Vec::new();
    atom_paths(&q.main, &mut Vec::new(), &mut paths);
    for path in paths {
        let Some(Pattern::Atom(a)) = at(&q.main, &path) else { continue };
        let seen: Option<Vec<Hyperedge>> = pos.iter().map(|e| observe(q, &path, e, store)).collect();
        let Some(seen) = seen else { continue };
        let seen_neg: Vec<Hyperedge> = neg.iter().filter_map(|e| observe(q, &path, e, store)).collect();
        let is_conn = path.last() == Some(&0);
        let with = |ap: AtomPattern| Query { main: replace(&q.main, &path, Pattern::Atom(ap)), aux: q.aux.clone() };

        // 1. restore the atom root
        if a.root == RootSpec::Any && seen.iter().all(Hyperedge::is_atom) {
            let roots: BTreeSet<String> = seen.iter().map(|e| e.as_atom().unwrap().root.clone()).collect();
            let mut b = a.clone();
            b.root = RootSpec::Literal(roots.into_iter().collect());
            out.push(with(b));
        }
        // 2. lemma constraint through an auxiliary pattern
        if a.root != RootSpec::Any || is_conn {
            let lemmas: Option<BTreeSet<String>> = seen
                .iter()
                .map(|e| e.innermost_atom().ok().and_then(|w| store.lemma_of(w)).map(|l| l.root))
                .collect();
            let already = matches!(&a.root, RootSpec::Var(n) if q.aux.iter().any(|p| p.variables().contains(n)));
            if let (Some(lemmas), false) = (lemmas, already) {
                let t = seen[0].infer_type().ok();
                if t.is_some() && seen.iter().all(|e| e.infer_type().ok() == t) {
                    let t = t.unwrap();
                    let name = match &a.root {
                        RootSpec::Var(n) => n.clone(),
                        _ => fresh_var(q, if t == TypeCode::P { "PRED" } else { "WORD" }),
                    };
                    let mut b = a.clone();
                    b.root = RootSpec::Var(name.clone());
                    let aux = format!(
                        "(lemma/J >{}/{} [{}]/{})",
                        name,
                        t.as_char(),
                        lemmas.into_iter().collect::<Vec<_>>().join(","),
                        t.as_char()
                    );
                    let mut nq = with(b);
                    nq.aux.push(aux.parse().expect("lemma pattern parses"));
                    out.push(nq);
                }
            }
        }
        // 3. role constraints
        if is_conn {
            let roles: BTreeSet<String> = seen.iter().map(innermost_roles).collect();
            if a.roles.is_none() && roles.len() == 1 {
                let r = roles.iter().next().unwrap();
                if let Some(spec) = unordered(r) {
                    let mut b = a.clone();
                    b.roles = Some(spec);
                    out.push(with(b));
                }
            }
            if let Some(spec) = &a.roles {
                if !spec.ordered && roles.len() == 1 {
                    let mut b = a.clone();
                    b.roles = Some(RoleSpec { forbidden: spec.forbidden.clone(), ..RoleSpec::exact(roles.iter().next().unwrap()) });
                    out.push(with(b));
                }
                let pos_chars: BTreeSet<char> = roles.iter().flat_map(|r| r.chars()).collect();
                let neg_chars: BTreeSet<char> = seen_neg.iter().flat_map(|e| innermost_roles(e).chars().collect::<Vec<_>>()).collect();
                for c in neg_chars.difference(&pos_chars) {
                    if !spec.forbidden.contains(c) {
                        let mut b = a.clone();
                        let mut s = spec.clone();
                        s.forbidden.push(*c);
                        b.roles = Some(s);
                        out.push(with(b));
                    }
                }
            }
        }
        // 4. argument types
        if a.types.is_none() {
            let types: Option<BTreeSet<TypeCode>> = seen.iter().map(|e| e.infer_type().ok()).collect();
            if let Some(types) = types {
                let mut b = a.clone();
                b.types = Some(types.into_iter().collect());
                out.push(with(b));
            }
        }
        // 5. require a non-atomic edge
        if !is_conn && a.roles.is_none() && !matches!(a.root, RootSpec::Literal(_)) && seen.iter().all(|e| !e.is_atom()) {
            let var = match &a.root {
                RootSpec::Var(n) => Some(n.clone()),
                _ => None,
            };
            let types = a.types.clone().or_else(|| {
                let t: Option<BTreeSet<TypeCode>> = seen.iter().map(|e| e.infer_type().ok()).collect();
                t.map(|t| t.into_iter().collect())
            });
            out.push(Query {
                main: replace(&q.main, &path, Pattern::NonAtomic { var, types }),
                aux: q.aux.clone(),
            });
        }
    }
    out
}

/// The most general consistent specialization: breadth-first over the move
/// set, taking from the shallowest level with a consistent query the one with
/// the most store matches (ties: shortest text, then text order).
pub fn refine(
    q: &Query,
    positives: &[Hyperedge],
    negatives: &[Hyperedge],
    store: &Store,
    params: &RefineParams,
) -> Result<Query, LearnError> {
    if positives.is_empty() {
        return Err(LearnError::NoPositives);
    }
    if let Some(e) = positives.iter().find(|e| negatives.contains(e)) {
        return Err(LearnError::Contradiction(e.to_string()));
    }
    if consistent(q, positives, negatives, store) {
        return Ok(q.clone());
    }
    let mut seen: HashSet<String> = HashSet::from([q.to_string()]);
    let mut level = VecDeque::from([q.clone()]);
    let mut examined = 0;
    for _ in 0..params.max_depth {
        let mut next = VecDeque::new();
        let mut found: Vec<Query> = Vec::new();
        for cur in &level {
            for m in moves(cur, positives, negatives, store) {
                if !seen.insert(m.to_string()) {
                    continue;
                }
                examined += 1;
                if examined > params.budget {
                    break;
                }
                if consistent(&m, positives, negatives, store) {
                    found.push(m);
                } else if positives.iter().all(|e| !m.matches(e, store).is_empty()) {
                    next.push_back(m);
                }
            }
        }
        if !found.is_empty() {
            let scored: Vec<(usize, String, Query)> = found
                .into_iter()
                .map(|f| (store_matches(&f, store).len(), f.to_string(), f))
                .collect();
            let best = scored
                .into_iter()
                .min_by(|a, b| b.0.cmp(&a.0).then(a.1.len().cmp(&b.1.len())).then(a.1.cmp(&b.1)))
                .unwrap();
            return Ok(best.2);
        }
        if next.is_empty() || examined > params.budget {
            break;
        }
        level = next;
    }
    Err(LearnError::Impossible)
}
