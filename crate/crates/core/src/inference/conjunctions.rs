//! Splitting conjunctions into separate edges.
//!
//! Three rewrites run to a fixpoint, each replacing a conjunction sub-edge in
//! place:
//!
//! 1. `(*/J ... CONCEPT/C ...) |- CONCEPT`
//! 2. `(*/J ... (PRED/P.{[sp]} X Y...) ...) |- (PRED/P.{[sp]} X Y...)`
//! 3. inside a conjunction, relations without a subject borrow the most
//!    recent subject seen in an earlier relation.

use std::collections::HashSet;

use crate::hedge::{Hyperedge, TypeCode};

fn is_conjunction(e: &Hyperedge) -> bool {
    match e.connector().and_then(|c| c.as_atom()) {
        Some(a) => a.code == TypeCode::J && a.root != "lemma" && e.args().len() >= 2,
        None => false,
    }
}

fn is_relation(e: &Hyperedge) -> bool {
    !e.is_atom() && e.infer_type().ok() == Some(TypeCode::R)
}

/// Index of the subject argument (role `s`, else `p`).
fn subject_index(rel: &Hyperedge) -> Option<usize> {
    let roles = rel.connector_roles()?;
    roles.find('s').or_else(|| roles.find('p'))
}

fn with_subject(rel: &Hyperedge, subj: &Hyperedge) -> Hyperedge {
    let roles = rel.connector_roles().unwrap_or("");
    let mut v = vec![rel.elements()[0].with_innermost_roles(&format!("s{}", roles)), subj.clone()];
    v.extend(rel.args().iter().cloned());
    // pad missing roles so the new subject keeps position 0
    let mut e = Hyperedge::Edge(v);
    let n = e.args().len();
    let r = e.connector_roles().unwrap_or("").to_string();
    if r.len() < n {
        let padded = format!("{}{}", r, "?".repeat(n - r.len()));
        e = e.with_connector_roles(&padded);
    }
    e
}

/// One round of rewrites over every conjunction inside `edge`.
fn step(edge: &Hyperedge) -> Vec<Hyperedge> {
    let mut out = Vec::new();
    for path in edge.paths() {
        let sub = edge.at_path(&path).unwrap();
        if !is_conjunction(sub) {
            continue;
        }
        let mut last_subject: Option<Hyperedge> = None;
        for arg in sub.args() {
            if arg.infer_type().ok() == Some(TypeCode::C) {
                out.push(edge.replace_at(&path, arg.clone()));
            }
            if !is_relation(arg) {
                continue;
            }
            match subject_index(arg) {
                Some(i) if i < arg.args().len() => {
                    out.push(edge.replace_at(&path, arg.clone()));
                    last_subject = Some(arg.args()[i].clone());
                }
                _ => {
                    if let Some(s) = &last_subject {
                        out.push(edge.replace_at(&path, with_subject(arg, s)));
                    }
                }
            }
        }
    }
    out
}

/// Every edge reachable by the rewrites, excluding `edge` itself, in discovery order.
pub fn decompose_conjunctions(edge: &Hyperedge) -> Vec<Hyperedge> {
    let mut seen: HashSet<Hyperedge> = HashSet::new();
    seen.insert(edge.clone());
    let mut out = Vec::new();
    let mut frontier = vec![edge.clone()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for e in &frontier {
            for d in step(e) {
                if seen.insert(d.clone()) {
                    out.push(d.clone());
                    next.push(d);
                }
            }
        }
        frontier = next;
    }
    out
}

/// The conjunction-free results of decomposition, or the edge itself when nothing applies.
pub fn decompose_fully(edge: &Hyperedge) -> Vec<Hyperedge> {
    let all = decompose_conjunctions(edge);
    if all.is_empty() {
        return vec![edge.clone()];
    }
    all.into_iter().filter(|e| step(e).is_empty()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Hyperedge {
        s.parse().unwrap()
    }

    #[test]
    fn concepts() {
        assert_eq!(
            decompose_conjunctions(&h("(likes/P.so mary/C (and/J books/C flowers/C))")),
            vec![h("(likes/P.so mary/C books/C)"), h("(likes/P.so mary/C flowers/C)")]
        );
    }

    #[test]
    fn relations_and_subject_propagation() {
        assert_eq!(
            decompose_conjunctions(&h(
                "(and/J (likes/P.so mary/C astronomy/C) (plays/P.o football/C))"
            )),
            vec![h("(likes/P.so mary/C astronomy/C)"), h("(plays/P.so mary/C football/C)")]
        );
    }

    #[test]
    fn nested_fan_out() {
        let e = h("(graduated/P.sx gonzales/C (from/T (in/B.ma school/C (,/J toronto/C (,/J ontario/C canada/C)))))");
        let leaves = decompose_fully(&e);
        assert_eq!(leaves.len(), 3);
        for d in decompose_conjunctions(&e) {
            for dd in decompose_conjunctions(&d) {
                assert!(decompose_conjunctions(&e).contains(&dd));
            }
        }
    }
}
