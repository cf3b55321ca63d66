#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use shg::{Hyperedge, Store, TypeCode};

const CONCEPTS: &[&str] = &["a", "b", "c", "d", "e", "f", "berlin", "germany"];
const PREDICATES: &[&str] = &["is", "likes", "says"];
const MODIFIERS: &[&str] = &["the", "big", "not"];
const BUILDERS: &[&str] = &["of", "+", "in"];
const TRIGGERS: &[&str] = &["in", "for"];
const CONJUNCTIONS: &[&str] = &["and", "or"];

fn atom(rng: &mut impl Rng, pool: &[&str], t: TypeCode) -> Hyperedge {
    Hyperedge::atom(*pool.choose(rng).unwrap(), t)
}

/// A well-typed concept of depth at most `depth`.
pub fn concept(rng: &mut impl Rng, depth: usize) -> Hyperedge {
    if depth == 0 || rng.gen_bool(0.4) {
        return atom(rng, CONCEPTS, TypeCode::C);
    }
    match rng.gen_range(0..3) {
        0 => Hyperedge::edge(vec![atom(rng, MODIFIERS, TypeCode::M), concept(rng, depth - 1)]),
        1 => {
            let n = rng.gen_range(2..=3);
            let mut v = vec![atom(rng, BUILDERS, TypeCode::B)];
            v.extend((0..n).map(|_| concept(rng, depth - 1)));
            Hyperedge::edge(v)
        }
        _ => Hyperedge::edge(vec![
            atom(rng, CONJUNCTIONS, TypeCode::J),
            concept(rng, depth - 1),
            concept(rng, depth - 1),
        ]),
    }
}

/// A well-typed relation of depth at most `depth` (at least 1).
pub fn relation(rng: &mut impl Rng, depth: usize) -> Hyperedge {
    let depth = depth.max(1);
    let mut v = vec![atom(rng, PREDICATES, TypeCode::P)];
    for _ in 0..rng.gen_range(1..=3) {
        let d = depth - 1;
        let arg = match rng.gen_range(0..4) {
            0 if d > 0 => relation(rng, d),
            1 if d > 0 => Hyperedge::edge(vec![atom(rng, TRIGGERS, TypeCode::T), concept(rng, d - 1)]),
            _ => concept(rng, d),
        };
        v.push(arg);
    }
    Hyperedge::edge(v)
}

/// Any well-typed non-atomic edge.
pub fn edge(rng: &mut impl Rng, depth: usize) -> Hyperedge {
    loop {
        let e = if rng.gen_bool(0.7) { relation(rng, depth) } else { concept(rng, depth) };
        if !e.is_atom() {
            return e;
        }
    }
}

/// Up to `max_edges` top-level edge additions, repeats possible.
pub fn store(rng: &mut impl Rng, max_edges: usize, depth: usize) -> (Store, Vec<Hyperedge>) {
    let mut s = Store::new();
    let mut added = Vec::new();
    for _ in 0..rng.gen_range(1..=max_edges) {
        let e = if !added.is_empty() && rng.gen_bool(0.1) {
            added.choose(rng).cloned().unwrap()
        } else {
            edge(rng, depth)
        };
        s.add(e.clone());
        added.push(e);
    }
    (s, added)
}
