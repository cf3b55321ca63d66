mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shg::{Hyperedge, Store};

/// Everything in the hypergraph: the stored edges and all their sub-edges.
fn universe(top: &[Hyperedge]) -> BTreeSet<Hyperedge> {
    fn walk(e: &Hyperedge, out: &mut BTreeSet<Hyperedge>) {
        out.insert(e.clone());
        for x in e.elements() {
            walk(x, out);
        }
    }
    let mut out = BTreeSet::new();
    top.iter().for_each(|e| walk(e, &mut out));
    out
}

type Containers = BTreeMap<Hyperedge, BTreeSet<Hyperedge>>;

/// D for every member of the universe, from one scan over it.
fn containers(all: &BTreeSet<Hyperedge>) -> Containers {
    let mut d: Containers = all.iter().map(|e| (e.clone(), BTreeSet::new())).collect();
    for x in all {
        for el in x.elements() {
            d.get_mut(el).unwrap().insert(x.clone());
        }
    }
    d
}

fn weight(s: &BTreeSet<Hyperedge>) -> usize {
    s.iter().map(|x| x.len() - 1).sum()
}

/// Grows D_e by the containers of its members until nothing changes.
fn delta(d: &Containers, e: &Hyperedge) -> BTreeSet<Hyperedge> {
    let mut acc = d[e].clone();
    loop {
        let next: BTreeSet<Hyperedge> = acc.iter().flat_map(|x| d[x].iter().cloned()).chain(acc.iter().cloned()).collect();
        if next.len() == acc.len() {
            return acc;
        }
        acc = next;
    }
}

fn check_store(store: &Store, top: &[Hyperedge]) {
    let all = universe(top);
    let ds = containers(&all);
    for e in &all {
        let d = &ds[e];
        let got: BTreeSet<Hyperedge> = store.edges_containing(e).into_iter().collect();
        assert_eq!(&got, d, "D of {e}");
        assert_eq!(store.degree(e), weight(d), "d of {e}");
        let dl = delta(&ds, e);
        assert_eq!(store.neighborhood(e), dl, "Δ of {e}");
        assert_eq!(store.deep_degree(e), weight(&dl), "δ of {e}");
        assert!(store.degree(e) <= store.deep_degree(e));
    }
    let absent: Hyperedge = "(zzz/P nothing/C)".parse().unwrap();
    assert_eq!(store.degree(&absent), 0);
    assert_eq!(store.deep_degree(&absent), 0);
}

#[test]
fn metrics_match_naive_oracle() {
    check_metrics_match_naive_oracle();
}

pub fn check_metrics_match_naive_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let (store, added) = common::store(&mut rng, 50, 4);
        assert!(added.iter().all(|e| e.depth() <= 4));
        check_store(&store, &added);
    }
    assert!(start.elapsed().as_secs_f64() < 30.0, "took {:?}", start.elapsed());
}

#[test]
fn metrics_survive_save_and_load() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (store, added) = common::store(&mut rng, 20, 4);
        let mut buf = Vec::new();
        store.write_to(&mut buf).unwrap();
        let back = Store::read_from(&buf[..]).unwrap();
        for e in universe(&added) {
            assert_eq!(store.degree(&e), back.degree(&e));
            assert_eq!(store.deep_degree(&e), back.deep_degree(&e));
        }
    }
}

#[test]
fn removal_restores_indices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (mut store, mut added) = common::store(&mut rng, 30, 4);
        let k = added.len() / 2;
        for e in added.drain(..k) {
            assert!(store.remove(&e));
        }
        let mut fresh = Store::new();
        for e in &added {
            fresh.add(e.clone());
        }
        for e in universe(&added) {
            assert_eq!(store.edges_containing(&e), fresh.edges_containing(&e), "{e}");
        }
        let removed_only: Vec<Hyperedge> = store
            .all_edges()
            .into_iter()
            .filter(|e| !fresh.contains_deep(e))
            .collect();
        assert!(removed_only.is_empty(), "{removed_only:?}");
        check_store(&store, &added);
    }
}

#[test]
fn single_edge_store() {
    let mut s = Store::new();
    let outer: Hyperedge = "(is/P berlin/C (of/B capital/C germany/C))".parse().unwrap();
    s.add(outer.clone());
    let germany: Hyperedge = "germany/C".parse().unwrap();
    let inner: Hyperedge = "(of/B capital/C germany/C)".parse().unwrap();
    assert_eq!(s.edges_containing(&germany), vec![inner.clone()]);
    assert_eq!(s.edges_containing(&inner), vec![outer.clone()]);
    assert!(s.edges_containing(&outer).is_empty());
    assert_eq!(s.degree(&germany), 2);
    assert_eq!(s.degree(&outer), 0);
    assert_eq!(s.neighborhood(&germany), BTreeSet::from([inner, outer.clone()]));
    assert!(s.deep_degree(&germany) > s.degree(&germany));
    assert_eq!(s.deep_degree(&outer), 0);
    assert_eq!(Store::new().degree(&germany), 0);
}
