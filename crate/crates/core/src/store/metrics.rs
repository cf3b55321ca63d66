use std::collections::{BTreeSet, HashMap};

use super::Store;
use crate::hedge::Hyperedge;

fn weight(e: &Hyperedge) -> usize {
    e.len().saturating_sub(1)
}

impl Store {
    /// d(e): sum of (element count - 1) over the edges directly containing `e`.
    pub fn degree(&self, e: &Hyperedge) -> usize {
        self.parents
            .get(e)
            .map(|m| m.keys().map(weight).sum())
            .unwrap_or(0)
    }

    /// Δ_e: edges containing `e` directly or through any chain of containment.
    pub fn neighborhood(&self, e: &Hyperedge) -> BTreeSet<Hyperedge> {
        let mut cache = self.delta_cache.lock().unwrap();
        self.delta_into(e, &mut cache)
    }

    fn delta_into(
        &self,
        e: &Hyperedge,
        cache: &mut HashMap<Hyperedge, BTreeSet<Hyperedge>>,
    ) -> BTreeSet<Hyperedge> {
        if let Some(d) = cache.get(e) {
            return d.clone();
        }
        // Containment is acyclic, but guard anyway so a bad index cannot loop.
        cache.insert(e.clone(), BTreeSet::new());
        let mut out = BTreeSet::new();
        for p in self.edges_containing(e) {
            let sub = self.delta_into(&p, cache);
            out.insert(p);
            out.extend(sub);
        }
        cache.insert(e.clone(), out.clone());
        out
    }

    /// δ(e): sum of (element count - 1) over Δ_e.
    pub fn deep_degree(&self, e: &Hyperedge) -> usize {
        self.neighborhood(e).iter().map(weight).sum()
    }
}
