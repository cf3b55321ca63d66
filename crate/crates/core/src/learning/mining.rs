//! Corpus-wide pattern mining: each edge is abstracted into type-annotated
//! wildcards, optionally expanding sub-edges, and the abstractions are counted.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::hedge::{Hyperedge, TypeCode};
use crate::patterns::{AtomPattern, Pattern, RoleSpec, RootSpec};
use crate::store::Store;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneralizationConfig {
    /// Levels of structure kept; 1 keeps only the top level.
    pub max_depth: usize,
    /// Element counts (connector included) admitted for relations.
    pub relation_sizes: Vec<usize>,
    pub exclude: Vec<TypeCode>,
    /// Also emit `+/B` literally next to the `*/B` wildcard.
    pub explicit_plus: bool,
    /// Render role strings as unordered sets.
    pub unordered_roles: bool,
}

impl Default for GeneralizationConfig {
    fn default() -> Self {
        GeneralizationConfig {
            max_depth: 2,
            relation_sizes: vec![3, 4],
            exclude: vec![TypeCode::J, TypeCode::M],
            explicit_plus: true,
            unordered_roles: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinedPattern {
    pub pattern: Pattern,
    pub count: u64,
}

fn connector_type(e: &Hyperedge) -> Option<TypeCode> {
    e.connector().and_then(|c| c.infer_type().ok())
}

fn admitted(e: &Hyperedge, cfg: &GeneralizationConfig) -> bool {
    if e.is_atom() {
        return false;
    }
    let Some(ct) = connector_type(e) else { return false };
    if cfg.exclude.contains(&ct) {
        return false;
    }
    match e.infer_type() {
        Ok(TypeCode::R) => cfg.relation_sizes.contains(&e.len()),
        Ok(_) => true,
        Err(_) => false,
    }
}

fn roles_spec(roles: &str, cfg: &GeneralizationConfig) -> RoleSpec {
    let mut r = RoleSpec::exact(roles);
    if cfg.unordered_roles {
        r.ordered = false;
        r = r.normalized();
    }
    r
}

fn wildcard(t: TypeCode) -> Pattern {
    Pattern::Atom(AtomPattern::wildcard(Some(vec![t])))
}

fn connector_variants(e: &Hyperedge, cfg: &GeneralizationConfig) -> Vec<Pattern> {
    let conn = &e.elements()[0];
    let Ok(t) = conn.infer_type() else { return Vec::new() };
    let roles = e.connector_roles().filter(|r| !r.is_empty()).map(|r| roles_spec(r, cfg));
    let mut base = AtomPattern::wildcard(Some(vec![t]));
    base.roles = roles.clone();
    let mut out = vec![Pattern::Atom(base.clone())];
    if cfg.explicit_plus {
        if let Some(a) = conn.as_atom() {
            if a.root == "+" && a.code == TypeCode::B {
                let mut p = base;
                p.root = RootSpec::Literal(vec!["+".into()]);
                out.push(Pattern::Atom(p));
            }
        }
    }
    out
}

/// All abstractions of `e` keeping up to `depth` levels of structure.
fn abstractions(e: &Hyperedge, depth: usize, cfg: &GeneralizationConfig) -> Vec<Pattern> {
    let mut acc: Vec<Vec<Pattern>> = connector_variants(e, cfg).into_iter().map(|c| vec![c]).collect();
    for a in e.args() {
        let Ok(t) = a.infer_type() else { return Vec::new() };
        let mut opts = vec![wildcard(t)];
        if depth > 1 && admitted(a, cfg) {
            opts.extend(abstractions(a, depth - 1, cfg));
        }
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    acc.into_iter().map(Pattern::Edge).collect()
}

/// Distinct generalizations of one edge, or none if the edge is not admitted.
pub fn generalizations(e: &Hyperedge, cfg: &GeneralizationConfig) -> Vec<Pattern> {
    if !admitted(e, cfg) {
        return Vec::new();
    }
    let set: BTreeSet<String> = abstractions(e, cfg.max_depth.max(1), cfg)
        .iter()
        .map(|p| p.to_string())
        .collect();
    set.into_iter().map(|s| s.parse().expect("mined pattern parses")).collect()
}

/// Counts generalizations over every sub-edge of every stored edge (weighted by
/// occurrence count), ranked by count then pattern text.
pub fn mine_patterns(store: &Store, cfg: &GeneralizationConfig) -> Vec<MinedPattern> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (edge, attrs) in store.iter() {
        for sub in edge.subedges() {
            for p in generalizations(sub, cfg) {
                *counts.entry(p.to_string()).or_insert(0) += attrs.count;
            }
        }
    }
    let mut v: Vec<(String, u64)> = counts.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.into_iter()
        .map(|(s, count)| MinedPattern { pattern: s.parse().expect("mined pattern parses"), count })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::matches;

    fn gens(e: &str, cfg: &GeneralizationConfig) -> Vec<String> {
        generalizations(&e.parse().unwrap(), cfg).iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn aragorn() {
        let g = gens("(is/P.sc aragorn/C (of/B.ma king/C gondor/C))", &GeneralizationConfig::default());
        assert_eq!(g, ["(*/P.sc */C (*/B.ma */C */C))", "(*/P.sc */C */C)"]);
    }

    #[test]
    fn explicit_plus() {
        let cfg = GeneralizationConfig { unordered_roles: true, ..Default::default() };
        let g = gens("(+/B.am tennis/C ball/C)", &cfg);
        assert_eq!(g, ["(*/B.{ma} */C */C)", "(+/B.{ma} */C */C)"]);
    }

    #[test]
    fn exclusions_and_soundness() {
        let cfg = GeneralizationConfig::default();
        assert!(gens("(and/J a/C b/C)", &cfg).is_empty());
        assert!(gens("(the/M a/C)", &cfg).is_empty());
        assert!(gens("(is/P.s a/C)", &cfg).is_empty());
        let e: Hyperedge = "(gave/P.sio (+/B.am john/C doe/C) mary/C (a/M flower/C))".parse().unwrap();
        let g = generalizations(&e, &cfg);
        assert_eq!(g.len(), 3);
        for p in g {
            assert!(matches(&e, &p), "{p}");
        }
    }
}
