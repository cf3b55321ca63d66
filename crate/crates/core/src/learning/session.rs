//! A resumable pattern-learning session: pick an example, let a person
//! assign variables, generalize, review matches, refine on rejections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::refine::{generalize, refine, store_matches, LearnError, RefineParams};
use crate::hedge::{Hyperedge, TypeCode};
use crate::patterns::Query;
use crate::store::Store;

/// How the session picks its example edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// Seeded uniform choice among top-level edges.
    Random { seed: u64 },
    /// An edge whose predicate root has the given frequency rank (0 = most frequent).
    PredicateFrequency { rank: usize },
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Random { seed } => write!(f, "random:{seed}"),
            Criterion::PredicateFrequency { rank: 0 } => f.write_str("predicate-frequency"),
            Criterion::PredicateFrequency { rank } => write!(f, "predicate-frequency:{rank}"),
        }
    }
}

impl FromStr for Criterion {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let num = |d: u64| -> Result<u64, String> {
            arg.map(|a| a.parse().map_err(|_| format!("bad criterion argument {a:?}")))
                .unwrap_or(Ok(d))
        };
        match name {
            "random" => Ok(Criterion::Random { seed: num(0)? }),
            "predicate-frequency" => Ok(Criterion::PredicateFrequency { rank: num(0)? as usize }),
            _ => Err(format!("unknown criterion {s:?}")),
        }
    }
}

impl Serialize for Criterion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Criterion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn predicate_root(e: &Hyperedge) -> Option<String> {
    let conn = e.connector()?;
    if conn.infer_type().ok()? != TypeCode::P {
        return None;
    }
    conn.innermost_atom().ok().map(|a| a.root.clone())
}

pub fn select_candidate(store: &Store, criterion: &Criterion) -> Result<Hyperedge, LearnError> {
    let edges: Vec<&Hyperedge> = store.edges().collect();
    if edges.is_empty() {
        return Err(LearnError::EmptyStore);
    }
    match criterion {
        Criterion::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(edges[rng.gen_range(0..edges.len())].clone())
        }
        Criterion::PredicateFrequency { rank } => {
            let mut freq: BTreeMap<String, u64> = BTreeMap::new();
            for (e, a) in store.iter() {
                if let Some(r) = predicate_root(e) {
                    *freq.entry(r).or_insert(0) += a.count;
                }
            }
            let mut ranked: Vec<(String, u64)> = freq.into_iter().collect();
            ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            let root = &ranked.get(*rank).ok_or(LearnError::EmptyStore)?.0;
            Ok(edges
                .into_iter()
                .find(|e| predicate_root(e).as_ref() == Some(root))
                .unwrap()
                .clone())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: String,
    pub criterion: Criterion,
    pub candidate: Hyperedge,
    pub assignments: BTreeMap<String, Hyperedge>,
    pub pattern: Option<Query>,
    pub positives: Vec<Hyperedge>,
    pub negatives: Vec<Hyperedge>,
    pub history: Vec<String>,
}

impl Session {
    pub fn new(id: impl Into<String>, store: &Store, criterion: Criterion) -> Result<Session, LearnError> {
        let candidate = select_candidate(store, &criterion)?;
        Ok(Session {
            id: id.into(),
            history: vec![format!("candidate {candidate}")],
            criterion,
            candidate,
            assignments: BTreeMap::new(),
            pattern: None,
            positives: Vec::new(),
            negatives: Vec::new(),
        })
    }

    /// Records variable assignments on the candidate and generalizes it.
    pub fn assign(&mut self, assignments: BTreeMap<String, Hyperedge>) -> Result<&Query, LearnError> {
        let p = generalize(&self.candidate, &assignments)?;
        self.assignments = assignments;
        if !self.positives.contains(&self.candidate) {
            self.positives.push(self.candidate.clone());
        }
        let q = Query::new(p);
        self.history.push(format!("generalized to {q}"));
        self.pattern = Some(q);
        Ok(self.pattern.as_ref().unwrap())
    }

    /// Store edges matching the pattern that have not been judged yet.
    pub fn pending(&self, store: &Store) -> Vec<Hyperedge> {
        let Some(q) = &self.pattern else { return Vec::new() };
        let judged: BTreeSet<&Hyperedge> = self.positives.iter().chain(&self.negatives).collect();
        store_matches(q, store).into_iter().filter(|e| !judged.contains(e)).collect()
    }

    /// Accepts or rejects one match; a rejection the pattern still matches triggers refinement.
    pub fn feedback(
        &mut self,
        edge: Hyperedge,
        accept: bool,
        store: &Store,
        params: &RefineParams,
    ) -> Result<&Query, LearnError> {
        let q = self.pattern.clone().ok_or(LearnError::NoPositives)?;
        let (own, other) = if accept {
            (&mut self.positives, &self.negatives)
        } else {
            (&mut self.negatives, &self.positives)
        };
        if other.contains(&edge) {
            return Err(LearnError::Contradiction(edge.to_string()));
        }
        if !own.contains(&edge) {
            own.push(edge.clone());
        }
        let refined = match refine(&q, &self.positives, &self.negatives, store, params) {
            Ok(r) => r,
            Err(e) => {
                // keep the session consistent: undo the label that broke it
                let own = if accept { &mut self.positives } else { &mut self.negatives };
                own.retain(|x| x != &edge);
                return Err(e);
            }
        };
        self.history.push(format!("{} {edge}", if accept { "accepted" } else { "rejected" }));
        if refined != q {
            self.history.push(format!("refined to {refined}"));
        }
        self.pattern = Some(refined);
        Ok(self.pattern.as_ref().unwrap())
    }

    /// The current pattern matches every positive and no negative.
    pub fn is_consistent(&self, store: &Store) -> bool {
        match &self.pattern {
            None => self.negatives.is_empty(),
            Some(q) => {
                self.positives.iter().all(|e| !q.matches(e, store).is_empty())
                    && self.negatives.iter().all(|e| q.matches(e, store).is_empty())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> Hyperedge {
        s.parse().unwrap()
    }

    fn store() -> Store {
        let mut s = Store::new();
        for e in [
            "(says/P.sr alice/C (are/P.sc dogs/C nice/C))",
            "(says/P.sr bob/C (is/P.sc it/C late/C))",
            "(denies/P.sr dave/C (is/P.sc it/C true/C))",
            "(is/P.sc berlin/C nice/C)",
        ] {
            s.add(h(e));
        }
        s.add(h("(lemma/J says/P say/P)"));
        s.add(h("(lemma/J denies/P deny/P)"));
        s
    }

    #[test]
    fn criteria() {
        let s = store();
        let c = select_candidate(&s, &"predicate-frequency".parse().unwrap()).unwrap();
        assert_eq!(predicate_root(&c).as_deref(), Some("says"));
        let r: Criterion = "random:7".parse().unwrap();
        assert_eq!(select_candidate(&s, &r).unwrap(), select_candidate(&s, &r).unwrap());
        assert_eq!(select_candidate(&Store::new(), &r), Err(LearnError::EmptyStore));
    }

    #[test]
    fn two_passes() {
        let s = store();
        let mut sess = Session::new("s1", &s, Criterion::PredicateFrequency { rank: 0 }).unwrap();
        sess.assign(BTreeMap::from([
            ("ACTOR".into(), h("alice/C")),
            ("CLAIM".into(), h("(are/P.sc dogs/C nice/C)")),
        ]))
        .unwrap();
        assert_eq!(sess.pattern.as_ref().unwrap().to_string(), "(says/P.{sr} ACTOR CLAIM)");
        assert_eq!(sess.pending(&s), vec![h("(says/P.sr bob/C (is/P.sc it/C late/C))")]);
        sess.feedback(h("(says/P.sr bob/C (is/P.sc it/C late/C))"), true, &s, &RefineParams::default())
            .unwrap();
        assert!(sess.is_consistent(&s));
        assert!(sess.pending(&s).is_empty());
        let json = serde_json::to_string(&sess).unwrap();
        assert_eq!(serde_json::from_str::<Session>(&json).unwrap(), sess);
    }
}
