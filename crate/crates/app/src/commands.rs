//! The operations behind each subcommand, as functions over a store that
//! return output lines. The CLI and the service both call these.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;
use std::path::Path;

use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use shg::alpha::{labeled, AnnotatedSentence, FeatureSet, Forest, ForestParams};
use shg::beta::{parse_sentence, Parse, RoleTable};
use shg::coref::{resolve, seed_concepts, CorefParams, CorefReport};
use shg::inference::{
    detect_claim, detect_conflict, detect_factions, extract_oie, ConflictNetwork, Factions, LemmaSets,
};
use shg::learning::{mine_patterns, GeneralizationConfig};
use shg::patterns::{apply_rule_with, Binding, Query, Rule};
use shg::store::{StoreError, HEADER};
use shg::{Hyperedge, Store};

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("line {line}: {message}")]
    Notation { line: usize, message: String },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("{0}")]
    Other(String),
}

/// Stable identifier of an edge: hex SHA-256 of its notation.
pub fn edge_id(e: &Hyperedge) -> String {
    Sha256::digest(e.to_string().as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// One edge per line; blank lines and `#` comments are skipped.
pub fn read_edges(text: &str) -> Result<Vec<Hyperedge>, CommandError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let e = l.parse().map_err(|e: shg::hedge::NotationError| CommandError::Notation {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(e);
    }
    Ok(out)
}

/// A store file (recognized by its header) or a file of notation lines.
pub fn read_input(path: &Path) -> Result<Store, CommandError> {
    let text = std::fs::read_to_string(path).map_err(StoreError::from)?;
    if text.lines().next().map(str::trim_end) == Some(HEADER) {
        return Ok(Store::read_from(text.as_bytes())?);
    }
    let mut s = Store::new();
    for e in read_edges(&text)? {
        s.add(e);
    }
    Ok(s)
}

pub fn binding_map(b: &Binding) -> BTreeMap<String, String> {
    b.iter().map(|(k, v)| (k.clone(), v.to_string())).collect()
}

/// `edge<TAB>VAR=value...` for every top-level edge matching the query.
pub fn match_lines(store: &Store, q: &Query) -> Vec<String> {
    let mut out = BTreeSet::new();
    for e in store.edges() {
        for b in q.matches(e, store) {
            let mut fields = vec![e.to_string()];
            fields.extend(binding_map(&b).into_iter().map(|(k, v)| format!("{k}={v}")));
            out.insert(fields.join("\t"));
        }
    }
    out.into_iter().collect()
}

/// Distinct edges produced by applying every rule to every stored edge.
pub fn rule_outputs(store: &Store, rules: &[Rule]) -> Result<Vec<Hyperedge>, CommandError> {
    let mut out = BTreeSet::new();
    for e in store.edges() {
        for r in rules {
            let produced = apply_rule_with(e, r, store).map_err(|err| CommandError::Other(err.to_string()))?;
            out.extend(produced);
        }
    }
    Ok(out.into_iter().collect())
}

pub fn oie_lines(store: &Store, tsv: bool) -> Vec<String> {
    let mut out = BTreeSet::new();
    for e in store.edges() {
        for t in extract_oie(e, Some(store)) {
            out.insert(if tsv { t.to_tsv() } else { t.to_string() });
        }
    }
    out.into_iter().collect()
}

fn json_lines<T: Serialize>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    let set: BTreeSet<String> = items
        .into_iter()
        .map(|x| serde_json::to_string(&x).expect("serializable"))
        .collect();
    set.into_iter().collect()
}

pub fn claim_lines(store: &Store, sets: &LemmaSets) -> Vec<String> {
    json_lines(store.edges().filter_map(|e| detect_claim(e, store, sets)))
}

pub fn conflict_lines(store: &Store, sets: &LemmaSets) -> Vec<String> {
    json_lines(store.edges().filter_map(|e| detect_conflict(e, store, sets)))
}

pub fn conflict_network(store: &Store, sets: &LemmaSets) -> ConflictNetwork {
    let conflicts: Vec<_> = store.edges().filter_map(|e| detect_conflict(e, store, sets)).collect();
    ConflictNetwork::from_conflicts(&conflicts)
}

/// `A|B|-<TAB>actor`, faction A first.
pub fn faction_lines(f: &Factions) -> Vec<String> {
    let mut out = Vec::new();
    for (tag, set) in [("A", &f.a), ("B", &f.b), ("-", &f.unassigned)] {
        out.extend(set.iter().map(|e| format!("{tag}\t{e}")));
    }
    out
}

pub fn factions(store: &Store, sets: &LemmaSets) -> Result<(ConflictNetwork, Factions), CommandError> {
    let net = conflict_network(store, sets);
    let f = detect_factions(&net).map_err(|e| CommandError::Other(e.to_string()))?;
    Ok((net, f))
}

/// Reports for one seed, or for every seed concept in the store.
pub fn coref_reports(
    store: &Store,
    seed: Option<&Hyperedge>,
    params: &CorefParams,
) -> Result<Vec<CorefReport>, CommandError> {
    let seeds = match seed {
        Some(s) => vec![s.clone()],
        None => seed_concepts(store),
    };
    seeds
        .iter()
        .map(|s| resolve(store, s, params).map_err(|e| CommandError::Other(e.to_string())))
        .collect()
}

pub fn metrics_json(store: &Store, e: &Hyperedge) -> serde_json::Value {
    let hood: Vec<String> = store.neighborhood(e).iter().map(|x| x.to_string()).collect();
    json!({
        "edge": e.to_string(),
        "degree": store.degree(e),
        "deep_degree": store.deep_degree(e),
        "neighborhood": hood,
    })
}

/// `count<TAB>pattern`, most frequent first.
pub fn mine_lines(store: &Store, cfg: &GeneralizationConfig, top: Option<usize>) -> Vec<String> {
    let mined = mine_patterns(store, cfg);
    let n = top.unwrap_or(mined.len());
    mined.iter().take(n).map(|m| format!("{}\t{}", m.count, m.pattern)).collect()
}

pub fn read_sentences(path: &Path) -> Result<Vec<AnnotatedSentence>, CommandError> {
    let f = std::fs::File::open(path).map_err(StoreError::from)?;
    AnnotatedSentence::read_jsonl(std::io::BufReader::new(f)).map_err(|e| CommandError::Other(e.to_string()))
}

pub struct TrainReport {
    pub forest: Forest,
    pub train_accuracy: f64,
    pub test_accuracy: Option<f64>,
}

pub fn train_alpha(
    train: &[AnnotatedSentence],
    test: Option<&[AnnotatedSentence]>,
    fs: &FeatureSet,
    params: &ForestParams,
) -> Result<TrainReport, CommandError> {
    let other = |e: shg::alpha::ForestError| CommandError::Other(e.to_string());
    let data = labeled(train).map_err(other)?;
    let forest = Forest::train(&data, fs, params).map_err(other)?;
    let train_accuracy = forest.accuracy(&data);
    let test_accuracy = match test {
        Some(t) => Some(forest.accuracy(&labeled(t).map_err(other)?)),
        None => None,
    };
    Ok(TrainReport { forest, train_accuracy, test_accuracy })
}

pub fn parse_all(
    sentences: &[AnnotatedSentence],
    forest: &Forest,
    roles: &RoleTable,
) -> Result<Vec<Parse>, CommandError> {
    sentences
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_sentence(s, forest, roles).map_err(|e| CommandError::Other(format!("sentence {}: {e}", i + 1)))
        })
        .collect()
}

/// Adds a parse with its source text, span tags and lemma edges.
pub fn add_parse(store: &mut Store, p: &Parse) {
    store.add_with(p.edge.clone(), Some(p.text.clone()), p.span_tags());
    for l in &p.lemma_edges {
        if !store.contains(l) {
            store.add(l.clone());
        }
    }
}

/// Reads notation lines from any reader.
pub fn read_edges_from(r: impl BufRead) -> Result<Vec<Hyperedge>, CommandError> {
    let text: String = r
        .lines()
        .collect::<Result<Vec<_>, _>>()
        .map_err(StoreError::from)?
        .join("\n");
    read_edges(&text)
}
