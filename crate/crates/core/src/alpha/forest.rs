use std::collections::BTreeMap;
use std::io::{BufReader, Write};
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::features::{extract_features, FeatureSet, Lexicon};
use super::{AlphaLabel, AnnotatedSentence};

pub const FOREST_FORMAT: &str = "shg-alpha-forest";
pub const FOREST_VERSION: u32 = 1;

const N_LABELS: usize = 7;
const UNSEEN: u32 = u32::MAX;

#[derive(Debug, thiserror::Error)]
pub enum ForestError {
    #[error("training set is empty")]
    Empty,
    #[error("sentence {0} has no labels for every token")]
    Unlabeled(usize),
    #[error("unsupported forest file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub trees: usize,
    /// `None` grows until leaves are pure.
    pub max_depth: Option<usize>,
    pub bag_fraction: f64,
    /// Sample with replacement; when false every tree sees the whole set.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams { trees: 100, max_depth: None, bag_fraction: 1.0, bootstrap: true, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Node {
    Leaf { label: AlphaLabel },
    Split { feature: usize, value: u32, yes: Box<Node>, no: Box<Node> },
}

impl Node {
    fn predict(&self, x: &[u32]) -> AlphaLabel {
        match self {
            Node::Leaf { label } => *label,
            Node::Split { feature, value, yes, no } => {
                if x[*feature] == *value {
                    yes.predict(x)
                } else {
                    no.predict(x)
                }
            }
        }
    }
}

/// A random forest over one-hot tests `feature == value`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    format: String,
    version: u32,
    pub features: FeatureSet,
    pub lexicon: Lexicon,
    /// Observed values per feature; a split value is an index into this list.
    pub vocabulary: Vec<Vec<String>>,
    trees: Vec<Node>,
}

fn majority(counts: &[usize; N_LABELS]) -> AlphaLabel {
    let mut best = 0;
    for i in 1..N_LABELS {
        if counts[i] > counts[best] {
            best = i;
        }
    }
    AlphaLabel::ALL[best]
}

fn gini(counts: &[usize; N_LABELS], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

struct Grower<'a> {
    x: &'a [Vec<u32>],
    y: &'a [AlphaLabel],
    max_depth: Option<usize>,
    rng: ChaCha8Rng,
}

impl Grower<'_> {
    fn counts(&self, idx: &[usize]) -> [usize; N_LABELS] {
        let mut c = [0; N_LABELS];
        for &i in idx {
            c[self.y[i].index()] += 1;
        }
        c
    }

    /// Weighted child impurity of a split, or `None` if one side is empty.
    fn score(&self, idx: &[usize], col: (usize, u32)) -> Option<f64> {
        let mut yes = [0; N_LABELS];
        let mut no = [0; N_LABELS];
        let (mut ny, mut nn) = (0, 0);
        for &i in idx {
            if self.x[i][col.0] == col.1 {
                yes[self.y[i].index()] += 1;
                ny += 1;
            } else {
                no[self.y[i].index()] += 1;
                nn += 1;
            }
        }
        if ny == 0 || nn == 0 {
            return None;
        }
        Some((ny as f64 * gini(&yes, ny) + nn as f64 * gini(&no, nn)) / idx.len() as f64)
    }

    fn best(&self, idx: &[usize], cols: &[(usize, u32)]) -> Option<((usize, u32), f64)> {
        let mut best: Option<((usize, u32), f64)> = None;
        for &c in cols {
            if let Some(s) = self.score(idx, c) {
                if best.map_or(true, |(_, b)| s < b - 1e-12) {
                    best = Some((c, s));
                }
            }
        }
        best
    }

    fn grow(&mut self, idx: &[usize], depth: usize) -> Node {
        let counts = self.counts(idx);
        let label = majority(&counts);
        let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
        if pure || self.max_depth.is_some_and(|d| depth >= d) {
            return Node::Leaf { label };
        }
        // candidate columns: values present at this node
        let mut present: Vec<(usize, u32)> = Vec::new();
        for f in 0..self.x[idx[0]].len() {
            let mut vals: Vec<u32> = idx.iter().map(|&i| self.x[i][f]).collect();
            vals.sort_unstable();
            vals.dedup();
            if vals.len() > 1 {
                present.extend(vals.into_iter().map(|v| (f, v)));
            }
        }
        if present.is_empty() {
            return Node::Leaf { label };
        }
        let k = ((present.len() as f64).sqrt().ceil() as usize).max(1);
        let chosen: Vec<(usize, u32)> =
            sample(&mut self.rng, present.len(), k).into_iter().map(|i| present[i]).collect();
        let parent = gini(&counts, idx.len());
        let mut pick = self.best(idx, &chosen);
        if pick.map_or(true, |(_, s)| s >= parent - 1e-12) {
            pick = self.best(idx, &present);
        }
        let Some(((feature, value), _)) = pick else {
            return Node::Leaf { label };
        };
        let (yes, no): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| self.x[i][feature] == value);
        Node::Split {
            feature,
            value,
            yes: Box::new(self.grow(&yes, depth + 1)),
            no: Box::new(self.grow(&no, depth + 1)),
        }
    }
}

impl Forest {
    pub fn train(
        data: &[(&AnnotatedSentence, &[AlphaLabel])],
        features: &FeatureSet,
        params: &ForestParams,
    ) -> Result<Forest, ForestError> {
        let n_tokens: usize = data.iter().map(|(s, _)| s.tokens.len()).sum();
        if n_tokens == 0 {
            return Err(ForestError::Empty);
        }
        for (i, (s, l)) in data.iter().enumerate() {
            if l.len() != s.tokens.len() {
                return Err(ForestError::Unlabeled(i));
            }
        }
        let lexicon = Lexicon::build(
            data.iter().flat_map(|(s, _)| s.tokens.iter().map(|t| t.text.as_str())),
            features.max_word_limit(),
        );
        let mut vocab: Vec<BTreeMap<String, u32>> = vec![BTreeMap::new(); features.len()];
        let mut raw = Vec::with_capacity(n_tokens);
        let mut y = Vec::with_capacity(n_tokens);
        for (s, labels) in data {
            for i in 0..s.tokens.len() {
                let vals = extract_features(s, i, features, &lexicon);
                for (f, v) in vals.iter().enumerate() {
                    vocab[f].entry(v.clone()).or_insert(0);
                }
                raw.push(vals);
                y.push(labels[i]);
            }
        }
        for m in vocab.iter_mut() {
            for (i, v) in m.values_mut().enumerate() {
                *v = i as u32;
            }
        }
        let x: Vec<Vec<u32>> = raw
            .iter()
            .map(|vals| vals.iter().enumerate().map(|(f, v)| vocab[f][v]).collect())
            .collect();

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let bag = ((n_tokens as f64 * params.bag_fraction).round() as usize).clamp(1, usize::MAX);
        let mut trees = Vec::with_capacity(params.trees.max(1));
        for _ in 0..params.trees.max(1) {
            let idx: Vec<usize> = if params.bootstrap {
                (0..bag).map(|_| rng.gen_range(0..n_tokens)).collect()
            } else {
                (0..n_tokens).collect()
            };
            let mut g = Grower {
                x: &x,
                y: &y,
                max_depth: params.max_depth,
                rng: ChaCha8Rng::seed_from_u64(rng.gen()),
            };
            trees.push(g.grow(&idx, 0));
        }
        Ok(Forest {
            format: FOREST_FORMAT.into(),
            version: FOREST_VERSION,
            features: features.clone(),
            lexicon,
            vocabulary: vocab.into_iter().map(|m| m.into_keys().collect()).collect(),
            trees,
        })
    }

    fn encode(&self, sentence: &AnnotatedSentence, index: usize) -> Vec<u32> {
        extract_features(sentence, index, &self.features, &self.lexicon)
            .iter()
            .zip(&self.vocabulary)
            .map(|(v, voc)| voc.binary_search(v).map(|i| i as u32).unwrap_or(UNSEEN))
            .collect()
    }

    /// Majority vote; ties go to the earlier label in `AlphaLabel::ALL`.
    pub fn predict(&self, sentence: &AnnotatedSentence, index: usize) -> AlphaLabel {
        let x = self.encode(sentence, index);
        let mut votes = [0; N_LABELS];
        for t in &self.trees {
            votes[t.predict(&x).index()] += 1;
        }
        majority(&votes)
    }

    pub fn predict_sentence(&self, sentence: &AnnotatedSentence) -> Vec<AlphaLabel> {
        (0..sentence.tokens.len()).map(|i| self.predict(sentence, i)).collect()
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    /// Fraction of correctly predicted tokens.
    pub fn accuracy(&self, data: &[(&AnnotatedSentence, &[AlphaLabel])]) -> f64 {
        let (mut ok, mut n) = (0, 0);
        for (s, l) in data {
            for (p, g) in self.predict_sentence(s).iter().zip(l.iter()) {
                n += 1;
                ok += (p == g) as usize;
            }
        }
        if n == 0 {
            0.0
        } else {
            ok as f64 / n as f64
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("forest serializes")
    }

    pub fn from_json(s: &str) -> Result<Forest, ForestError> {
        let mut f: Forest = serde_json::from_str(s)?;
        f.check()?;
        Ok(f)
    }

    fn check(&mut self) -> Result<(), ForestError> {
        if self.format != FOREST_FORMAT {
            return Err(ForestError::Format(format!("format {:?}", self.format)));
        }
        if self.version != FOREST_VERSION {
            return Err(ForestError::Format(format!("version {}", self.version)));
        }
        if self.vocabulary.len() != self.features.len() {
            return Err(ForestError::Format("vocabulary does not match features".into()));
        }
        self.lexicon.reindex();
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ForestError> {
        let mut f = std::fs::File::create(path)?;
        serde_json::to_writer(&mut f, self)?;
        f.write_all(b"\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Forest, ForestError> {
        let r = BufReader::new(std::fs::File::open(path)?);
        let mut f: Forest = serde_json::from_reader(r)?;
        f.check()?;
        Ok(f)
    }
}
