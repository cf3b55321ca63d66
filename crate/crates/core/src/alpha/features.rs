use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AnnotatedSentence, AnnotatedToken};

/// Value for features whose relative token does not exist.
pub const NONE: &str = "NONE";
/// Value for WORD features outside the lexicon.
pub const OTHER: &str = "<OTHER>";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Field {
    Tag,
    Pos,
    Dep,
    Ner,
    Shape,
    Punct,
    Word(usize),
    IsRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Relative {
    Own,
    Head,
    Before,
    After,
}

/// A named categorical feature such as `TAG`, `HDEP`, `POS_AFTER` or `WORD_BEFORE15`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Feature {
    name: String,
    field: Field,
    rel: Relative,
}

impl Feature {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Lexicon size this feature needs, if it is a WORD feature.
    pub fn word_limit(&self) -> Option<usize> {
        match self.field {
            Field::Word(n) => Some(n),
            _ => None,
        }
    }
}

impl FromStr for Feature {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("unknown feature {s:?}");
        if s == "IS_ROOT" {
            return Ok(Feature { name: s.into(), field: Field::IsRoot, rel: Relative::Own });
        }
        let (mut rest, mut rel) = (s, Relative::Own);
        if let Some(r) = rest.strip_prefix('H') {
            rest = r;
            rel = Relative::Head;
        }
        let split = rest.find(|c: char| c == '_' || c.is_ascii_digit()).unwrap_or(rest.len());
        let (field, mut tail) = rest.split_at(split);
        for (suffix, r) in [("_BEFORE", Relative::Before), ("_AFTER", Relative::After)] {
            if let Some(t) = tail.strip_prefix(suffix) {
                if rel != Relative::Own {
                    return Err(bad());
                }
                rel = r;
                tail = t;
            }
        }
        let field = match field {
            "TAG" => Field::Tag,
            "POS" => Field::Pos,
            "DEP" => Field::Dep,
            "NER" => Field::Ner,
            "SHAPE" => Field::Shape,
            "PUNCT" => Field::Punct,
            "WORD" => Field::Word(tail.parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        };
        if !matches!(field, Field::Word(_)) && !tail.is_empty() {
            return Err(bad());
        }
        Ok(Feature { name: s.into(), field, rel })
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl Serialize for Feature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name)
    }
}

impl<'de> Deserialize<'de> for Feature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An ordered list of distinct features.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Feature>", into = "Vec<Feature>")]
pub struct FeatureSet(Vec<Feature>);

impl FeatureSet {
    pub fn new(features: Vec<Feature>) -> Result<FeatureSet, String> {
        let mut seen = std::collections::HashSet::new();
        for f in &features {
            if !seen.insert(f.name.clone()) {
                return Err(format!("duplicate feature {}", f.name));
            }
        }
        if features.is_empty() {
            return Err("empty feature set".into());
        }
        Ok(FeatureSet(features))
    }

    pub fn parse_list(names: &[&str]) -> Result<FeatureSet, String> {
        FeatureSet::new(names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?)
    }

    pub fn f3() -> FeatureSet {
        FeatureSet::parse_list(&["TAG", "DEP", "HDEP"]).unwrap()
    }

    pub fn f5() -> FeatureSet {
        FeatureSet::parse_list(&["TAG", "DEP", "HDEP", "HPOS", "POS_AFTER"]).unwrap()
    }

    /// `F3`, `F5`, or a comma-separated list of feature names.
    pub fn named(s: &str) -> Result<FeatureSet, String> {
        match s {
            "F3" | "f3" => Ok(Self::f3()),
            "F5" | "f5" => Ok(Self::f5()),
            _ => FeatureSet::parse_list(&s.split(',').map(str::trim).collect::<Vec<_>>()),
        }
    }

    pub fn features(&self) -> &[Feature] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_word_limit(&self) -> usize {
        self.0.iter().filter_map(Feature::word_limit).max().unwrap_or(0)
    }
}

impl TryFrom<Vec<Feature>> for FeatureSet {
    type Error = String;
    fn try_from(v: Vec<Feature>) -> Result<Self, String> {
        FeatureSet::new(v)
    }
}

impl From<FeatureSet> for Vec<Feature> {
    fn from(f: FeatureSet) -> Self {
        f.0
    }
}

/// Words ranked by frequency (ties alphabetical); WORDn keeps the first n.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lexicon {
    ranked: Vec<String>,
    #[serde(skip)]
    rank: HashMap<String, usize>,
}

impl Lexicon {
    pub fn build<'a>(words: impl IntoIterator<Item = &'a str>, limit: usize) -> Lexicon {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for w in words {
            *counts.entry(w.to_lowercase()).or_insert(0) += 1;
        }
        let mut v: Vec<(String, usize)> = counts.into_iter().collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        v.truncate(limit);
        Lexicon::from_ranked(v.into_iter().map(|(w, _)| w).collect())
    }

    pub fn from_ranked(ranked: Vec<String>) -> Lexicon {
        let rank = ranked.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Lexicon { ranked, rank }
    }

    pub(crate) fn reindex(&mut self) {
        self.rank = self.ranked.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    }

    pub fn words(&self) -> &[String] {
        &self.ranked
    }

    fn within(&self, word: &str, n: usize) -> bool {
        self.rank.get(&word.to_lowercase()).is_some_and(|r| *r < n)
    }
}

fn field_value(t: &AnnotatedToken, i: usize, field: Field, lex: &Lexicon) -> String {
    match field {
        Field::Tag => t.tag.clone(),
        Field::Pos => t.pos.clone(),
        Field::Dep => t.dep.clone(),
        Field::Ner => t.ner.clone(),
        Field::Shape => t.shape.clone(),
        Field::Punct => t.is_punct.to_string(),
        Field::IsRoot => (t.head == i).to_string(),
        Field::Word(n) => {
            if lex.within(&t.text, n) {
                t.text.to_lowercase()
            } else {
                OTHER.into()
            }
        }
    }
}

/// Feature values for token `index`, in feature-set order.
pub fn extract_features(
    sentence: &AnnotatedSentence,
    index: usize,
    fs: &FeatureSet,
    lex: &Lexicon,
) -> Vec<String> {
    fs.0.iter()
        .map(|f| {
            let rel = match f.rel {
                Relative::Own => Some(index),
                Relative::Head => sentence.head_of(index),
                Relative::Before => index.checked_sub(1),
                Relative::After => Some(index + 1).filter(|j| *j < sentence.tokens.len()),
            };
            match rel {
                Some(j) => field_value(&sentence.tokens[j], j, f.field, lex),
                None => NONE.into(),
            }
        })
        .collect()
}
