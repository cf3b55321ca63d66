//! α-stage: typing each token of an annotated sentence with a decision forest.

mod features;
mod forest;

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::hedge::{Atom, TypeCode};

pub use features::{extract_features, Feature, FeatureSet, Lexicon, NONE};
pub use forest::{Forest, ForestError, ForestParams, FOREST_FORMAT, FOREST_VERSION};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedToken {
    pub text: String,
    #[serde(default)]
    pub lemma: String,
    #[serde(default)]
    pub tag: String,
    #[serde(default)]
    pub pos: String,
    #[serde(default)]
    pub dep: String,
    pub head: usize,
    #[serde(default)]
    pub ner: String,
    #[serde(default)]
    pub shape: String,
    #[serde(default)]
    pub is_punct: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedSentence {
    #[serde(default)]
    pub text: String,
    pub tokens: Vec<AnnotatedToken>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<AlphaLabel>>,
}

#[derive(Debug, thiserror::Error)]
pub enum SentenceError {
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl AnnotatedSentence {
    /// Checks head bounds, a single root, acyclic heads and label count.
    pub fn validate(&self) -> Result<(), String> {
        let n = self.tokens.len();
        if n == 0 {
            return Err("sentence has no tokens".into());
        }
        let mut roots = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.head >= n {
                return Err(format!("token {i} has head {} out of bounds", t.head));
            }
            if t.head == i {
                roots += 1;
            }
        }
        if roots != 1 {
            return Err(format!("expected exactly one root, found {roots}"));
        }
        for i in 0..n {
            if self.depth_checked(i).is_none() {
                return Err(format!("token {i} is on a head cycle"));
            }
        }
        if let Some(l) = &self.labels {
            if l.len() != n {
                return Err(format!("{} labels for {} tokens", l.len(), n));
            }
        }
        Ok(())
    }

    fn depth_checked(&self, mut i: usize) -> Option<usize> {
        let mut d = 0;
        while self.tokens[i].head != i {
            i = self.tokens[i].head;
            d += 1;
            if d > self.tokens.len() {
                return None;
            }
        }
        Some(d)
    }

    /// Distance from the root; the root has depth 0.
    pub fn depth(&self, i: usize) -> usize {
        self.depth_checked(i).unwrap_or(usize::MAX)
    }

    pub fn root(&self) -> Option<usize> {
        (0..self.tokens.len()).find(|&i| self.tokens[i].head == i)
    }

    pub fn head_of(&self, i: usize) -> Option<usize> {
        let h = self.tokens.get(i)?.head;
        (h != i).then_some(h)
    }

    pub fn from_json(line: &str) -> Result<AnnotatedSentence, serde_json::Error> {
        serde_json::from_str(line)
    }

    /// Reads and validates one sentence per non-blank line.
    pub fn read_jsonl<R: BufRead>(r: R) -> Result<Vec<AnnotatedSentence>, SentenceError> {
        let mut out = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let s: AnnotatedSentence =
                serde_json::from_str(&line).map_err(|e| SentenceError::Json { line: i + 1, source: e })?;
            s.validate()
                .map_err(|m| SentenceError::Invalid { line: i + 1, message: m })?;
            out.push(s);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AlphaLabel {
    C,
    P,
    M,
    B,
    T,
    J,
    #[serde(rename = "DISCARD", alias = "X")]
    Discard,
}

impl AlphaLabel {
    /// Also the tie-break order for votes.
    pub const ALL: [AlphaLabel; 7] = [
        AlphaLabel::C,
        AlphaLabel::P,
        AlphaLabel::M,
        AlphaLabel::B,
        AlphaLabel::T,
        AlphaLabel::J,
        AlphaLabel::Discard,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn type_code(self) -> Option<TypeCode> {
        Some(match self {
            AlphaLabel::C => TypeCode::C,
            AlphaLabel::P => TypeCode::P,
            AlphaLabel::M => TypeCode::M,
            AlphaLabel::B => TypeCode::B,
            AlphaLabel::T => TypeCode::T,
            AlphaLabel::J => TypeCode::J,
            AlphaLabel::Discard => return None,
        })
    }
}

impl fmt::Display for AlphaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.type_code() {
            Some(c) => write!(f, "{}", c.as_char()),
            None => f.write_str("DISCARD"),
        }
    }
}

impl FromStr for AlphaLabel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "DISCARD" | "X" => Ok(AlphaLabel::Discard),
            _ => {
                let mut cs = s.chars();
                match (cs.next().and_then(TypeCode::from_char), cs.next()) {
                    (Some(c), None) => AlphaLabel::ALL
                        .into_iter()
                        .find(|l| l.type_code() == Some(c))
                        .ok_or_else(|| format!("label {s:?} is not an atom type")),
                    _ => Err(format!("unknown label {s:?}")),
                }
            }
        }
    }
}

/// Lowercased surface form with notation-reserved characters replaced.
pub fn atom_root(text: &str) -> String {
    let r: String = text
        .to_lowercase()
        .chars()
        .map(|c| if c.is_whitespace() || matches!(c, '(' | ')' | '/') { '_' } else { c })
        .collect();
    if r.is_empty() {
        "_".into()
    } else {
        r
    }
}

/// One atom per token, `None` for discarded tokens.
pub fn classify_tokens(sentence: &AnnotatedSentence, forest: &Forest) -> Vec<Option<Atom>> {
    (0..sentence.tokens.len())
        .map(|i| {
            let label = forest.predict(sentence, i);
            label
                .type_code()
                .map(|c| Atom::new(atom_root(&sentence.tokens[i].text), c))
        })
        .collect()
}

/// Labels for sentences that carry gold labels; errors on any that don't.
pub fn labeled(sentences: &[AnnotatedSentence]) -> Result<Vec<(&AnnotatedSentence, &[AlphaLabel])>, ForestError> {
    sentences
        .iter()
        .enumerate()
        .map(|(i, s)| match &s.labels {
            Some(l) if l.len() == s.tokens.len() => Ok((s, l.as_slice())),
            _ => Err(ForestError::Unlabeled(i)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_strings() {
        for l in AlphaLabel::ALL {
            assert_eq!(l.to_string().parse::<AlphaLabel>().unwrap(), l);
        }
        assert!("R".parse::<AlphaLabel>().is_err());
        let v: Vec<AlphaLabel> = serde_json::from_str(r#"["C","DISCARD","X"]"#).unwrap();
        assert_eq!(v, [AlphaLabel::C, AlphaLabel::Discard, AlphaLabel::Discard]);
    }

    #[test]
    fn roots() {
        assert_eq!(atom_root("Berlin"), "berlin");
        assert_eq!(atom_root("and/or"), "and_or");
    }
}
