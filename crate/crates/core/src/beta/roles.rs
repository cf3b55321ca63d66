use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::Tree;
use crate::alpha::AnnotatedSentence;
use crate::hedge::TypeCode;

/// Dependency label to predicate argument role; unknown labels give `?`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoleTable(pub BTreeMap<String, char>);

impl Default for RoleTable {
    fn default() -> Self {
        let pairs = [
            ("nsubj", 's'),
            ("nsubjpass", 'p'),
            ("agent", 'a'),
            ("attr", 'c'),
            ("acomp", 'c'),
            ("dobj", 'o'),
            ("dative", 'i'),
            ("iobj", 'i'),
            ("parataxis", 't'),
            ("intj", 'j'),
            ("advcl", 'x'),
            ("prep", 'x'),
            ("npadvmod", 'x'),
            ("ccomp", 'r'),
            ("relcl", 'r'),
            ("xcomp", 'r'),
        ];
        RoleTable(pairs.iter().map(|(d, r)| (d.to_string(), *r)).collect())
    }
}

impl RoleTable {
    pub fn role(&self, dep: &str) -> char {
        self.0.get(dep).copied().unwrap_or('?')
    }
}

/// The token of `tokens` closest to the root (ties: leftmost).
fn top_token(tokens: &BTreeSet<usize>, sentence: &AnnotatedSentence) -> Option<usize> {
    tokens.iter().copied().min_by_key(|&t| (sentence.depth(t), t))
}

fn connector_type(t: &Tree) -> Option<TypeCode> {
    t.edge().infer_type().ok()
}

fn is_synthetic_plus(t: &Tree) -> bool {
    matches!(t, Tree::Leaf { atom, token: None } if atom.root == "+")
}

fn set_roles(t: &Tree, roles: &str) -> Tree {
    match t {
        Tree::Leaf { atom, token } => Tree::Leaf { atom: atom.clone().with_roles(roles), token: *token },
        // through modifier chains to the innermost atom
        Tree::Node(v) if v.len() == 2 && connector_type(&v[0]) == Some(TypeCode::M) => {
            Tree::Node(vec![v[0].clone(), set_roles(&v[1], roles)])
        }
        Tree::Node(_) => t.clone(),
    }
}

/// Adds roles to every predicate and builder connector in `tree`.
pub fn assign_arg_roles(tree: &Tree, sentence: &AnnotatedSentence, table: &RoleTable) -> Tree {
    let Tree::Node(v) = tree else {
        return tree.clone();
    };
    let v: Vec<Tree> = v.iter().map(|c| assign_arg_roles(c, sentence, table)).collect();
    let (conn, args) = (&v[0], &v[1..]);
    let roles: Option<String> = match connector_type(conn) {
        Some(TypeCode::P) => {
            let pred_tokens = conn.tokens();
            Some(
                args.iter()
                    .map(|a| {
                        top_token(&a.tokens(), sentence)
                            .filter(|&t| sentence.head_of(t).is_some_and(|h| pred_tokens.contains(&h)))
                            .map(|t| table.role(&sentence.tokens[t].dep))
                            .unwrap_or('?')
                    })
                    .collect(),
            )
        }
        Some(TypeCode::B) if is_synthetic_plus(conn) => {
            let head = top_token(&tree.tokens(), sentence);
            let owner = args.iter().position(|a| head.is_some_and(|h| a.tokens().contains(&h)));
            Some(match owner {
                Some(m) => (0..args.len()).map(|i| if i == m { 'm' } else { 'a' }).collect(),
                None => "?".repeat(args.len()),
            })
        }
        Some(TypeCode::B) => Some(std::iter::once('m').chain(std::iter::repeat('a')).take(args.len()).collect()),
        _ => None,
    };
    let mut v = v;
    if let Some(r) = roles {
        v[0] = set_roles(&v[0], &r);
    }
    Tree::Node(v)
}
