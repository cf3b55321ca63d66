//! β-stage: folding a typed atom sequence into one hyperedge, guided by the
//! dependency tree, then assigning argument roles.

mod roles;

use std::collections::{BTreeMap, BTreeSet};

use crate::alpha::{classify_tokens, AnnotatedSentence, Forest};
use crate::hedge::{Atom, Hyperedge, TypeCode};
use crate::store::SPAN_TAG;

pub use roles::{assign_arg_roles, RoleTable};

/// Tree mirroring a hyperedge, with the source token of every atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    /// `token` is `None` for connectors the parser synthesizes (`+/B`, `:/J`).
    Leaf { atom: Atom, token: Option<usize> },
    Node(Vec<Tree>),
}

impl Tree {
    pub fn edge(&self) -> Hyperedge {
        match self {
            Tree::Leaf { atom, .. } => Hyperedge::Atom(atom.clone()),
            Tree::Node(v) => Hyperedge::Edge(v.iter().map(Tree::edge).collect()),
        }
    }

    pub fn tokens(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        self.collect_tokens(&mut s);
        s
    }

    fn collect_tokens(&self, s: &mut BTreeSet<usize>) {
        match self {
            Tree::Leaf { token, .. } => s.extend(*token),
            Tree::Node(v) => v.iter().for_each(|t| t.collect_tokens(s)),
        }
    }

    fn synthetic(root: &str, code: TypeCode) -> Tree {
        Tree::Leaf { atom: Atom::new(root, code), token: None }
    }
}

/// An element of the working sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkItem {
    pub tree: Tree,
    pub tokens: BTreeSet<usize>,
}

impl WorkItem {
    pub fn atom(atom: Atom, token: usize) -> WorkItem {
        WorkItem { tree: Tree::Leaf { atom, token: Some(token) }, tokens: BTreeSet::from([token]) }
    }

    fn combine(parts: Vec<WorkItem>) -> WorkItem {
        let tokens = parts.iter().flat_map(|p| p.tokens.iter().copied()).collect();
        WorkItem { tree: Tree::Node(parts.into_iter().map(|p| p.tree).collect()), tokens }
    }

    pub fn edge(&self) -> Hyperedge {
        self.tree.edge()
    }

    fn type_code(&self) -> Option<TypeCode> {
        self.edge().infer_type().ok()
    }

    /// Atomic concepts and `+/B` compounds, the only things implicit builders join.
    fn is_compound_part(&self) -> bool {
        match &self.tree {
            Tree::Leaf { atom, .. } => atom.code == TypeCode::C,
            Tree::Node(v) => matches!(&v[0], Tree::Leaf { atom, .. } if atom.root == "+" && atom.code == TypeCode::B),
        }
    }
}

/// The folding rules, in priority order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BetaRule {
    /// `(C C)` becomes `(+/B C C)`
    Plus,
    /// `(M x)`
    Modifier,
    /// `(B C C)`
    Builder,
    /// `(T [CR])`
    Trigger,
    /// `(P [CRS]+)`, absorbing every adjacent dependent argument once no
    /// modifier of the predicate is left outside it
    Predicate,
    /// `(J x x')` with both arguments of one type
    Conjunction,
}

impl BetaRule {
    pub const ALL: [BetaRule; 6] = [
        BetaRule::Plus,
        BetaRule::Modifier,
        BetaRule::Builder,
        BetaRule::Trigger,
        BetaRule::Predicate,
        BetaRule::Conjunction,
    ];

    fn rank(self) -> i64 {
        self as i64
    }
}

/// Score of a candidate window; larger is better.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Score {
    pub connected: bool,
    pub depth: usize,
    pub priority: i64,
}

fn first_of(items: &[WorkItem], code: TypeCode) -> Option<usize> {
    items.iter().position(|i| i.type_code() == Some(code))
}

/// Connector first, the rest in original order.
fn reorder(window: &[WorkItem], conn: usize) -> Vec<WorkItem> {
    let mut v = vec![window[conn].clone()];
    v.extend(window.iter().enumerate().filter(|(i, _)| *i != conn).map(|(_, w)| w.clone()));
    v
}

fn is_dependent(item: &WorkItem, of: &WorkItem, sentence: &AnnotatedSentence) -> bool {
    item.tokens
        .iter()
        .any(|&t| sentence.head_of(t).is_some_and(|h| of.tokens.contains(&h)))
}

/// Tries `rule` on the window starting at `pos`. Returns the window length and combined item.
pub fn apply_rule(
    seq: &[WorkItem],
    pos: usize,
    rule: BetaRule,
    sentence: &AnnotatedSentence,
) -> Option<(usize, WorkItem)> {
    use TypeCode::*;
    let win = |n: usize| seq.get(pos..pos + n);
    let ty = |w: &WorkItem| w.type_code();
    match rule {
        BetaRule::Plus => {
            let w = win(2)?;
            if !(w.iter().all(WorkItem::is_compound_part)) {
                return None;
            }
            let plus = WorkItem { tree: Tree::synthetic("+", B), tokens: BTreeSet::new() };
            Some((2, WorkItem::combine(vec![plus, w[0].clone(), w[1].clone()])))
        }
        BetaRule::Modifier => {
            let w = win(2)?;
            let c = first_of(w, M)?;
            Some((2, WorkItem::combine(reorder(w, c))))
        }
        BetaRule::Builder => {
            let w = win(3)?;
            let c = first_of(w, B)?;
            let rest = reorder(w, c);
            rest[1..].iter().all(|x| ty(x) == Some(C)).then(|| (3, WorkItem::combine(rest)))
        }
        BetaRule::Trigger => {
            let w = win(2)?;
            let c = first_of(w, T)?;
            let rest = reorder(w, c);
            matches!(ty(&rest[1]), Some(C) | Some(R)).then(|| (2, WorkItem::combine(rest)))
        }
        BetaRule::Predicate => {
            // the window starts at `pos` with arguments, or at the predicate itself
            let p = (pos..seq.len()).find(|&i| ty(&seq[i]) == Some(P))?;
            // modifiers of the predicate attach before it takes arguments
            if seq.iter().any(|w| ty(w) == Some(M) && is_dependent(w, &seq[p], sentence)) {
                return None;
            }
            let arg = |w: &WorkItem| {
                matches!(ty(w), Some(C) | Some(R) | Some(S)) && is_dependent(w, &seq[p], sentence)
            };
            let mut l = p;
            while l > 0 && arg(&seq[l - 1]) {
                l -= 1;
            }
            if l != pos {
                return None;
            }
            let mut r = p + 1;
            while r < seq.len() && arg(&seq[r]) {
                r += 1;
            }
            if r - l < 2 {
                return None;
            }
            Some((r - l, WorkItem::combine(reorder(&seq[l..r], p - l))))
        }
        BetaRule::Conjunction => {
            let w = win(3)?;
            let c = first_of(w, J)?;
            let rest = reorder(w, c);
            (ty(&rest[1]) == ty(&rest[2])).then(|| (3, WorkItem::combine(rest)))
        }
    }
}

/// Whether the items of `window` form one connected component under head/child links.
pub fn window_connected(window: &[WorkItem], sentence: &AnnotatedSentence) -> bool {
    let linked = |a: &WorkItem, b: &WorkItem| is_dependent(a, b, sentence) || is_dependent(b, a, sentence);
    let items: Vec<&WorkItem> = window.iter().filter(|w| !w.tokens.is_empty()).collect();
    if items.is_empty() {
        return false;
    }
    let mut seen = vec![false; items.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..items.len() {
            if !seen[j] && linked(items[i], items[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// The heuristic: connectedness, then deepest token, then rule priority.
pub fn heuristic(window: &[WorkItem], rule: BetaRule, sentence: &AnnotatedSentence) -> Score {
    Score {
        connected: window_connected(window, sentence),
        depth: window
            .iter()
            .flat_map(|w| w.tokens.iter())
            .map(|&t| sentence.depth(t))
            .max()
            .unwrap_or(0),
        priority: -rule.rank(),
    }
}

/// One β step: the best-scoring rule application, or the `:/J` fallback.
pub fn beta_step(seq: &[WorkItem], sentence: &AnnotatedSentence) -> Vec<WorkItem> {
    let mut best: Option<(Score, usize, usize, WorkItem)> = None;
    for pos in 0..seq.len() {
        for rule in BetaRule::ALL {
            if let Some((n, item)) = apply_rule(seq, pos, rule, sentence) {
                let s = heuristic(&seq[pos..pos + n], rule, sentence);
                if best.as_ref().map_or(true, |(b, ..)| s > *b) {
                    best = Some((s, pos, n, item));
                }
            }
        }
    }
    let mut out = seq.to_vec();
    match best {
        Some((_, pos, n, item)) => {
            out.splice(pos..pos + n, [item]);
        }
        None => {
            let colon = WorkItem { tree: Tree::synthetic(":", TypeCode::J), tokens: BTreeSet::new() };
            let pair = WorkItem::combine(vec![colon, seq[0].clone(), seq[1].clone()]);
            out.splice(0..2, [pair]);
        }
    }
    out
}

/// Folds the sequence until one item remains. Panics on an empty sequence.
pub fn beta_transform(seq: Vec<WorkItem>, sentence: &AnnotatedSentence) -> WorkItem {
    assert!(!seq.is_empty(), "beta_transform needs at least one item");
    let mut seq = seq;
    while seq.len() > 1 {
        seq = beta_step(&seq, sentence);
    }
    seq.pop().unwrap()
}

/// Working sequence from per-token atoms, skipping discarded tokens.
pub fn initial_sequence(atoms: &[Option<Atom>]) -> Vec<WorkItem> {
    atoms
        .iter()
        .enumerate()
        .filter_map(|(i, a)| a.clone().map(|a| WorkItem::atom(a, i)))
        .collect()
}

/// A parsed sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parse {
    pub edge: Hyperedge,
    pub tree: Tree,
    /// `(lemma/J word lemma)` for tokens whose lemma differs from the surface form.
    pub lemma_edges: Vec<Hyperedge>,
    /// Surface text of every non-atomic sub-edge.
    pub spans: BTreeMap<Hyperedge, String>,
    pub text: String,
}

impl Parse {
    /// Tags recording sub-edge spans, for `Store::add_with`.
    pub fn span_tags(&self) -> BTreeMap<String, String> {
        self.spans
            .iter()
            .map(|(e, t)| (format!("{SPAN_TAG}{e}"), t.clone()))
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("invalid sentence: {0}")]
    Sentence(String),
    #[error("every token was discarded")]
    Empty,
    #[error("atom list has {atoms} entries for {tokens} tokens")]
    Length { atoms: usize, tokens: usize },
}

fn collect_spans(tree: &Tree, sentence: &AnnotatedSentence, out: &mut BTreeMap<Hyperedge, String>) {
    if let Tree::Node(v) = tree {
        let text: Vec<&str> = tree.tokens().iter().map(|&t| sentence.tokens[t].text.as_str()).collect();
        out.insert(tree.edge(), text.join(" "));
        v.iter().for_each(|t| collect_spans(t, sentence, out));
    }
}

/// β and role assignment over atoms already typed (one per token, `None` = discard).
pub fn parse_with_atoms(
    sentence: &AnnotatedSentence,
    atoms: &[Option<Atom>],
    table: &RoleTable,
) -> Result<Parse, ParseError> {
    sentence.validate().map_err(ParseError::Sentence)?;
    if atoms.len() != sentence.tokens.len() {
        return Err(ParseError::Length { atoms: atoms.len(), tokens: sentence.tokens.len() });
    }
    let seq = initial_sequence(atoms);
    if seq.is_empty() {
        return Err(ParseError::Empty);
    }
    let item = beta_transform(seq, sentence);
    let tree = assign_arg_roles(&item.tree, sentence, table);
    let mut lemma_edges = Vec::new();
    for (i, a) in atoms.iter().enumerate() {
        let Some(a) = a else { continue };
        let lemma = crate::alpha::atom_root(&sentence.tokens[i].lemma);
        if !sentence.tokens[i].lemma.is_empty() && lemma != a.root {
            let e = Hyperedge::Edge(vec![
                Hyperedge::atom("lemma", TypeCode::J),
                Hyperedge::Atom(a.clone()),
                Hyperedge::atom(lemma, a.code),
            ]);
            if !lemma_edges.contains(&e) {
                lemma_edges.push(e);
            }
        }
    }
    let mut spans = BTreeMap::new();
    collect_spans(&tree, sentence, &mut spans);
    Ok(Parse { edge: tree.edge(), tree, lemma_edges, spans, text: sentence.text.clone() })
}

/// The full pipeline: α classification, β folding, roles and lemma edges.
pub fn parse_sentence(
    sentence: &AnnotatedSentence,
    forest: &Forest,
    table: &RoleTable,
) -> Result<Parse, ParseError> {
    let atoms = classify_tokens(sentence, forest);
    parse_with_atoms(sentence, &atoms, table)
}
