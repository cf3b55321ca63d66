use std::fmt;
use std::str::FromStr;

use super::matcher::{match_pattern, match_with, Binding, Value};
use super::syntax::{parse_pattern, AtomPattern, Pattern, PatternError, RoleSpec, RootSpec};
use crate::hedge::{Atom, Hyperedge, TypeCode};
use crate::store::Store;

/// Source of edges for auxiliary patterns.
pub trait EdgeCollection {
    /// Edges worth trying against `pattern` given what is already bound.
    fn candidates(&self, pattern: &Pattern, binding: &Binding) -> Vec<Hyperedge>;
}

impl EdgeCollection for [Hyperedge] {
    fn candidates(&self, _: &Pattern, _: &Binding) -> Vec<Hyperedge> {
        self.to_vec()
    }
}

impl EdgeCollection for Vec<Hyperedge> {
    fn candidates(&self, _: &Pattern, _: &Binding) -> Vec<Hyperedge> {
        self.clone()
    }
}

impl EdgeCollection for Store {
    fn candidates(&self, pattern: &Pattern, binding: &Binding) -> Vec<Hyperedge> {
        // Lemma constraints over a bound word are answered from the lemma index.
        if let Pattern::Edge(v) = pattern {
            let is_lemma = matches!(v[0].as_atom(), Some(AtomPattern { root: RootSpec::Literal(r), .. }) if r.len() == 1 && r[0] == "lemma");
            if is_lemma && v.len() == 3 {
                if let Some(AtomPattern {
                    root: RootSpec::Var(n),
                    ..
                }) = v[1].as_atom()
                {
                    if let Some(e) = binding.edge(n) {
                        return match e.innermost_atom() {
                            Ok(a) => self.lemma_edges(a),
                            Err(_) => Vec::new(),
                        };
                    }
                }
            }
        }
        self.edges().cloned().collect()
    }
}

/// A primary pattern plus auxiliary patterns that must match some edge of a collection.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Query {
    pub main: Pattern,
    pub aux: Vec<Pattern>,
}

impl Query {
    pub fn new(main: Pattern) -> Query {
        Query {
            main,
            aux: Vec::new(),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut v = self.main.variables();
        for a in &self.aux {
            for n in a.variables() {
                if !v.contains(&n) {
                    v.push(n);
                }
            }
        }
        v
    }

    /// Bindings for `edge` satisfying the main pattern and every auxiliary one.
    pub fn matches(&self, edge: &Hyperedge, coll: &(impl EdgeCollection + ?Sized)) -> Vec<Binding> {
        match_all(edge, std::slice::from_ref(&self.main), &self.aux, coll)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.main)?;
        for a in &self.aux {
            write!(f, " & {}", a)?;
        }
        Ok(())
    }
}

fn split_top_level(s: &str, sep: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur: Vec<&str> = Vec::new();
    for tok in s.split_whitespace() {
        if depth == 0 && tok == sep {
            parts.push(cur.join(" "));
            cur.clear();
            continue;
        }
        depth += tok.matches('(').count() as i32 - tok.matches(')').count() as i32;
        cur.push(tok);
    }
    parts.push(cur.join(" "));
    parts
}

impl FromStr for Query {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = split_top_level(s, "&").into_iter();
        let main = parse_pattern(&parts.next().unwrap_or_default())?;
        let aux = parts.map(|p| parse_pattern(&p)).collect::<Result<_, _>>()?;
        Ok(Query { main, aux })
    }
}

impl serde::Serialize for Query {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Query {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Joint bindings: every `patterns` entry matches `edge`, and every `aux`
/// entry matches some edge supplied by `coll`.
pub fn match_all(
    edge: &Hyperedge,
    patterns: &[Pattern],
    aux: &[Pattern],
    coll: &(impl EdgeCollection + ?Sized),
) -> Vec<Binding> {
    let mut current = vec![Binding::new()];
    for p in patterns {
        let mut next = Vec::new();
        for b in &current {
            for nb in match_with(edge, p, b) {
                if !next.contains(&nb) {
                    next.push(nb);
                }
            }
        }
        current = next;
    }
    for p in aux {
        let mut next = Vec::new();
        for b in &current {
            for cand in coll.candidates(p, b) {
                for nb in match_with(&cand, p, b) {
                    if !next.contains(&nb) {
                        next.push(nb);
                    }
                }
            }
        }
        current = next;
    }
    current
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: variable {var} on the right side is not bound on the left")]
    UnboundVariable { line: usize, var: String },
    #[error("cannot build an edge from '{0}'")]
    Instantiate(String),
}

/// `lhs |- rhs`: every match of `lhs` yields `rhs` with variables replaced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Query,
    pub rhs: Pattern,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

impl Rule {
    pub fn parse(s: &str) -> Result<Rule, RuleError> {
        parse_rule_line(s, 1)
    }
}

fn parse_rule_line(s: &str, line: usize) -> Result<Rule, RuleError> {
    let (l, r) = s.split_once("|-").ok_or_else(|| RuleError::Syntax {
        line,
        message: "expected 'lhs |- rhs'".into(),
    })?;
    let syn = |e: PatternError| RuleError::Syntax {
        line,
        message: e.0,
    };
    let lhs: Query = l.trim().parse().map_err(syn)?;
    let rhs = parse_pattern(r.trim()).map_err(syn)?;
    let bound = lhs.variables();
    for v in rhs.variables() {
        if !bound.contains(&v) {
            return Err(RuleError::UnboundVariable { line, var: v });
        }
    }
    if has_anonymous(&rhs) {
        return Err(RuleError::Syntax {
            line,
            message: "right side cannot contain wildcards or anonymous sequences".into(),
        });
    }
    Ok(Rule { lhs, rhs })
}

fn has_anonymous(p: &Pattern) -> bool {
    match p {
        Pattern::Atom(a) => a.root == RootSpec::Any,
        Pattern::Seq(None) => true,
        Pattern::NonAtomic { var: None, .. } => true,
        Pattern::Edge(v) => v.iter().any(has_anonymous),
        _ => false,
    }
}

/// Parses a rule file: one rule per line, `#` starts a comment line.
pub fn parse_rules(text: &str) -> Result<Vec<Rule>, RuleError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_rule_line(l, i + 1))
        .collect()
}

/// Applies a rule to every sub-edge of `edge`; one output per binding per matching sub-edge.
pub fn apply_rule(edge: &Hyperedge, rule: &Rule) -> Result<Vec<Hyperedge>, RuleError> {
    apply_rule_with(edge, rule, &Vec::<Hyperedge>::new())
}

pub fn apply_rule_with(
    edge: &Hyperedge,
    rule: &Rule,
    coll: &(impl EdgeCollection + ?Sized),
) -> Result<Vec<Hyperedge>, RuleError> {
    let mut out = Vec::new();
    for sub in edge.subedges() {
        let bindings = if rule.lhs.aux.is_empty() {
            match_pattern(sub, &rule.lhs.main)
        } else {
            rule.lhs.matches(sub, coll)
        };
        for b in bindings {
            out.push(instantiate(&rule.rhs, &b)?);
        }
    }
    Ok(out)
}

/// Builds an edge from a pattern whose variables are all bound.
///
/// A bound connector variable carrying a role spec gets its roles rebuilt
/// from the arguments that follow it: single-letter groups win, otherwise the
/// role the value had where it was matched.
pub fn instantiate(p: &Pattern, b: &Binding) -> Result<Hyperedge, RuleError> {
    let fail = || RuleError::Instantiate(p.to_string());
    match p {
        Pattern::Atom(ap) => match &ap.root {
            RootSpec::Var(n) => b.edge(n).cloned().ok_or_else(fail),
            RootSpec::Literal(r) if r.len() == 1 => {
                let code = match &ap.types {
                    Some(t) if t.len() == 1 && t[0].is_atomic() => t[0],
                    _ => return Err(fail()),
                };
                let mut a = Atom::new(r[0].clone(), code);
                if let Some(spec) = &ap.roles {
                    if spec.groups.iter().all(|g| g.len() == 1) && spec.ordered {
                        a = a.with_roles(spec.groups.iter().map(|g| g[0]).collect::<String>());
                    }
                }
                a.namespace = ap.namespace.clone();
                Ok(Hyperedge::Atom(a))
            }
            _ => Err(fail()),
        },
        Pattern::NonAtomic { var: Some(n), .. } => b.edge(n).cloned().ok_or_else(fail),
        Pattern::Edge(v) => {
            let mut elems = Vec::new();
            let mut roles: Vec<char> = Vec::new();
            let spec: Option<&RoleSpec> = v[0].as_atom().and_then(|a| a.roles.as_ref());
            for (i, q) in v.iter().enumerate() {
                if let Pattern::Seq(Some(n)) = q {
                    match b.get(n) {
                        Some(Value::Many(es)) => {
                            let rs = b.roles(n);
                            for (j, e) in es.iter().enumerate() {
                                elems.push(e.clone());
                                roles.push(rs.get(j).copied().flatten().unwrap_or('?'));
                            }
                        }
                        _ => return Err(fail()),
                    }
                    continue;
                }
                elems.push(instantiate(q, b)?);
                if i > 0 {
                    let group = spec.and_then(|s| s.groups.get(i - 1));
                    let r = match (group, q) {
                        (Some(g), _) if g.len() == 1 => g[0],
                        (_, Pattern::Atom(AtomPattern { root: RootSpec::Var(n), .. }))
                        | (_, Pattern::NonAtomic { var: Some(n), .. }) => {
                            b.roles(n).first().copied().flatten().unwrap_or('?')
                        }
                        _ => '?',
                    };
                    roles.push(r);
                }
            }
            let var_conn = matches!(v[0].as_atom(), Some(AtomPattern { root: RootSpec::Var(_), .. }));
            if var_conn && spec.is_some() {
                let rs: String = roles.into_iter().collect();
                elems[0] = elems[0].with_innermost_roles(&rs);
            }
            let e = Hyperedge::edge(elems);
            if let Ok(t) = e.connector().map(|c| c.infer_type()).transpose() {
                if t.map(|t| t == TypeCode::C).unwrap_or(false) {
                    return Err(fail());
                }
            }
            Ok(e)
        }
        _ => Err(fail()),
    }
}
