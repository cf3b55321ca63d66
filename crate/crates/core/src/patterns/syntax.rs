use std::fmt;
use std::str::FromStr;

use crate::hedge::{Atom, Hyperedge, TypeCode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("pattern syntax error: {0}")]
pub struct PatternError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, PatternError> {
    Err(PatternError(msg.into()))
}

/// Role constraint attached to an atom pattern, e.g. `sc`, `{sc}`, `{[sp][cora]x}-oc`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RoleSpec {
    pub ordered: bool,
    /// One group per argument; a group lists acceptable role letters.
    pub groups: Vec<Vec<char>>,
    pub forbidden: Vec<char>,
}

impl RoleSpec {
    /// Ordered spec requiring exactly these roles.
    pub fn exact(roles: &str) -> RoleSpec {
        RoleSpec {
            ordered: true,
            groups: roles.chars().map(|c| vec![c]).collect(),
            forbidden: Vec::new(),
        }
    }

    pub fn parse(s: &str) -> Result<RoleSpec, PatternError> {
        let (body, forbidden) = match s.find('-') {
            Some(i) => (&s[..i], &s[i + 1..]),
            None => (s, ""),
        };
        let (ordered, inner) = match body.strip_prefix('{') {
            Some(rest) => match rest.strip_suffix('}') {
                Some(inner) => (false, inner),
                None => return err(format!("unclosed '{{' in roles '{}'", s)),
            },
            None => (true, body),
        };
        let mut groups = Vec::new();
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            match c {
                ',' => {}
                '[' => {
                    let mut g = Vec::new();
                    loop {
                        match chars.next() {
                            Some(']') => break,
                            Some(c) if c.is_ascii_lowercase() || c == '?' => g.push(c),
                            _ => return err(format!("bad role group in '{}'", s)),
                        }
                    }
                    if g.is_empty() {
                        return err(format!("empty role group in '{}'", s));
                    }
                    groups.push(g);
                }
                c if c.is_ascii_lowercase() || c == '?' => groups.push(vec![c]),
                _ => return err(format!("bad role character '{}' in '{}'", c, s)),
            }
        }
        if !forbidden.chars().all(|c| c.is_ascii_lowercase() || c == '?') {
            return err(format!("bad forbidden roles in '{}'", s));
        }
        Ok(RoleSpec {
            ordered,
            groups,
            forbidden: forbidden.chars().collect(),
        })
    }

    /// Same constraint with role letters in canonical order, used to compare specs.
    pub fn normalized(&self) -> RoleSpec {
        let mut r = self.clone();
        for g in &mut r.groups {
            g.sort_by_key(|c| crate::hedge::role_rank(*c));
            g.dedup();
        }
        if !r.ordered {
            r.groups.sort_by_key(|g| {
                g.iter()
                    .map(|c| crate::hedge::role_rank(*c))
                    .collect::<Vec<_>>()
            });
        }
        r.forbidden.sort_by_key(|c| crate::hedge::role_rank(*c));
        r.forbidden.dedup();
        r
    }
}

impl fmt::Display for RoleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.ordered {
            write!(f, "{{")?;
        }
        for g in &self.groups {
            if g.len() == 1 {
                write!(f, "{}", g[0])?;
            } else {
                write!(f, "[{}]", g.iter().collect::<String>())?;
            }
        }
        if !self.ordered {
            write!(f, "}}")?;
        }
        if !self.forbidden.is_empty() {
            write!(f, "-{}", self.forbidden.iter().collect::<String>())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootSpec {
    /// `*`
    Any,
    /// All-uppercase name.
    Var(String),
    /// One root or a bracketed list of alternatives.
    Literal(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomPattern {
    pub root: RootSpec,
    /// Accepted types; `None` accepts any.
    pub types: Option<Vec<TypeCode>>,
    pub roles: Option<RoleSpec>,
    pub namespace: Option<String>,
    /// `>` prefix: strip modifiers and test the innermost atom.
    pub nest_skip: bool,
}

impl AtomPattern {
    pub fn wildcard(types: Option<Vec<TypeCode>>) -> AtomPattern {
        AtomPattern {
            root: RootSpec::Any,
            types,
            roles: None,
            namespace: None,
            nest_skip: false,
        }
    }

    pub fn var(name: &str, types: Option<Vec<TypeCode>>) -> AtomPattern {
        AtomPattern {
            root: RootSpec::Var(name.to_string()),
            ..AtomPattern::wildcard(types)
        }
    }

    /// Pattern matching exactly this atom.
    pub fn literal(a: &Atom) -> AtomPattern {
        AtomPattern {
            root: RootSpec::Literal(vec![a.root.clone()]),
            types: Some(vec![a.code]),
            roles: a.roles.as_deref().map(RoleSpec::exact),
            namespace: a.namespace.clone(),
            nest_skip: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Atom(AtomPattern),
    Edge(Vec<Pattern>),
    /// `...` or `NAME...`: zero or more arguments.
    Seq(Option<String>),
    /// `(NAME/T...)`: any non-atomic edge of the given types.
    NonAtomic {
        var: Option<String>,
        types: Option<Vec<TypeCode>>,
    },
}

pub fn is_var_name(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(x) if x.is_ascii_uppercase())
        && c.all(|x| x.is_ascii_uppercase() || x.is_ascii_digit() || x == '_')
}

fn parse_types(s: &str) -> Result<Option<Vec<TypeCode>>, PatternError> {
    if s == "*" {
        return Ok(None);
    }
    let inner = match s.strip_prefix('[') {
        Some(r) => r
            .strip_suffix(']')
            .ok_or_else(|| PatternError(format!("unclosed type list '{}'", s)))?,
        None => s,
    };
    if inner.is_empty() {
        return err("empty type");
    }
    let mut v = Vec::new();
    for c in inner.chars() {
        match TypeCode::from_char(c) {
            Some(t) => v.push(t),
            None => return err(format!("unknown type code '{}'", c)),
        }
    }
    if !s.starts_with('[') && v.len() != 1 {
        return err(format!("type '{}' must be a single code or a [list]", s));
    }
    Ok(Some(v))
}

enum Token {
    Atom(AtomPattern),
    Seq(Option<String>),
    TypedSeq(String, Option<Vec<TypeCode>>),
}

fn parse_token(tok: &str) -> Result<Token, PatternError> {
    let (nest_skip, tok) = match tok.strip_prefix('>') {
        Some(t) => (true, t),
        None => (false, tok),
    };
    if let Some(prefix) = tok.strip_suffix("...") {
        if nest_skip {
            return err("'>' cannot prefix a sequence");
        }
        if prefix.is_empty() {
            return Ok(Token::Seq(None));
        }
        let (name, types) = match prefix.split_once('/') {
            Some((n, t)) => (n, Some(parse_types(t)?)),
            None => (prefix, None),
        };
        if !is_var_name(name) {
            return err(format!("sequence name '{}' must be uppercase", name));
        }
        return Ok(match types {
            None => Token::Seq(Some(name.to_string())),
            Some(t) => Token::TypedSeq(name.to_string(), t),
        });
    }
    let (root_str, rest) = if tok.starts_with('[') {
        let close = tok
            .find(']')
            .ok_or_else(|| PatternError(format!("unclosed '[' in '{}'", tok)))?;
        (&tok[..=close], &tok[close + 1..])
    } else {
        match tok.find('/') {
            Some(i) => (&tok[..i], &tok[i..]),
            None => (tok, ""),
        }
    };
    let root = if root_str == "*" {
        RootSpec::Any
    } else if let Some(inner) = root_str.strip_prefix('[') {
        let alts: Vec<String> = inner[..inner.len() - 1]
            .split(',')
            .map(str::to_string)
            .collect();
        if alts.iter().any(String::is_empty) {
            return err(format!("empty alternative in '{}'", tok));
        }
        RootSpec::Literal(alts)
    } else if is_var_name(root_str) {
        RootSpec::Var(root_str.to_string())
    } else if root_str.is_empty() {
        return err(format!("empty root in '{}'", tok));
    } else {
        RootSpec::Literal(vec![root_str.to_string()])
    };
    let mut ap = AtomPattern {
        root,
        types: None,
        roles: None,
        namespace: None,
        nest_skip,
    };
    if rest.is_empty() {
        return Ok(Token::Atom(ap));
    }
    let rest = rest
        .strip_prefix('/')
        .ok_or_else(|| PatternError(format!("expected '/' in '{}'", tok)))?;
    let (type_roles, ns) = match rest.find('/') {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let (ty, roles) = if type_roles.starts_with('[') {
        let close = type_roles
            .find(']')
            .ok_or_else(|| PatternError(format!("unclosed type list in '{}'", tok)))?;
        let after = &type_roles[close + 1..];
        match after.strip_prefix('.') {
            Some(r) => (&type_roles[..=close], Some(r)),
            None if after.is_empty() => (type_roles, None),
            None => return err(format!("unexpected '{}' in '{}'", after, tok)),
        }
    } else {
        match type_roles.split_once('.') {
            Some((t, r)) => (t, Some(r)),
            None => (type_roles, None),
        }
    };
    ap.types = parse_types(ty)?;
    if let Some(r) = roles {
        if r.is_empty() {
            return err(format!("empty roles in '{}'", tok));
        }
        ap.roles = Some(RoleSpec::parse(r)?);
    }
    if let Some(ns) = ns {
        if ns.is_empty() {
            return err(format!("empty namespace in '{}'", tok));
        }
        ap.namespace = Some(ns.to_string());
    }
    Ok(Token::Atom(ap))
}

enum Lex<'a> {
    Open,
    Close,
    Word(&'a str),
}

fn lex(s: &str) -> Vec<Lex<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push(Lex::Word(&s[st..i]));
            }
            match c {
                '(' => out.push(Lex::Open),
                ')' => out.push(Lex::Close),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push(Lex::Word(&s[st..]));
    }
    out
}

/// Parses pattern text.
pub fn parse_pattern(s: &str) -> Result<Pattern, PatternError> {
    let toks = lex(s);
    if toks.is_empty() {
        return err("empty pattern");
    }
    let mut pos = 0;
    let p = parse_lex(&toks, &mut pos)?;
    if pos != toks.len() {
        return err(format!("unexpected input after pattern in '{}'", s));
    }
    if matches!(p, Pattern::Seq(_)) {
        return err("a sequence cannot stand alone");
    }
    Ok(p)
}

fn parse_lex(toks: &[Lex], pos: &mut usize) -> Result<Pattern, PatternError> {
    match toks.get(*pos) {
        None => err("unbalanced parentheses"),
        Some(Lex::Close) => err("unexpected ')'"),
        Some(Lex::Word(w)) => {
            *pos += 1;
            match parse_token(w)? {
                Token::Atom(a) => Ok(Pattern::Atom(a)),
                Token::Seq(n) => Ok(Pattern::Seq(n)),
                Token::TypedSeq(..) => err(format!("'{}' is only valid as '({})'", w, w)),
            }
        }
        Some(Lex::Open) => {
            *pos += 1;
            if let (Some(Lex::Word(w)), Some(Lex::Close)) = (toks.get(*pos), toks.get(*pos + 1)) {
                if let Token::TypedSeq(name, types) = parse_token(w)? {
                    *pos += 2;
                    return Ok(Pattern::NonAtomic {
                        var: Some(name),
                        types,
                    });
                }
            }
            let mut elems = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return err("unbalanced parentheses"),
                    Some(Lex::Close) => {
                        *pos += 1;
                        break;
                    }
                    _ => elems.push(parse_lex(toks, pos)?),
                }
            }
            if elems.is_empty() {
                return err("empty edge pattern");
            }
            if elems.len() == 1 {
                return Ok(elems.pop().unwrap());
            }
            if matches!(elems[0], Pattern::Seq(_)) {
                return err("a sequence cannot be a connector");
            }
            Ok(Pattern::Edge(elems))
        }
    }
}

impl FromStr for Pattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_pattern(s)
    }
}

fn fmt_types(f: &mut fmt::Formatter<'_>, types: &Option<Vec<TypeCode>>) -> fmt::Result {
    match types {
        None => write!(f, "*"),
        Some(v) if v.len() == 1 => write!(f, "{}", v[0]),
        Some(v) => write!(f, "[{}]", v.iter().map(|t| t.as_char()).collect::<String>()),
    }
}

impl fmt::Display for AtomPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nest_skip {
            write!(f, ">")?;
        }
        match &self.root {
            RootSpec::Any => write!(f, "*")?,
            RootSpec::Var(n) => write!(f, "{}", n)?,
            RootSpec::Literal(v) if v.len() == 1 => write!(f, "{}", v[0])?,
            RootSpec::Literal(v) => write!(f, "[{}]", v.join(","))?,
        }
        let bare = self.types.is_none() && self.roles.is_none() && self.namespace.is_none();
        if bare {
            return Ok(());
        }
        write!(f, "/")?;
        fmt_types(f, &self.types)?;
        if let Some(r) = &self.roles {
            write!(f, ".{}", r)?;
        }
        if let Some(ns) = &self.namespace {
            write!(f, "/{}", ns)?;
        }
        Ok(())
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Atom(a) => write!(f, "{}", a),
            Pattern::Seq(None) => write!(f, "..."),
            Pattern::Seq(Some(n)) => write!(f, "{}...", n),
            Pattern::NonAtomic { var, types } => {
                write!(f, "({}/", var.as_deref().unwrap_or("*"))?;
                fmt_types(f, types)?;
                write!(f, "...)")
            }
            Pattern::Edge(v) => {
                write!(f, "(")?;
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", p)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Pattern {
    /// Pattern matching exactly this edge.
    pub fn from_edge(e: &Hyperedge) -> Pattern {
        match e {
            Hyperedge::Atom(a) => Pattern::Atom(AtomPattern::literal(a)),
            Hyperedge::Edge(v) => Pattern::Edge(v.iter().map(Pattern::from_edge).collect()),
        }
    }

    /// Variable names in order of first appearance.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        let name = match self {
            Pattern::Atom(AtomPattern {
                root: RootSpec::Var(n),
                ..
            }) => Some(n),
            Pattern::Seq(Some(n)) => Some(n),
            Pattern::NonAtomic { var: Some(n), .. } => Some(n),
            Pattern::Edge(v) => {
                v.iter().for_each(|p| p.collect_vars(out));
                None
            }
            _ => None,
        };
        if let Some(n) = name {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
    }

    /// Same pattern with role specs and type lists in canonical order.
    pub fn normalized(&self) -> Pattern {
        match self {
            Pattern::Atom(a) => {
                let mut a = a.clone();
                a.roles = a.roles.map(|r| r.normalized());
                if let Some(t) = &mut a.types {
                    t.sort();
                    t.dedup();
                }
                if let RootSpec::Literal(v) = &mut a.root {
                    v.sort();
                    v.dedup();
                }
                Pattern::Atom(a)
            }
            Pattern::Edge(v) => Pattern::Edge(v.iter().map(Pattern::normalized).collect()),
            other => other.clone(),
        }
    }

    pub fn as_atom(&self) -> Option<&AtomPattern> {
        match self {
            Pattern::Atom(a) => Some(a),
            _ => None,
        }
    }
}

impl serde::Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_pattern(&s).map_err(serde::de::Error::custom)
    }
}
