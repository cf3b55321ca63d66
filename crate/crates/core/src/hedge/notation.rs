use super::{Atom, Hyperedge, TypeCode, TypeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NotationError {
    #[error("empty input")]
    Empty,
    #[error("unbalanced parentheses at byte {0}")]
    Unbalanced(usize),
    #[error("empty edge at byte {0}")]
    EmptyEdge(usize),
    #[error("unexpected input after edge at byte {0}")]
    Trailing(usize),
    #[error("invalid atom '{token}': {reason}")]
    InvalidAtom { token: String, reason: String },
    #[error("connector position violation in {edge}: {reason}")]
    ConnectorPosition { edge: String, reason: String },
}

fn bad(token: &str, reason: &str) -> NotationError {
    NotationError::InvalidAtom {
        token: token.to_string(),
        reason: reason.to_string(),
    }
}

/// Parses a single atom token such as `is/P.sc` or `cambridge/C/1`.
pub fn parse_atom(token: &str) -> Result<Atom, NotationError> {
    if token.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
        return Err(bad(token, "whitespace or parenthesis in atom"));
    }
    let parts: Vec<&str> = token.split('/').collect();
    if parts.len() < 2 {
        return Err(bad(token, "missing type code"));
    }
    if parts.len() > 3 {
        return Err(bad(token, "too many '/' separators"));
    }
    let root = parts[0];
    if root.is_empty() {
        return Err(bad(token, "empty root"));
    }
    let mut chars = parts[1].chars();
    let code = chars
        .next()
        .and_then(TypeCode::from_char)
        .filter(|c| c.is_atomic())
        .ok_or_else(|| bad(token, "unknown type code"))?;
    let rest = chars.as_str();
    let roles = if rest.is_empty() {
        None
    } else {
        let r = rest
            .strip_prefix('.')
            .ok_or_else(|| bad(token, "type code must be a single letter"))?;
        if r.is_empty() {
            return Err(bad(token, "empty role string"));
        }
        match code {
            TypeCode::P => {
                if !r.chars().all(|c| c.is_ascii_lowercase() || c == '?') {
                    return Err(bad(token, "predicate roles must be lowercase letters or '?'"));
                }
            }
            TypeCode::B => {
                if !r.chars().all(|c| c == 'm' || c == 'a' || c == '?') {
                    return Err(bad(token, "builder roles must be 'm', 'a' or '?'"));
                }
            }
            _ => return Err(bad(token, "roles are only allowed on predicates and builders")),
        }
        Some(r.to_string())
    };
    let namespace = match parts.get(2) {
        Some(ns) if ns.is_empty() => return Err(bad(token, "empty namespace")),
        Some(ns) => Some(ns.to_string()),
        None => None,
    };
    Ok(Atom {
        root: root.to_string(),
        code,
        roles,
        namespace,
    })
}

#[derive(Debug)]
enum Tok<'a> {
    Open(usize),
    Close(usize),
    Word(usize, &'a str),
}

fn tokenize(s: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in s.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push(Tok::Word(st, &s[st..i]));
            }
            if c == '(' {
                out.push(Tok::Open(i));
            } else if c == ')' {
                out.push(Tok::Close(i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push(Tok::Word(st, &s[st..]));
    }
    out
}

/// Parses hyperedge notation. A parenthesised single element denotes that element.
pub fn parse_notation(s: &str) -> Result<Hyperedge, NotationError> {
    let toks = tokenize(s);
    if toks.is_empty() {
        return Err(NotationError::Empty);
    }
    let mut pos = 0;
    let e = parse_tok(&toks, &mut pos, s.len())?;
    if pos < toks.len() {
        let at = match toks[pos] {
            Tok::Open(i) | Tok::Close(i) | Tok::Word(i, _) => i,
        };
        return Err(match toks[pos] {
            Tok::Close(_) => NotationError::Unbalanced(at),
            _ => NotationError::Trailing(at),
        });
    }
    Ok(e)
}

fn parse_tok(toks: &[Tok], pos: &mut usize, end: usize) -> Result<Hyperedge, NotationError> {
    match toks.get(*pos) {
        None => Err(NotationError::Unbalanced(end)),
        Some(Tok::Close(i)) => Err(NotationError::Unbalanced(*i)),
        Some(Tok::Word(_, w)) => {
            *pos += 1;
            Ok(Hyperedge::Atom(parse_atom(w)?))
        }
        Some(Tok::Open(i)) => {
            let open = *i;
            *pos += 1;
            let mut elems = Vec::new();
            loop {
                match toks.get(*pos) {
                    None => return Err(NotationError::Unbalanced(open)),
                    Some(Tok::Close(_)) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => elems.push(parse_tok(toks, pos, end)?),
                }
            }
            match elems.len() {
                0 => Err(NotationError::EmptyEdge(open)),
                1 => Ok(elems.pop().unwrap()),
                _ => {
                    let edge = Hyperedge::Edge(elems);
                    check_connector(&edge)?;
                    Ok(edge)
                }
            }
        }
    }
}

fn check_connector(edge: &Hyperedge) -> Result<(), NotationError> {
    let conn = &edge.elements()[0];
    let t = match conn {
        Hyperedge::Atom(a) => Ok(a.code),
        Hyperedge::Edge(_) => conn.infer_type(),
    };
    match t {
        Ok(t) if t.is_connector() => Ok(()),
        Ok(t) => Err(NotationError::ConnectorPosition {
            edge: edge.to_string(),
            reason: format!("first element has type {}", t),
        }),
        Err(TypeError { reason, .. }) => Err(NotationError::ConnectorPosition {
            edge: edge.to_string(),
            reason,
        }),
    }
}
