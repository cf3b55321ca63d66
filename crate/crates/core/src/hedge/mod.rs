//! Hyperedges: atoms, nested edges, the type system and the text notation.
//!
//! ```
//! use shg::hedge::{Hyperedge, TypeCode};
//! let e: Hyperedge = "(is/P.sc berlin/C (very/M nice/C))".parse().unwrap();
//! assert_eq!(e.infer_type().unwrap(), TypeCode::R);
//! assert_eq!(e.to_string(), "(is/P.sc berlin/C (very/M nice/C))");
//! ```

mod notation;
mod types;

use std::fmt;
use std::str::FromStr;

pub use notation::{parse_atom, parse_notation, NotationError};
pub use types::TypeError;

/// Type codes. The first six can label atoms; `R` and `S` only arise by inference.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum TypeCode {
    C,
    P,
    M,
    B,
    T,
    J,
    R,
    S,
}

impl TypeCode {
    pub const ALL: [TypeCode; 8] = [
        TypeCode::C,
        TypeCode::P,
        TypeCode::M,
        TypeCode::B,
        TypeCode::T,
        TypeCode::J,
        TypeCode::R,
        TypeCode::S,
    ];

    pub fn as_char(self) -> char {
        match self {
            TypeCode::C => 'C',
            TypeCode::P => 'P',
            TypeCode::M => 'M',
            TypeCode::B => 'B',
            TypeCode::T => 'T',
            TypeCode::J => 'J',
            TypeCode::R => 'R',
            TypeCode::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<TypeCode> {
        Some(match c {
            'C' => TypeCode::C,
            'P' => TypeCode::P,
            'M' => TypeCode::M,
            'B' => TypeCode::B,
            'T' => TypeCode::T,
            'J' => TypeCode::J,
            'R' => TypeCode::R,
            'S' => TypeCode::S,
            _ => return None,
        })
    }

    /// Types that may sit in the first position of an edge.
    pub fn is_connector(self) -> bool {
        matches!(
            self,
            TypeCode::P | TypeCode::M | TypeCode::B | TypeCode::T | TypeCode::J
        )
    }

    /// Types an atom may carry directly.
    pub fn is_atomic(self) -> bool {
        !matches!(self, TypeCode::R | TypeCode::S)
    }
}

impl fmt::Display for TypeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Argument roles understood by predicates, in canonical order.
pub const PREDICATE_ROLES: &str = "spacoitjxr";
/// Argument roles understood by builders, in canonical order.
pub const BUILDER_ROLES: &str = "ma";

/// Position of a role letter in the canonical ordering (unknown letters sort last).
pub fn role_rank(c: char) -> usize {
    if let Some(i) = BUILDER_ROLES.find(c) {
        return i;
    }
    PREDICATE_ROLES.find(c).unwrap_or(PREDICATE_ROLES.len() + c as usize)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub root: String,
    pub code: TypeCode,
    pub roles: Option<String>,
    pub namespace: Option<String>,
}

impl Atom {
    pub fn new(root: impl Into<String>, code: TypeCode) -> Atom {
        Atom {
            root: root.into(),
            code,
            roles: None,
            namespace: None,
        }
    }

    pub fn with_roles(mut self, roles: impl Into<String>) -> Atom {
        let r = roles.into();
        self.roles = if r.is_empty() { None } else { Some(r) };
        self
    }

    /// Same atom with roles removed.
    pub fn without_roles(&self) -> Atom {
        Atom {
            roles: None,
            ..self.clone()
        }
    }

    pub fn roles_str(&self) -> &str {
        self.roles.as_deref().unwrap_or("")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.root, self.code)?;
        if let Some(r) = &self.roles {
            write!(f, ".{}", r)?;
        }
        if let Some(ns) = &self.namespace {
            write!(f, "/{}", ns)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hyperedge {
    Atom(Atom),
    Edge(Vec<Hyperedge>),
}

impl From<Atom> for Hyperedge {
    fn from(a: Atom) -> Self {
        Hyperedge::Atom(a)
    }
}

impl Hyperedge {
    pub fn atom(root: impl Into<String>, code: TypeCode) -> Hyperedge {
        Hyperedge::Atom(Atom::new(root, code))
    }

    /// Builds a non-atomic edge. A single element collapses to itself.
    pub fn edge(mut elements: Vec<Hyperedge>) -> Hyperedge {
        if elements.len() == 1 {
            return elements.pop().unwrap();
        }
        Hyperedge::Edge(elements)
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Hyperedge::Atom(_))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Hyperedge::Atom(a) => Some(a),
            Hyperedge::Edge(_) => None,
        }
    }

    /// Elements of a non-atomic edge; empty for atoms.
    pub fn elements(&self) -> &[Hyperedge] {
        match self {
            Hyperedge::Atom(_) => &[],
            Hyperedge::Edge(v) => v,
        }
    }

    pub fn connector(&self) -> Option<&Hyperedge> {
        self.elements().first()
    }

    pub fn args(&self) -> &[Hyperedge] {
        match self {
            Hyperedge::Atom(_) => &[],
            Hyperedge::Edge(v) => &v[1..],
        }
    }

    /// Number of elements: 1 for an atom.
    pub fn len(&self) -> usize {
        match self {
            Hyperedge::Atom(_) => 1,
            Hyperedge::Edge(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Atom count at all depths.
    pub fn size(&self) -> usize {
        match self {
            Hyperedge::Atom(_) => 1,
            Hyperedge::Edge(v) => v.iter().map(Hyperedge::size).sum(),
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Hyperedge::Atom(_) => 0,
            Hyperedge::Edge(v) => 1 + v.iter().map(Hyperedge::depth).max().unwrap_or(0),
        }
    }

    /// All atoms in left-to-right order, repeats included.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Hyperedge::Atom(a) => out.push(a),
            Hyperedge::Edge(v) => v.iter().for_each(|e| e.collect_atoms(out)),
        }
    }

    /// Pre-order walk over this edge and every sub-edge (atoms included).
    pub fn subedges(&self) -> Vec<&Hyperedge> {
        let mut out = Vec::new();
        self.collect_subedges(&mut out);
        out
    }

    fn collect_subedges<'a>(&'a self, out: &mut Vec<&'a Hyperedge>) {
        out.push(self);
        for e in self.elements() {
            e.collect_subedges(out);
        }
    }

    /// Pre-order walk yielding the path (element indices) of every sub-edge.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn walk(e: &Hyperedge, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(cur.clone());
            for (i, c) in e.elements().iter().enumerate() {
                cur.push(i);
                walk(c, cur, out);
                cur.pop();
            }
        }
        walk(self, &mut cur, &mut out);
        out
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Hyperedge> {
        let mut e = self;
        for &i in path {
            e = e.elements().get(i)?;
        }
        Some(e)
    }

    /// Copy with the sub-edge at `path` replaced.
    pub fn replace_at(&self, path: &[usize], with: Hyperedge) -> Hyperedge {
        match path.split_first() {
            None => with,
            Some((&i, rest)) => {
                let mut v = self.elements().to_vec();
                v[i] = v[i].replace_at(rest, with);
                Hyperedge::Edge(v)
            }
        }
    }

    /// True if `other` is one of this edge's immediate elements.
    pub fn contains(&self, other: &Hyperedge) -> bool {
        self.elements().iter().any(|e| e == other)
    }

    /// True if `other` occurs anywhere inside (or equals) this edge.
    pub fn contains_deep(&self, other: &Hyperedge) -> bool {
        self == other || self.elements().iter().any(|e| e.contains_deep(other))
    }

    /// Strips modifier wrappers until an atom is reached.
    pub fn innermost_atom(&self) -> Result<&Atom, TypeError> {
        match self {
            Hyperedge::Atom(a) => Ok(a),
            Hyperedge::Edge(v) => {
                if v.len() == 2 && v[0].infer_type().ok() == Some(TypeCode::M) {
                    v[1].innermost_atom()
                } else {
                    Err(TypeError::new(self, "not a modifier chain"))
                }
            }
        }
    }

    /// Roles declared by the connector (taken from its innermost atom).
    pub fn connector_roles(&self) -> Option<&str> {
        let c = self.connector()?;
        c.innermost_atom().ok().and_then(|a| a.roles.as_deref())
    }

    /// Role of the argument at position `i` (0-based over arguments).
    pub fn arg_role(&self, i: usize) -> Option<char> {
        self.connector_roles().and_then(|r| r.chars().nth(i))
    }

    /// Copy with roles on the innermost atom replaced (or removed when empty).
    pub fn with_innermost_roles(&self, roles: &str) -> Hyperedge {
        match self {
            Hyperedge::Atom(a) => Hyperedge::Atom(a.clone().with_roles(roles)),
            Hyperedge::Edge(v) => {
                if v.len() == 2 && v[0].infer_type().ok() == Some(TypeCode::M) {
                    Hyperedge::Edge(vec![v[0].clone(), v[1].with_innermost_roles(roles)])
                } else {
                    self.clone()
                }
            }
        }
    }

    /// Copy with roles removed from every atom.
    pub fn without_roles(&self) -> Hyperedge {
        match self {
            Hyperedge::Atom(a) => Hyperedge::Atom(a.without_roles()),
            Hyperedge::Edge(v) => Hyperedge::Edge(v.iter().map(|e| e.without_roles()).collect()),
        }
    }

    /// Copy with the connector's roles replaced.
    pub fn with_connector_roles(&self, roles: &str) -> Hyperedge {
        match self {
            Hyperedge::Atom(_) => self.clone(),
            Hyperedge::Edge(v) => {
                let mut v = v.clone();
                v[0] = v[0].with_innermost_roles(roles);
                Hyperedge::Edge(v)
            }
        }
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyperedge::Atom(a) => write!(f, "{}", a),
            Hyperedge::Edge(v) => {
                write!(f, "(")?;
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", e)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl FromStr for Hyperedge {
    type Err = NotationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_notation(s)
    }
}

impl serde::Serialize for Hyperedge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Hyperedge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_notation(&s).map_err(serde::de::Error::custom)
    }
}
