use super::{Hyperedge, TypeCode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("type error in {edge}: {reason}")]
pub struct TypeError {
    pub edge: String,
    pub reason: String,
}

impl TypeError {
    pub(crate) fn new(edge: &Hyperedge, reason: impl Into<String>) -> TypeError {
        TypeError {
            edge: edge.to_string(),
            reason: reason.into(),
        }
    }
}

impl Hyperedge {
    /// Type of an atom is its code; non-atomic types follow from the connector.
    ///
    /// | pattern | type |
    /// |---|---|
    /// | `(M x)` | type of x |
    /// | `(B C C+)` | C |
    /// | `(T [CR])` | S |
    /// | `(P [CRS]+)` | R |
    /// | `(J x y+)` | type of x |
    pub fn infer_type(&self) -> Result<TypeCode, TypeError> {
        let v = match self {
            Hyperedge::Atom(a) => return Ok(a.code),
            Hyperedge::Edge(v) => v,
        };
        let ct = v[0].infer_type()?;
        let args = &v[1..];
        let arg_types = args
            .iter()
            .map(Hyperedge::infer_type)
            .collect::<Result<Vec<_>, _>>()?;
        match ct {
            TypeCode::M => {
                if args.len() != 1 {
                    return Err(TypeError::new(self, "modifier takes exactly one argument"));
                }
                Ok(arg_types[0])
            }
            TypeCode::B => {
                if args.len() < 2 {
                    return Err(TypeError::new(self, "builder needs at least two concepts"));
                }
                if arg_types.iter().any(|t| *t != TypeCode::C) {
                    return Err(TypeError::new(self, "builder arguments must be concepts"));
                }
                if let Some(r) = self.connector_roles() {
                    if r.chars().count() != args.len() {
                        return Err(TypeError::new(self, "builder roles must cover every argument"));
                    }
                    if !r.contains('m') {
                        return Err(TypeError::new(self, "builder roles need a main argument"));
                    }
                }
                Ok(TypeCode::C)
            }
            TypeCode::T => {
                if args.len() != 1 {
                    return Err(TypeError::new(self, "trigger takes exactly one argument"));
                }
                match arg_types[0] {
                    TypeCode::C | TypeCode::R => Ok(TypeCode::S),
                    t => Err(TypeError::new(self, format!("trigger argument of type {}", t))),
                }
            }
            TypeCode::P => {
                if let Some(t) = arg_types
                    .iter()
                    .find(|t| !matches!(t, TypeCode::C | TypeCode::R | TypeCode::S))
                {
                    return Err(TypeError::new(self, format!("predicate argument of type {}", t)));
                }
                Ok(TypeCode::R)
            }
            TypeCode::J => {
                if args.len() < 2 {
                    return Err(TypeError::new(self, "conjunction needs at least two arguments"));
                }
                Ok(arg_types[0])
            }
            t => Err(TypeError::new(self, format!("type {} in connector position", t))),
        }
    }

    /// Checks every sub-edge for type consistency.
    pub fn is_well_formed(&self) -> bool {
        self.infer_type().is_ok()
    }

    /// The main argument of a concept built with a modifier or a builder.
    ///
    /// Builders with roles use the single `m` argument; builders without roles
    /// other than `+` use their first argument.
    pub fn main_concept(&self) -> Result<&Hyperedge, TypeError> {
        let v = match self {
            Hyperedge::Atom(_) => return Err(TypeError::new(self, "atoms have no main concept")),
            Hyperedge::Edge(v) => v,
        };
        if self.infer_type()? != TypeCode::C {
            return Err(TypeError::new(self, "not a concept"));
        }
        match v[0].infer_type()? {
            TypeCode::M => Ok(&v[1]),
            TypeCode::B => match self.connector_roles() {
                Some(r) => {
                    let ms: Vec<usize> = r
                        .chars()
                        .enumerate()
                        .filter(|(_, c)| *c == 'm')
                        .map(|(i, _)| i)
                        .collect();
                    if ms.len() == 1 {
                        Ok(&v[1 + ms[0]])
                    } else {
                        Err(TypeError::new(self, "ambiguous main concept"))
                    }
                }
                None => {
                    let plus = v[0].as_atom().map(|a| a.root == "+").unwrap_or(false);
                    if plus {
                        Err(TypeError::new(self, "ambiguous main concept"))
                    } else {
                        Ok(&v[1])
                    }
                }
            },
            _ => Err(TypeError::new(self, "concept has no main argument")),
        }
    }
}
