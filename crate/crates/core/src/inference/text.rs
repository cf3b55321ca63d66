//! Turning edges back into readable word sequences.

use crate::hedge::{Hyperedge, TypeCode};
use crate::store::Store;

/// Text for an edge: a recorded span if the store has one, otherwise the atom
/// roots laid out in surface order (builders and conjunctions infix, subjects
/// before their predicate).
pub fn render_text(e: &Hyperedge, store: Option<&Store>) -> String {
    if let Some(s) = store.and_then(|s| s.label(e)) {
        return s.to_string();
    }
    let v = match e {
        Hyperedge::Atom(a) => return a.root.clone(),
        Hyperedge::Edge(v) => v,
    };
    let r = |x: &Hyperedge| render_text(x, store);
    let conn = &v[0];
    let args = &v[1..];
    let root = conn.as_atom().map(|a| a.root.as_str());
    let words: Vec<String> = match conn.infer_type() {
        Ok(TypeCode::B) | Ok(TypeCode::J) if matches!(root, Some("+") | Some(":")) => {
            args.iter().map(r).collect()
        }
        Ok(TypeCode::J) if root == Some(",") => {
            let parts: Vec<String> = args.iter().map(r).collect();
            return parts.join(", ");
        }
        Ok(TypeCode::B) | Ok(TypeCode::J) => {
            let c = r(conn);
            let mut out = vec![r(&args[0])];
            for a in &args[1..] {
                out.push(c.clone());
                out.push(r(a));
            }
            out
        }
        Ok(TypeCode::P) => {
            let roles: Vec<char> = e.connector_roles().unwrap_or("").chars().collect();
            let is_subj = |i: usize| match roles.get(i) {
                Some(c) => *c == 's' || *c == 'p',
                None => roles.is_empty() && i == 0,
            };
            let mut out: Vec<String> = (0..args.len()).filter(|i| is_subj(*i)).map(|i| r(&args[i])).collect();
            out.push(r(conn));
            out.extend((0..args.len()).filter(|i| !is_subj(*i)).map(|i| r(&args[i])));
            out
        }
        _ => v.iter().map(r).collect(),
    };
    words
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}
