use std::collections::BTreeMap;

use super::syntax::{AtomPattern, Pattern, RoleSpec, RootSpec};
use crate::hedge::{Hyperedge, TypeCode};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    One(Hyperedge),
    Many(Vec<Hyperedge>),
}

impl Value {
    pub fn edges(&self) -> Vec<Hyperedge> {
        match self {
            Value::One(e) => vec![e.clone()],
            Value::Many(v) => v.clone(),
        }
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::One(e) => write!(f, "{}", e),
            Value::Many(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "[{}]", parts.join(" "))
            }
        }
    }
}

/// Variable assignments produced by a match. Equality looks at values only;
/// the argument roles each value had in the matched edge ride along.
#[derive(Clone, Debug, Default)]
pub struct Binding {
    values: BTreeMap<String, Value>,
    roles: BTreeMap<String, Vec<Option<char>>>,
}

impl PartialEq for Binding {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl Eq for Binding {}

impl Binding {
    pub fn new() -> Binding {
        Binding::default()
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    /// Value of a single-edge variable.
    pub fn edge(&self, name: &str) -> Option<&Hyperedge> {
        match self.values.get(name) {
            Some(Value::One(e)) => Some(e),
            _ => None,
        }
    }

    /// Roles the bound edges had as arguments of the matched edge.
    pub fn roles(&self, name: &str) -> &[Option<char>] {
        self.roles.get(name).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn insert(&mut self, name: &str, value: Value) {
        self.values.insert(name.to_string(), value);
    }

    /// Merges two bindings when they agree on shared variables.
    pub fn join(&self, other: &Binding) -> Option<Binding> {
        let mut out = self.clone();
        for (k, v) in &other.values {
            match out.values.get(k) {
                Some(x) if x != v => return None,
                Some(_) => {}
                None => {
                    out.values.insert(k.clone(), v.clone());
                    if let Some(r) = other.roles.get(k) {
                        out.roles.insert(k.clone(), r.clone());
                    }
                }
            }
        }
        Some(out)
    }
}

impl std::fmt::Display for Binding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(k, v)| format!("{}={}", k, v))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn same_innermost(a: &Hyperedge, b: &Hyperedge) -> bool {
    match (a.innermost_atom(), b.innermost_atom()) {
        (Ok(x), Ok(y)) => x.without_roles() == y.without_roles(),
        _ => false,
    }
}

fn bind_one(b: &Binding, name: &str, e: &Hyperedge, role: Option<char>, skip: bool) -> Option<Binding> {
    match b.values.get(name) {
        Some(Value::One(v)) => {
            let ok = if skip { same_innermost(v, e) } else { v == e };
            ok.then(|| b.clone())
        }
        Some(Value::Many(_)) => None,
        None => {
            let mut b = b.clone();
            b.values.insert(name.to_string(), Value::One(e.clone()));
            b.roles.insert(name.to_string(), vec![role]);
            Some(b)
        }
    }
}

fn bind_many(b: &Binding, name: &str, es: &[(Hyperedge, Option<char>)]) -> Option<Binding> {
    let vals: Vec<Hyperedge> = es.iter().map(|(e, _)| e.clone()).collect();
    match b.values.get(name) {
        Some(Value::Many(v)) => (v == &vals).then(|| b.clone()),
        Some(Value::One(_)) => None,
        None => {
            let mut b = b.clone();
            b.values.insert(name.to_string(), Value::Many(vals));
            b.roles
                .insert(name.to_string(), es.iter().map(|(_, r)| *r).collect());
            Some(b)
        }
    }
}

fn type_ok(types: &Option<Vec<TypeCode>>, e: &Hyperedge) -> bool {
    match types {
        None => true,
        Some(ts) => e.infer_type().map(|t| ts.contains(&t)).unwrap_or(false),
    }
}

/// Checks atom-level constraints of `ap` against `e` (roles are checked here
/// only outside connector position).
fn atom_ok(ap: &AtomPattern, e: &Hyperedge, connector: bool) -> bool {
    let target = if ap.nest_skip {
        match e.innermost_atom() {
            Ok(a) => Hyperedge::Atom(a.clone()),
            Err(_) => return false,
        }
    } else {
        e.clone()
    };
    if !type_ok(&ap.types, &target) {
        return false;
    }
    if let RootSpec::Literal(roots) = &ap.root {
        match target.as_atom() {
            Some(a) if roots.iter().any(|r| *r == a.root) => {}
            _ => return false,
        }
    }
    if let Some(ns) = &ap.namespace {
        match target.as_atom() {
            Some(a) if a.namespace.as_ref() == Some(ns) => {}
            _ => return false,
        }
    }
    if !connector {
        if let Some(spec) = &ap.roles {
            let roles: Vec<char> = match target.innermost_atom() {
                Ok(a) => a.roles_str().chars().collect(),
                Err(_) => return false,
            };
            if !roles_fit(spec, &roles) {
                return false;
            }
        }
    }
    true
}

/// Whether a role string satisfies a spec one-to-one (used for atoms in argument position).
fn roles_fit(spec: &RoleSpec, roles: &[char]) -> bool {
    if roles.iter().any(|r| spec.forbidden.contains(r)) || roles.len() != spec.groups.len() {
        return false;
    }
    if spec.ordered {
        return roles.iter().zip(&spec.groups).all(|(r, g)| g.contains(r));
    }
    fn assign(groups: &[Vec<char>], roles: &[char], used: &mut Vec<bool>) -> bool {
        let Some((g, rest)) = groups.split_first() else {
            return true;
        };
        for i in 0..roles.len() {
            if !used[i] && g.contains(&roles[i]) {
                used[i] = true;
                if assign(rest, roles, used) {
                    return true;
                }
                used[i] = false;
            }
        }
        false
    }
    assign(&spec.groups, roles, &mut vec![false; roles.len()])
}

/// All bindings extending `b` under which `p` matches `e`.
pub(crate) fn match_in(p: &Pattern, e: &Hyperedge, b: &Binding, role: Option<char>) -> Vec<Binding> {
    match p {
        Pattern::Seq(_) => Vec::new(),
        Pattern::Atom(ap) => {
            if !atom_ok(ap, e, false) {
                return Vec::new();
            }
            bind_atom(ap, e, b, role)
        }
        Pattern::NonAtomic { var, types } => {
            if e.is_atom() || !type_ok(types, e) {
                return Vec::new();
            }
            match var {
                Some(n) => bind_one(b, n, e, role, false).into_iter().collect(),
                None => vec![b.clone()],
            }
        }
        Pattern::Edge(ps) => match_edge(ps, e, b),
    }
}

fn bind_atom(ap: &AtomPattern, e: &Hyperedge, b: &Binding, role: Option<char>) -> Vec<Binding> {
    match &ap.root {
        RootSpec::Var(n) => bind_one(b, n, e, role, ap.nest_skip).into_iter().collect(),
        _ => vec![b.clone()],
    }
}

fn match_edge(ps: &[Pattern], e: &Hyperedge, b: &Binding) -> Vec<Binding> {
    if e.is_atom() {
        return Vec::new();
    }
    let conn_p = &ps[0];
    let conn_e = &e.elements()[0];
    let conn_bindings = match conn_p {
        Pattern::Atom(ap) => {
            if !atom_ok(ap, conn_e, true) {
                return Vec::new();
            }
            bind_atom(ap, conn_e, b, None)
        }
        other => match_in(other, conn_e, b, None),
    };
    let spec = conn_p.as_atom().and_then(|a| a.roles.as_ref());
    let edge_roles: Vec<Option<char>> = {
        let r: Vec<char> = e.connector_roles().unwrap_or("").chars().collect();
        (0..e.args().len()).map(|i| r.get(i).copied()).collect()
    };
    let args: Vec<(Hyperedge, Option<char>)> = e
        .args()
        .iter()
        .cloned()
        .zip(edge_roles.iter().copied())
        .collect();
    let mut out = Vec::new();
    for cb in conn_bindings {
        match spec {
            Some(spec) => out.extend(match_roles(spec, &ps[1..], &args, &cb)),
            None => out.extend(match_positional(&ps[1..], &args, &cb)),
        }
    }
    out
}

fn match_positional(ps: &[Pattern], args: &[(Hyperedge, Option<char>)], b: &Binding) -> Vec<Binding> {
    let Some((p, rest)) = ps.split_first() else {
        return if args.is_empty() { vec![b.clone()] } else { Vec::new() };
    };
    let mut out = Vec::new();
    if let Pattern::Seq(name) = p {
        for k in 0..=args.len() {
            let nb = match name {
                Some(n) => match bind_many(b, n, &args[..k]) {
                    Some(nb) => nb,
                    None => continue,
                },
                None => b.clone(),
            };
            out.extend(match_positional(rest, &args[k..], &nb));
        }
        return out;
    }
    let Some(((a, r), args_rest)) = args.split_first() else {
        return out;
    };
    for nb in match_in(p, a, b, *r) {
        out.extend(match_positional(rest, args_rest, &nb));
    }
    out
}

/// Argument matching when the connector pattern carries a role spec: the
/// first `groups.len()` pattern arguments are tied to role groups, matched
/// arguments are located by role, and unclaimed arguments are allowed.
fn match_roles(
    spec: &RoleSpec,
    ps: &[Pattern],
    args: &[(Hyperedge, Option<char>)],
    b: &Binding,
) -> Vec<Binding> {
    let role_of = |i: usize| args[i].1.unwrap_or('?');
    if (0..args.len()).any(|i| spec.forbidden.contains(&role_of(i))) {
        return Vec::new();
    }
    // (pattern index, group) for single-argument patterns, in pattern order.
    let mut singles: Vec<(usize, Option<&Vec<char>>)> = Vec::new();
    let mut seqs: Vec<(usize, Option<&Vec<char>>)> = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let g = spec.groups.get(i);
        if matches!(p, Pattern::Seq(_)) {
            seqs.push((i, g));
        } else {
            singles.push((i, g));
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; args.len()];
    assign_singles(spec, ps, args, &singles, 0, None, &mut used, b, &seqs, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn assign_singles(
    spec: &RoleSpec,
    ps: &[Pattern],
    args: &[(Hyperedge, Option<char>)],
    singles: &[(usize, Option<&Vec<char>>)],
    k: usize,
    last: Option<usize>,
    used: &mut Vec<bool>,
    b: &Binding,
    seqs: &[(usize, Option<&Vec<char>>)],
    out: &mut Vec<Binding>,
) {
    if k == singles.len() {
        out.extend(assign_seqs(ps, args, seqs, used, b));
        return;
    }
    let (pi, group) = singles[k];
    let start = match (spec.ordered && group.is_some(), last) {
        (true, Some(l)) => l + 1,
        _ => 0,
    };
    for i in start..args.len() {
        if used[i] {
            continue;
        }
        let role = args[i].1.unwrap_or('?');
        if let Some(g) = group {
            if !g.contains(&role) {
                continue;
            }
        }
        used[i] = true;
        let next_last = if group.is_some() { Some(i) } else { last };
        for nb in match_in(&ps[pi], &args[i].0, b, args[i].1) {
            assign_singles(spec, ps, args, singles, k + 1, next_last, used, &nb, seqs, out);
        }
        used[i] = false;
    }
}

fn assign_seqs(
    ps: &[Pattern],
    args: &[(Hyperedge, Option<char>)],
    seqs: &[(usize, Option<&Vec<char>>)],
    used: &[bool],
    b: &Binding,
) -> Vec<Binding> {
    let mut used = used.to_vec();
    let mut b = b.clone();
    // Grouped sequences take every unclaimed argument with a matching role;
    // the first ungrouped sequence takes whatever remains.
    let mut order: Vec<&(usize, Option<&Vec<char>>)> = seqs.iter().filter(|s| s.1.is_some()).collect();
    order.extend(seqs.iter().filter(|s| s.1.is_none()));
    for (pi, group) in order {
        let mut taken = Vec::new();
        for i in 0..args.len() {
            if used[i] {
                continue;
            }
            let role = args[i].1.unwrap_or('?');
            if group.map(|g| g.contains(&role)).unwrap_or(true) {
                used[i] = true;
                taken.push(args[i].clone());
            }
        }
        if let Pattern::Seq(Some(n)) = &ps[*pi] {
            match bind_many(&b, n, &taken) {
                Some(nb) => b = nb,
                None => return Vec::new(),
            }
        }
    }
    vec![b]
}

fn dedup(v: Vec<Binding>) -> Vec<Binding> {
    let mut out: Vec<Binding> = Vec::new();
    for b in v {
        if !out.contains(&b) {
            out.push(b);
        }
    }
    out
}

/// All distinct bindings under which `pattern` matches `edge`, in argument order.
pub fn match_pattern(edge: &Hyperedge, pattern: &Pattern) -> Vec<Binding> {
    dedup(match_in(pattern, edge, &Binding::new(), None))
}

/// Extends an existing binding.
pub fn match_with(edge: &Hyperedge, pattern: &Pattern, binding: &Binding) -> Vec<Binding> {
    dedup(match_in(pattern, edge, binding, None))
}

pub fn matches(edge: &Hyperedge, pattern: &Pattern) -> bool {
    !match_in(pattern, edge, &Binding::new(), None).is_empty()
}

/// Replaces bound variables with the edges they hold.
pub fn substitute(pattern: &Pattern, b: &Binding) -> Pattern {
    match pattern {
        Pattern::Atom(AtomPattern {
            root: RootSpec::Var(n),
            roles,
            ..
        }) => match (b.edge(n), roles) {
            // keep the pattern's own role constraint on a bound atom
            (Some(Hyperedge::Atom(a)), Some(spec)) => {
                let mut lit = AtomPattern::literal(a);
                lit.roles = Some(spec.clone());
                Pattern::Atom(lit)
            }
            (Some(e), _) => Pattern::from_edge(e),
            (None, _) => pattern.clone(),
        },
        Pattern::NonAtomic { var: Some(n), .. } => match b.edge(n) {
            Some(e) => Pattern::from_edge(e),
            None => pattern.clone(),
        },
        Pattern::Edge(v) => {
            let mut out = Vec::new();
            for p in v {
                match p {
                    Pattern::Seq(Some(n)) => match b.get(n) {
                        Some(Value::Many(es)) => out.extend(es.iter().map(Pattern::from_edge)),
                        _ => out.push(p.clone()),
                    },
                    _ => out.push(substitute(p, b)),
                }
            }
            Pattern::Edge(out)
        }
        other => other.clone(),
    }
}
