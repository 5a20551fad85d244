//! Lexical scoping for Little.
//!
//! [`resolve`] builds a tree of scopes and resolves every variable use to
//! the pattern variable that binds it. Top-level definitions see the ones
//! before them (and themselves with `defrec`); `let`, lambdas and case
//! branches open nested scopes.

mod deps;
mod prims;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{Exp, ExpKind, NodeId, Pat, Program};

pub use deps::{deps, DepGraph};
pub use prims::{is_primitive, primitive_params, PRIMITIVES};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    /// Bound by the pattern variable with this id.
    Bound(NodeId),
    /// A built-in name with no binder.
    Primitive(String),
    Unbound(String),
}

impl Resolution {
    pub fn binder(&self) -> Option<NodeId> {
        match self {
            Resolution::Bound(b) => Some(*b),
            _ => None,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Bound(b) => write!(f, "#{}", b.0),
            Resolution::Primitive(x) => write!(f, "prim:{x}"),
            Resolution::Unbound(x) => write!(f, "unbound:{x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScopeKind {
    Root,
    TopLevel(usize),
    Let,
    Fun,
    Branch,
}

#[derive(Clone, Debug)]
pub struct Scope {
    pub parent: Option<ScopeId>,
    pub kind: ScopeKind,
    /// Binders in source order; on duplicate names the last one wins.
    pub binders: Vec<NodeId>,
}

#[derive(Clone, Debug)]
pub struct Binder {
    pub id: NodeId,
    pub name: String,
    pub scope: ScopeId,
}

#[derive(Clone, Debug)]
pub struct Use {
    pub id: NodeId,
    pub name: String,
    pub res: Resolution,
    /// Scope the use is evaluated in.
    pub scope: ScopeId,
}

/// Resolution of every use in a program.
#[derive(Clone, Debug)]
pub struct BindingMap {
    pub scopes: Vec<Scope>,
    pub binders: Vec<Binder>,
    /// Uses in document order.
    pub uses: Vec<Use>,
    binder_index: HashMap<NodeId, usize>,
}

impl BindingMap {
    pub fn binder(&self, id: NodeId) -> Option<&Binder> {
        self.binder_index.get(&id).map(|&i| &self.binders[i])
    }

    /// Uses resolved to `binder`, in document order.
    pub fn uses_of(&self, binder: NodeId) -> Vec<&Use> {
        self.uses
            .iter()
            .filter(|u| u.res == Resolution::Bound(binder))
            .collect()
    }

    pub fn use_by_id(&self, id: NodeId) -> Option<&Use> {
        self.uses.iter().find(|u| u.id == id)
    }

    /// Scope chain from `scope` outwards.
    pub fn chain(&self, scope: ScopeId) -> Vec<ScopeId> {
        let mut out = vec![scope];
        let mut cur = scope;
        while let Some(p) = self.scopes[cur.0].parent {
            out.push(p);
            cur = p;
        }
        out
    }

    /// Whether `scope` lies inside (or is) `outer`.
    pub fn scope_within(&self, scope: ScopeId, outer: ScopeId) -> bool {
        self.chain(scope).contains(&outer)
    }

    fn lookup_with(&self, scope: ScopeId, name: &str, renamed: &HashMap<NodeId, String>) -> Resolution {
        for s in self.chain(scope) {
            let hit = self.scopes[s.0].binders.iter().rev().find(|b| {
                let bname = renamed
                    .get(b)
                    .map(String::as_str)
                    .unwrap_or_else(|| &self.binders[self.binder_index[b]].name);
                bname == name
            });
            if let Some(b) = hit {
                return Resolution::Bound(*b);
            }
        }
        free_resolution(name)
    }

    /// Resolution of `name` if it were used in `scope`.
    pub fn lookup(&self, scope: ScopeId, name: &str) -> Resolution {
        self.lookup_with(scope, name, &HashMap::new())
    }

    /// Names of all binders visible in `scope`, including shadowed ones.
    pub fn names_in_scope(&self, scope: ScopeId) -> BTreeSet<String> {
        self.chain(scope)
            .into_iter()
            .flat_map(|s| self.scopes[s.0].binders.iter())
            .map(|b| self.binders[self.binder_index[b]].name.clone())
            .collect()
    }

    /// Debug dump: one `use-id name -> resolution` line per use.
    pub fn dump(&self) -> String {
        self.uses
            .iter()
            .map(|u| format!("#{} {} -> {}\n", u.id.0, u.name, u.res))
            .collect()
    }
}

pub(crate) fn free_resolution(name: &str) -> Resolution {
    if is_primitive(name) {
        Resolution::Primitive(name.to_string())
    } else {
        Resolution::Unbound(name.to_string())
    }
}

struct Resolver {
    scopes: Vec<Scope>,
    binders: Vec<Binder>,
    uses: Vec<Use>,
    index: HashMap<NodeId, usize>,
}

impl Resolver {
    fn open(&mut self, parent: Option<ScopeId>, kind: ScopeKind, pats: &[&Pat]) -> ScopeId {
        let id = ScopeId(self.scopes.len());
        let mut binders = Vec::new();
        for p in pats {
            for v in p.vars() {
                let name = v.as_var().unwrap_or_default().to_string();
                self.index.insert(v.id, self.binders.len());
                self.binders.push(Binder {
                    id: v.id,
                    name,
                    scope: id,
                });
                binders.push(v.id);
            }
        }
        self.scopes.push(Scope { parent, kind, binders });
        id
    }

    fn lookup(&self, scope: ScopeId, name: &str) -> Resolution {
        let mut cur = Some(scope);
        while let Some(s) = cur {
            let sc = &self.scopes[s.0];
            if let Some(b) = sc
                .binders
                .iter()
                .rev()
                .find(|b| self.binders[self.index[b]].name == name)
            {
                return Resolution::Bound(*b);
            }
            cur = sc.parent;
        }
        free_resolution(name)
    }

    fn exp(&mut self, e: &Exp, scope: ScopeId) {
        match &e.kind {
            ExpKind::Var(x) => {
                let res = self.lookup(scope, x);
                self.uses.push(Use {
                    id: e.id,
                    name: x.clone(),
                    res,
                    scope,
                });
            }
            ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) => {}
            ExpKind::Fun { params, body, .. } => {
                let pats: Vec<&Pat> = params.pats.iter().collect();
                let s = self.open(Some(scope), ScopeKind::Fun, &pats);
                self.exp(body, s);
            }
            ExpKind::App { head, args, .. } => {
                self.exp(head, scope);
                for a in args {
                    self.exp(a, scope);
                }
            }
            ExpKind::List { elems, tail, .. } => {
                for x in elems {
                    self.exp(x, scope);
                }
                if let Some(t) = tail {
                    self.exp(&t.node, scope);
                }
            }
            ExpKind::Let { def, body, .. } => {
                let s = self.open(Some(scope), ScopeKind::Let, &[&def.pat]);
                self.exp(&def.bound, if def.rec { s } else { scope });
                self.exp(body, s);
            }
            ExpKind::Case {
                scrutinee, branches, ..
            } => {
                self.exp(scrutinee, scope);
                for b in branches {
                    let s = self.open(Some(scope), ScopeKind::Branch, &[&b.pat]);
                    self.exp(&b.body, s);
                }
            }
        }
    }
}

/// Resolves every variable use in `p`.
pub fn resolve(p: &Program) -> BindingMap {
    let mut r = Resolver {
        scopes: Vec::new(),
        binders: Vec::new(),
        uses: Vec::new(),
        index: HashMap::new(),
    };
    let mut outer = r.open(None, ScopeKind::Root, &[]);
    for (i, d) in p.defs.iter().enumerate() {
        let s = r.open(Some(outer), ScopeKind::TopLevel(i), &[&d.pat]);
        r.exp(&d.bound, if d.rec { s } else { outer });
        outer = s;
    }
    BindingMap {
        scopes: r.scopes,
        binders: r.binders,
        uses: r.uses,
        binder_index: r.index,
    }
}

/// Resolves the uses inside a detached expression, treating everything
/// bound outside it as free.
pub fn resolve_exp(e: &Exp) -> BindingMap {
    let mut r = Resolver {
        scopes: Vec::new(),
        binders: Vec::new(),
        uses: Vec::new(),
        index: HashMap::new(),
    };
    let root = r.open(None, ScopeKind::Root, &[]);
    r.exp(e, root);
    BindingMap {
        scopes: r.scopes,
        binders: r.binders,
        uses: r.uses,
        binder_index: r.index,
    }
}

/// Names used free in `e`.
pub fn free_vars(e: &Exp) -> BTreeSet<String> {
    resolve_exp(e)
        .uses
        .into_iter()
        .filter(|u| u.res.binder().is_none())
        .map(|u| u.name)
        .collect()
}

/// A use whose binder changes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conflict {
    pub use_id: NodeId,
    pub name: String,
    pub before: Resolution,
    /// What the use resolves to afterwards.
    pub after: Resolution,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "use #{} of `{}` moves from {} to {}",
            self.use_id.0, self.name, self.before, self.after
        )
    }
}

/// Renamings applied to binders (`binders`) and to individual uses (`uses`).
#[derive(Clone, Debug, Default)]
pub struct Renaming {
    pub binders: HashMap<NodeId, String>,
    pub uses: HashMap<NodeId, String>,
}

/// Uses whose binding would change if the renaming were applied, computed
/// against the scope tree without building the renamed program. Renamed
/// binders keep their identity; a use is expected to stay with its binder
/// (or with its free name).
pub fn would_capture(map: &BindingMap, renaming: &Renaming) -> Vec<Conflict> {
    would_capture_with(map, renaming, |r| r.clone())
}

/// Like [`would_capture`], with `expect` giving the intended resolution of
/// each use from its current one.
pub fn would_capture_with(
    map: &BindingMap,
    renaming: &Renaming,
    expect: impl Fn(&Resolution) -> Resolution,
) -> Vec<Conflict> {
    let mut out = Vec::new();
    for u in &map.uses {
        let name = renaming.uses.get(&u.id).cloned().unwrap_or_else(|| {
            match u.res.binder().and_then(|b| renaming.binders.get(&b)) {
                Some(n) => n.clone(),
                None => u.name.clone(),
            }
        });
        let after = map.lookup_with(u.scope, &name, &renaming.binders);
        let expected = expect(&u.res);
        let expected = match expected {
            Resolution::Bound(_) => expected,
            _ => free_resolution(&name),
        };
        if after != expected {
            out.push(Conflict {
                use_id: u.id,
                name,
                before: u.res.clone(),
                after,
            });
        }
    }
    out
}

/// Compares the bindings of two versions of a program, matching nodes by
/// id. Every use present in both must resolve in `after` to `expect` of its
/// resolution in `before`; free names must stay free under the same name.
/// Uses that occur several times in `after` (copied subtrees) are checked at
/// every occurrence.
pub fn preservation_conflicts(
    before: &BindingMap,
    after: &BindingMap,
    expect: impl Fn(&Resolution) -> Resolution,
) -> Vec<Conflict> {
    let old: HashMap<NodeId, &Use> = before.uses.iter().map(|u| (u.id, u)).collect();
    let mut out = Vec::new();
    for u in &after.uses {
        let Some(o) = old.get(&u.id) else { continue };
        let expected = match expect(&o.res) {
            Resolution::Bound(b) => Resolution::Bound(b),
            _ => free_resolution(&u.name),
        };
        let ok = match (&expected, &u.res) {
            (Resolution::Bound(_), _) => u.res == expected,
            (_, Resolution::Bound(_)) => false,
            _ => o.res.binder().is_none() && u.name == o.name,
        };
        if !ok {
            out.push(Conflict {
                use_id: u.id,
                name: u.name.clone(),
                before: o.res.clone(),
                after: u.res.clone(),
            });
        }
    }
    out.sort();
    out.dedup();
    out
}
