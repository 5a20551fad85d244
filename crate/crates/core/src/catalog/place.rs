//! Where new definitions go, and how existing ones are taken out.

use crate::edit::{def_index, find_exp_mut, find_let_mut, insert_def, reindent, remove_def, shift_ws, unwrap_let};
use crate::index::{Side, Target};
use crate::syntax::{node_at, Def, Exp, ExpKind, ItemPath, LetDef, NodeId, NodeRef, Pat, PatKind, Program, Span, Step};

/// A resolved insertion point for definitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// New top-level definitions before the first of these that still
    /// exists when inserting.
    TopLevel { before: Vec<NodeId> },
    /// Wrap the expression in `let`s.
    NewLet { exp: NodeId },
    /// Add elements to the list pattern (and list bound) of a definition,
    /// before the element `before` or at the end.
    IntoList { def: NodeId, before: Option<NodeId> },
    /// Turn a single-variable definition into a pair, new variables first
    /// or last.
    WrapVar { def: NodeId, first: bool },
}

/// A pattern and the expression it binds, detached from the program.
#[derive(Clone, Debug)]
pub struct Binding {
    pub pat: Pat,
    pub bound: Exp,
    pub rec: bool,
    /// Column where the original definition form started; multi-line bounds
    /// are re-indented relative to it.
    pub col: u32,
}

impl Binding {
    pub fn new(pat: Pat, bound: Exp) -> Self {
        Binding {
            pat,
            bound,
            rec: false,
            col: 0,
        }
    }

    pub fn name(&self) -> String {
        crate::syntax::print::print_pat(&self.pat)
    }
}

/// Top-level definitions from index `i` on, as insertion candidates.
pub fn top_level_from(p: &Program, i: usize) -> Placement {
    Placement::TopLevel {
        before: p.defs[i.min(p.defs.len() - 1)..].iter().map(|d| d.id).collect(),
    }
}

fn binding_node<'a>(p: &'a Program, path: &ItemPath) -> Option<NodeRef<'a>> {
    match node_at(p, path).ok()? {
        n @ (NodeRef::Def(_) | NodeRef::LetDef(_)) => Some(n),
        _ => None,
    }
}

/// Interprets a target as a place for new definitions.
pub fn placement_of(p: &Program, t: &Target) -> Option<Placement> {
    let Some(parent) = &t.parent else {
        let next = t.next()?;
        return Some(top_level_from(p, next.top_def()?));
    };
    let parent_node = node_at(p, parent).ok()?;
    // The pattern of `main` must stay a lone variable.
    let is_main = |id: NodeId| p.main_def().is_some_and(|d| d.id == id);
    // Next to the whole pattern of a definition.
    let at_pat = t.aliases.iter().find(|a| a.anchor == parent.child(Step::Pat));
    if let (Some((pat, bound)), Some(adjacent)) = (parent_node.as_binding(), at_pat) {
        let def = parent_node.id();
        if is_main(def) {
            return None;
        }
        return match &pat.kind {
            PatKind::Var(_) => Some(Placement::WrapVar {
                def,
                first: adjacent.side == Side::Before,
            }),
            PatKind::List { elems, tail: None, .. } if list_bound_matches(bound, elems.len()) => {
                Some(Placement::IntoList {
                    def,
                    before: if adjacent.side == Side::Before {
                        elems.first().map(|e| e.id)
                    } else {
                        None
                    },
                })
            }
            _ => None,
        };
    }
    // Between the elements of a definition's list pattern.
    if let NodeRef::Pat(Pat {
        kind: PatKind::List { elems, tail: None, .. },
        ..
    }) = parent_node
    {
        let grand = parent.parent()?;
        if parent.last() != Some(Step::Pat) {
            return None;
        }
        let owner = binding_node(p, &grand)?;
        if is_main(owner.id()) {
            return None;
        }
        let (_, bound) = owner.as_binding()?;
        if !list_bound_matches(bound, elems.len()) {
            return None;
        }
        let before = match t.next() {
            Some(n) => Some(node_at(p, n).ok()?.id()),
            None => None,
        };
        return Some(Placement::IntoList {
            def: owner.id(),
            before,
        });
    }
    let next = t.next()?;
    match node_at(p, next).ok()? {
        NodeRef::Exp(e) => Some(Placement::NewLet { exp: e.id }),
        _ => None,
    }
}

fn list_bound_matches(bound: &Exp, n: usize) -> bool {
    matches!(&bound.kind, ExpKind::List { elems, tail: None, .. } if elems.len() == n)
}

/// The innermost expression around `start` that can be wrapped in a `let`
/// without splitting anything: a bound, a `let` body, a lambda body or a
/// branch body. `None` means the definitions belong at top level.
pub fn innermost_slot(p: &Program, start: &ItemPath) -> Option<ItemPath> {
    let mut cur = start.clone();
    loop {
        if cur.depth() <= 1 {
            return None;
        }
        if matches!(cur.last(), Some(Step::Bound | Step::Body)) && matches!(node_at(p, &cur), Ok(NodeRef::Exp(_))) {
            return Some(cur);
        }
        cur = cur.parent()?;
    }
}

/// Longest common prefix of item paths.
pub fn common_ancestor(paths: &[&ItemPath]) -> ItemPath {
    let Some(first) = paths.first() else {
        return ItemPath::root();
    };
    let mut n = first.0.len();
    for p in &paths[1..] {
        n = n.min(first.0.iter().zip(&p.0).take_while(|(a, b)| a == b).count());
    }
    ItemPath(first.0[..n].to_vec())
}

/// Placement used when no target is selected: the innermost scope around
/// all of `paths`. When `exclude_self` holds, a path that is itself the
/// common ancestor is not wrapped around itself.
pub fn default_placement(p: &Program, paths: &[&ItemPath], exclude_self: bool) -> Placement {
    let mut lca = common_ancestor(paths);
    if exclude_self && paths.contains(&&lca) {
        lca = lca.parent().unwrap_or_else(ItemPath::root);
    }
    match innermost_slot(p, &lca) {
        Some(slot) => Placement::NewLet {
            exp: node_at(p, &slot).map(|n| n.id()).expect("slot exists"),
        },
        None => {
            let first = paths.iter().filter_map(|q| q.top_def()).min().unwrap_or(0);
            top_level_from(p, first)
        }
    }
}

/// Whether `placement` points into the subtree at `path`.
pub fn placement_inside(p: &Program, placement: &Placement, path: &ItemPath) -> bool {
    let id = match placement {
        Placement::TopLevel { .. } => return false,
        Placement::NewLet { exp } => *exp,
        Placement::IntoList { def, .. } | Placement::WrapVar { def, .. } => *def,
    };
    crate::syntax::path_of(p, id).is_some_and(|q| path.is_prefix_of(&q))
}

fn form_ws(b: &mut Binding, col: u32) {
    let delta = col as i64 - b.col as i64;
    b.pat.ws = " ".into();
    b.bound.ws = if b.bound.ws.contains('\n') {
        shift_ws(&b.bound.ws, delta)
    } else {
        " ".into()
    };
    reindent(&mut b.bound, delta);
}

/// Inserts `bindings` at `placement`. List placements add each binding as
/// one element; the others create one definition per binding.
pub fn insert_bindings(p: &mut Program, placement: &Placement, bindings: Vec<Binding>) -> bool {
    match placement {
        Placement::TopLevel { before } => {
            let Some(mut i) = before.iter().find_map(|id| def_index(p, *id)) else {
                return false;
            };
            for mut b in bindings {
                form_ws(&mut b, 0);
                let d = Def {
                    id: p.fresh_id(),
                    ws: String::new(),
                    kw_ws: String::new(),
                    rec: b.rec,
                    pat: b.pat,
                    bound: b.bound,
                    close_ws: String::new(),
                    span: Span::default(),
                };
                insert_def(p, i, d);
                i += 1;
            }
            true
        }
        Placement::NewLet { exp } => {
            let ids: Vec<NodeId> = bindings.iter().map(|_| p.fresh_id()).collect();
            let let_ids: Vec<NodeId> = bindings.iter().map(|_| p.fresh_id()).collect();
            let Some(e) = find_exp_mut(p, *exp) else {
                return false;
            };
            let col = e.span.start.col;
            let multiline = e.ws.contains('\n');
            let sep = if multiline {
                format!("\n{}", " ".repeat(col as usize))
            } else {
                " ".to_string()
            };
            let outer_ws = std::mem::take(&mut e.ws);
            let mut inner = std::mem::replace(e, Exp::new(NodeId(0), "", ExpKind::Bool(false)));
            for (k, mut b) in bindings.into_iter().enumerate().rev() {
                form_ws(&mut b, col);
                inner.ws = sep.clone();
                inner = Exp::new(
                    let_ids[k],
                    if k == 0 { outer_ws.clone() } else { sep.clone() },
                    ExpKind::Let {
                        def: LetDef {
                            id: ids[k],
                            kw_ws: String::new(),
                            rec: b.rec,
                            pat: b.pat,
                            bound: Box::new(b.bound),
                            span: Span::default(),
                        },
                        body: Box::new(inner),
                        close_ws: String::new(),
                    },
                );
            }
            *e = inner;
            true
        }
        Placement::IntoList { def, before } => {
            let Some((pat, bound)) = binding_mut(p, *def) else {
                return false;
            };
            let (PatKind::List { elems: pe, .. }, ExpKind::List { elems: be, .. }) = (&mut pat.kind, &mut bound.kind)
            else {
                return false;
            };
            if pe.len() != be.len() {
                return false;
            }
            let start = match before {
                Some(id) => match pe.iter().position(|x| x.id == *id) {
                    Some(i) => i,
                    None => return false,
                },
                None => pe.len(),
            };
            for (i, mut b) in (start..).zip(bindings) {
                b.pat.ws = " ".into();
                b.bound.ws = " ".into();
                if i == 0 {
                    if let Some(first) = pe.first_mut() {
                        b.pat.ws = std::mem::replace(&mut first.ws, " ".into());
                    }
                    if let Some(first) = be.first_mut() {
                        b.bound.ws = std::mem::replace(&mut first.ws, " ".into());
                    }
                }
                pe.insert(i, b.pat);
                be.insert(i, b.bound);
            }
            true
        }
        Placement::WrapVar { def, first } => {
            let list_pat = p.fresh_id();
            let list_exp = p.fresh_id();
            let Some((pat, bound)) = binding_mut(p, *def) else {
                return false;
            };
            let mut old_pat = std::mem::replace(pat, Pat::new(list_pat, "", PatKind::Bool(false)));
            let mut old_bound = std::mem::replace(bound, Exp::new(list_exp, "", ExpKind::Bool(false)));
            let pat_ws = std::mem::take(&mut old_pat.ws);
            let bound_ws = std::mem::take(&mut old_bound.ws);
            let mut pats = Vec::new();
            let mut exps = Vec::new();
            for mut b in bindings {
                b.pat.ws = " ".into();
                b.bound.ws = " ".into();
                pats.push(b.pat);
                exps.push(b.bound);
            }
            if *first {
                old_pat.ws = " ".into();
                old_bound.ws = " ".into();
                pats[0].ws.clear();
                exps[0].ws.clear();
                pats.push(old_pat);
                exps.push(old_bound);
            } else {
                pats.insert(0, old_pat);
                exps.insert(0, old_bound);
            }
            *pat = Pat::new(
                list_pat,
                pat_ws,
                PatKind::List {
                    elems: pats,
                    tail: None,
                    close_ws: String::new(),
                },
            );
            *bound = Exp::new(
                list_exp,
                bound_ws,
                ExpKind::List {
                    elems: exps,
                    tail: None,
                    close_ws: String::new(),
                },
            );
            true
        }
    }
}

/// Pattern and bound of the top-level or `let` definition with this id.
pub fn binding_mut(p: &mut Program, def: NodeId) -> Option<(&mut Pat, &mut Exp)> {
    if let Some(i) = def_index(p, def) {
        let d = &mut p.defs[i];
        return Some((&mut d.pat, &mut d.bound));
    }
    let e = find_let_mut(p, def)?;
    match &mut e.kind {
        ExpKind::Let { def, .. } => Some((&mut def.pat, &mut def.bound)),
        _ => None,
    }
}

/// What a selection contributes when it is moved or inlined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    /// A whole top-level or `let` definition.
    Def(NodeId),
    /// One variable of a definition's pattern: the whole pattern or an
    /// element of a list pattern with a matching list bound.
    PatVar { def: NodeId, var: NodeId },
}

impl Source {
    pub fn def(&self) -> NodeId {
        match self {
            Source::Def(d) | Source::PatVar { def: d, .. } => *d,
        }
    }
}

/// Classifies a selected definition or pattern as something that can be
/// taken out of the program.
pub fn source_of(p: &Program, path: &ItemPath) -> Option<Source> {
    let node = node_at(p, path).ok()?;
    match node {
        NodeRef::Def(d) => (path.top_def()? + 1 < p.defs.len()).then_some(Source::Def(d.id)),
        NodeRef::LetDef(d) => Some(Source::Def(d.id)),
        NodeRef::Pat(x) => {
            x.as_var()?;
            let parent = path.parent()?;
            let (owner_path, whole) = if path.last() == Some(Step::Pat) {
                (parent, true)
            } else if matches!(path.last(), Some(Step::Elem(_))) && parent.last() == Some(Step::Pat) {
                (parent.parent()?, false)
            } else {
                return None;
            };
            let owner = binding_node(p, &owner_path)?;
            if let NodeRef::Def(_) = owner {
                if owner_path.top_def()? + 1 == p.defs.len() {
                    return None;
                }
            }
            let (pat, bound) = owner.as_binding()?;
            if !whole {
                let PatKind::List { elems, tail: None, .. } = &pat.kind else {
                    return None;
                };
                if !list_bound_matches(bound, elems.len()) {
                    return None;
                }
            }
            Some(Source::PatVar {
                def: owner.id(),
                var: x.id,
            })
        }
        _ => None,
    }
}

/// Start column of the definition form with this id.
fn def_col(p: &Program, def: NodeId) -> u32 {
    if let Some(i) = def_index(p, def) {
        return p.defs[i].span.start.col;
    }
    let mut col = 0;
    for d in &p.defs {
        d.bound.for_each(&mut |e| {
            if let ExpKind::Let { def: ld, .. } = &e.kind {
                if ld.id == def {
                    col = e.span.start.col;
                }
            }
        });
    }
    col
}

/// Removes a source from the program and returns what it bound.
pub fn extract(p: &mut Program, src: &Source) -> Option<Binding> {
    let col = def_col(p, src.def());
    match src {
        Source::Def(id) => take_def(p, *id, col),
        Source::PatVar { def, var } => {
            let (pat, bound) = binding_mut(p, *def)?;
            if pat.id == *var {
                return take_def(p, *def, col);
            }
            let (PatKind::List { elems: pe, .. }, ExpKind::List { elems: be, .. }) = (&mut pat.kind, &mut bound.kind)
            else {
                return None;
            };
            let i = pe.iter().position(|x| x.id == *var)?;
            if pe.len() != be.len() {
                return None;
            }
            let mut xp = pe.remove(i);
            let mut xb = be.remove(i);
            if i == 0 {
                if let Some(f) = pe.first_mut() {
                    f.ws = xp.ws.clone();
                }
                if let Some(f) = be.first_mut() {
                    f.ws = xb.ws.clone();
                }
            }
            xp.ws.clear();
            xb.ws.clear();
            match pe.len() {
                0 => {
                    take_def(p, *def, col);
                }
                1 => collapse_singleton(pat, bound),
                _ => {}
            }
            Some(Binding {
                pat: xp,
                bound: xb,
                rec: false,
                col,
            })
        }
    }
}

fn collapse_singleton(pat: &mut Pat, bound: &mut Exp) {
    if let PatKind::List { elems, .. } = &mut pat.kind {
        let mut only = elems.pop().expect("one element");
        only.ws = pat.ws.clone();
        *pat = only;
    }
    if let ExpKind::List { elems, .. } = &mut bound.kind {
        let mut only = elems.pop().expect("one element");
        only.ws = bound.ws.clone();
        *bound = only;
    }
}

fn take_def(p: &mut Program, id: NodeId, col: u32) -> Option<Binding> {
    if let Some(i) = def_index(p, id) {
        let d = remove_def(p, i);
        return Some(Binding {
            pat: d.pat,
            bound: d.bound,
            rec: d.rec,
            col,
        });
    }
    let e = find_let_mut(p, id)?;
    let ExpKind::Let { def, .. } = &e.kind else {
        return None;
    };
    let b = Binding {
        pat: def.pat.clone(),
        bound: (*def.bound).clone(),
        rec: def.rec,
        col,
    };
    unwrap_let(p, id);
    Some(b)
}

/// Whether definitions inserted at `placement` are visible at every path.
pub fn scopes_over(p: &Program, placement: &Placement, paths: &[&ItemPath]) -> bool {
    match placement {
        Placement::TopLevel { before } => {
            let Some(i) = before.iter().find_map(|id| def_index(p, *id)) else {
                return false;
            };
            paths.iter().all(|q| q.top_def().is_some_and(|k| k >= i))
        }
        Placement::NewLet { exp } => {
            crate::syntax::path_of(p, *exp).is_some_and(|ep| paths.iter().all(|q| ep.is_prefix_of(q)))
        }
        Placement::IntoList { def, .. } | Placement::WrapVar { def, .. } => {
            let Some(dp) = crate::syntax::path_of(p, *def) else {
                return false;
            };
            if dp.depth() == 1 {
                let k = dp.top_def().unwrap_or(0);
                return paths.iter().all(|q| q.top_def().is_some_and(|j| j > k));
            }
            let Some(body) = dp.parent().map(|l| l.child(Step::Body)) else {
                return false;
            };
            paths.iter().all(|q| body.is_prefix_of(q))
        }
    }
}
