//! Move Definitions, Swap Definitions, Duplicate Definition, Inline
//! Definition.

use std::collections::{BTreeSet, HashSet};

use crate::binding::{resolve, BindingMap, Conflict, Renaming};
use crate::edit::{def_index, fresh_name, reindent, taken_names};
use crate::syntax::{
    node_at, path_of, print, Exp, ExpKind, ItemPath, NodeId, NodeRef, NumLit, Pat, PatKind, Program, Step,
};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, ToolError, TransformResult,
};

use super::place::{extract, insert_bindings, placement_inside, placement_of, source_of, Binding, Placement, Source};
use super::rename::apply_renaming;

/// Position of a node in document order, for sorting selections.
fn doc_pos(p: &Program, id: NodeId) -> usize {
    path_of(p, id)
        .and_then(|q| node_at(p, &q).ok().map(|n| n.span().start.offset))
        .unwrap_or(usize::MAX)
}

fn nested_items(c: &Classified) -> bool {
    let all: Vec<&ItemPath> = c.pats.iter().chain(&c.defs).map(|s| &s.path).collect();
    all.iter()
        .enumerate()
        .any(|(i, a)| all.iter().enumerate().any(|(j, b)| i != j && a.is_prefix_of(b)))
}

/// Path of the definition item a source lives in.
fn owner_path(p: &Program, s: &Source) -> Option<ItemPath> {
    path_of(p, s.def())
}

/// Variables bound by the patterns of `bindings`.
fn binder_ids(bindings: &[Binding]) -> HashSet<NodeId> {
    bindings
        .iter()
        .flat_map(|b| b.pat.vars().into_iter().map(|v| v.id).collect::<Vec<_>>())
        .collect()
}

/// The definition (top-level or `let`) whose pattern contains `binder`.
fn owner_of_binder(p: &Program, binder: NodeId) -> Option<NodeId> {
    let mut q = path_of(p, binder)?;
    while let Some(parent) = q.parent() {
        if q.last() == Some(Step::Pat) {
            return match node_at(p, &parent).ok()? {
                n @ (NodeRef::Def(_) | NodeRef::LetDef(_)) => Some(n.id()),
                _ => None,
            };
        }
        if !matches!(q.last(), Some(Step::Elem(_) | Step::Tail)) {
            return None;
        }
        q = parent;
    }
    None
}

fn pat_names(bindings: &[Binding]) -> String {
    bindings.iter().map(|b| b.name()).collect::<Vec<_>>().join(" ")
}

struct MovePlan {
    sources: Vec<Source>,
    placement: Placement,
    /// Selected patterns are gathered into one definition.
    pattern_mode: bool,
}

/// Extracts `sources` and inserts them at the placement. Whole definitions
/// come first, each on its own; selected pattern variables follow as a
/// single definition (or as list elements for list placements).
fn build_move(p: &Program, plan: &MovePlan, sources: &[Source]) -> Option<(Program, Vec<Binding>)> {
    let mut q = p.clone();
    let mut defs = Vec::new();
    let mut vars = Vec::new();
    for s in sources {
        let b = extract(&mut q, s)?;
        match s {
            Source::Def(_) => defs.push(b),
            Source::PatVar { .. } if plan.pattern_mode => vars.push(b),
            Source::PatVar { .. } => defs.push(b),
        }
    }
    let listy = matches!(plan.placement, Placement::IntoList { .. } | Placement::WrapVar { .. });
    let mut bindings = defs;
    if vars.len() > 1 && !listy {
        let pat_id = q.fresh_id();
        let exp_id = q.fresh_id();
        let mut pats = Vec::new();
        let mut exps = Vec::new();
        for (i, mut b) in vars.into_iter().enumerate() {
            let ws = if i == 0 { "" } else { " " };
            b.pat.ws = ws.into();
            b.bound.ws = ws.into();
            reindent(&mut b.bound, -(b.col as i64));
            pats.push(b.pat);
            exps.push(b.bound);
        }
        bindings.push(Binding::new(
            Pat::new(
                pat_id,
                "",
                PatKind::List {
                    elems: pats,
                    tail: None,
                    close_ws: String::new(),
                },
            ),
            Exp::new(
                exp_id,
                "",
                ExpKind::List {
                    elems: exps,
                    tail: None,
                    close_ws: String::new(),
                },
            ),
        ));
    } else {
        bindings.extend(vars);
    }
    if bindings.iter().any(|b| b.rec) && listy {
        return None;
    }
    let moved = bindings.clone();
    if !insert_bindings(&mut q, &plan.placement, bindings) {
        return None;
    }
    Some((q, moved))
}

pub struct MoveDefinitions;

const MOVE: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::at_least(1),
    targets: Count::exactly(1),
    branches: false,
    text: "one or more definitions or pattern variables, and a target",
};

impl MoveDefinitions {
    fn plan(&self, st: &EditorState) -> Option<MovePlan> {
        let c = st.classify().ok()?;
        let p = &st.code;
        if nested_items(&c) || (!c.pats.is_empty() && !c.defs.is_empty()) {
            return None;
        }
        let pattern_mode = !c.pats.is_empty();
        let mut sources: Vec<Source> = c
            .pats
            .iter()
            .chain(&c.defs)
            .map(|s| source_of(p, &s.path))
            .collect::<Option<_>>()?;
        sources.sort_by_key(|s| match s {
            Source::Def(d) => doc_pos(p, *d),
            Source::PatVar { var, .. } => doc_pos(p, *var),
        });
        let placement = placement_of(p, c.target()?)?;
        for s in &sources {
            let owner = owner_path(p, s)?;
            let same_def = matches!(&placement,
                Placement::IntoList { def, .. } if *def == s.def());
            if placement_inside(p, &placement, &owner) && !(pattern_mode && same_def) {
                return None;
            }
        }
        let plan = MovePlan {
            sources,
            placement,
            pattern_mode,
        };
        let (q, _) = build_move(p, &plan, &plan.sources)?;
        (print(&q) != print(p)).then_some(plan)
    }
}

fn conflicts_of(r: &TransformResult) -> Vec<Conflict> {
    r.safety.conflicts().into_iter().cloned().collect()
}

/// Renames `binder` (and the uses `map` resolves to it) to a fresh name.
fn rename_variant(p: &Program, q: &Program, map: &BindingMap, binder: NodeId) -> Option<(Program, String, String)> {
    let old = map.binder(binder)?.name.clone();
    let mut taken: BTreeSet<String> = taken_names(p);
    taken.extend(taken_names(q));
    let new = fresh_name(&old, &mut taken, true);
    let mut r = Renaming::default();
    r.binders.insert(binder, new.clone());
    let mut v = q.clone();
    apply_renaming(&mut v, map, &r);
    Some((v, old, new))
}

/// Capturing and captured binders of a set of conflicts, in order.
fn conflict_binders(conflicts: &[Conflict]) -> Vec<NodeId> {
    let mut out = Vec::new();
    for c in conflicts {
        for b in [c.before.binder(), c.after.binder()].into_iter().flatten() {
            if !out.contains(&b) {
                out.push(b);
            }
        }
    }
    out
}

/// Ids of the variable uses inside the bounds of `bindings`.
fn uses_in(bindings: &[Binding]) -> HashSet<NodeId> {
    let mut out = HashSet::new();
    for b in bindings {
        b.bound.for_each(&mut |e| {
            if matches!(e.kind, ExpKind::Var(_)) {
                out.insert(e.id);
            }
        });
    }
    out
}

impl CodeTool for MoveDefinitions {
    fn name(&self) -> &'static str {
        "Move Definitions"
    }
    fn key(&self) -> &'static str {
        "move_definitions"
    }
    fn requirements(&self) -> Requirements {
        MOVE
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        let p = &st.code;
        MOVE.activation(
            &c,
            |c| {
                !nested_items(c)
                    && c.pats.iter().chain(&c.defs).all(|s| source_of(p, &s.path).is_some())
                    && c.targets.iter().all(|t| placement_of(p, t).is_some())
            },
            |_| self.plan(st).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let plan = self.plan(st).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let p = &st.code;
        let map = resolve(p);
        let (q, moved) = build_move(p, &plan, &plan.sources).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let names = pat_names(&moved);
        let plain = TransformResult::checked(format!("Move {names}"), p, q.clone());
        let conflicts = conflicts_of(&plain);
        let mut out = vec![plain];
        if conflicts.is_empty() {
            return Ok(out);
        }
        let mut seen: HashSet<String> = HashSet::from([print(&q), print(p)]);
        let moved_binders = binder_ids(&moved);

        for b in conflict_binders(&conflicts) {
            let Some((v, old, new)) = rename_variant(p, &q, &map, b) else {
                continue;
            };
            let what = if moved_binders.contains(&b) {
                format!("Move {names}, renaming it to {new}")
            } else {
                format!("Move {names}, renaming the other {old} to {new}")
            };
            let r = TransformResult::checked(what, p, v);
            if r.safety.is_safe() && seen.insert(print(&r.code)) {
                out.push(r);
            }
        }

        if let Some(r) = lift_dependencies(p, &plan, &names) {
            if seen.insert(print(&r.code)) {
                out.push(r);
            }
        }

        if let Some(r) = invert(p, &map, &plan, &q, &moved, &conflicts, &names) {
            if seen.insert(print(&r.code)) {
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// Also moves the definitions that the moved bounds depend on and that
/// would otherwise end up after them.
fn lift_dependencies(p: &Program, plan: &MovePlan, names: &str) -> Option<TransformResult> {
    let mut sources = plan.sources.clone();
    let mut lifted = Vec::new();
    for _ in 0..p.defs.len() + 8 {
        let (q, moved) = build_move(p, plan, &sources)?;
        let r = TransformResult::checked("", p, q);
        let inside = uses_in(&moved);
        let mut added = false;
        for c in conflicts_of(&r) {
            let Some(b) = c.before.binder() else { continue };
            if !inside.contains(&c.use_id) {
                continue;
            }
            let owner = owner_of_binder(p, b)?;
            if sources.iter().any(|s| s.def() == owner) {
                return None;
            }
            let owner_path = path_of(p, owner)?;
            let src = source_of(p, &owner_path)?;
            if placement_inside(p, &plan.placement, &owner_path) {
                return None;
            }
            lifted.push(node_at(p, &owner_path).ok()?.as_binding().map(|(x, _)| x.clone())?);
            sources.push(src);
            added = true;
        }
        if !added {
            if lifted.is_empty() || !r.safety.is_safe() {
                return None;
            }
            let extra: Vec<String> = lifted.iter().map(crate::syntax::print::print_pat).collect();
            return Some(TransformResult {
                description: format!("Move {names} together with {}", extra.join(" ")),
                ..r
            });
        }
        sources.sort_by_key(|s| match s {
            Source::Def(d) => doc_pos(p, *d),
            Source::PatVar { var, .. } => doc_pos(p, *var),
        });
    }
    None
}

/// Operands of a binary arithmetic application.
fn arith(e: &Exp) -> Option<(&str, &Exp, &Exp)> {
    let ExpKind::App { head, args, .. } = &e.kind else {
        return None;
    };
    let op = head.as_var()?;
    if !matches!(op, "+" | "-" | "*" | "/") || args.len() != 2 {
        return None;
    }
    Some((op, &args[0], &args[1]))
}

/// The expression bound to each variable of a definition, when the pattern
/// and bound line up.
fn components<'a>(pat: &'a Pat, bound: &'a Exp) -> Vec<(&'a Pat, &'a Exp)> {
    match (&pat.kind, &bound.kind) {
        (PatKind::Var(_), _) => vec![(pat, bound)],
        (
            PatKind::List {
                elems: ps, tail: None, ..
            },
            ExpKind::List {
                elems: es, tail: None, ..
            },
        ) if ps.len() == es.len() => ps.iter().zip(es).flat_map(|(x, e)| components(x, e)).collect(),
        _ => Vec::new(),
    }
}

/// Evaluates arithmetic over numbers and top-level variables of `p`.
fn eval(p: &Program, map: &BindingMap, e: &Exp, depth: usize) -> Option<f64> {
    if depth > 64 {
        return None;
    }
    match &e.kind {
        ExpKind::Num(n) => Some(n.value),
        ExpKind::Var(_) => {
            let b = map.use_by_id(e.id)?.res.binder()?;
            let owner = owner_of_binder(p, b)?;
            let d = &p.defs[def_index(p, owner)?];
            let (_, c) = components(&d.pat, &d.bound).into_iter().find(|(x, _)| x.id == b)?;
            eval(p, map, c, depth + 1)
        }
        _ => {
            let (op, a, b) = arith(e)?;
            let (a, b) = (eval(p, map, a, depth + 1)?, eval(p, map, b, depth + 1)?);
            let v = match op {
                "+" => a + b,
                "-" => a - b,
                "*" => a * b,
                _ if b != 0.0 => a / b,
                _ => return None,
            };
            v.is_finite().then_some(v)
        }
    }
}

/// Solves `m = (op b c)` for `b` (when `first`) or `c`.
fn solve(op: &str, first: bool) -> (&'static str, bool) {
    // (operator, whether m comes first in the new application)
    match (op, first) {
        ("+", _) => ("-", true),
        ("-", true) => ("+", false),
        ("-", false) => ("-", false),
        ("*", _) => ("/", true),
        ("/", true) => ("*", false),
        _ => ("/", false),
    }
}

/// Moves definitions above the ones they depend on by turning the moved
/// variables into constants and solving the dependencies for them instead.
fn invert(
    p: &Program,
    map: &BindingMap,
    plan: &MovePlan,
    q: &Program,
    moved: &[Binding],
    conflicts: &[Conflict],
    names: &str,
) -> Option<TransformResult> {
    if !matches!(plan.placement, Placement::TopLevel { .. })
        || plan.sources.iter().any(|s| def_index(p, s.def()).is_none())
    {
        return None;
    }
    let inside = uses_in(moved);
    let deps: Vec<&Conflict> = conflicts.iter().filter(|c| inside.contains(&c.use_id)).collect();
    if deps.is_empty() {
        return None;
    }
    let mut code = q.clone();
    let mut solved_vars = Vec::new();
    let mut used_moved = HashSet::new();
    let mut edits: Vec<(NodeId, Exp)> = Vec::new();
    for c in &deps {
        let v = c.before.binder()?;
        let owner = owner_of_binder(p, v)?;
        let di = def_index(p, owner)?;
        if solved_vars.contains(&v) {
            return None;
        }
        // The moved component that uses v directly as an operand.
        let (m_pat, e) = moved
            .iter()
            .flat_map(|b| components(&b.pat, &b.bound))
            .find(|(_, e)| arith(e).is_some_and(|(_, a, b)| a.id == c.use_id || b.id == c.use_id))?;
        if !used_moved.insert(m_pat.id) {
            return None;
        }
        let (op, a, b) = arith(e)?;
        let first = a.id == c.use_id;
        let other = if first { b } else { a };
        let mut bad = false;
        other.for_each(&mut |x| bad |= conflicts.iter().any(|k| k.use_id == x.id));
        if bad {
            return None;
        }
        let value = eval(p, map, e, 0)?;
        let d = &p.defs[di];
        let (_, old_c) = components(&d.pat, &d.bound).into_iter().find(|(x, _)| x.id == v)?;
        let (new_op, m_first) = solve(op, first);
        let m_name = m_pat.as_var()?.to_string();
        let head = Exp::new(code.fresh_id(), "", ExpKind::Var(new_op.into()));
        let m_use = Exp::new(code.fresh_id(), " ", ExpKind::Var(m_name));
        let mut o = other.clone();
        o.ws = " ".into();
        let args = if m_first { vec![m_use, o] } else { vec![o, m_use] };
        let app = Exp::new(
            code.fresh_id(),
            old_c.ws.clone(),
            ExpKind::App {
                head: Box::new(head),
                args,
                close_ws: String::new(),
            },
        );
        let lit = Exp::new(code.fresh_id(), e.ws.clone(), ExpKind::Num(NumLit::from_value(value)));
        edits.push((e.id, lit));
        edits.push((old_c.id, app));
        solved_vars.push(v);
    }
    for (id, new) in edits {
        let slot = crate::edit::find_exp_mut(&mut code, id)?;
        *slot = new;
    }
    let solved: Vec<String> = solved_vars
        .iter()
        .filter_map(|v| map.binder(*v).map(|b| b.name.clone()))
        .collect();
    let r = TransformResult::checked(format!("Move {names}, solving for {}", solved.join(" ")), p, code);
    r.safety.is_safe().then_some(r)
}

pub struct SwapDefinitions;

const SWAP: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::exactly(2),
    targets: Count::ZERO,
    branches: false,
    text: "two definitions",
};

fn swappable(p: &Program, c: &Classified) -> bool {
    if !c.pats.is_empty() || c.defs.len() != 2 {
        return false;
    }
    let (a, b) = (&c.defs[0], &c.defs[1]);
    if a.is_let != b.is_let || a.path.is_prefix_of(&b.path) || b.path.is_prefix_of(&a.path) {
        return false;
    }
    if a.is_let {
        // Neither definition may sit inside the other's let.
        let (la, lb) = (a.path.parent(), b.path.parent());
        let inside = |outer: &Option<ItemPath>, inner: &ItemPath| {
            outer
                .as_ref()
                .is_some_and(|o| o.child(Step::LetDef).child(Step::Bound).is_prefix_of(inner))
        };
        return !inside(&la, &b.path) && !inside(&lb, &a.path);
    }
    let last = p.defs.len() - 1;
    a.path.top_def() != Some(last) && b.path.top_def() != Some(last)
}

impl CodeTool for SwapDefinitions {
    fn name(&self) -> &'static str {
        "Swap Definitions"
    }
    fn key(&self) -> &'static str {
        "swap_definitions"
    }
    fn requirements(&self) -> Requirements {
        SWAP
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        SWAP.activation(&c, |c| c.pats.is_empty(), |c| swappable(&st.code, c))
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        if !swappable(&st.code, &c) {
            return Err(ToolError::NotActive(self.name().into()));
        }
        let p = &st.code;
        let mut code = p.clone();
        let (a, b) = (&c.defs[0], &c.defs[1]);
        let names: Vec<String> = [a, b]
            .iter()
            .filter_map(|s| {
                node_at(p, &s.path)
                    .ok()?
                    .as_binding()
                    .map(|(x, _)| crate::syntax::print::print_pat(x))
            })
            .collect();
        if a.is_let {
            let da = let_parts(p, a.id).expect("let definition");
            let db = let_parts(p, b.id).expect("let definition");
            set_let_parts(&mut code, a.id, db);
            set_let_parts(&mut code, b.id, da);
        } else {
            let (i, j) = (a.path.top_def().unwrap_or(0), b.path.top_def().unwrap_or(0));
            let (wi, wj) = (code.defs[i].ws.clone(), code.defs[j].ws.clone());
            code.defs.swap(i, j);
            code.defs[i].ws = wi;
            code.defs[j].ws = wj;
        }
        Ok(vec![TransformResult::checked(
            format!("Swap {}", names.join(" and ")),
            p,
            code,
        )])
    }
}

type LetParts = (bool, Pat, Exp);

fn let_parts(p: &Program, def: NodeId) -> Option<LetParts> {
    match node_at(p, &path_of(p, def)?).ok()? {
        NodeRef::LetDef(d) => Some((d.rec, d.pat.clone(), (*d.bound).clone())),
        _ => None,
    }
}

fn set_let_parts(p: &mut Program, def: NodeId, (rec, pat, bound): LetParts) {
    if let Some(e) = crate::edit::find_let_mut(p, def) {
        if let ExpKind::Let { def, .. } = &mut e.kind {
            def.rec = rec;
            let pws = std::mem::take(&mut def.pat.ws);
            let bws = std::mem::take(&mut def.bound.ws);
            def.pat = pat;
            def.pat.ws = pws;
            *def.bound = bound;
            def.bound.ws = bws;
        }
    }
}

pub struct DuplicateDefinition;

const DUPLICATE: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::at_least(1),
    targets: Count::exactly(1),
    branches: false,
    text: "one or more definitions and a target",
};

impl DuplicateDefinition {
    fn plan(&self, st: &EditorState) -> Option<(Vec<NodeId>, Placement)> {
        let c = st.classify().ok()?;
        if !c.pats.is_empty() || nested_items(&c) {
            return None;
        }
        let placement = placement_of(&st.code, c.target()?)?;
        let mut defs: Vec<NodeId> = c.defs.iter().map(|d| d.id).collect();
        defs.sort_by_key(|d| doc_pos(&st.code, *d));
        Some((defs, placement))
    }
}

impl CodeTool for DuplicateDefinition {
    fn name(&self) -> &'static str {
        "Duplicate Definition"
    }
    fn key(&self) -> &'static str {
        "duplicate_definition"
    }
    fn requirements(&self) -> Requirements {
        DUPLICATE
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        DUPLICATE.activation(
            &c,
            |c| c.pats.is_empty() && !nested_items(c),
            |_| self.plan(st).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let (defs, placement) = self.plan(st).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let p = &st.code;
        let mut code = p.clone();
        let mut taken = taken_names(p);
        let mut bindings = Vec::new();
        let mut renames = Vec::new();
        for d in defs {
            let path = path_of(p, d).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
            let node = node_at(p, &path)?;
            let (pat, bound) = node.as_binding().expect("definition");
            let col = match node {
                NodeRef::Def(x) => x.span.start.col,
                _ => node_at(p, &path.parent().expect("let"))?.span().start.col,
            };
            let mut pat = pat.clone();
            pat.for_each_mut(&mut |x| {
                x.id = code.fresh_id();
                if let PatKind::Var(n) = &mut x.kind {
                    let new = fresh_name(n, &mut taken, true);
                    renames.push(format!("{n} as {new}"));
                    *n = new;
                }
            });
            bindings.push(Binding {
                pat,
                bound: bound.clone(),
                rec: false,
                col,
            });
        }
        if !insert_bindings(&mut code, &placement, bindings) {
            return Err(ToolError::NotActive(self.name().into()));
        }
        Ok(vec![TransformResult::checked(
            format!("Duplicate {}", renames.join(", ")),
            p,
            code,
        )])
    }
}

pub struct InlineDefinition;

const INLINE: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::at_least(1),
    targets: Count::ZERO,
    branches: false,
    text: "one or more definitions or pattern variables",
};

/// A variable to inline with its definition.
struct Inlinee {
    source: Source,
    binder: NodeId,
}

fn inlinees(p: &Program, c: &Classified) -> Option<Vec<Inlinee>> {
    if nested_items(c) {
        return None;
    }
    let mut out = Vec::new();
    for s in c.pats.iter().chain(&c.defs) {
        let src = source_of(p, &s.path)?;
        if p.main_def().is_some_and(|d| d.id == src.def()) {
            return None;
        }
        let node = node_at(p, &path_of(p, src.def())?).ok()?;
        let rec = match node {
            NodeRef::Def(d) => d.rec,
            NodeRef::LetDef(d) => d.rec,
            _ => return None,
        };
        if rec {
            return None;
        }
        let binder = match &src {
            Source::Def(_) => node
                .as_binding()?
                .0
                .as_var()
                .map(|_| node.as_binding().map(|(x, _)| x.id))??,
            Source::PatVar { var, .. } => *var,
        };
        out.push(Inlinee { source: src, binder });
    }
    out.sort_by_key(|i| doc_pos(p, i.binder));
    Some(out)
}

/// Replaces every occurrence of the expression `id` by `new`, keeping the
/// leading trivia and re-indenting multi-line replacements.
fn replace_all(p: &mut Program, id: NodeId, new: &Exp) {
    for d in &mut p.defs {
        d.bound.for_each_mut(&mut |e| {
            if e.id == id {
                let mut copy = new.clone();
                copy.ws = e.ws.clone();
                reindent(&mut copy, e.span.start.col as i64 - new.span.start.col as i64);
                *e = copy;
            }
        });
    }
}

fn inline_all(p: &Program, todo: &[Inlinee]) -> Option<Program> {
    let map = resolve(p);
    let mut q = p.clone();
    for i in todo {
        let owner = path_of(&q, i.source.def())?;
        let (pat, bound) = node_at(&q, &owner).ok()?.as_binding()?;
        let (_, value) = components(pat, bound).into_iter().find(|(x, _)| x.id == i.binder)?;
        let value = value.clone();
        for u in map.uses_of(i.binder) {
            replace_all(&mut q, u.id, &value);
        }
        extract(&mut q, &i.source)?;
    }
    Some(q)
}

impl CodeTool for InlineDefinition {
    fn name(&self) -> &'static str {
        "Inline Definition"
    }
    fn key(&self) -> &'static str {
        "inline_definition"
    }
    fn requirements(&self) -> Requirements {
        INLINE
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        INLINE.activation(
            &c,
            |c| inlinees(&st.code, c).is_some(),
            |c| inlinees(&st.code, c).and_then(|t| inline_all(&st.code, &t)).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let todo = inlinees(p, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let q = inline_all(p, &todo).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(p);
        let names: Vec<String> = todo
            .iter()
            .filter_map(|i| map.binder(i.binder).map(|b| b.name.clone()))
            .collect();
        let names = names.join(" ");
        let plain = TransformResult::checked(format!("Inline {names}"), p, q);
        let conflicts = conflicts_of(&plain);
        let mut out = vec![plain];
        // Rename the inner binders that capture inlined free variables.
        let capturing: Vec<NodeId> = conflicts
            .iter()
            .filter_map(|c| c.after.binder())
            .fold(Vec::new(), |mut v, b| {
                if !v.contains(&b) {
                    v.push(b);
                }
                v
            });
        for b in capturing {
            let Some(name) = map.binder(b).map(|x| x.name.clone()) else {
                continue;
            };
            let mut taken = taken_names(p);
            let new = fresh_name(&name, &mut taken, true);
            let mut r = Renaming::default();
            r.binders.insert(b, new.clone());
            let mut renamed = p.clone();
            apply_renaming(&mut renamed, &map, &r);
            let Some(q) = inline_all(&renamed, &todo) else { continue };
            let r = TransformResult::checked(format!("Inline {names}, renaming {name} to {new}"), p, q);
            if r.safety.is_safe() {
                out.push(r);
            }
        }
        Ok(out)
    }
}
