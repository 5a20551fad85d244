//! Reference implementations used as test oracles. They share no code with
//! the library beyond the syntax tree types.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use little_core::index::{enumerate_items, enumerate_targets};
use little_core::syntax::{Exp, ExpKind, ItemPath, NodeId, Pat, PatKind, Program};

/// What a variable use refers to, by the reference resolver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefRes {
    Bound(NodeId),
    Free(String),
}

fn pat_vars(p: &Pat, out: &mut Vec<(String, NodeId)>) {
    match &p.kind {
        PatKind::Var(x) => out.push((x.clone(), p.id)),
        PatKind::List { elems, tail, .. } => {
            for e in elems {
                pat_vars(e, out);
            }
            if let Some(t) = tail {
                pat_vars(&t.node, out);
            }
        }
        _ => {}
    }
}

fn lookup(env: &[(String, NodeId)], x: &str) -> RefRes {
    env.iter()
        .rev()
        .find(|(n, _)| n == x)
        .map_or_else(|| RefRes::Free(x.to_string()), |(_, id)| RefRes::Bound(*id))
}

/// Environment-passing resolver: the innermost (last pushed) name wins.
fn walk(e: &Exp, env: &mut Vec<(String, NodeId)>, out: &mut HashMap<NodeId, RefRes>) {
    match &e.kind {
        ExpKind::Var(x) => {
            out.insert(e.id, lookup(env, x));
        }
        ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) => {}
        ExpKind::Fun { params, body, .. } => {
            let mark = env.len();
            for p in &params.pats {
                pat_vars(p, env);
            }
            walk(body, env, out);
            env.truncate(mark);
        }
        ExpKind::App { head, args, .. } => {
            walk(head, env, out);
            for a in args {
                walk(a, env, out);
            }
        }
        ExpKind::List { elems, tail, .. } => {
            for x in elems {
                walk(x, env, out);
            }
            if let Some(t) = tail {
                walk(&t.node, env, out);
            }
        }
        ExpKind::Let { def, body, .. } => {
            let mark = env.len();
            if def.rec {
                pat_vars(&def.pat, env);
                walk(&def.bound, env, out);
            } else {
                walk(&def.bound, env, out);
                pat_vars(&def.pat, env);
            }
            walk(body, env, out);
            env.truncate(mark);
        }
        ExpKind::Case {
            scrutinee, branches, ..
        } => {
            walk(scrutinee, env, out);
            for b in branches {
                let mark = env.len();
                pat_vars(&b.pat, env);
                walk(&b.body, env, out);
                env.truncate(mark);
            }
        }
    }
}

/// Resolution of every variable use in a program.
pub fn ref_resolve(p: &Program) -> HashMap<NodeId, RefRes> {
    let mut env = Vec::new();
    let mut out = HashMap::new();
    for d in &p.defs {
        if d.rec {
            pat_vars(&d.pat, &mut env);
            walk(&d.bound, &mut env, &mut out);
        } else {
            walk(&d.bound, &mut env, &mut out);
            pat_vars(&d.pat, &mut env);
        }
    }
    out
}

/// Every occurrence of every use, as (id, resolution); copied subtrees
/// repeat ids.
pub fn ref_resolve_all(p: &Program) -> Vec<(NodeId, RefRes)> {
    let mut env = Vec::new();
    let mut all = Vec::new();
    for d in &p.defs {
        if d.rec {
            pat_vars(&d.pat, &mut env);
        }
        walk_all(&d.bound, &mut env, &mut all);
        if !d.rec {
            pat_vars(&d.pat, &mut env);
        }
    }
    all
}

fn walk_all(e: &Exp, env: &mut Vec<(String, NodeId)>, occ: &mut Vec<(NodeId, RefRes)>) {
    match &e.kind {
        ExpKind::Var(x) => occ.push((e.id, lookup(env, x))),
        ExpKind::Fun { params, body, .. } => {
            let mark = env.len();
            for p in &params.pats {
                pat_vars(p, env);
            }
            walk_all(body, env, occ);
            env.truncate(mark);
        }
        ExpKind::Let { def, body, .. } => {
            let mark = env.len();
            if def.rec {
                pat_vars(&def.pat, env);
                walk_all(&def.bound, env, occ);
            } else {
                walk_all(&def.bound, env, occ);
                pat_vars(&def.pat, env);
            }
            walk_all(body, env, occ);
            env.truncate(mark);
        }
        ExpKind::Case {
            scrutinee, branches, ..
        } => {
            walk_all(scrutinee, env, occ);
            for b in branches {
                let mark = env.len();
                pat_vars(&b.pat, env);
                walk_all(&b.body, env, occ);
                env.truncate(mark);
            }
        }
        _ => {
            for c in e.children() {
                walk_all(c, env, occ);
            }
        }
    }
}

/// Uses whose binding changed from `before` to `after`, matching uses by
/// node id. `expect` maps an old binder to the binder the use should have
/// now. A free use must stay free under the same name.
pub fn binding_violations(before: &Program, after: &Program, expect: impl Fn(NodeId) -> NodeId) -> Vec<NodeId> {
    let old = ref_resolve(before);
    let mut bad = Vec::new();
    for (id, now) in ref_resolve_all(after) {
        let Some(was) = old.get(&id) else { continue };
        let ok = match (was, &now) {
            (RefRes::Bound(b), RefRes::Bound(c)) => expect(*b) == *c,
            (RefRes::Free(x), RefRes::Free(y)) => x == y,
            _ => false,
        };
        if !ok {
            bad.push(id);
        }
    }
    bad.sort();
    bad.dedup();
    bad
}

/// Free variable names of an expression.
pub fn ref_free_vars(e: &Exp) -> BTreeSet<String> {
    let mut out = HashMap::new();
    walk(e, &mut Vec::new(), &mut out);
    let mut names = BTreeSet::new();
    for r in out.values() {
        if let RefRes::Free(x) = r {
            names.insert(x.clone());
        }
    }
    names
}

/// Expression and pattern nodes in a tree.
pub fn count_nodes(e: &Exp) -> usize {
    fn pats(p: &Pat) -> usize {
        1 + match &p.kind {
            PatKind::List { elems, tail, .. } => {
                elems.iter().map(pats).sum::<usize>() + tail.as_ref().map_or(0, |t| pats(&t.node))
            }
            _ => 0,
        }
    }
    1 + match &e.kind {
        ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => 0,
        ExpKind::Fun { params, body, .. } => params.pats.iter().map(pats).sum::<usize>() + count_nodes(body),
        ExpKind::App { head, args, .. } => count_nodes(head) + args.iter().map(count_nodes).sum::<usize>(),
        ExpKind::List { elems, tail, .. } => {
            elems.iter().map(count_nodes).sum::<usize>() + tail.as_ref().map_or(0, |t| count_nodes(&t.node))
        }
        ExpKind::Let { def, body, .. } => pats(&def.pat) + count_nodes(&def.bound) + count_nodes(body),
        ExpKind::Case {
            scrutinee, branches, ..
        } => {
            count_nodes(scrutinee)
                + branches
                    .iter()
                    .map(|b| pats(&b.pat) + count_nodes(&b.body))
                    .sum::<usize>()
        }
    }
}

/// Owner, z and rows as (line, lo, hi).
type Shape = (String, u32, Vec<(u32, f64, f64)>);

/// A candidate under the hover oracle: owner string, stacking, area, order.
struct Candidate {
    owner: String,
    z: u32,
    area: f64,
    order: usize,
}

/// Hover computed directly from spans and gap positions: every item and
/// gap covering the point, ranked by stacking order, then area, then
/// enumeration order.
pub struct HoverOracle {
    widths: Vec<u32>,
    max_w: f64,
    shapes: Vec<Shape>,
}

impl HoverOracle {
    pub fn new(p: &Program, text: &str) -> Self {
        let widths: Vec<u32> = text.split('\n').map(|l| l.chars().count() as u32).collect();
        let max_w = widths.iter().copied().max().unwrap_or(0) as f64;
        let mut shapes = Vec::new();
        for it in enumerate_items(p) {
            let (s, e) = (it.span.start, it.span.end);
            let mut rows = Vec::new();
            for line in s.line..=e.line {
                let lo = if line == s.line { s.col as f64 } else { 0.0 };
                let hi = if line == e.line {
                    e.col as f64
                } else {
                    widths[line as usize - 1] as f64
                };
                if hi > lo {
                    rows.push((line, lo, hi));
                }
            }
            if !rows.is_empty() {
                shapes.push((it.path.to_string(), 2 * it.path.depth() as u32, rows));
            }
        }
        let targets = enumerate_targets(p);
        let starts: Vec<(u32, u32)> = targets.iter().map(|t| (t.start.line, t.start.col)).collect();
        for t in &targets {
            let (s, e) = (t.start, t.end);
            let pad = |c: u32| if c == 0 { -0.5 } else { c as f64 };
            let mut rows = Vec::new();
            if s.line == e.line {
                if s.col == e.col {
                    if s.col == 0 {
                        rows.push((s.line, -0.5, 0.0));
                    } else {
                        rows.push((s.line, s.col as f64 - 0.25, s.col as f64 + 0.25));
                    }
                } else {
                    rows.push((s.line, pad(s.col), e.col as f64));
                }
            } else {
                rows.push((s.line, pad(s.col), max_w.max(s.col as f64 + 0.5)));
                for line in s.line + 1..e.line {
                    rows.push((line, -0.5, max_w));
                }
                // The first half of a split gap stops where the second
                // half begins.
                let split = e.col == 0 && starts.contains(&(e.line, e.col));
                if !split {
                    rows.push((e.line, -0.5, e.col as f64));
                }
            }
            let depth = t.parent.as_ref().map_or(0, ItemPath::depth) as u32;
            shapes.push((t.id.to_string(), 2 * (depth + 1) + 1, rows));
        }
        HoverOracle { widths, max_w, shapes }
    }

    pub fn max_width(&self) -> f64 {
        self.max_w
    }

    pub fn lines(&self) -> u32 {
        self.widths.len() as u32
    }

    pub fn at(&self, line: u32, col: f64) -> Option<String> {
        let mut best: Option<Candidate> = None;
        for (order, (owner, z, rows)) in self.shapes.iter().enumerate() {
            if !rows.iter().any(|(l, lo, hi)| *l == line && *lo <= col && col < *hi) {
                continue;
            }
            let area = rows.iter().map(|(_, lo, hi)| hi - lo).sum::<f64>();
            let c = Candidate {
                owner: owner.clone(),
                z: *z,
                area,
                order,
            };
            let better = match &best {
                None => true,
                Some(b) => c.z > b.z || (c.z == b.z && (c.area < b.area || (c.area == b.area && c.order < b.order))),
            };
            if better {
                best = Some(c);
            }
        }
        best.map(|c| c.owner)
    }
}

/// Drives randomly chosen selections through the catalog and checks each
/// result against the reference resolver.
pub mod drive {
    use little_core::index::{enumerate_items, enumerate_targets, Item, Target};
    use little_core::syntax::{parse, print, ExpKind, ItemKind, ItemPath, NodeId, NodeRef, Program, Step};
    use little_core::tool::{ActiveState, CodeTool, EditorState, Options, Selection, TransformResult, UnsafeReason};
    use rand::seq::IndexedRandom;
    use rand::Rng;

    use super::binding_violations;

    fn items_of(p: &Program, kind: ItemKind) -> Vec<Item> {
        enumerate_items(p).into_iter().filter(|i| i.kind == kind).collect()
    }

    fn pick_target(targets: &[Target], rng: &mut impl Rng, parent: Option<&ItemPath>) -> Option<Selection> {
        let pool: Vec<&Target> = targets
            .iter()
            .filter(|t| parent.is_none() || t.parent.as_ref() == parent)
            .collect();
        pool.choose(rng).map(|t| Selection::Target(t.id.clone()))
    }

    fn item(i: &Item) -> Selection {
        Selection::Item(i.path.clone())
    }

    /// A random selection shaped like what some tool expects.
    pub fn random_selections(p: &Program, rng: &mut impl Rng) -> Vec<Selection> {
        let all = enumerate_items(p);
        let targets = enumerate_targets(p);
        let exps = items_of(p, ItemKind::Exp);
        let pats = items_of(p, ItemKind::Pat);
        let defs = items_of(p, ItemKind::Def);
        let mut out = Vec::new();
        match rng.random_range(0..9) {
            0 => out.extend(all.choose(rng).map(item)),
            1 => {
                let pool = match rng.random_range(0..3) {
                    0 => &defs,
                    1 => &pats,
                    _ => &exps,
                };
                out.extend(pool.choose_multiple(rng, 2).map(item));
            }
            2 | 3 => {
                // Siblings under a list or call, plus a gap among them.
                let sib: Vec<&Item> = exps
                    .iter()
                    .filter(|i| matches!(i.path.last(), Some(Step::Elem(_) | Step::Arg(_) | Step::Param(_))))
                    .collect();
                if let Some(first) = sib.choose(rng) {
                    let parent = first.path.parent();
                    let same: Vec<&&Item> = sib.iter().filter(|i| i.path.parent() == parent).collect();
                    let k = rng.random_range(1..=2.min(same.len()));
                    out.extend(same.choose_multiple(rng, k).map(|i| item(i)));
                    out.extend(pick_target(&targets, rng, parent.as_ref()));
                }
            }
            4 => {
                let consts: Vec<&Item> = exps
                    .iter()
                    .filter(|i| matches!(node(p, i), Some(ExpKind::Num(_))))
                    .collect();
                out.extend(consts.choose_multiple(rng, 2).map(|i| item(i)));
                if rng.random_bool(0.3) {
                    out.extend(pick_target(&targets, rng, None));
                }
            }
            5 => {
                let params: Vec<&Item> = pats
                    .iter()
                    .filter(|i| matches!(i.path.last(), Some(Step::Param(_))))
                    .collect();
                if let Some(x) = params.choose(rng) {
                    let fun = x.path.parent();
                    out.push(item(x));
                    out.extend(pick_target(&targets, rng, fun.as_ref()));
                }
            }
            6 => {}
            7 => {
                let k = rng.random_range(1..=2);
                out.extend(defs.choose_multiple(rng, k).map(item));
                out.extend(pick_target(&targets, rng, None));
            }
            _ => {
                let k = rng.random_range(1..=3);
                out.extend(exps.choose_multiple(rng, k).map(item));
                if rng.random_bool(0.5) {
                    out.extend(pick_target(&targets, rng, None));
                }
            }
        }
        out
    }

    fn node<'a>(p: &'a Program, i: &Item) -> Option<&'a ExpKind> {
        match little_core::syntax::node_at(p, &i.path).ok()? {
            NodeRef::Exp(e) => Some(&e.kind),
            _ => None,
        }
    }

    /// Counts of checked results.
    #[derive(Default, Debug, Clone, Copy)]
    pub struct Tally {
        pub safe: usize,
        pub unsafe_: usize,
    }

    const NAMES: &[&str] = &["a", "x", "w", "fresh9", "len"];

    /// Runs `tool` if active and checks every result. Returns the tally or
    /// a description of the first violation.
    pub fn check_tool(tool: &dyn CodeTool, st: &EditorState, rng: &mut impl Rng) -> Result<Tally, String> {
        let mut tally = Tally::default();
        if tool.active(st) != ActiveState::Active {
            return Ok(tally);
        }
        let opts = if tool.takes_string_option() {
            Options::Str(NAMES.choose(rng).expect("names").to_string())
        } else {
            Options::None
        };
        let results = match little_core::tool::run(tool, st, &opts) {
            Ok(r) => r,
            Err(e) => {
                let sels: Vec<String> = st.selections().iter().map(|s| s.to_string()).collect();
                return Err(format!(
                    "{} failed while active: {e}\n{}\nselections: {sels:?}",
                    tool.key(),
                    print(&st.code)
                ));
            }
        };
        let swap = if tool.key() == "swap_usages" {
            let c = st.classify().map_err(|e| e.to_string())?;
            Some((c.pats[0].id, c.pats[1].id))
        } else {
            None
        };
        let expect = |b: NodeId| match swap {
            Some((x, y)) if b == x => y,
            Some((x, y)) if b == y => x,
            _ => b,
        };
        for r in &results {
            check_result(tool.key(), &st.code, r, results.len(), &expect).map_err(|e| {
                let sels: Vec<String> = st.selections().iter().map(|s| s.to_string()).collect();
                format!("{e}\nselections: {sels:?}")
            })?;
            if r.safety.is_safe() {
                tally.safe += 1;
            } else {
                tally.unsafe_ += 1;
            }
        }
        Ok(tally)
    }

    fn check_result(
        key: &str,
        before: &Program,
        r: &TransformResult,
        siblings: usize,
        expect: &impl Fn(NodeId) -> NodeId,
    ) -> Result<(), String> {
        let text = print(&r.code);
        let ctx = || {
            format!(
                "{key}: {}\n--- before\n{}\n--- after\n{text}",
                r.description,
                print(before)
            )
        };
        parse(&text).map_err(|e| format!("result does not parse ({e}) {}", ctx()))?;
        if before.main_def().is_some() && r.code.defs.last().and_then(|d| d.name()) != Some("main") {
            return Err(format!("main is no longer last: {}", ctx()));
        }
        let bad = binding_violations(before, &r.code, expect);
        match &r.safety {
            little_core::tool::Safety::Safe => {
                if !bad.is_empty() {
                    return Err(format!("Safe result changes bindings of {bad:?}: {}", ctx()));
                }
            }
            little_core::tool::Safety::Unsafe(reasons) => {
                for reason in reasons {
                    let confirmed = match reason {
                        UnsafeReason::Capture(cs) => cs.iter().all(|c| bad.contains(&c.use_id)),
                        UnsafeReason::EscapingFunction { name } => escapes(before, name),
                        UnsafeReason::AmbiguousActuals { .. } => siblings >= 2,
                    };
                    if !confirmed {
                        return Err(format!("unconfirmed reason {reason}: {}", ctx()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether some use of `name` is not the head of a call.
    fn escapes(p: &Program, name: &str) -> bool {
        enumerate_items(p)
            .iter()
            .any(|i| matches!(node(p, i), Some(ExpKind::Var(x)) if x == name) && i.path.last() != Some(Step::Arg(0)))
    }
}
