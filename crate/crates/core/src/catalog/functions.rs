//! Tools that create functions or change their parameter lists.

use std::collections::{BTreeSet, HashSet};

use crate::binding::{resolve, BindingMap};
use crate::edit::{
    find_exp, find_exp_mut, fresh_name, insert_def, pvar, refresh_ids, reindent, replace_exp, taken_names, unwrap_let,
    var,
};
use crate::index::{Side, Target};
use crate::syntax::{
    canonical_exp, canonical_pat, node_at, path_of, Def, Exp, ExpKind, ItemPath, NodeId, NodeRef, Params, Pat, PatKind,
    Program, Span, Step,
};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, ToolError, TransformResult,
    UnsafeReason,
};

use super::names::arg_param_name;
use super::place::{binding_mut, common_ancestor};

/// A definition whose bound is a lambda.
#[derive(Clone, Debug)]
struct FnSite {
    binder: NodeId,
    name: String,
    fun: NodeId,
    fun_path: ItemPath,
}

fn fn_site_at(p: &Program, fun_path: &ItemPath) -> Option<FnSite> {
    if fun_path.last() != Some(Step::Bound) {
        return None;
    }
    let fun = node_at(p, fun_path).ok()?.as_exp()?;
    if !matches!(fun.kind, ExpKind::Fun { .. }) {
        return None;
    }
    let owner = node_at(p, &fun_path.parent()?).ok()?;
    let (pat, _) = owner.as_binding()?;
    Some(FnSite {
        binder: pat.id,
        name: pat.as_var()?.to_string(),
        fun: fun.id,
        fun_path: fun_path.clone(),
    })
}

fn fn_site_of_binder(p: &Program, binder: NodeId) -> Option<FnSite> {
    let pat_path = path_of(p, binder)?;
    if pat_path.last() != Some(Step::Pat) {
        return None;
    }
    fn_site_at(p, &pat_path.parent()?.child(Step::Bound))
}

/// Calls `(f ...)` of a function, and whether it is also used some other way.
fn calls_of(p: &Program, map: &BindingMap, binder: NodeId) -> (Vec<NodeId>, bool) {
    let mut calls = Vec::new();
    let mut escaping = false;
    for u in map.uses_of(binder) {
        match path_of(p, u.id) {
            Some(q) if q.last() == Some(Step::Arg(0)) => {
                let app = q.parent().and_then(|a| node_at(p, &a).ok().map(|n| n.id()));
                calls.extend(app);
            }
            _ => escaping = true,
        }
    }
    (calls, escaping)
}

fn escaping_reason(escaping: bool, name: &str) -> Vec<UnsafeReason> {
    if escaping {
        vec![UnsafeReason::EscapingFunction { name: name.into() }]
    } else {
        Vec::new()
    }
}

fn call_args_mut(p: &mut Program, app: NodeId) -> Option<&mut Vec<Exp>> {
    match &mut find_exp_mut(p, app)?.kind {
        ExpKind::App { args, .. } => Some(args),
        _ => None,
    }
}

fn fun_params_mut(p: &mut Program, fun: NodeId) -> Option<&mut Params> {
    match &mut find_exp_mut(p, fun)?.kind {
        ExpKind::Fun { params, .. } => Some(params),
        _ => None,
    }
}

/// Lays out a parameter list: parenthesized unless there is exactly one
/// simple pattern, single spaces between patterns.
fn set_params(params: &mut Params, mut pats: Vec<Pat>) {
    for (i, x) in pats.iter_mut().enumerate() {
        x.ws = if i == 0 { String::new() } else { " ".into() };
    }
    if pats.len() == 1 && matches!(pats[0].kind, PatKind::Var(_)) && params.paren.is_none() {
        params.pats = pats;
        return;
    }
    if params.paren.is_none() {
        params.paren = Some((String::new(), String::new()));
    }
    params.pats = pats;
}

/// Turns the bound of definition `def` into `(\(params) bound)` and every
/// use of its variable into a call with `actuals`. No parameters gives a
/// thunk over `_` called with `[]`. With `keep_ids` the arguments of the
/// first call keep their node ids, so their variables are checked there.
fn abstract_def(
    q: &mut Program,
    map: &BindingMap,
    def: NodeId,
    mut params: Vec<Pat>,
    mut actuals: Vec<Exp>,
    keep_ids: bool,
) -> Option<()> {
    if params.is_empty() {
        params.push(pvar(q, "_"));
        actuals.push(Exp::new(
            q.fresh_id(),
            "",
            ExpKind::List {
                elems: Vec::new(),
                tail: None,
                close_ws: String::new(),
            },
        ));
    }
    let fun_id = q.fresh_id();
    let (pat, bound) = binding_mut(q, def)?;
    let binder = pat.id;
    let mut body = std::mem::replace(bound, Exp::new(fun_id, "", ExpKind::Bool(false)));
    let ws = std::mem::take(&mut body.ws);
    body.ws = match crate::edit::indent_after(&ws) {
        Some(col) => format!("\n{}", " ".repeat(col)),
        None => " ".into(),
    };
    let mut ps = Params {
        paren: if params.len() == 1 {
            None
        } else {
            Some((String::new(), String::new()))
        },
        pats: Vec::new(),
    };
    set_params(&mut ps, params);
    *bound = Exp::new(
        fun_id,
        ws,
        ExpKind::Fun {
            kw_ws: String::new(),
            params: ps,
            body: Box::new(body),
            close_ws: String::new(),
        },
    );
    for (k, u) in map.uses_of(binder).into_iter().enumerate() {
        let mut args = Vec::new();
        for a in &actuals {
            let mut a = a.clone();
            a.ws = " ".into();
            if !(keep_ids && k == 0) {
                refresh_ids(q, &mut a);
            }
            args.push(a);
        }
        let head = Exp::new(u.id, "", ExpKind::Var(u.name.clone()));
        let app = Exp::new(
            q.fresh_id(),
            "",
            ExpKind::App {
                head: Box::new(head),
                args,
                close_ws: String::new(),
            },
        );
        replace_exp(q, u.id, app);
    }
    Some(())
}

fn simple_var_def(p: &Program, path: &ItemPath) -> Option<NodeId> {
    let node = node_at(p, path).ok()?;
    let (pat, _) = node.as_binding()?;
    pat.as_var()?;
    match node {
        NodeRef::Def(d) if !d.rec && path.top_def()? + 1 < p.defs.len() => Some(d.id),
        NodeRef::LetDef(d) if !d.rec => Some(d.id),
        _ => None,
    }
}

pub struct CreateFunctionFromDefinition;

const FROM_DEF: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::exactly(1),
    targets: Count::ZERO,
    branches: false,
    text: "one definition",
};

enum Abstracted {
    /// `(let x c ...)`: the let is removed and `x` becomes a parameter.
    Let { def: NodeId, pat: Pat, value: Exp },
    /// Any other constant, replaced by a new variable.
    Const { exp: Exp, name: String },
}

impl CodeTool for CreateFunctionFromDefinition {
    fn name(&self) -> &'static str {
        "Create Function from Definition"
    }
    fn key(&self) -> &'static str {
        "create_function_from_definition"
    }
    fn requirements(&self) -> Requirements {
        FROM_DEF
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        FROM_DEF.activation(
            &c,
            |c| c.pats.is_empty() && c.defs.iter().all(|d| simple_var_def(&st.code, &d.path).is_some()),
            |_| true,
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let path = &c
            .defs
            .first()
            .ok_or_else(|| ToolError::NotActive(self.name().into()))?
            .path;
        let def = simple_var_def(p, path).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let (_, bound) = node_at(p, path)?.as_binding().expect("definition");
        let map = resolve(p);
        let mut taken = taken_names(p);

        let mut let_bound = HashSet::new();
        bound.for_each(&mut |e| {
            if let ExpKind::Let { def, .. } = &e.kind {
                if def.pat.as_var().is_some() && def.bound.as_num().is_some() {
                    let_bound.insert(def.bound.id);
                }
            }
        });
        let mut all = Vec::new();
        bound.for_each(&mut |e| match &e.kind {
            ExpKind::Let { def, .. } if let_bound.contains(&def.bound.id) => {
                all.push(Abstracted::Let {
                    def: def.id,
                    pat: def.pat.clone(),
                    value: (*def.bound).clone(),
                });
            }
            ExpKind::Num(_) if !let_bound.contains(&e.id) => {
                let base = path_of(p, e.id)
                    .and_then(|q| arg_param_name(p, &map, &q))
                    .unwrap_or_else(|| "n".into());
                all.push(Abstracted::Const {
                    exp: e.clone(),
                    name: fresh_name(&base, &mut taken, false),
                });
            }
            _ => {}
        });
        let named: Vec<&Abstracted> = all
            .iter()
            .filter(|a| matches!(a, Abstracted::Let { value, .. } if !value.as_num().is_some_and(|n| n.frozen)))
            .collect();

        let mut out = Vec::new();
        for (label, chosen) in [
            ("all constants", all.iter().collect::<Vec<_>>()),
            ("named constants", named),
        ] {
            let mut q = p.clone();
            let mut params = Vec::new();
            let mut actuals = Vec::new();
            for a in chosen {
                match a {
                    Abstracted::Let { def, pat, value } => {
                        unwrap_let(&mut q, *def);
                        let mut x = pat.clone();
                        x.ws.clear();
                        params.push(x);
                        actuals.push(value.clone());
                    }
                    Abstracted::Const { exp, name } => {
                        let v = var(&mut q, name);
                        replace_exp(&mut q, exp.id, v);
                        params.push(pvar(&mut q, name));
                        actuals.push(exp.clone());
                    }
                }
            }
            let names: Vec<String> = params.iter().map(canonical_pat).collect();
            if abstract_def(&mut q, &map, def, params, actuals, false).is_none() {
                continue;
            }
            let what = if names.is_empty() {
                format!("Function over no arguments ({label})")
            } else {
                format!("Function over {} ({label})", names.join(" "))
            };
            out.push(TransformResult::checked(what, p, q));
        }
        Ok(out)
    }
}

fn nested(c: &Classified) -> bool {
    c.exps.iter().enumerate().any(|(i, a)| {
        c.exps
            .iter()
            .enumerate()
            .any(|(j, b)| i != j && a.path.is_prefix_of(&b.path))
    })
}

fn is_head(path: &ItemPath) -> bool {
    path.last() == Some(Step::Arg(0))
}

/// Innermost simple definition around all selected expressions.
fn enclosing_def(p: &Program, c: &Classified) -> Option<NodeId> {
    let paths: Vec<&ItemPath> = c.exps.iter().map(|e| &e.path).collect();
    let mut cur = common_ancestor(&paths);
    loop {
        if let Ok(NodeRef::Def(_) | NodeRef::LetDef(_)) = node_at(p, &cur) {
            return simple_var_def(p, &cur);
        }
        cur = cur.parent()?;
        if cur.depth() == 0 {
            return None;
        }
    }
}

fn param_base(p: &Program, map: &BindingMap, path: &ItemPath) -> String {
    if let Some(n) = arg_param_name(p, map, path) {
        return n;
    }
    match node_at(p, path) {
        Ok(NodeRef::Exp(e)) => e.as_var().unwrap_or("x").to_string(),
        _ => "x".into(),
    }
}

pub struct CreateFunctionFromArguments;

const FROM_ARGS: Requirements = Requirements {
    exps: Count::at_least(1),
    defs: Count::ZERO,
    targets: Count::ZERO,
    branches: false,
    text: "one or more expressions inside one definition",
};

impl CodeTool for CreateFunctionFromArguments {
    fn name(&self) -> &'static str {
        "Create Function from Arguments"
    }
    fn key(&self) -> &'static str {
        "create_function_from_arguments"
    }
    fn requirements(&self) -> Requirements {
        FROM_ARGS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        FROM_ARGS.activation(
            &c,
            |c| !nested(c) && !c.exps.iter().any(|e| is_head(&e.path)),
            |c| enclosing_def(&st.code, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let def = enclosing_def(p, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(p);
        let mut taken = taken_names(p);
        let mut q = p.clone();
        let mut params = Vec::new();
        let mut actuals = Vec::new();
        for e in &c.exps {
            let name = fresh_name(&param_base(p, &map, &e.path), &mut taken, false);
            let v = var(&mut q, &name);
            let old = replace_exp(&mut q, e.id, v).expect("selected expression");
            params.push(pvar(&mut q, &name));
            actuals.push(old);
        }
        let names: Vec<String> = params.iter().map(canonical_pat).collect();
        abstract_def(&mut q, &map, def, params, actuals, true)
            .ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        Ok(vec![TransformResult::checked(
            format!("Function over {}", names.join(" ")),
            p,
            q,
        )])
    }
}

/// Anti-unification of several expressions: every position where the
/// inputs differ becomes a hole. Holes with identical contents across all
/// inputs share a parameter.
struct Generalized {
    /// Subtrees at each hole, one per input, in pre-order of the holes.
    holes: Vec<Vec<Exp>>,
    /// Parameter index of each hole.
    param_of: Vec<usize>,
    params: usize,
    /// The first input with every hole replaced by its parameter slot.
    template: Exp,
}

fn same_node(a: &Exp, b: &Exp) -> bool {
    use ExpKind::*;
    match (&a.kind, &b.kind) {
        (Num(x), Num(y)) => x.text == y.text && x.frozen == y.frozen && x.range == y.range,
        (Str(x), Str(y)) => x.content == y.content,
        (Bool(x), Bool(y)) => x == y,
        (Var(x), Var(y)) => x == y,
        (Fun { params: p1, .. }, Fun { params: p2, .. }) => {
            p1.pats.len() == p2.pats.len()
                && p1
                    .pats
                    .iter()
                    .zip(&p2.pats)
                    .all(|(x, y)| canonical_pat(x) == canonical_pat(y))
        }
        (App { args: a1, .. }, App { args: a2, .. }) => a1.len() == a2.len(),
        (
            List {
                elems: e1, tail: t1, ..
            },
            List {
                elems: e2, tail: t2, ..
            },
        ) => e1.len() == e2.len() && t1.is_some() == t2.is_some(),
        (Let { def: d1, .. }, Let { def: d2, .. }) => {
            d1.rec == d2.rec && canonical_pat(&d1.pat) == canonical_pat(&d2.pat)
        }
        (Case { branches: b1, .. }, Case { branches: b2, .. }) => {
            b1.len() == b2.len()
                && b1
                    .iter()
                    .zip(b2)
                    .all(|(x, y)| canonical_pat(&x.pat) == canonical_pat(&y.pat))
        }
        _ => false,
    }
}

fn collect_holes<'a>(inputs: &[&'a Exp], out: &mut Vec<Vec<&'a Exp>>) {
    let first = inputs[0];
    if !inputs[1..].iter().all(|e| same_node(first, e)) {
        out.push(inputs.to_vec());
        return;
    }
    let kids: Vec<Vec<&Exp>> = inputs.iter().map(|e| e.children()).collect();
    for i in 0..kids[0].len() {
        let column: Vec<&Exp> = kids.iter().map(|k| k[i]).collect();
        collect_holes(&column, out);
    }
}

/// Placeholder name for a hole in a template; never a valid identifier.
const HOLE: &str = "#";

fn generalize(inputs: &[&Exp]) -> Generalized {
    let mut groups = Vec::new();
    collect_holes(inputs, &mut groups);
    let mut keys: Vec<Vec<String>> = Vec::new();
    let mut param_of = Vec::new();
    for g in &groups {
        let key: Vec<String> = g.iter().map(|e| canonical_exp(e)).collect();
        match keys.iter().position(|k| *k == key) {
            Some(i) => param_of.push(i),
            None => {
                param_of.push(keys.len());
                keys.push(key);
            }
        }
    }
    let mut template = inputs[0].clone();
    let roots: Vec<NodeId> = groups.iter().map(|g| g[0].id).collect();
    template.for_each_mut(&mut |e| {
        if roots.contains(&e.id) {
            *e = Exp::new(e.id, e.ws.clone(), ExpKind::Var(HOLE.into()));
        }
    });
    Generalized {
        holes: groups
            .iter()
            .map(|g| g.iter().map(|e| (*e).clone()).collect())
            .collect(),
        param_of,
        params: keys.len(),
        template,
    }
}

/// Number of expression and pattern nodes in a tree.
pub fn node_count(e: &Exp) -> usize {
    let mut n = 0;
    e.for_each(&mut |_| n += 1);
    e.clone().for_each_pat_mut(&mut |_| n += 1);
    n
}

pub struct MergeExpressions;

const MERGE: Requirements = Requirements {
    exps: Count::at_least(0),
    defs: Count::at_least(0),
    targets: Count::ZERO,
    branches: false,
    text: "two or more expressions or definitions with similar structure",
};

/// Paths of the merged expressions: the selected expressions, or the bounds
/// of the selected definitions.
fn merge_inputs(p: &Program, c: &Classified) -> Option<Vec<ItemPath>> {
    match (c.exps.is_empty(), c.defs.is_empty()) {
        (false, true) if !nested(c) && !c.exps.iter().any(|e| is_head(&e.path)) => {
            Some(c.exps.iter().map(|e| e.path.clone()).collect())
        }
        (true, false) => c
            .defs
            .iter()
            .map(|d| {
                node_at(p, &d.path).ok()?.as_binding()?;
                Some(d.path.child(Step::Bound))
            })
            .collect(),
        _ => None,
    }
}

impl MergeExpressions {
    fn plan(&self, p: &Program, c: &Classified) -> Option<(Vec<ItemPath>, Generalized)> {
        let paths = merge_inputs(p, c)?;
        if paths.len() < 2 {
            return None;
        }
        let exps: Vec<&Exp> = paths
            .iter()
            .map(|path| node_at(p, path).ok()?.as_exp())
            .collect::<Option<_>>()?;
        let g = generalize(&exps);
        (node_count(&g.template) >= 2 * g.params).then_some((paths, g))
    }
}

impl CodeTool for MergeExpressions {
    fn name(&self) -> &'static str {
        "Merge Expressions into Function"
    }
    fn key(&self) -> &'static str {
        "merge"
    }
    fn requirements(&self) -> Requirements {
        MERGE
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        if c.is_empty() {
            return ActiveState::NotYetActive;
        }
        MERGE.activation(
            &c,
            |c| merge_inputs(&st.code, c).is_some(),
            |c| self.plan(&st.code, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let (paths, g) = self
            .plan(p, &c)
            .ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(p);
        let mut taken = taken_names(p);
        let mut q = p.clone();

        // Each parameter is named after the position of its first hole.
        let mut names = vec![String::new(); g.params];
        for (h, &k) in g.holes.iter().zip(&g.param_of) {
            if names[k].is_empty() {
                let base = path_of(p, h[0].id)
                    .map(|path| param_base(p, &map, &path))
                    .unwrap_or_else(|| "x".into());
                names[k] = fresh_name(&base, &mut taken, false);
            }
        }
        let mut body = g.template.clone();
        let roots: Vec<NodeId> = g.holes.iter().map(|h| h[0].id).collect();
        body.for_each_mut(&mut |e| {
            if let Some(i) = roots.iter().position(|r| *r == e.id) {
                e.kind = ExpKind::Var(names[g.param_of[i]].clone());
            }
        });
        // The hole variables keep the ids of the first input's subtrees;
        // give them fresh ones since those subtrees move to the call.
        for r in &roots {
            let id = q.fresh_id();
            if let Some(e) = body.find_mut(*r) {
                e.id = id;
            }
        }
        let ids: Vec<NodeId> = paths
            .iter()
            .map(|path| node_at(p, path).map(|n| n.id()))
            .collect::<Result<_, _>>()?;
        let func = fresh_name("func", &mut taken, false);
        let col = find_exp(p, ids[0]).map_or(0, |e| e.span.start.col) as i64;
        let mut params = Vec::new();
        for n in &names {
            params.push(pvar(&mut q, n));
        }
        body.ws = " ".into();
        let bound = if params.is_empty() {
            reindent(&mut body, 2 - col);
            body
        } else {
            reindent(&mut body, 2 - col);
            let mut ps = Params {
                paren: if params.len() == 1 {
                    None
                } else {
                    Some((String::new(), String::new()))
                },
                pats: Vec::new(),
            };
            set_params(&mut ps, params);
            Exp::new(
                q.fresh_id(),
                " ",
                ExpKind::Fun {
                    kw_ws: String::new(),
                    params: ps,
                    body: Box::new(body),
                    close_ws: String::new(),
                },
            )
        };
        let new_def = Def {
            id: q.fresh_id(),
            ws: String::new(),
            kw_ws: String::new(),
            rec: false,
            pat: {
                let mut x = pvar(&mut q, &func);
                x.ws = " ".into();
                x
            },
            bound,
            close_ws: String::new(),
            span: Span::default(),
        };
        // Each selection becomes a call with its own hole subtrees.
        for (i, id) in ids.iter().enumerate() {
            let head = var(&mut q, &func);
            let call = if names.is_empty() {
                head
            } else {
                let mut args: Vec<Exp> = (0..g.params)
                    .map(|k| {
                        let h = g.param_of.iter().position(|x| *x == k).expect("parameter");
                        g.holes[h][i].clone()
                    })
                    .collect();
                for a in &mut args {
                    a.ws = " ".into();
                }
                Exp::new(
                    q.fresh_id(),
                    "",
                    ExpKind::App {
                        head: Box::new(head),
                        args,
                        close_ws: String::new(),
                    },
                )
            };
            replace_exp(&mut q, *id, call);
        }
        let first_def = paths.iter().filter_map(|x| x.top_def()).min().unwrap_or(0);
        insert_def(&mut q, first_def, new_def);
        let what = if names.is_empty() {
            format!("New definition {func}")
        } else {
            format!("New function {func} over {}", names.join(" "))
        };
        Ok(vec![TransformResult::checked(what, p, q)])
    }
}

/// Where a target sits in a parameter list: the lambda and the gap index.
fn param_gap(p: &Program, t: &Target) -> Option<(ItemPath, usize)> {
    let parent = t.parent.clone()?;
    let fun = node_at(p, &parent).ok()?.as_exp()?;
    let ExpKind::Fun { params, .. } = &fun.kind else {
        return None;
    };
    let n = params.pats.len();
    for a in &t.aliases {
        if a.anchor.parent().as_ref() != Some(&parent) {
            continue;
        }
        match (a.anchor.last(), a.side) {
            (Some(Step::Param(i)), Side::Before) => return Some((parent, i)),
            (Some(Step::Param(i)), Side::After) => return Some((parent, i + 1)),
            (Some(Step::Body), Side::Before) => return Some((parent, n)),
            _ => {}
        }
    }
    None
}

/// Where a target sits among the arguments of a call: the call and the gap
/// index into its argument vector.
fn arg_gap(p: &Program, t: &Target) -> Option<(ItemPath, usize)> {
    let parent = t.parent.clone()?;
    let app = node_at(p, &parent).ok()?.as_exp()?;
    if !matches!(app.kind, ExpKind::App { .. }) {
        return None;
    }
    for a in &t.aliases {
        if a.anchor.parent().as_ref() != Some(&parent) {
            continue;
        }
        match (a.anchor.last(), a.side) {
            (Some(Step::Arg(k)), Side::After) => return Some((parent, k)),
            (Some(Step::Arg(k)), Side::Before) if k >= 1 => return Some((parent, k - 1)),
            _ => {}
        }
    }
    None
}

pub struct AddArguments;

const ADD_ARGS: Requirements = Requirements {
    exps: Count::at_least(1),
    defs: Count::ZERO,
    targets: Count::exactly(1),
    branches: false,
    text: "one or more expressions in a function body and a target in its parameter list",
};

impl AddArguments {
    fn plan(&self, p: &Program, c: &Classified) -> Option<(FnSite, usize)> {
        let (fun_path, gap) = param_gap(p, c.target()?)?;
        let site = fn_site_at(p, &fun_path)?;
        let body = fun_path.child(Step::Body);
        if nested(c) || !c.exps.iter().all(|e| body.is_prefix_of(&e.path) && !is_head(&e.path)) {
            return None;
        }
        Some((site, gap))
    }
}

impl CodeTool for AddArguments {
    fn name(&self) -> &'static str {
        "Add Arguments"
    }
    fn key(&self) -> &'static str {
        "add_arguments"
    }
    fn requirements(&self) -> Requirements {
        ADD_ARGS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        ADD_ARGS.activation(
            &c,
            |c| !nested(c) && c.targets.iter().all(|t| param_gap(&st.code, t).is_some()),
            |c| self.plan(&st.code, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let (site, gap) = self
            .plan(p, &c)
            .ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(p);
        let (calls, mut escaping) = calls_of(p, &map, site.binder);
        let mut taken = taken_names(p);
        let mut q = p.clone();
        let mut new_pats = Vec::new();
        let mut actuals = Vec::new();
        for e in &c.exps {
            let name = fresh_name(&param_base(p, &map, &e.path), &mut taken, false);
            let v = var(&mut q, &name);
            actuals.push(replace_exp(&mut q, e.id, v).expect("selected expression"));
            new_pats.push(pvar(&mut q, &name));
        }
        let names: Vec<String> = new_pats.iter().map(canonical_pat).collect();
        let params = fun_params_mut(&mut q, site.fun).expect("lambda");
        let mut pats = std::mem::take(&mut params.pats);
        let tail = pats.split_off(gap.min(pats.len()));
        pats.extend(new_pats);
        pats.extend(tail);
        set_params(params, pats);
        for call in calls {
            let args = call_args_mut(&mut q, call).expect("call");
            if args.len() < gap {
                escaping = true;
                continue;
            }
            for (k, a) in actuals.iter().enumerate() {
                let mut a = a.clone();
                a.ws = " ".into();
                args.insert(gap + k, a);
            }
        }
        Ok(vec![TransformResult::checked_with(
            format!("Add {} to {}", names.join(" "), site.name),
            p,
            q,
            escaping_reason(escaping, &site.name),
            |r| r.clone(),
        )])
    }
}

/// Selected parameters of one function, by index, from either the
/// definition or a call site.
fn selected_params(p: &Program, map: &BindingMap, c: &Classified) -> Option<(FnSite, Vec<usize>, Option<NodeId>)> {
    if !c.pats.is_empty() && !c.exps.is_empty() {
        return None;
    }
    let mut site: Option<FnSite> = None;
    let mut call: Option<NodeId> = None;
    let mut idx = Vec::new();
    let same = |a: &Option<FnSite>, b: &FnSite| a.as_ref().is_none_or(|x| x.fun == b.fun);
    for s in &c.pats {
        let Some(Step::Param(i)) = s.path.last() else {
            return None;
        };
        let fs = fn_site_at(p, &s.path.parent()?)?;
        if !same(&site, &fs) {
            return None;
        }
        site = Some(fs);
        idx.push(i);
    }
    for s in &c.exps {
        let Some(Step::Arg(k)) = s.path.last() else {
            return None;
        };
        if k == 0 {
            return None;
        }
        let app_path = s.path.parent()?;
        let app = node_at(p, &app_path).ok()?.as_exp()?;
        let ExpKind::App { head, .. } = &app.kind else {
            return None;
        };
        let b = map.use_by_id(head.id)?.res.binder()?;
        let fs = fn_site_of_binder(p, b)?;
        if !same(&site, &fs) || call.is_some_and(|x| x != app.id) {
            return None;
        }
        call = Some(app.id);
        site = Some(fs);
        idx.push(k - 1);
    }
    let site = site?;
    let n = match &node_at(p, &site.fun_path).ok()?.as_exp()?.kind {
        ExpKind::Fun { params, .. } => params.pats.len(),
        _ => return None,
    };
    if idx.iter().any(|i| *i >= n) {
        return None;
    }
    idx.sort_unstable();
    idx.dedup();
    Some((site, idx, call))
}

pub struct RemoveArguments;

const REMOVE_ARGS: Requirements = Requirements {
    exps: Count::at_least(0),
    defs: Count::at_least(0),
    targets: Count::ZERO,
    branches: false,
    text: "one or more parameters, at the definition or at a call",
};

/// Caps the number of combined choices for ambiguous parameters.
const MAX_CHOICES: usize = 16;

impl CodeTool for RemoveArguments {
    fn name(&self) -> &'static str {
        "Remove Arguments"
    }
    fn key(&self) -> &'static str {
        "remove_arguments"
    }
    fn requirements(&self) -> Requirements {
        REMOVE_ARGS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        if c.is_empty() {
            return ActiveState::NotYetActive;
        }
        let map = resolve(&st.code);
        REMOVE_ARGS.activation(
            &c,
            |c| c.defs.is_empty(),
            |c| selected_params(&st.code, &map, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let map = resolve(p);
        let (site, idx, _) = selected_params(p, &map, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let (calls, escaping) = calls_of(p, &map, site.binder);
        let fun = find_exp(p, site.fun).expect("lambda");
        let ExpKind::Fun { params, .. } = &fun.kind else {
            unreachable!()
        };
        // For each removed parameter: its variables and the candidate
        // replacements for their uses.
        struct Removed {
            binders: Vec<NodeId>,
            name: String,
            choices: Vec<Option<Exp>>,
        }
        let mut removed = Vec::new();
        for &i in &idx {
            let pat = &params.pats[i];
            let binders: Vec<NodeId> = pat.vars().iter().map(|v| v.id).collect();
            let used = binders.iter().any(|b| !map.uses_of(*b).is_empty());
            let mut choices: Vec<Option<Exp>> = Vec::new();
            if used && matches!(pat.kind, PatKind::Var(_)) {
                let mut seen = BTreeSet::new();
                for call in &calls {
                    if let Some(ExpKind::App { args, .. }) = find_exp(p, *call).map(|e| &e.kind) {
                        if let Some(a) = args.get(i) {
                            if seen.insert(canonical_exp(a)) {
                                choices.push(Some(a.clone()));
                            }
                        }
                    }
                }
            }
            if choices.is_empty() {
                choices.push(None);
            }
            removed.push(Removed {
                binders,
                name: canonical_pat(pat),
                choices,
            });
        }
        let mut combos: Vec<Vec<usize>> = vec![Vec::new()];
        for r in &removed {
            let mut next = Vec::new();
            for combo in &combos {
                for k in 0..r.choices.len() {
                    if next.len() < MAX_CHOICES {
                        let mut c = combo.clone();
                        c.push(k);
                        next.push(c);
                    }
                }
            }
            combos = next;
        }
        let mut out = Vec::new();
        for combo in combos {
            let mut q = p.clone();
            let mut reasons = escaping_reason(escaping, &site.name);
            let mut notes = Vec::new();
            for (r, &k) in removed.iter().zip(&combo) {
                if r.choices.len() > 1 {
                    reasons.push(UnsafeReason::AmbiguousActuals { param: r.name.clone() });
                }
                if let Some(actual) = &r.choices[k] {
                    notes.push(format!("{} = {}", r.name, canonical_exp(actual)));
                    for b in &r.binders {
                        for u in map.uses_of(*b) {
                            if let Some(slot) = find_exp_mut(&mut q, u.id) {
                                let ws = slot.ws.clone();
                                *slot = actual.clone();
                                slot.ws = ws;
                            }
                        }
                    }
                }
            }
            for call in &calls {
                if let Some(args) = call_args_mut(&mut q, *call) {
                    for &i in idx.iter().rev() {
                        if i < args.len() {
                            let gone = args.remove(i);
                            if i == 0 {
                                if let Some(first) = args.first_mut() {
                                    first.ws = gone.ws;
                                }
                            }
                        }
                    }
                }
            }
            let params = fun_params_mut(&mut q, site.fun).expect("lambda");
            let mut pats = std::mem::take(&mut params.pats);
            for &i in idx.iter().rev() {
                pats.remove(i);
            }
            if pats.is_empty() {
                // No parameters left: the definition becomes a plain value.
                let fun = find_exp_mut(&mut q, site.fun).expect("lambda");
                let ExpKind::Fun { body, .. } = std::mem::replace(&mut fun.kind, ExpKind::Bool(false)) else {
                    unreachable!()
                };
                let ws = std::mem::take(&mut fun.ws);
                *fun = *body;
                fun.ws = ws;
                for call in &calls {
                    if let Some(app) = find_exp_mut(&mut q, *call) {
                        if let ExpKind::App { head, .. } = std::mem::replace(&mut app.kind, ExpKind::Bool(false)) {
                            let ws = std::mem::take(&mut app.ws);
                            *app = *head;
                            app.ws = ws;
                        }
                    }
                }
            } else {
                set_params(params, pats);
            }
            let names: Vec<&str> = removed.iter().map(|r| r.name.as_str()).collect();
            let mut what = format!("Remove {} from {}", names.join(" "), site.name);
            if !notes.is_empty() {
                what.push_str(&format!(" (using {})", notes.join(", ")));
            }
            out.push(TransformResult::checked_with(what, p, q, reasons, |r| r.clone()));
        }
        Ok(out)
    }
}

/// New order of `n` positions after moving `selected` into gap `gap`.
pub fn permutation(n: usize, selected: &[usize], gap: usize) -> Vec<usize> {
    let rest: Vec<usize> = (0..n).filter(|i| !selected.contains(i)).collect();
    let pos = rest.iter().filter(|&&i| i < gap).count();
    let mut out = rest[..pos].to_vec();
    out.extend_from_slice(selected);
    out.extend_from_slice(&rest[pos..]);
    out
}

/// Reorders `items` by `perm`, leaving each position's leading trivia in
/// place.
pub fn permute_keep_ws<T: Clone>(items: &mut [T], perm: &[usize], ws: impl Fn(&mut T) -> &mut String) {
    let old: Vec<T> = items.to_vec();
    for (j, &src) in perm.iter().enumerate() {
        let keep = ws(&mut items[j]).clone();
        items[j] = old[src].clone();
        *ws(&mut items[j]) = keep;
    }
}

pub struct ReorderArguments;

const REORDER_ARGS: Requirements = Requirements {
    exps: Count::at_least(0),
    defs: Count::at_least(0),
    targets: Count::exactly(1),
    branches: false,
    text: "one or more parameters or call arguments, and a target in the same list",
};

impl ReorderArguments {
    fn plan(&self, p: &Program, map: &BindingMap, c: &Classified) -> Option<(FnSite, Vec<usize>)> {
        let (site, idx, call) = selected_params(p, map, c)?;
        let t = c.target()?;
        let gap = match call {
            None => {
                let (fun_path, gap) = param_gap(p, t)?;
                (fun_path == site.fun_path).then_some(gap)?
            }
            Some(app) => {
                let (app_path, gap) = arg_gap(p, t)?;
                (node_at(p, &app_path).ok()?.id() == app).then_some(gap)?
            }
        };
        let n = match &find_exp(p, site.fun)?.kind {
            ExpKind::Fun { params, .. } => params.pats.len(),
            _ => return None,
        };
        let perm = permutation(n, &idx, gap);
        (perm.iter().enumerate().any(|(j, &i)| i != j)).then_some((site, perm))
    }
}

impl CodeTool for ReorderArguments {
    fn name(&self) -> &'static str {
        "Reorder Arguments"
    }
    fn key(&self) -> &'static str {
        "reorder_arguments"
    }
    fn requirements(&self) -> Requirements {
        REORDER_ARGS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        if c.exps.is_empty() && c.pats.is_empty() {
            return if c.defs.is_empty() && c.targets.len() <= 1 {
                ActiveState::NotYetActive
            } else {
                ActiveState::Inactive
            };
        }
        let map = resolve(&st.code);
        REORDER_ARGS.activation(
            &c,
            |c| c.defs.is_empty() && selected_params(&st.code, &map, c).is_some(),
            |c| self.plan(&st.code, &map, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let map = resolve(p);
        let (site, perm) = self
            .plan(p, &map, &c)
            .ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let (calls, mut escaping) = calls_of(p, &map, site.binder);
        let mut q = p.clone();
        let params = fun_params_mut(&mut q, site.fun).expect("lambda");
        permute_keep_ws(&mut params.pats, &perm, |x| &mut x.ws);
        let order: Vec<String> = params.pats.iter().map(canonical_pat).collect();
        for call in calls {
            let args = call_args_mut(&mut q, call).expect("call");
            if args.len() != perm.len() {
                escaping = true;
                continue;
            }
            permute_keep_ws(args, &perm, |x| &mut x.ws);
        }
        Ok(vec![TransformResult::checked_with(
            format!("Reorder {} arguments to {}", site.name, order.join(" ")),
            p,
            q,
            escaping_reason(escaping, &site.name),
            |r| r.clone(),
        )])
    }
}
