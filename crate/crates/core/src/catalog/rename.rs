//! Rename, Swap Names and Usages, Swap Usages.

use crate::binding::{resolve, would_capture, would_capture_with, BindingMap, Renaming, Resolution};
use crate::syntax::{is_valid_ident, node_at, ExpKind, NodeId, NodeRef, Program};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, Safety, ToolError, TransformResult,
    UnsafeReason,
};

/// Applies a renaming by node id: binders in `r.binders`, uses listed in
/// `r.uses`, and uses resolved (in `map`) to a renamed binder.
pub fn apply_renaming(p: &mut Program, map: &BindingMap, r: &Renaming) {
    for d in &mut p.defs {
        d.pat.for_each_mut(&mut |x| rename_pat(x, r));
        d.bound.for_each_pat_mut(&mut |x| rename_pat(x, r));
        d.bound.for_each_mut(&mut |e| {
            if let ExpKind::Var(name) = &mut e.kind {
                if let Some(n) = r.uses.get(&e.id) {
                    *name = n.clone();
                } else if let Some(n) = map
                    .use_by_id(e.id)
                    .and_then(|u| u.res.binder())
                    .and_then(|b| r.binders.get(&b))
                {
                    *name = n.clone();
                }
            }
        });
    }
}

fn rename_pat(x: &mut crate::syntax::Pat, r: &Renaming) {
    if let Some(n) = r.binders.get(&x.id) {
        if let crate::syntax::PatKind::Var(name) = &mut x.kind {
            *name = n.clone();
        }
    }
}

/// `main` keeps its name: the program would no longer parse.
fn is_main(p: &Program, binder: NodeId) -> bool {
    p.main_def().is_some_and(|d| d.pat.id == binder)
}

/// The binder a selected variable pattern or variable use stands for.
fn selected_binder(p: &Program, map: &BindingMap, c: &Classified) -> Option<(NodeId, String)> {
    let item = c.pats.first().or(c.exps.first())?;
    let found = match node_at(p, &item.path).ok()? {
        NodeRef::Pat(x) => Some((x.id, x.as_var()?.to_string())),
        NodeRef::Exp(e) => {
            let b = map.use_by_id(e.id)?.res.binder()?;
            Some((b, map.binder(b)?.name.clone()))
        }
        _ => None,
    };
    found.filter(|(b, _)| !is_main(p, *b))
}

fn capture_safety(conflicts: Vec<crate::binding::Conflict>) -> Safety {
    if conflicts.is_empty() {
        Safety::Safe
    } else {
        Safety::Unsafe(vec![UnsafeReason::Capture(conflicts)])
    }
}

pub struct Rename;

const RENAME: Requirements = Requirements {
    exps: Count::range(0, 1),
    defs: Count::range(0, 1),
    targets: Count::ZERO,
    branches: false,
    text: "one variable, at its definition or a use",
};

impl CodeTool for Rename {
    fn name(&self) -> &'static str {
        "Rename"
    }
    fn key(&self) -> &'static str {
        "rename"
    }
    fn requirements(&self) -> Requirements {
        RENAME
    }
    fn takes_string_option(&self) -> bool {
        true
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        let map = resolve(&st.code);
        RENAME.activation(
            &c,
            |c| c.exps.len() + c.pats.len() + c.defs.len() <= 1 && c.defs.is_empty(),
            |c| selected_binder(&st.code, &map, c).is_some(),
        )
    }

    fn results(&self, st: &EditorState, opts: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let Options::Str(new) = opts else {
            return Err(ToolError::MissingOption(self.name().into()));
        };
        if !is_valid_ident(new) {
            return Err(ToolError::InvalidOption(format!("`{new}` is not a variable name")));
        }
        let c = st.classify()?;
        let map = resolve(&st.code);
        let (binder, old) =
            selected_binder(&st.code, &map, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let mut r = Renaming::default();
        r.binders.insert(binder, new.clone());
        let safety = capture_safety(would_capture(&map, &r));
        let mut code = st.code.clone();
        apply_renaming(&mut code, &map, &r);
        Ok(vec![TransformResult::with_safety(
            format!("Rename `{old}` to `{new}`"),
            code,
            safety,
        )])
    }
}

/// Two distinct-named variable patterns.
fn two_binders(p: &Program, c: &Classified) -> Option<[(NodeId, String); 2]> {
    two_vars(p, c).filter(|[a, b]| !is_main(p, a.0) && !is_main(p, b.0))
}

fn two_vars(p: &Program, c: &Classified) -> Option<[(NodeId, String); 2]> {
    if c.pats.len() != 2 {
        return None;
    }
    let mut out = Vec::new();
    for item in &c.pats {
        let x = node_at(p, &item.path).ok()?.as_pat()?;
        out.push((x.id, x.as_var()?.to_string()));
    }
    if out[0].1 == out[1].1 {
        return None;
    }
    let b = out.pop()?;
    let a = out.pop()?;
    Some([a, b])
}

fn vars_only(c: &Classified) -> bool {
    c.defs.is_empty()
}

const TWO_VARS: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::exactly(2),
    targets: Count::ZERO,
    branches: false,
    text: "two variable definitions",
};

pub struct SwapNamesAndUsages;

impl CodeTool for SwapNamesAndUsages {
    fn name(&self) -> &'static str {
        "Swap Names and Usages"
    }
    fn key(&self) -> &'static str {
        "swap_names_and_usages"
    }
    fn requirements(&self) -> Requirements {
        TWO_VARS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        TWO_VARS.activation(&c, vars_only, |c| two_binders(&st.code, c).is_some())
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let [(a, x), (b, y)] = two_binders(&st.code, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(&st.code);
        let mut r = Renaming::default();
        r.binders.insert(a, y.clone());
        r.binders.insert(b, x.clone());
        let safety = capture_safety(would_capture(&map, &r));
        let mut code = st.code.clone();
        apply_renaming(&mut code, &map, &r);
        Ok(vec![TransformResult::with_safety(
            format!("Swap `{x}` and `{y}`"),
            code,
            safety,
        )])
    }
}

pub struct SwapUsages;

impl CodeTool for SwapUsages {
    fn name(&self) -> &'static str {
        "Swap Usages"
    }
    fn key(&self) -> &'static str {
        "swap_usages"
    }
    fn requirements(&self) -> Requirements {
        TWO_VARS
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        TWO_VARS.activation(&c, vars_only, |c| two_binders(&st.code, c).is_some())
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let [(a, x), (b, y)] = two_binders(&st.code, &c).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let map = resolve(&st.code);
        let mut r = Renaming::default();
        for u in map.uses_of(a) {
            r.uses.insert(u.id, y.clone());
        }
        for u in map.uses_of(b) {
            r.uses.insert(u.id, x.clone());
        }
        let swap = |res: &Resolution| match res {
            Resolution::Bound(v) if *v == a => Resolution::Bound(b),
            Resolution::Bound(v) if *v == b => Resolution::Bound(a),
            other => other.clone(),
        };
        let safety = capture_safety(would_capture_with(&map, &r, swap));
        let mut code = st.code.clone();
        apply_renaming(&mut code, &map, &r);
        Ok(vec![TransformResult::with_safety(
            format!("Swap the uses of `{x}` and `{y}`"),
            code,
            safety,
        )])
    }
}
