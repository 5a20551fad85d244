//! Make Equal with Single Variable, Make Equal by Copying, Introduce
//! Variable.

use crate::edit::{find_exp, pvar, refresh_ids, reindent, replace_exp, taken_names, var};
use crate::syntax::{node_at, ItemPath, NodeId, NodeRef, Program};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, ToolError, TransformResult,
};

use super::names::{is_constant, suggest};
use super::place::{default_placement, insert_bindings, placement_of, scopes_over, Binding, Placement};

/// Number of variable names offered by tools that introduce a variable.
pub const NAME_CHOICES: usize = 4;

fn nested(c: &Classified) -> bool {
    c.exps.iter().enumerate().any(|(i, a)| {
        c.exps
            .iter()
            .enumerate()
            .any(|(j, b)| i != j && a.path.is_prefix_of(&b.path))
    })
}

/// Placement for new definitions covering `paths`: the selected target, or
/// the innermost scope around them.
fn placement_for(p: &Program, c: &Classified, paths: &[&ItemPath], exclude_self: bool) -> Option<Placement> {
    let pl = match c.target() {
        Some(t) => placement_of(p, t)?,
        None => default_placement(p, paths, exclude_self),
    };
    scopes_over(p, &pl, paths).then_some(pl)
}

fn anchor_selected(pl: &Placement, c: &Classified) -> bool {
    matches!(pl, Placement::NewLet { exp } if c.exps.iter().any(|e| e.id == *exp))
}

pub struct MakeEqualSingleVar;

const SINGLE_VAR: Requirements = Requirements {
    exps: Count::at_least(2),
    defs: Count::ZERO,
    targets: Count::range(0, 1),
    branches: false,
    text: "two or more constants, optionally a target for the new variable",
};

impl MakeEqualSingleVar {
    fn plan(&self, st: &EditorState) -> Option<(Classified, Placement)> {
        let c = st.classify().ok()?;
        let paths: Vec<&ItemPath> = c.exps.iter().map(|e| &e.path).collect();
        let pl = placement_for(&st.code, &c, &paths, false)?;
        Some((c, pl))
    }
}

impl CodeTool for MakeEqualSingleVar {
    fn name(&self) -> &'static str {
        "Make Equal with Single Variable"
    }
    fn key(&self) -> &'static str {
        "make_equal_single_var"
    }
    fn requirements(&self) -> Requirements {
        SINGLE_VAR
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        SINGLE_VAR.activation(
            &c,
            |c| c.exps.iter().all(|e| is_constant(&st.code, &e.path)),
            |_| self.plan(st).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let (c, pl) = self.plan(st).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let p = &st.code;
        // The last selection's value is kept; it and the most recent
        // selections lend their parameter names first.
        let order: Vec<&ItemPath> = c.exps.iter().rev().map(|e| &e.path).collect();
        let kept = find_exp(p, c.exps.last().expect("two selections").id)
            .expect("selected constant")
            .clone();
        let mut taken = taken_names(p);
        let names = suggest(p, &order, &mut taken, NAME_CHOICES);
        let mut out = Vec::new();
        for name in names {
            let mut code = p.clone();
            let mut lit = kept.clone();
            lit.ws.clear();
            refresh_ids(&mut code, &mut lit);
            let pat = pvar(&mut code, &name);
            if !insert_bindings(&mut code, &pl, vec![Binding::new(pat, lit)]) {
                continue;
            }
            for e in &c.exps {
                let v = var(&mut code, &name);
                replace_exp(&mut code, e.id, v);
            }
            out.push(TransformResult::checked(format!("New variable: {name}"), p, code));
        }
        Ok(out)
    }
}

pub struct MakeEqualByCopying;

const COPYING: Requirements = Requirements {
    exps: Count::at_least(2),
    defs: Count::ZERO,
    targets: Count::ZERO,
    branches: false,
    text: "two or more expressions",
};

impl CodeTool for MakeEqualByCopying {
    fn name(&self) -> &'static str {
        "Make Equal by Copying"
    }
    fn key(&self) -> &'static str {
        "make_equal_by_copying"
    }
    fn requirements(&self) -> Requirements {
        COPYING
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        COPYING.activation(&c, |c| !nested(c), |_| true)
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let mut out = Vec::new();
        for (k, src) in c.exps.iter().enumerate() {
            let model = find_exp(p, src.id).expect("selected expression").clone();
            let text = crate::syntax::print::print_exp_trimmed(&model);
            let mut code = p.clone();
            for (j, e) in c.exps.iter().enumerate() {
                if j == k {
                    continue;
                }
                let old = find_exp(p, e.id).expect("selected expression");
                let mut copy = model.clone();
                reindent(&mut copy, old.span.start.col as i64 - model.span.start.col as i64);
                replace_exp(&mut code, e.id, copy);
            }
            out.push(TransformResult::checked(format!("Copy {text}"), p, code));
        }
        Ok(out)
    }
}

pub struct IntroduceVariable;

const INTRODUCE: Requirements = Requirements {
    exps: Count::at_least(1),
    defs: Count::ZERO,
    targets: Count::range(0, 1),
    branches: false,
    text: "one or more expressions, optionally a target for the new variable",
};

impl IntroduceVariable {
    fn plan(&self, st: &EditorState) -> Option<(Classified, Placement)> {
        let c = st.classify().ok()?;
        let paths: Vec<&ItemPath> = c.exps.iter().map(|e| &e.path).collect();
        let pl = placement_for(&st.code, &c, &paths, true)?;
        (!anchor_selected(&pl, &c)).then_some((c, pl))
    }
}

fn is_head(path: &ItemPath) -> bool {
    path.last() == Some(crate::syntax::Step::Arg(0))
}

impl CodeTool for IntroduceVariable {
    fn name(&self) -> &'static str {
        "Introduce Variable"
    }
    fn key(&self) -> &'static str {
        "introduce_variable"
    }
    fn requirements(&self) -> Requirements {
        INTRODUCE
    }

    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        INTRODUCE.activation(
            &c,
            |c| !nested(c) && !c.exps.iter().any(|e| is_head(&e.path)),
            |_| self.plan(st).is_some(),
        )
    }

    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let (c, pl) = self.plan(st).ok_or_else(|| ToolError::NotActive(self.name().into()))?;
        let p = &st.code;
        let paths: Vec<&ItemPath> = c.exps.iter().map(|e| &e.path).collect();
        let first = match node_at(p, &c.exps[0].path) {
            Ok(NodeRef::Exp(e)) => e.clone(),
            _ => return Err(ToolError::NotActive(self.name().into())),
        };
        let mut taken = taken_names(p);
        let names = suggest(p, &paths, &mut taken, NAME_CHOICES);
        let mut out = Vec::new();
        for name in names {
            let mut code = p.clone();
            let ids: Vec<NodeId> = c.exps.iter().map(|e| e.id).collect();
            for id in &ids {
                let v = var(&mut code, &name);
                replace_exp(&mut code, *id, v);
            }
            let mut bound = first.clone();
            bound.ws.clear();
            let pat = pvar(&mut code, &name);
            let b = Binding {
                pat,
                bound,
                rec: false,
                col: first.span.start.col,
            };
            if !insert_bindings(&mut code, &pl, vec![b]) {
                continue;
            }
            out.push(TransformResult::checked(format!("New variable: {name}"), p, code));
        }
        Ok(out)
    }
}
