//! Reorder Items and Reorder Expressions.

use crate::edit::find_exp_mut;
use crate::index::{Side, Target};
use crate::syntax::{node_at, ExpKind, ItemPath, Program, Step};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, ToolError, TransformResult,
};

use super::functions::{permutation, permute_keep_ws};

/// Which sibling sequences a tool reorders.
#[derive(Clone, Copy, PartialEq)]
enum Seq {
    Elems,
    Branches,
}

fn seq_index(step: Step) -> Option<(Seq, usize)> {
    match step {
        Step::Elem(i) => Some((Seq::Elems, i)),
        Step::Branch(i) => Some((Seq::Branches, i)),
        _ => None,
    }
}

/// Selected siblings: the common parent, which sequence, and the sorted
/// indices.
fn siblings(c: &Classified, allow_branches: bool) -> Option<(ItemPath, Seq, Vec<usize>)> {
    let items = c.exps.iter().chain(c.branches.iter());
    let mut parent: Option<(ItemPath, Seq)> = None;
    let mut idx = Vec::new();
    for s in items {
        let (seq, i) = seq_index(s.path.last()?)?;
        if seq == Seq::Branches && !allow_branches {
            return None;
        }
        let par = s.path.parent()?;
        match &parent {
            Some((p0, s0)) if *p0 != par || *s0 != seq => return None,
            _ => parent = Some((par, seq)),
        }
        idx.push(i);
    }
    let (par, seq) = parent?;
    idx.sort_unstable();
    idx.dedup();
    Some((par, seq, idx))
}

/// Gap index of a target within the sequence `seq` of `parent`.
fn gap_in(t: &Target, parent: &ItemPath, seq: Seq) -> Option<usize> {
    if t.parent.as_ref() != Some(parent) {
        return None;
    }
    t.aliases.iter().find_map(|a| {
        if a.anchor.parent().as_ref() != Some(parent) {
            return None;
        }
        let (s, i) = seq_index(a.anchor.last()?)?;
        (s == seq).then_some(if a.side == Side::Before { i } else { i + 1 })
    })
}

fn seq_len(p: &Program, parent: &ItemPath, seq: Seq) -> Option<usize> {
    match (&node_at(p, parent).ok()?.as_exp()?.kind, seq) {
        (ExpKind::List { elems, .. }, Seq::Elems) => Some(elems.len()),
        (ExpKind::Case { branches, .. }, Seq::Branches) => Some(branches.len()),
        _ => None,
    }
}

fn plan(p: &Program, c: &Classified, allow_branches: bool) -> Option<(ItemPath, Seq, Vec<usize>)> {
    let (parent, seq, idx) = siblings(c, allow_branches)?;
    let gap = gap_in(c.target()?, &parent, seq)?;
    let n = seq_len(p, &parent, seq)?;
    Some((parent, seq, permutation(n, &idx, gap)))
}

fn reorder(tool: &dyn CodeTool, st: &EditorState, allow_branches: bool) -> Result<Vec<TransformResult>, ToolError> {
    let c = st.classify()?;
    let p = &st.code;
    let (parent, seq, perm) = plan(p, &c, allow_branches).ok_or_else(|| ToolError::NotActive(tool.name().into()))?;
    let id = node_at(p, &parent)?.id();
    let mut q = p.clone();
    match (&mut find_exp_mut(&mut q, id).expect("parent").kind, seq) {
        (ExpKind::List { elems, .. }, Seq::Elems) => permute_keep_ws(elems, &perm, |e| &mut e.ws),
        (ExpKind::Case { branches, .. }, Seq::Branches) => permute_keep_ws(branches, &perm, |b| &mut b.ws),
        _ => return Err(ToolError::NotActive(tool.name().into())),
    }
    let what = match seq {
        Seq::Elems => "Reorder list items",
        Seq::Branches => "Reorder case branches",
    };
    Ok(vec![TransformResult::checked(what, p, q)])
}

fn active(st: &EditorState, req: &Requirements, allow_branches: bool) -> ActiveState {
    let Ok(c) = st.classify() else {
        return ActiveState::Inactive;
    };
    req.activation(
        &c,
        |c| (c.exps.is_empty() && c.branches.is_empty()) || siblings(c, allow_branches).is_some(),
        |c| plan(&st.code, c, allow_branches).is_some(),
    )
}

pub struct ReorderListItems;

const ITEMS: Requirements = Requirements {
    exps: Count::at_least(1),
    defs: Count::ZERO,
    targets: Count::exactly(1),
    branches: false,
    text: "one or more items of a list and a target in the same list",
};

impl CodeTool for ReorderListItems {
    fn name(&self) -> &'static str {
        "Reorder Items"
    }
    fn key(&self) -> &'static str {
        "reorder_list_items"
    }
    fn requirements(&self) -> Requirements {
        ITEMS
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        active(st, &ITEMS, false)
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        reorder(self, st, false)
    }
}

pub struct ReorderExpressions;

const EXPS: Requirements = Requirements {
    exps: Count::at_least(1),
    defs: Count::ZERO,
    targets: Count::exactly(1),
    branches: true,
    text: "one or more sibling expressions or case branches and a target among them",
};

impl CodeTool for ReorderExpressions {
    fn name(&self) -> &'static str {
        "Reorder Expressions"
    }
    fn key(&self) -> &'static str {
        "reorder_expressions"
    }
    fn requirements(&self) -> Requirements {
        EXPS
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        active(st, &EXPS, true)
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        reorder(self, st, true)
    }
}
