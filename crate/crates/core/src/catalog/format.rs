//! Whitespace-only tools: Clean Up, Make Single Line, Make Multi-Line,
//! Align Expressions.

use crate::edit::{
    find_exp, find_exp_mut, for_each_inner_ws, has_comment, has_inner_comment, reindent, shift_ws, Slot,
};
use crate::syntax::{relayout, walk, Branch, Exp, ExpKind, NodeId, NodeRef, Program};
use crate::tool::{
    ActiveState, Classified, CodeTool, Count, EditorState, Options, Requirements, ToolError, TransformResult,
};

/// Lines longer than this are broken by Clean Up.
pub const LINE_WIDTH: usize = 80;

fn indent(col: u32) -> String {
    format!("\n{}", " ".repeat(col as usize))
}

/// Collapses every line break inside `e` onto one line.
fn single_line(e: &mut Exp) {
    for_each_inner_ws(e, &mut |ws, slot| {
        if ws.contains('\n') {
            *ws = match slot {
                Slot::Lead | Slot::Inner => " ".into(),
                Slot::Close | Slot::Keyword => String::new(),
            };
        }
    });
}

/// A line break Make Multi-Line would introduce: the child (an expression or
/// a case branch) and the column it moves to.
#[derive(Clone, Copy, Debug)]
struct Move {
    child: NodeId,
    col: u32,
    /// The child is not yet on a line of its own.
    new_break: bool,
}

/// Breaks for `e`: call arguments and list elements one per line aligned
/// under the first, `let` and lambda bodies and case branches on their own
/// lines. Spans must be current.
fn multi_line_moves(e: &Exp) -> Vec<Move> {
    let col = e.span.start.col;
    let wanted: Vec<(NodeId, &str, u32, u32)> = match &e.kind {
        ExpKind::App { args, .. } if args.len() >= 2 => {
            let c = args[0].span.start.col;
            args[1..]
                .iter()
                .map(|a| (a.id, a.ws.as_str(), a.span.start.col, c))
                .collect()
        }
        ExpKind::List { elems, .. } if elems.len() >= 2 => {
            let c = elems[0].span.start.col;
            elems[1..]
                .iter()
                .map(|a| (a.id, a.ws.as_str(), a.span.start.col, c))
                .collect()
        }
        ExpKind::Let { body, .. } => vec![(body.id, body.ws.as_str(), body.span.start.col, col)],
        ExpKind::Fun { body, .. } => vec![(body.id, body.ws.as_str(), body.span.start.col, col + 2)],
        ExpKind::Case { branches, .. } => branches
            .iter()
            .map(|b| (b.id, b.ws.as_str(), b.span.start.col, col + 2))
            .collect(),
        _ => Vec::new(),
    };
    wanted
        .into_iter()
        .filter(|(_, ws, at, c)| !has_comment(ws) && (!ws.contains('\n') || at != c))
        .map(|(child, ws, _, c)| Move {
            child,
            col: c,
            new_break: !ws.contains('\n'),
        })
        .collect()
}

fn shift_branch(b: &mut Branch, delta: i64) {
    b.pat.for_each_mut(&mut |x| x.ws = shift_ws(&x.ws, delta));
    b.body.ws = shift_ws(&b.body.ws, delta);
    reindent(&mut b.body, delta);
    b.close_ws = shift_ws(&b.close_ws, delta);
}

/// Applies `moves` to the children of `e`. Spans must be current.
fn apply_moves(e: &mut Exp, moves: &[Move]) {
    let target = |id: NodeId| moves.iter().find(|m| m.child == id).map(|m| m.col);
    let mut place = |x: &mut Exp| {
        if let Some(c) = target(x.id) {
            reindent(x, c as i64 - x.span.start.col as i64);
            x.ws = indent(c);
        }
    };
    match &mut e.kind {
        ExpKind::App { args, .. } => args.iter_mut().for_each(&mut place),
        ExpKind::List { elems, .. } => elems.iter_mut().for_each(&mut place),
        ExpKind::Let { body, .. } | ExpKind::Fun { body, .. } => place(body),
        ExpKind::Case { branches, .. } => {
            for b in branches {
                if let Some(c) = target(b.id) {
                    shift_branch(b, c as i64 - b.span.start.col as i64);
                    b.ws = indent(c);
                }
            }
        }
        _ => {}
    }
}

fn selected_exp<'a>(p: &'a Program, c: &Classified) -> Option<&'a Exp> {
    find_exp(p, c.exps.first()?.id)
}

pub struct CleanUp;

const NOTHING: Requirements = Requirements {
    exps: Count::ZERO,
    defs: Count::ZERO,
    targets: Count::ZERO,
    branches: false,
    text: "nothing selected",
};

/// Reformats a whole program: overlong lines are broken, and multi-line
/// definitions get a blank line before and after.
pub fn clean_up(p: &Program) -> Program {
    let mut q = p.clone();
    relayout(&mut q);
    for i in 0..q.defs.len() {
        break_long_lines(&mut q, i);
    }
    for i in 1..q.defs.len() {
        let multi = |d: &crate::syntax::Def| d.span.is_multiline();
        if multi(&q.defs[i]) || multi(&q.defs[i - 1]) {
            let ws = &mut q.defs[i].ws;
            let rest = ws.trim_start_matches('\n');
            let newlines = ws.len() - rest.len();
            if newlines < 2 {
                *ws = format!("\n\n{rest}");
            }
        }
    }
    relayout(&mut q);
    q
}

/// Upper bound on breaks per definition, as a guard against cycles.
const MAX_BREAKS: usize = 10_000;

fn break_long_lines(q: &mut Program, def: usize) {
    for _ in 0..MAX_BREAKS {
        let text = crate::syntax::print(q);
        let span = q.defs[def].span;
        let long = text
            .split('\n')
            .enumerate()
            .map(|(i, l)| (i as u32 + 1, l))
            .filter(|(n, l)| *n >= span.start.line && *n <= span.end.line && l.chars().count() > LINE_WIDTH)
            .map(|(n, _)| n);
        let found = long.into_iter().find_map(|line| break_at(q, def, line));
        let Some((id, moves)) = found else {
            return;
        };
        apply_moves(find_exp_mut(q, id).expect("expression"), &moves);
        relayout(q);
    }
}

/// The outermost expression of definition `def` that can put a line break
/// into `line`.
fn break_at(q: &Program, def: usize, line: u32) -> Option<(NodeId, Vec<Move>)> {
    let span = q.defs[def].span;
    walk(q).into_iter().find_map(|(_, node)| {
        let NodeRef::Exp(e) = node else { return None };
        if e.span.start.line > line || e.span.end.line < line || !span.contains(&e.span) {
            return None;
        }
        let moves = multi_line_moves(e);
        moves
            .iter()
            .any(|m| m.new_break && start_line_of(e, m.child) == Some(line))
            .then_some((e.id, moves))
    })
}

fn start_line_of(e: &Exp, child: NodeId) -> Option<u32> {
    if let ExpKind::Case { branches, .. } = &e.kind {
        if let Some(b) = branches.iter().find(|b| b.id == child) {
            return Some(b.span.start.line);
        }
    }
    e.children().iter().find(|c| c.id == child).map(|c| c.span.start.line)
}

impl CodeTool for CleanUp {
    fn name(&self) -> &'static str {
        "Clean Up"
    }
    fn key(&self) -> &'static str {
        "clean_up"
    }
    fn requirements(&self) -> Requirements {
        NOTHING
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        match st.classify() {
            Ok(c) if c.is_empty() => ActiveState::Active,
            _ => ActiveState::Inactive,
        }
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        Ok(vec![TransformResult::checked("Clean up", &st.code, clean_up(&st.code))])
    }
}

const ONE_EXP: Requirements = Requirements {
    exps: Count::exactly(1),
    defs: Count::ZERO,
    targets: Count::ZERO,
    branches: false,
    text: "one expression",
};

pub struct MakeSingleLine;

impl CodeTool for MakeSingleLine {
    fn name(&self) -> &'static str {
        "Make Single Line"
    }
    fn key(&self) -> &'static str {
        "make_single_line"
    }
    fn requirements(&self) -> Requirements {
        ONE_EXP
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        ONE_EXP.activation(
            &c,
            |_| true,
            |c| selected_exp(&st.code, c).is_some_and(|e| e.span.is_multiline() && !has_inner_comment(e)),
        )
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let id = c.exps[0].id;
        let mut q = st.code.clone();
        single_line(find_exp_mut(&mut q, id).expect("selected expression"));
        Ok(vec![TransformResult::checked("Make single line", &st.code, q)])
    }
}

pub struct MakeMultiLine;

impl CodeTool for MakeMultiLine {
    fn name(&self) -> &'static str {
        "Make Multi-Line"
    }
    fn key(&self) -> &'static str {
        "make_multi_line"
    }
    fn requirements(&self) -> Requirements {
        ONE_EXP
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        ONE_EXP.activation(
            &c,
            |_| true,
            |c| selected_exp(&st.code, c).is_some_and(|e| !multi_line_moves(e).is_empty()),
        )
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let id = c.exps[0].id;
        let moves = multi_line_moves(find_exp(&st.code, id).expect("selected expression"));
        let mut q = st.code.clone();
        apply_moves(find_exp_mut(&mut q, id).expect("selected expression"), &moves);
        Ok(vec![TransformResult::checked("Make multi-line", &st.code, q)])
    }
}

pub struct AlignExpressions;

const ALIGN: Requirements = Requirements {
    exps: Count::at_least(2),
    defs: Count::ZERO,
    targets: Count::ZERO,
    branches: false,
    text: "two or more expressions on different lines",
};

fn distinct_lines(p: &Program, c: &Classified) -> bool {
    let mut lines = Vec::new();
    for s in &c.exps {
        let Some(e) = find_exp(p, s.id) else { return false };
        if lines.contains(&e.span.start.line) || c.exps.iter().any(|o| o.id != s.id && o.path.is_prefix_of(&s.path)) {
            return false;
        }
        lines.push(e.span.start.line);
    }
    true
}

impl CodeTool for AlignExpressions {
    fn name(&self) -> &'static str {
        "Align Expressions"
    }
    fn key(&self) -> &'static str {
        "align"
    }
    fn requirements(&self) -> Requirements {
        ALIGN
    }
    fn active(&self, st: &EditorState) -> ActiveState {
        let Ok(c) = st.classify() else {
            return ActiveState::Inactive;
        };
        ALIGN.activation(&c, |c| distinct_lines(&st.code, c), |_| true)
    }
    fn results(&self, st: &EditorState, _: &Options) -> Result<Vec<TransformResult>, ToolError> {
        let c = st.classify()?;
        let p = &st.code;
        let cols: Vec<(NodeId, u32)> = c
            .exps
            .iter()
            .map(|s| (s.id, find_exp(p, s.id).expect("selection").span.start.col))
            .collect();
        let max = cols.iter().map(|(_, c)| *c).max().unwrap_or(0);
        let mut q = p.clone();
        for (id, col) in cols {
            let pad = max - col;
            if pad == 0 {
                continue;
            }
            let e = find_exp_mut(&mut q, id).expect("selection");
            e.ws.push_str(&" ".repeat(pad as usize));
            reindent(e, pad as i64);
        }
        Ok(vec![TransformResult::checked("Align", p, q)])
    }
}
