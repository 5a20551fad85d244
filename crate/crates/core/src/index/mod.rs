//! Selectable code items and target positions.
//!
//! Items are the expressions, patterns, definitions and case branches of a
//! program. Targets are the whitespace gaps between items; each gap is known
//! by one canonical id (`Before` of the following item when there is one)
//! and by a set of aliases.

mod geometry;

use std::fmt;
use std::str::FromStr;

use crate::syntax::path::{walk, IdError, ItemKind, ItemPath, Step};
use crate::syntax::{Def, Exp, ExpKind, NodeId, Pat, PatKind, Pos, Program, Span};

pub use geometry::{dump_polygons, hover, hover_in, max_line_width, polygons, Cell, HoverPolygon, Owner};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub path: ItemPath,
    pub id: NodeId,
    pub kind: ItemKind,
    pub span: Span,
}

/// All code items, parents before children.
pub fn enumerate_items(p: &Program) -> Vec<Item> {
    walk(p)
        .into_iter()
        .map(|(path, n)| Item {
            path,
            id: n.id(),
            kind: n.kind(),
            span: n.span(),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Before,
    After,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetId {
    pub anchor: ItemPath,
    pub side: Side,
}

impl TargetId {
    pub fn before(anchor: ItemPath) -> Self {
        TargetId {
            anchor,
            side: Side::Before,
        }
    }

    pub fn after(anchor: ItemPath) -> Self {
        TargetId {
            anchor,
            side: Side::After,
        }
    }
}

impl fmt::Display for TargetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Before => "before",
            Side::After => "after",
        };
        write!(f, "{}@{side}", self.anchor)
    }
}

impl FromStr for TargetId {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (path, side) = s.rsplit_once('@').ok_or_else(|| IdError::Malformed(s.to_string()))?;
        let side = match side {
            "before" => Side::Before,
            "after" => Side::After,
            _ => return Err(IdError::Malformed(s.to_string())),
        };
        Ok(TargetId {
            anchor: path.parse()?,
            side,
        })
    }
}

/// A whitespace gap that can be selected as a destination.
#[derive(Clone, Debug, PartialEq)]
pub struct Target {
    pub id: TargetId,
    /// Every id denoting this gap; includes `id`.
    pub aliases: Vec<TargetId>,
    /// Innermost item enclosing the gap, `None` at top level.
    pub parent: Option<ItemPath>,
    pub start: Pos,
    pub end: Pos,
    /// The gap is the first half of a split definition gap and ends at the
    /// start of a line that belongs to its second half.
    pub(crate) ends_at_split: bool,
}

impl Target {
    pub fn has_alias(&self, id: &TargetId) -> bool {
        self.aliases.contains(id)
    }

    /// Item immediately before the gap.
    pub fn prev(&self) -> Option<&ItemPath> {
        self.aliases.iter().find(|a| a.side == Side::After).map(|a| &a.anchor)
    }

    /// Item immediately after the gap.
    pub fn next(&self) -> Option<&ItemPath> {
        self.aliases.iter().find(|a| a.side == Side::Before).map(|a| &a.anchor)
    }
}

/// All canonical targets in document order.
pub fn enumerate_targets(p: &Program) -> Vec<Target> {
    let mut g = GapWalker {
        pos: Pos::START,
        prev_end: None,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for (i, d) in p.defs.iter().enumerate() {
        g.def(ItemPath(vec![Step::Def(i)]), d);
    }
    g.gap(&p.trailing_ws, None);
    g.out
}

/// Finds the target known by `id` under any of its aliases.
pub fn find_target<'a>(targets: &'a [Target], id: &TargetId) -> Option<&'a Target> {
    targets.iter().find(|t| t.has_alias(id))
}

struct GapWalker {
    pos: Pos,
    prev_end: Option<ItemPath>,
    stack: Vec<ItemPath>,
    out: Vec<Target>,
}

impl GapWalker {
    fn advance(&mut self, s: &str) {
        for c in s.chars() {
            if c == '\n' {
                self.pos.line += 1;
                self.pos.col = 0;
            } else {
                self.pos.col += 1;
            }
        }
        self.pos.offset += s.len();
    }

    fn token(&mut self, text: &str) {
        self.advance(text);
        self.prev_end = None;
    }

    fn emit(&mut self, start: Pos, aliases: Vec<TargetId>, ends_at_split: bool) {
        if aliases.is_empty() {
            return;
        }
        let id = aliases
            .iter()
            .find(|a| a.side == Side::Before)
            .unwrap_or(&aliases[0])
            .clone();
        self.out.push(Target {
            id,
            aliases,
            parent: self.stack.last().cloned(),
            start,
            end: self.pos,
            ends_at_split,
        });
    }

    /// Trivia preceding the item `next` (or a non-item token when `None`).
    fn gap(&mut self, ws: &str, next: Option<&ItemPath>) {
        let start = self.pos;
        let prev = self.prev_end.take();
        self.advance(ws);
        let mut aliases = Vec::new();
        if let Some(p) = prev {
            aliases.push(TargetId::after(p));
        }
        if let Some(n) = next {
            aliases.push(TargetId::before(n.clone()));
        }
        self.emit(start, aliases, false);
    }

    /// Trivia between the pattern and bound expression of a definition. The
    /// part up to and including the first newline belongs after the pattern,
    /// the rest before the expression; without a newline there is no
    /// before-expression target.
    fn split_gap(&mut self, ws: &str, pat: &ItemPath, bound: &ItemPath) {
        self.prev_end = None;
        match ws.find('\n') {
            Some(nl) => {
                let start = self.pos;
                self.advance(&ws[..=nl]);
                self.emit(start, vec![TargetId::after(pat.clone())], true);
                let start = self.pos;
                self.advance(&ws[nl + 1..]);
                self.emit(start, vec![TargetId::before(bound.clone())], false);
            }
            None => {
                let start = self.pos;
                self.advance(ws);
                self.emit(start, vec![TargetId::after(pat.clone())], false);
            }
        }
    }

    fn def(&mut self, path: ItemPath, d: &Def) {
        self.gap(&d.ws, Some(&path));
        self.stack.push(path.clone());
        self.token("(");
        self.gap(&d.kw_ws, None);
        self.token(if d.rec { "defrec" } else { "def" });
        let pat = path.child(Step::Pat);
        let bound = path.child(Step::Bound);
        self.pat(&pat, &d.pat);
        self.split_gap(&d.bound.ws, &pat, &bound);
        self.exp_body(&bound, &d.bound);
        self.gap(&d.close_ws, None);
        self.token(")");
        self.stack.pop();
        self.prev_end = Some(path);
    }

    fn exp(&mut self, path: &ItemPath, e: &Exp) {
        self.gap(&e.ws, Some(path));
        self.exp_body(path, e);
    }

    /// An expression whose leading trivia has already been consumed.
    fn exp_body(&mut self, path: &ItemPath, e: &Exp) {
        self.stack.push(path.clone());
        match &e.kind {
            ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => {
                self.token(&crate::syntax::print::print_exp_trimmed(e));
            }
            ExpKind::Fun {
                kw_ws,
                params,
                body,
                close_ws,
            } => {
                self.token("(");
                self.gap(kw_ws, None);
                self.token("\\");
                match &params.paren {
                    Some((open_ws, pclose_ws)) => {
                        self.gap(open_ws, None);
                        self.token("(");
                        for (i, p) in params.pats.iter().enumerate() {
                            self.pat(&path.child(Step::Param(i)), p);
                        }
                        self.gap(pclose_ws, None);
                        self.token(")");
                    }
                    None => self.pat(&path.child(Step::Param(0)), &params.pats[0]),
                }
                self.exp(&path.child(Step::Body), body);
                self.gap(close_ws, None);
                self.token(")");
            }
            ExpKind::App { head, args, close_ws } => {
                self.token("(");
                self.exp(&path.child(Step::Arg(0)), head);
                for (i, a) in args.iter().enumerate() {
                    self.exp(&path.child(Step::Arg(i + 1)), a);
                }
                self.gap(close_ws, None);
                self.token(")");
            }
            ExpKind::List { elems, tail, close_ws } => {
                self.token("[");
                for (i, x) in elems.iter().enumerate() {
                    self.exp(&path.child(Step::Elem(i)), x);
                }
                if let Some(t) = tail {
                    self.gap(&t.bar_ws, None);
                    self.token("|");
                    self.exp(&path.child(Step::Tail), &t.node);
                }
                self.gap(close_ws, None);
                self.token("]");
            }
            ExpKind::Let { def, body, close_ws } => {
                self.token("(");
                self.gap(&def.kw_ws, None);
                let dpath = path.child(Step::LetDef);
                self.stack.push(dpath.clone());
                self.token(if def.rec { "letrec" } else { "let" });
                let pat = dpath.child(Step::Pat);
                let bound = dpath.child(Step::Bound);
                self.pat(&pat, &def.pat);
                self.split_gap(&def.bound.ws, &pat, &bound);
                self.exp_body(&bound, &def.bound);
                self.stack.pop();
                self.exp(&path.child(Step::Body), body);
                self.gap(close_ws, None);
                self.token(")");
            }
            ExpKind::Case {
                kw_ws,
                scrutinee,
                branches,
                close_ws,
            } => {
                self.token("(");
                self.gap(kw_ws, None);
                self.token("case");
                self.exp(&path.child(Step::Scrut), scrutinee);
                for (i, b) in branches.iter().enumerate() {
                    let bpath = path.child(Step::Branch(i));
                    self.gap(&b.ws, Some(&bpath));
                    self.stack.push(bpath.clone());
                    self.token("(");
                    self.pat(&bpath.child(Step::Pat), &b.pat);
                    self.exp(&bpath.child(Step::Body), &b.body);
                    self.gap(&b.close_ws, None);
                    self.token(")");
                    self.stack.pop();
                    self.prev_end = Some(bpath);
                }
                self.gap(close_ws, None);
                self.token(")");
            }
        }
        self.stack.pop();
        self.prev_end = Some(path.clone());
    }

    fn pat(&mut self, path: &ItemPath, p: &Pat) {
        self.gap(&p.ws, Some(path));
        self.stack.push(path.clone());
        match &p.kind {
            PatKind::List { elems, tail, close_ws } => {
                self.token("[");
                for (i, x) in elems.iter().enumerate() {
                    self.pat(&path.child(Step::Elem(i)), x);
                }
                if let Some(t) = tail {
                    self.gap(&t.bar_ws, None);
                    self.token("|");
                    self.pat(&path.child(Step::Tail), &t.node);
                }
                self.gap(close_ws, None);
                self.token("]");
            }
            _ => self.token(&crate::syntax::print::print_pat(p)),
        }
        self.stack.pop();
        self.prev_end = Some(path.clone());
    }
}

/// Byte offset of a (line, column) position in `text`, if it exists.
pub fn offset_of(text: &str, line: u32, col: u32) -> Option<usize> {
    let mut cur_line = 1;
    let mut line_start = 0;
    if line == 0 {
        return None;
    }
    for (i, c) in text.char_indices() {
        if cur_line == line {
            break;
        }
        if c == '\n' {
            cur_line += 1;
            line_start = i + 1;
        }
    }
    if cur_line != line {
        return None;
    }
    let rest = &text[line_start..];
    let line_text = rest.split('\n').next().unwrap_or("");
    let mut n = 0;
    for (i, _) in line_text.char_indices() {
        if n == col {
            return Some(line_start + i);
        }
        n += 1;
    }
    (n == col).then_some(line_start + line_text.len())
}

/// Resolves a text selection to the item it covers exactly, ignoring
/// whitespace at either end of the selection.
pub fn resolve_text_selection(p: &Program, start: (u32, u32), end: (u32, u32)) -> Option<ItemPath> {
    let text = crate::syntax::print(p);
    let a = offset_of(&text, start.0, start.1)?;
    let b = offset_of(&text, end.0, end.1)?;
    if a > b {
        return None;
    }
    let sel = &text[a..b];
    let lead = sel.len() - sel.trim_start().len();
    let trail = sel.len() - sel.trim_end().len();
    if lead == sel.len() {
        return None;
    }
    let (a, b) = (a + lead, b - trail);
    let mut hits = enumerate_items(p)
        .into_iter()
        .filter(|it| it.span.start.offset == a && it.span.end.offset == b);
    let first = hits.next()?;
    match hits.next() {
        None => Some(first.path),
        Some(_) => None,
    }
}
