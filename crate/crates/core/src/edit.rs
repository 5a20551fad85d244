//! Tree surgery shared by the transformations: trivia rewriting, fresh
//! names, and lookups by node id.

use std::collections::BTreeSet;

use crate::binding::PRIMITIVES;
use crate::syntax::{Def, Exp, ExpKind, NodeId, Pat, PatKind, Program, Ws};

/// Where a piece of trivia sits relative to its node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Before the first token of a node.
    Lead,
    /// Before a closing delimiter.
    Close,
    /// Between `(` and a keyword or `\`.
    Keyword,
    /// Before `|` or the `(` of a parameter list.
    Inner,
}

/// Visits the trivia inside `e`, excluding its own leading trivia.
pub fn for_each_inner_ws(e: &mut Exp, f: &mut impl FnMut(&mut Ws, Slot)) {
    match &mut e.kind {
        ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => {}
        ExpKind::Fun {
            kw_ws,
            params,
            body,
            close_ws,
        } => {
            f(kw_ws, Slot::Keyword);
            if let Some((open, close)) = &mut params.paren {
                f(open, Slot::Inner);
                for p in &mut params.pats {
                    pat_ws(p, f);
                }
                f(close, Slot::Close);
            } else {
                for p in &mut params.pats {
                    pat_ws(p, f);
                }
            }
            exp_ws(body, f);
            f(close_ws, Slot::Close);
        }
        ExpKind::App { head, args, close_ws } => {
            exp_ws(head, f);
            for a in args {
                exp_ws(a, f);
            }
            f(close_ws, Slot::Close);
        }
        ExpKind::List { elems, tail, close_ws } => {
            for x in elems {
                exp_ws(x, f);
            }
            if let Some(t) = tail {
                f(&mut t.bar_ws, Slot::Inner);
                exp_ws(&mut t.node, f);
            }
            f(close_ws, Slot::Close);
        }
        ExpKind::Let { def, body, close_ws } => {
            f(&mut def.kw_ws, Slot::Keyword);
            pat_ws(&mut def.pat, f);
            exp_ws(&mut def.bound, f);
            exp_ws(body, f);
            f(close_ws, Slot::Close);
        }
        ExpKind::Case {
            kw_ws,
            scrutinee,
            branches,
            close_ws,
        } => {
            f(kw_ws, Slot::Keyword);
            exp_ws(scrutinee, f);
            for b in branches {
                f(&mut b.ws, Slot::Lead);
                pat_ws(&mut b.pat, f);
                exp_ws(&mut b.body, f);
                f(&mut b.close_ws, Slot::Close);
            }
            f(close_ws, Slot::Close);
        }
    }
}

fn exp_ws(e: &mut Exp, f: &mut impl FnMut(&mut Ws, Slot)) {
    f(&mut e.ws, Slot::Lead);
    for_each_inner_ws(e, f);
}

fn pat_ws(p: &mut Pat, f: &mut impl FnMut(&mut Ws, Slot)) {
    f(&mut p.ws, Slot::Lead);
    if let PatKind::List { elems, tail, close_ws } = &mut p.kind {
        for x in elems {
            pat_ws(x, f);
        }
        if let Some(t) = tail {
            f(&mut t.bar_ws, Slot::Inner);
            pat_ws(&mut t.node, f);
        }
        f(close_ws, Slot::Close);
    }
}

/// Moves every line that starts inside `ws` by `delta` columns.
pub fn shift_ws(ws: &str, delta: i64) -> Ws {
    if delta == 0 || !ws.contains('\n') {
        return ws.to_string();
    }
    let mut out = String::with_capacity(ws.len());
    let mut lines = ws.split('\n');
    out.push_str(lines.next().unwrap_or(""));
    for line in lines {
        out.push('\n');
        let indent = line.len() - line.trim_start_matches(' ').len();
        let new = (indent as i64 + delta).max(0) as usize;
        out.push_str(&" ".repeat(new));
        out.push_str(&line[indent..]);
    }
    out
}

/// Shifts all lines inside `e` (not its leading trivia) by `delta` columns.
pub fn reindent(e: &mut Exp, delta: i64) {
    if delta != 0 {
        for_each_inner_ws(e, &mut |ws, _| *ws = shift_ws(ws, delta));
    }
}

pub fn has_comment(ws: &str) -> bool {
    ws.contains(';')
}

/// Whether any trivia inside `e` holds a comment.
pub fn has_inner_comment(e: &Exp) -> bool {
    let mut found = false;
    for_each_inner_ws(&mut e.clone(), &mut |ws, _| found |= has_comment(ws));
    found
}

/// Column where the line containing the end of `ws` starts its text, or
/// `None` if `ws` has no newline.
pub fn indent_after(ws: &str) -> Option<usize> {
    ws.rfind('\n').map(|i| ws.len() - i - 1)
}

/// Every name used anywhere in the program, plus the primitives.
pub fn taken_names(p: &Program) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = PRIMITIVES.iter().map(|(n, _)| n.to_string()).collect();
    for d in &p.defs {
        collect_pat_names(&d.pat, &mut out);
        collect_exp_names(&d.bound, &mut out);
    }
    out
}

pub fn collect_exp_names(e: &Exp, out: &mut BTreeSet<String>) {
    e.for_each(&mut |x| match &x.kind {
        ExpKind::Var(n) => {
            out.insert(n.clone());
        }
        ExpKind::Fun { params, .. } => {
            for p in &params.pats {
                collect_pat_names(p, out);
            }
        }
        ExpKind::Let { def, .. } => collect_pat_names(&def.pat, out),
        ExpKind::Case { branches, .. } => {
            for b in branches {
                collect_pat_names(&b.pat, out);
            }
        }
        _ => {}
    });
}

fn collect_pat_names(p: &Pat, out: &mut BTreeSet<String>) {
    for v in p.vars() {
        if let Some(n) = v.as_var() {
            out.insert(n.to_string());
        }
    }
}

/// `base` itself when allowed and free, else `base` followed by the smallest
/// positive integer that gives an unused name. The result is added to
/// `taken`.
pub fn fresh_name(base: &str, taken: &mut BTreeSet<String>, always_suffix: bool) -> String {
    if !always_suffix && !taken.contains(base) && crate::syntax::is_valid_ident(base) {
        taken.insert(base.to_string());
        return base.to_string();
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() || !crate::syntax::is_valid_ident(stem) {
        "x"
    } else {
        stem
    };
    let name = (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !taken.contains(n))
        .expect("unbounded suffixes");
    taken.insert(name.clone());
    name
}

/// Finds an expression anywhere in the program by id.
pub fn find_exp(p: &Program, id: NodeId) -> Option<&Exp> {
    p.defs.iter().find_map(|d| d.bound.find(id))
}

pub fn find_exp_mut(p: &mut Program, id: NodeId) -> Option<&mut Exp> {
    p.defs.iter_mut().find_map(|d| d.bound.find_mut(id))
}

/// Replaces the expression with this id by `new`, which inherits the old
/// leading trivia. Returns the old expression.
pub fn replace_exp(p: &mut Program, id: NodeId, mut new: Exp) -> Option<Exp> {
    let slot = find_exp_mut(p, id)?;
    new.ws = slot.ws.clone();
    Some(std::mem::replace(slot, new))
}

/// A variable use with a fresh id.
pub fn var(p: &mut Program, name: &str) -> Exp {
    Exp::new(p.fresh_id(), "", ExpKind::Var(name.to_string()))
}

/// A variable pattern with a fresh id.
pub fn pvar(p: &mut Program, name: &str) -> Pat {
    Pat::new(p.fresh_id(), "", PatKind::Var(name.to_string()))
}

/// Finds the `let` expression whose definition has id `def`.
pub fn find_let_mut(p: &mut Program, def: NodeId) -> Option<&mut Exp> {
    let mut target = None;
    for d in &p.defs {
        d.bound.for_each(&mut |e| {
            if let ExpKind::Let { def: ld, .. } = &e.kind {
                if ld.id == def {
                    target = Some(e.id);
                }
            }
        });
    }
    find_exp_mut(p, target?)
}

pub fn def_index(p: &Program, id: NodeId) -> Option<usize> {
    p.defs.iter().position(|d| d.id == id)
}

/// Replaces the `let` with definition id `def` by its body, which takes
/// over the leading trivia of the `let`.
pub fn unwrap_let(p: &mut Program, def: NodeId) -> bool {
    let Some(e) = find_let_mut(p, def) else {
        return false;
    };
    let ExpKind::Let { body, .. } = std::mem::replace(&mut e.kind, ExpKind::Bool(false)) else {
        unreachable!()
    };
    let ws = std::mem::take(&mut e.ws);
    *e = *body;
    e.ws = ws;
    true
}

/// Removes top-level definition `i`. The first definition's leading trivia
/// is handed to its successor so the file keeps its header; the
/// successor's own comments stay after it.
pub fn remove_def(p: &mut Program, i: usize) -> Def {
    let d = p.defs.remove(i);
    if i == 0 {
        if let Some(next) = p.defs.first_mut() {
            let own = next.ws.trim_start_matches(['\n', ' ', '\t']);
            next.ws = match (d.ws.is_empty(), own.is_empty()) {
                (_, true) => d.ws.clone(),
                (true, false) => own.to_string(),
                (false, false) => format!("{}\n{own}", d.ws),
            };
        }
    }
    d
}

/// Inserts a definition before index `i`. It takes over the trivia in front
/// of the definition it displaces, which moves to a new line.
pub fn insert_def(p: &mut Program, i: usize, mut d: Def) {
    if let Some(next) = p.defs.get_mut(i) {
        d.ws = std::mem::replace(&mut next.ws, "\n".into());
        if d.ws.is_empty() && i > 0 {
            d.ws = "\n".into();
        }
    } else {
        d.ws = "\n".into();
    }
    p.defs.insert(i, d);
}

/// Gives every node in `e` a fresh id.
pub fn refresh_ids(p: &mut Program, e: &mut Exp) {
    let mut next = p.next_id;
    e.for_each_mut(&mut |x| {
        x.id = NodeId(next);
        next += 1;
        if let ExpKind::Let { def, .. } = &mut x.kind {
            def.id = NodeId(next);
            next += 1;
        }
        if let ExpKind::Case { branches, .. } = &mut x.kind {
            for b in branches {
                b.id = NodeId(next);
                next += 1;
            }
        }
    });
    e.for_each_pat_mut(&mut |x| {
        x.id = NodeId(next);
        next += 1;
    });
    p.next_id = next;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifting_keeps_comments() {
        assert_eq!(shift_ws("\n  ; hi\n    ", 2), "\n    ; hi\n      ");
        assert_eq!(shift_ws("\n  ", -4), "\n");
        assert_eq!(shift_ws(" ", 3), " ");
    }

    #[test]
    fn fresh_names_skip_taken() {
        let mut taken: BTreeSet<String> = ["x1", "w"].iter().map(|s| s.to_string()).collect();
        assert_eq!(fresh_name("x", &mut taken, true), "x2");
        assert_eq!(fresh_name("w", &mut taken, false), "w1");
        assert_eq!(fresh_name("h", &mut taken, false), "h");
        assert_eq!(fresh_name("h", &mut taken, false), "h1");
    }
}
