//! Printing. `relayout` prints a tree and rewrites every span to match the
//! produced text, which is how transformed trees regain accurate positions.

use super::ast::*;

struct Printer {
    out: String,
    pos: Pos,
}

impl Printer {
    fn new() -> Self {
        Printer {
            out: String::new(),
            pos: Pos::START,
        }
    }

    fn push(&mut self, s: &str) {
        for c in s.chars() {
            if c == '\n' {
                self.pos.line += 1;
                self.pos.col = 0;
            } else {
                self.pos.col += 1;
            }
        }
        self.out.push_str(s);
        self.pos.offset = self.out.len();
    }

    fn def(&mut self, d: &mut Def) {
        self.push(&d.ws);
        let start = self.pos;
        self.push("(");
        self.push(&d.kw_ws);
        self.push(if d.rec { "defrec" } else { "def" });
        self.pat(&mut d.pat);
        self.exp(&mut d.bound);
        self.push(&d.close_ws);
        self.push(")");
        d.span = Span::new(start, self.pos);
    }

    fn exp(&mut self, e: &mut Exp) {
        self.push(&e.ws);
        let start = self.pos;
        match &mut e.kind {
            ExpKind::Num(n) => self.num(n),
            ExpKind::Str(s) => self.str_lit(s),
            ExpKind::Bool(b) => self.push(if *b { "true" } else { "false" }),
            ExpKind::Var(x) => self.push(x),
            ExpKind::Fun {
                kw_ws,
                params,
                body,
                close_ws,
            } => {
                self.push("(");
                self.push(kw_ws);
                self.push("\\");
                match &params.paren {
                    Some((open_ws, close_ws)) => {
                        let close_ws = close_ws.clone();
                        self.push(open_ws);
                        self.push("(");
                        for p in &mut params.pats {
                            self.pat(p);
                        }
                        self.push(&close_ws);
                        self.push(")");
                    }
                    None => {
                        for p in &mut params.pats {
                            self.pat(p);
                        }
                    }
                }
                self.exp(body);
                self.push(close_ws);
                self.push(")");
            }
            ExpKind::App { head, args, close_ws } => {
                self.push("(");
                self.exp(head);
                for a in args {
                    self.exp(a);
                }
                self.push(close_ws);
                self.push(")");
            }
            ExpKind::List { elems, tail, close_ws } => {
                self.push("[");
                for x in elems {
                    self.exp(x);
                }
                if let Some(t) = tail {
                    self.push(&t.bar_ws);
                    self.push("|");
                    self.exp(&mut t.node);
                }
                self.push(close_ws);
                self.push("]");
            }
            ExpKind::Let { def, body, close_ws } => {
                self.push("(");
                self.push(&def.kw_ws);
                let dstart = self.pos;
                self.push(if def.rec { "letrec" } else { "let" });
                self.pat(&mut def.pat);
                self.exp(&mut def.bound);
                def.span = Span::new(dstart, self.pos);
                self.exp(body);
                self.push(close_ws);
                self.push(")");
            }
            ExpKind::Case {
                kw_ws,
                scrutinee,
                branches,
                close_ws,
            } => {
                self.push("(");
                self.push(kw_ws);
                self.push("case");
                self.exp(scrutinee);
                for b in branches {
                    self.push(&b.ws);
                    let bstart = self.pos;
                    self.push("(");
                    self.pat(&mut b.pat);
                    self.exp(&mut b.body);
                    self.push(&b.close_ws);
                    self.push(")");
                    b.span = Span::new(bstart, self.pos);
                }
                self.push(close_ws);
                self.push(")");
            }
        }
        e.span = Span::new(start, self.pos);
    }

    fn pat(&mut self, p: &mut Pat) {
        self.push(&p.ws);
        let start = self.pos;
        match &mut p.kind {
            PatKind::Num(n) => self.num(n),
            PatKind::Str(s) => self.str_lit(s),
            PatKind::Bool(b) => self.push(if *b { "true" } else { "false" }),
            PatKind::Var(x) => self.push(x),
            PatKind::List { elems, tail, close_ws } => {
                self.push("[");
                for x in elems {
                    self.pat(x);
                }
                if let Some(t) = tail {
                    self.push(&t.bar_ws);
                    self.push("|");
                    self.pat(&mut t.node);
                }
                self.push(close_ws);
                self.push("]");
            }
        }
        p.span = Span::new(start, self.pos);
    }

    fn num(&mut self, n: &NumLit) {
        self.push(&n.text);
        if n.frozen {
            self.push("!");
        }
        if let Some(r) = &n.range {
            self.push(r);
        }
    }

    fn str_lit(&mut self, s: &StrLit) {
        let q = s.quote.to_string();
        self.push(&q);
        self.push(&s.content);
        self.push(&q);
    }
}

/// Prints `p`, updating every span in it to match the returned text.
pub fn relayout(p: &mut Program) -> String {
    let mut pr = Printer::new();
    for d in &mut p.defs {
        pr.def(d);
    }
    pr.push(&p.trailing_ws);
    pr.out
}

pub fn print(p: &Program) -> String {
    relayout(&mut p.clone())
}

/// Prints a single expression, including its leading trivia.
pub fn print_exp(e: &Exp) -> String {
    let mut pr = Printer::new();
    pr.exp(&mut e.clone());
    pr.out
}

/// Prints an expression without its leading trivia.
pub fn print_exp_trimmed(e: &Exp) -> String {
    let mut e = e.clone();
    e.ws.clear();
    let mut pr = Printer::new();
    pr.exp(&mut e);
    pr.out
}

pub fn print_pat(p: &Pat) -> String {
    let mut p = p.clone();
    p.ws.clear();
    let mut pr = Printer::new();
    pr.pat(&mut p);
    pr.out
}

/// Recomputes the spans of a detached expression as if it were printed alone,
/// leading trivia included, from the start of a document.
pub fn relayout_exp(e: &mut Exp) {
    let mut pr = Printer::new();
    pr.exp(e);
}

/// Canonical text of a tree, ignoring all trivia. Two trees are equal modulo
/// whitespace, comments and spans exactly when their canonical texts match.
pub fn canonical(p: &Program) -> String {
    let mut out = String::new();
    for d in &p.defs {
        out.push('(');
        out.push_str(if d.rec { "defrec " } else { "def " });
        canon_pat(&d.pat, &mut out);
        out.push(' ');
        canon_exp(&d.bound, &mut out);
        out.push_str(")\n");
    }
    out
}

pub fn canonical_exp(e: &Exp) -> String {
    let mut out = String::new();
    canon_exp(e, &mut out);
    out
}

pub fn canonical_pat(p: &Pat) -> String {
    let mut out = String::new();
    canon_pat(p, &mut out);
    out
}

fn canon_num(n: &NumLit, out: &mut String) {
    out.push_str(&n.text);
    if n.frozen {
        out.push('!');
    }
    if let Some(r) = &n.range {
        out.push_str(r);
    }
}

fn canon_str(s: &StrLit, out: &mut String) {
    out.push(s.quote);
    out.push_str(&s.content);
    out.push(s.quote);
}

fn canon_exp(e: &Exp, out: &mut String) {
    match &e.kind {
        ExpKind::Num(n) => canon_num(n, out),
        ExpKind::Str(s) => canon_str(s, out),
        ExpKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        ExpKind::Var(x) => out.push_str(x),
        ExpKind::Fun { params, body, .. } => {
            out.push_str("(\\");
            if params.paren.is_some() {
                out.push('(');
                for (i, p) in params.pats.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    canon_pat(p, out);
                }
                out.push(')');
            } else {
                canon_pat(&params.pats[0], out);
            }
            out.push(' ');
            canon_exp(body, out);
            out.push(')');
        }
        ExpKind::App { head, args, .. } => {
            out.push('(');
            canon_exp(head, out);
            for a in args {
                out.push(' ');
                canon_exp(a, out);
            }
            out.push(')');
        }
        ExpKind::List { elems, tail, .. } => {
            out.push('[');
            for (i, x) in elems.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                canon_exp(x, out);
            }
            if let Some(t) = tail {
                out.push_str(" | ");
                canon_exp(&t.node, out);
            }
            out.push(']');
        }
        ExpKind::Let { def, body, .. } => {
            out.push_str(if def.rec { "(letrec " } else { "(let " });
            canon_pat(&def.pat, out);
            out.push(' ');
            canon_exp(&def.bound, out);
            out.push(' ');
            canon_exp(body, out);
            out.push(')');
        }
        ExpKind::Case {
            scrutinee, branches, ..
        } => {
            out.push_str("(case ");
            canon_exp(scrutinee, out);
            for b in branches {
                out.push_str(" (");
                canon_pat(&b.pat, out);
                out.push(' ');
                canon_exp(&b.body, out);
                out.push(')');
            }
            out.push(')');
        }
    }
}

fn canon_pat(p: &Pat, out: &mut String) {
    match &p.kind {
        PatKind::Num(n) => canon_num(n, out),
        PatKind::Str(s) => canon_str(s, out),
        PatKind::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        PatKind::Var(x) => out.push_str(x),
        PatKind::List { elems, tail, .. } => {
            out.push('[');
            for (i, x) in elems.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                canon_pat(x, out);
            }
            if let Some(t) = tail {
                out.push_str(" | ");
                canon_pat(&t.node, out);
            }
            out.push(']');
        }
    }
}
