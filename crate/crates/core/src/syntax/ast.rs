//! Lossless syntax tree for Little programs.
//!
//! Every node stores the trivia (whitespace and `;` comments) that precedes
//! its first token in `ws`. Composite nodes additionally store the trivia that
//! precedes their closing delimiter and any keyword. Printing a tree therefore
//! reproduces the source byte for byte.

use std::fmt;

/// Identity of a node within one program value.
///
/// Ids survive transformations: a subtree that is moved or copied keeps the
/// ids of its nodes, while newly synthesized nodes receive fresh ids. Binding
/// comparisons across a transformation rely on this.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// A position in source text. Lines start at 1, columns at 0 and count
/// characters, not bytes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub line: u32,
    pub col: u32,
    pub offset: usize,
}

impl Pos {
    pub const START: Pos = Pos {
        line: 1,
        col: 0,
        offset: 0,
    };
}

/// Half-open source range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    pub fn new(start: Pos, end: Pos) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start.offset <= other.start.offset && other.end.offset <= self.end.offset
    }

    pub fn is_multiline(&self) -> bool {
        self.start.line != self.end.line
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}-{}:{}",
            self.start.line, self.start.col, self.end.line, self.end.col
        )
    }
}

/// Trivia text: whitespace and comments.
pub type Ws = String;

/// A number literal with its optional decorations.
///
/// The frozen flag (`!`) and range annotation (`{lo-hi}` or
/// `{lo-hi,"hidden"}`) are kept verbatim and never interpreted.
#[derive(Clone, Debug, PartialEq)]
pub struct NumLit {
    pub text: String,
    pub value: f64,
    pub frozen: bool,
    pub range: Option<String>,
}

impl NumLit {
    pub fn from_value(value: f64) -> Self {
        NumLit {
            text: format_number(value),
            value,
            frozen: false,
            range: None,
        }
    }
}

/// Formats a number the way it would be written by hand: integral values
/// without a fractional part.
pub fn format_number(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrLit {
    pub quote: char,
    pub content: String,
}

/// The tail of a list literal or list pattern: `| t`.
#[derive(Clone, Debug)]
pub struct Tail<T> {
    pub bar_ws: Ws,
    pub node: Box<T>,
}

#[derive(Clone, Debug)]
pub struct Exp {
    pub id: NodeId,
    pub ws: Ws,
    pub span: Span,
    pub kind: ExpKind,
}

#[derive(Clone, Debug)]
pub enum ExpKind {
    Num(NumLit),
    Str(StrLit),
    Bool(bool),
    Var(String),
    /// `(\p e)` or `(\(p1 .. pn) e)`.
    Fun {
        kw_ws: Ws,
        params: Params,
        body: Box<Exp>,
        close_ws: Ws,
    },
    /// `(f e1 .. en)`, stored n-ary.
    App {
        head: Box<Exp>,
        args: Vec<Exp>,
        close_ws: Ws,
    },
    /// `[e1 .. en]` or `[e1 .. en | t]`.
    List {
        elems: Vec<Exp>,
        tail: Option<Tail<Exp>>,
        close_ws: Ws,
    },
    /// `(let p e1 e2)` or `(letrec p e1 e2)`.
    Let {
        def: LetDef,
        body: Box<Exp>,
        close_ws: Ws,
    },
    /// `(case e (p1 e1) .. (pn en))`.
    Case {
        kw_ws: Ws,
        scrutinee: Box<Exp>,
        branches: Vec<Branch>,
        close_ws: Ws,
    },
}

/// Parameter list of a lambda. `paren` holds the trivia before `(` and `)`
/// when the list is parenthesized; bare lambdas have exactly one pattern.
#[derive(Clone, Debug)]
pub struct Params {
    pub paren: Option<(Ws, Ws)>,
    pub pats: Vec<Pat>,
}

/// The definition part of a `let`: keyword, pattern and bound expression.
#[derive(Clone, Debug)]
pub struct LetDef {
    pub id: NodeId,
    pub kw_ws: Ws,
    pub rec: bool,
    pub pat: Pat,
    pub bound: Box<Exp>,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Branch {
    pub id: NodeId,
    pub ws: Ws,
    pub pat: Pat,
    pub body: Exp,
    pub close_ws: Ws,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Pat {
    pub id: NodeId,
    pub ws: Ws,
    pub span: Span,
    pub kind: PatKind,
}

#[derive(Clone, Debug)]
pub enum PatKind {
    Num(NumLit),
    Str(StrLit),
    Bool(bool),
    Var(String),
    /// `[]`, `[p1 .. pn]` or `[p1 .. pn | t]`.
    List {
        elems: Vec<Pat>,
        tail: Option<Tail<Pat>>,
        close_ws: Ws,
    },
}

/// A top-level `(def p e)` or `(defrec p e)`.
#[derive(Clone, Debug)]
pub struct Def {
    pub id: NodeId,
    pub ws: Ws,
    pub kw_ws: Ws,
    pub rec: bool,
    pub pat: Pat,
    pub bound: Exp,
    pub close_ws: Ws,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub struct Program {
    pub defs: Vec<Def>,
    pub trailing_ws: Ws,
    /// Next unused node id.
    pub next_id: u32,
}

impl Program {
    pub fn fresh_id(&mut self) -> NodeId {
        let id = NodeId(self.next_id);
        self.next_id += 1;
        id
    }

    pub fn main_def(&self) -> Option<&Def> {
        self.defs.last()
    }
}

impl Exp {
    pub fn new(id: NodeId, ws: impl Into<Ws>, kind: ExpKind) -> Self {
        Exp {
            id,
            ws: ws.into(),
            span: Span::default(),
            kind,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match &self.kind {
            ExpKind::Var(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_num(&self) -> Option<&NumLit> {
        match &self.kind {
            ExpKind::Num(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self.kind, ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_))
    }

    /// Immediate child expressions in source order.
    pub fn children(&self) -> Vec<&Exp> {
        match &self.kind {
            ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => vec![],
            ExpKind::Fun { body, .. } => vec![body],
            ExpKind::App { head, args, .. } => std::iter::once(head.as_ref()).chain(args.iter()).collect(),
            ExpKind::List { elems, tail, .. } => elems.iter().chain(tail.iter().map(|t| t.node.as_ref())).collect(),
            ExpKind::Let { def, body, .. } => vec![&def.bound, body],
            ExpKind::Case {
                scrutinee, branches, ..
            } => std::iter::once(scrutinee.as_ref())
                .chain(branches.iter().map(|b| &b.body))
                .collect(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Exp> {
        match &mut self.kind {
            ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => vec![],
            ExpKind::Fun { body, .. } => vec![body],
            ExpKind::App { head, args, .. } => std::iter::once(head.as_mut()).chain(args.iter_mut()).collect(),
            ExpKind::List { elems, tail, .. } => elems
                .iter_mut()
                .chain(tail.iter_mut().map(|t| t.node.as_mut()))
                .collect(),
            ExpKind::Let { def, body, .. } => vec![&mut def.bound, body],
            ExpKind::Case {
                scrutinee, branches, ..
            } => std::iter::once(scrutinee.as_mut())
                .chain(branches.iter_mut().map(|b| &mut b.body))
                .collect(),
        }
    }

    /// Pre-order search for an expression by id.
    pub fn find(&self, id: NodeId) -> Option<&Exp> {
        if self.id == id {
            return Some(self);
        }
        self.children().into_iter().find_map(|c| c.find(id))
    }

    pub fn find_mut(&mut self, id: NodeId) -> Option<&mut Exp> {
        if self.id == id {
            return Some(self);
        }
        self.children_mut().into_iter().find_map(|c| c.find_mut(id))
    }

    /// Calls `f` on this expression and every descendant expression.
    pub fn for_each(&self, f: &mut impl FnMut(&Exp)) {
        f(self);
        for c in self.children() {
            c.for_each(f);
        }
    }

    pub fn for_each_mut(&mut self, f: &mut impl FnMut(&mut Exp)) {
        f(self);
        for c in self.children_mut() {
            c.for_each_mut(f);
        }
    }

    /// Calls `f` on every pattern that appears inside this expression.
    pub fn for_each_pat_mut(&mut self, f: &mut impl FnMut(&mut Pat)) {
        match &mut self.kind {
            ExpKind::Fun { params, .. } => params.pats.iter_mut().for_each(|p| p.for_each_mut(f)),
            ExpKind::Let { def, .. } => def.pat.for_each_mut(f),
            ExpKind::Case { branches, .. } => branches.iter_mut().for_each(|b| b.pat.for_each_mut(f)),
            _ => {}
        }
        for c in self.children_mut() {
            c.for_each_pat_mut(f);
        }
    }
}

impl Pat {
    pub fn new(id: NodeId, ws: impl Into<Ws>, kind: PatKind) -> Self {
        Pat {
            id,
            ws: ws.into(),
            span: Span::default(),
            kind,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match &self.kind {
            PatKind::Var(x) => Some(x),
            _ => None,
        }
    }

    /// Variables bound by this pattern, in source order.
    pub fn vars(&self) -> Vec<&Pat> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a Pat>) {
        match &self.kind {
            PatKind::Var(_) => out.push(self),
            PatKind::List { elems, tail, .. } => {
                for e in elems {
                    e.collect_vars(out);
                }
                if let Some(t) = tail {
                    t.node.collect_vars(out);
                }
            }
            _ => {}
        }
    }

    pub fn for_each_mut(&mut self, f: &mut impl FnMut(&mut Pat)) {
        f(self);
        if let PatKind::List { elems, tail, .. } = &mut self.kind {
            for e in elems {
                e.for_each_mut(f);
            }
            if let Some(t) = tail {
                t.node.for_each_mut(f);
            }
        }
    }

    pub fn find(&self, id: NodeId) -> Option<&Pat> {
        if self.id == id {
            return Some(self);
        }
        match &self.kind {
            PatKind::List { elems, tail, .. } => elems
                .iter()
                .chain(tail.iter().map(|t| t.node.as_ref()))
                .find_map(|p| p.find(id)),
            _ => None,
        }
    }
}

impl Def {
    pub fn name(&self) -> Option<&str> {
        self.pat.as_var()
    }
}
