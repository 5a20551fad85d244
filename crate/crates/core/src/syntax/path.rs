//! Structural addresses of code items.
//!
//! A path is the sequence of child edges from the program root, printed as
//! `def:0/bound/arg:4`. Application heads are `arg:0` and arguments count
//! from 1, so `arg:k` is the k-th argument in the usual sense.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::ast::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Def(usize),
    Pat,
    Bound,
    Body,
    /// The definition part of a `let`.
    LetDef,
    Arg(usize),
    Param(usize),
    Elem(usize),
    Tail,
    Scrut,
    Branch(usize),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Def(i) => write!(f, "def:{i}"),
            Step::Pat => f.write_str("pat"),
            Step::Bound => f.write_str("bound"),
            Step::Body => f.write_str("body"),
            Step::LetDef => f.write_str("def"),
            Step::Arg(i) => write!(f, "arg:{i}"),
            Step::Param(i) => write!(f, "param:{i}"),
            Step::Elem(i) => write!(f, "elem:{i}"),
            Step::Tail => f.write_str("tail"),
            Step::Scrut => f.write_str("scrut"),
            Step::Branch(i) => write!(f, "branch:{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdError {
    #[error("malformed id `{0}`")]
    Malformed(String),
    #[error("unknown id `{0}`")]
    UnknownId(String),
}

impl FromStr for Step {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || IdError::Malformed(s.to_string());
        let (name, index) = match s.split_once(':') {
            Some((n, i)) => (n, Some(i.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        Ok(match (name, index) {
            ("def", Some(i)) => Step::Def(i),
            ("def", None) => Step::LetDef,
            ("pat", None) => Step::Pat,
            ("bound", None) => Step::Bound,
            ("body", None) => Step::Body,
            ("arg", Some(i)) => Step::Arg(i),
            ("param", Some(i)) => Step::Param(i),
            ("elem", Some(i)) => Step::Elem(i),
            ("tail", None) => Step::Tail,
            ("scrut", None) => Step::Scrut,
            ("branch", Some(i)) => Step::Branch(i),
            _ => return Err(bad()),
        })
    }
}

/// Address of a code item.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemPath(pub Vec<Step>);

impl ItemPath {
    pub fn root() -> Self {
        ItemPath(Vec::new())
    }

    pub fn child(&self, step: Step) -> Self {
        let mut v = self.0.clone();
        v.push(step);
        ItemPath(v)
    }

    pub fn parent(&self) -> Option<ItemPath> {
        if self.0.is_empty() {
            None
        } else {
            Some(ItemPath(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last(&self) -> Option<Step> {
        self.0.last().copied()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_prefix_of(&self, other: &ItemPath) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Index of the top-level definition this path lies in.
    pub fn top_def(&self) -> Option<usize> {
        match self.0.first() {
            Some(Step::Def(i)) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for ItemPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for ItemPath {
    type Err = IdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(IdError::Malformed(s.to_string()));
        }
        let steps = s
            .split('/')
            .map(|p| p.parse::<Step>().map_err(|_| IdError::Malformed(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        match steps.first() {
            Some(Step::Def(_)) => Ok(ItemPath(steps)),
            _ => Err(IdError::Malformed(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    Exp,
    Pat,
    Def,
    Branch,
}

impl ItemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ItemKind::Exp => "exp",
            ItemKind::Pat => "pat",
            ItemKind::Def => "def",
            ItemKind::Branch => "branch",
        }
    }
}

/// Shared reference to any addressable node.
#[derive(Clone, Copy, Debug)]
pub enum NodeRef<'a> {
    Def(&'a Def),
    LetDef(&'a LetDef),
    Exp(&'a Exp),
    Pat(&'a Pat),
    Branch(&'a Branch),
}

impl<'a> NodeRef<'a> {
    pub fn id(&self) -> NodeId {
        match self {
            NodeRef::Def(d) => d.id,
            NodeRef::LetDef(d) => d.id,
            NodeRef::Exp(e) => e.id,
            NodeRef::Pat(p) => p.id,
            NodeRef::Branch(b) => b.id,
        }
    }

    pub fn span(&self) -> Span {
        match self {
            NodeRef::Def(d) => d.span,
            NodeRef::LetDef(d) => d.span,
            NodeRef::Exp(e) => e.span,
            NodeRef::Pat(p) => p.span,
            NodeRef::Branch(b) => b.span,
        }
    }

    pub fn kind(&self) -> ItemKind {
        match self {
            NodeRef::Def(_) | NodeRef::LetDef(_) => ItemKind::Def,
            NodeRef::Exp(_) => ItemKind::Exp,
            NodeRef::Pat(_) => ItemKind::Pat,
            NodeRef::Branch(_) => ItemKind::Branch,
        }
    }

    pub fn as_exp(&self) -> Option<&'a Exp> {
        match self {
            NodeRef::Exp(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_pat(&self) -> Option<&'a Pat> {
        match self {
            NodeRef::Pat(p) => Some(p),
            _ => None,
        }
    }

    /// Pattern and bound expression of a definition item.
    pub fn as_binding(&self) -> Option<(&'a Pat, &'a Exp)> {
        match self {
            NodeRef::Def(d) => Some((&d.pat, &d.bound)),
            NodeRef::LetDef(d) => Some((&d.pat, &d.bound)),
            _ => None,
        }
    }

    /// Children in source order, labelled with their step.
    pub fn children(&self) -> Vec<(Step, NodeRef<'a>)> {
        match *self {
            NodeRef::Def(d) => vec![(Step::Pat, NodeRef::Pat(&d.pat)), (Step::Bound, NodeRef::Exp(&d.bound))],
            NodeRef::LetDef(d) => vec![(Step::Pat, NodeRef::Pat(&d.pat)), (Step::Bound, NodeRef::Exp(&d.bound))],
            NodeRef::Branch(b) => vec![(Step::Pat, NodeRef::Pat(&b.pat)), (Step::Body, NodeRef::Exp(&b.body))],
            NodeRef::Pat(p) => match &p.kind {
                PatKind::List { elems, tail, .. } => elems
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (Step::Elem(i), NodeRef::Pat(x)))
                    .chain(tail.iter().map(|t| (Step::Tail, NodeRef::Pat(&t.node))))
                    .collect(),
                _ => vec![],
            },
            NodeRef::Exp(e) => match &e.kind {
                ExpKind::Num(_) | ExpKind::Str(_) | ExpKind::Bool(_) | ExpKind::Var(_) => vec![],
                ExpKind::Fun { params, body, .. } => params
                    .pats
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (Step::Param(i), NodeRef::Pat(p)))
                    .chain(std::iter::once((Step::Body, NodeRef::Exp(body))))
                    .collect(),
                ExpKind::App { head, args, .. } => std::iter::once((Step::Arg(0), NodeRef::Exp(head)))
                    .chain(
                        args.iter()
                            .enumerate()
                            .map(|(i, a)| (Step::Arg(i + 1), NodeRef::Exp(a))),
                    )
                    .collect(),
                ExpKind::List { elems, tail, .. } => elems
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (Step::Elem(i), NodeRef::Exp(x)))
                    .chain(tail.iter().map(|t| (Step::Tail, NodeRef::Exp(&t.node))))
                    .collect(),
                ExpKind::Let { def, body, .. } => {
                    vec![(Step::LetDef, NodeRef::LetDef(def)), (Step::Body, NodeRef::Exp(body))]
                }
                ExpKind::Case {
                    scrutinee, branches, ..
                } => std::iter::once((Step::Scrut, NodeRef::Exp(scrutinee)))
                    .chain(
                        branches
                            .iter()
                            .enumerate()
                            .map(|(i, b)| (Step::Branch(i), NodeRef::Branch(b))),
                    )
                    .collect(),
            },
        }
    }

    pub fn child(&self, step: Step) -> Option<NodeRef<'a>> {
        self.children().into_iter().find(|(s, _)| *s == step).map(|(_, n)| n)
    }
}

/// Looks up the node addressed by `path`.
pub fn node_at<'a>(p: &'a Program, path: &ItemPath) -> Result<NodeRef<'a>, IdError> {
    let unknown = || IdError::UnknownId(path.to_string());
    let mut steps = path.0.iter();
    let mut node = match steps.next() {
        Some(Step::Def(i)) => NodeRef::Def(p.defs.get(*i).ok_or_else(unknown)?),
        _ => return Err(unknown()),
    };
    for s in steps {
        node = node.child(*s).ok_or_else(unknown)?;
    }
    Ok(node)
}

/// All items of the program in pre-order (parents before children, siblings
/// in source order).
pub fn walk(p: &Program) -> Vec<(ItemPath, NodeRef<'_>)> {
    let mut out = Vec::new();
    for (i, d) in p.defs.iter().enumerate() {
        walk_from(ItemPath(vec![Step::Def(i)]), NodeRef::Def(d), &mut out);
    }
    out
}

/// Items under (and including) `node`, whose path is `path`.
pub fn walk_from<'a>(path: ItemPath, node: NodeRef<'a>, out: &mut Vec<(ItemPath, NodeRef<'a>)>) {
    let children = node.children();
    out.push((path.clone(), node));
    for (s, c) in children {
        walk_from(path.child(s), c, out);
    }
}

/// Path of the node with the given id, if any.
pub fn path_of(p: &Program, id: NodeId) -> Option<ItemPath> {
    walk(p).into_iter().find(|(_, n)| n.id() == id).map(|(path, _)| path)
}

/// Mutable access to the expression at `path`.
pub fn exp_at_mut<'a>(p: &'a mut Program, path: &ItemPath) -> Option<&'a mut Exp> {
    match step_mut(p, path)? {
        NodeMut::Exp(e) => Some(e),
        _ => None,
    }
}

/// Mutable access to the pattern at `path`.
pub fn pat_at_mut<'a>(p: &'a mut Program, path: &ItemPath) -> Option<&'a mut Pat> {
    match step_mut(p, path)? {
        NodeMut::Pat(x) => Some(x),
        _ => None,
    }
}

pub enum NodeMut<'a> {
    Def(&'a mut Def),
    LetDef(&'a mut LetDef),
    Exp(&'a mut Exp),
    Pat(&'a mut Pat),
    Branch(&'a mut Branch),
}

impl<'a> NodeMut<'a> {
    fn child(self, step: Step) -> Option<NodeMut<'a>> {
        Some(match (self, step) {
            (NodeMut::Def(d), Step::Pat) => NodeMut::Pat(&mut d.pat),
            (NodeMut::Def(d), Step::Bound) => NodeMut::Exp(&mut d.bound),
            (NodeMut::LetDef(d), Step::Pat) => NodeMut::Pat(&mut d.pat),
            (NodeMut::LetDef(d), Step::Bound) => NodeMut::Exp(&mut d.bound),
            (NodeMut::Branch(b), Step::Pat) => NodeMut::Pat(&mut b.pat),
            (NodeMut::Branch(b), Step::Body) => NodeMut::Exp(&mut b.body),
            (NodeMut::Pat(p), s) => match (&mut p.kind, s) {
                (PatKind::List { elems, .. }, Step::Elem(i)) => NodeMut::Pat(elems.get_mut(i)?),
                (PatKind::List { tail: Some(t), .. }, Step::Tail) => NodeMut::Pat(&mut t.node),
                _ => return None,
            },
            (NodeMut::Exp(e), s) => match (&mut e.kind, s) {
                (ExpKind::Fun { params, .. }, Step::Param(i)) => NodeMut::Pat(params.pats.get_mut(i)?),
                (ExpKind::Fun { body, .. }, Step::Body) => NodeMut::Exp(body),
                (ExpKind::App { head, .. }, Step::Arg(0)) => NodeMut::Exp(head),
                (ExpKind::App { args, .. }, Step::Arg(i)) => NodeMut::Exp(args.get_mut(i - 1)?),
                (ExpKind::List { elems, .. }, Step::Elem(i)) => NodeMut::Exp(elems.get_mut(i)?),
                (ExpKind::List { tail: Some(t), .. }, Step::Tail) => NodeMut::Exp(&mut t.node),
                (ExpKind::Let { def, .. }, Step::LetDef) => NodeMut::LetDef(def),
                (ExpKind::Let { body, .. }, Step::Body) => NodeMut::Exp(body),
                (ExpKind::Case { scrutinee, .. }, Step::Scrut) => NodeMut::Exp(scrutinee),
                (ExpKind::Case { branches, .. }, Step::Branch(i)) => NodeMut::Branch(branches.get_mut(i)?),
                _ => return None,
            },
            _ => return None,
        })
    }
}

/// Mutable access to the node at `path`.
pub fn step_mut<'a>(p: &'a mut Program, path: &ItemPath) -> Option<NodeMut<'a>> {
    let mut steps = path.0.iter();
    let mut node = match steps.next()? {
        Step::Def(i) => NodeMut::Def(p.defs.get_mut(*i)?),
        _ => return None,
    };
    for s in steps {
        node = node.child(*s)?;
    }
    Some(node)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_strings_round_trip() {
        for s in [
            "def:0",
            "def:3/bound/arg:4",
            "def:1/bound/def/pat/elem:2",
            "def:0/bound/branch:1/body",
        ] {
            let p: ItemPath = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("bound/arg:1".parse::<ItemPath>().is_err());
        assert!("def:x".parse::<ItemPath>().is_err());
        assert!("".parse::<ItemPath>().is_err());
    }
}
