//! Variable name suggestions.

use std::collections::BTreeSet;

use crate::binding::{primitive_params, resolve, BindingMap, Resolution};
use crate::edit::fresh_name;
use crate::syntax::{node_at, ExpKind, ItemPath, NodeRef, PatKind, Program, Step};

/// Name of the parameter that the expression at `path` is passed for, if it
/// is an argument of a call to a primitive or to a lambda-bound definition.
pub fn arg_param_name(p: &Program, map: &BindingMap, path: &ItemPath) -> Option<String> {
    let Some(Step::Arg(k)) = path.last() else {
        return None;
    };
    if k == 0 {
        return None;
    }
    let call = node_at(p, &path.parent()?).ok()?.as_exp()?;
    let ExpKind::App { head, .. } = &call.kind else {
        return None;
    };
    let name = head.as_var()?;
    match &map.use_by_id(head.id)?.res {
        Resolution::Primitive(_) => primitive_params(name)?.get(k - 1).map(|s| s.to_string()),
        Resolution::Bound(b) => {
            let def_path = crate::syntax::path_of(p, *b)?.parent()?;
            let (pat, bound) = node_at(p, &def_path).ok()?.as_binding()?;
            if pat.id != *b {
                return None;
            }
            let ExpKind::Fun { params, .. } = &bound.kind else {
                return None;
            };
            match &params.pats.get(k - 1)?.kind {
                PatKind::Var(x) => Some(x.clone()),
                _ => None,
            }
        }
        Resolution::Unbound(_) => None,
    }
}

/// Name of the top-level definition a path lies in.
pub fn enclosing_def_name(p: &Program, path: &ItemPath) -> Option<String> {
    p.defs.get(path.top_def()?)?.name().map(str::to_string)
}

/// Up to `count` distinct fresh names for a new variable standing for the
/// expressions at `paths` (most relevant first): parameter names at their
/// argument positions, then the enclosing definition's name with a suffix,
/// then `x1`, `x2`, ...
pub fn suggest(p: &Program, paths: &[&ItemPath], taken: &mut BTreeSet<String>, count: usize) -> Vec<String> {
    let map = resolve(p);
    let mut out: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    for path in paths {
        if out.len() == count {
            return out;
        }
        if let Some(n) = arg_param_name(p, &map, path) {
            if seen.insert(n.clone()) {
                out.push(fresh_name(&n, taken, false));
            }
        }
    }
    if out.len() < count {
        if let Some(d) = paths.first().and_then(|q| enclosing_def_name(p, q)) {
            out.push(fresh_name(&d, taken, true));
        }
    }
    while out.len() < count {
        out.push(fresh_name("x", taken, true));
    }
    out.truncate(count);
    out
}

/// Whether the item at `path` is a constant literal.
pub fn is_constant(p: &Program, path: &ItemPath) -> bool {
    matches!(node_at(p, path), Ok(NodeRef::Exp(e)) if e.is_const())
}
