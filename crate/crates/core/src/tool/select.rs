use crate::index::{enumerate_targets, find_target, Target};
use crate::syntax::{node_at, IdError, ItemKind, ItemPath, NodeId, NodeRef, Program};

use super::Selection;

/// A selected item, resolved against the current program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelItem {
    pub path: ItemPath,
    pub id: NodeId,
    /// Let definitions are `Def` too; `is_let` tells them apart.
    pub kind: ItemKind,
    pub is_let: bool,
}

/// Selections split by kind, each list in selection order.
#[derive(Clone, Debug, Default)]
pub struct Classified {
    pub exps: Vec<SelItem>,
    pub pats: Vec<SelItem>,
    pub defs: Vec<SelItem>,
    pub branches: Vec<SelItem>,
    pub targets: Vec<Target>,
}

impl Classified {
    pub fn new(p: &Program, selections: &[Selection]) -> Result<Self, IdError> {
        let mut c = Classified::default();
        let mut targets = None;
        for s in selections {
            match s {
                Selection::Item(path) => {
                    let node = node_at(p, path)?;
                    let item = SelItem {
                        path: path.clone(),
                        id: node.id(),
                        kind: node.kind(),
                        is_let: matches!(node, NodeRef::LetDef(_)),
                    };
                    match item.kind {
                        ItemKind::Exp => c.exps.push(item),
                        ItemKind::Pat => c.pats.push(item),
                        ItemKind::Def => c.defs.push(item),
                        ItemKind::Branch => c.branches.push(item),
                    }
                }
                Selection::Target(id) => {
                    let all = targets.get_or_insert_with(|| enumerate_targets(p));
                    let t = find_target(all, id).ok_or_else(|| IdError::UnknownId(id.to_string()))?;
                    c.targets.push(t.clone());
                }
            }
        }
        Ok(c)
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
            && self.pats.is_empty()
            && self.defs.is_empty()
            && self.branches.is_empty()
            && self.targets.is_empty()
    }

    pub fn target(&self) -> Option<&Target> {
        self.targets.first()
    }
}
