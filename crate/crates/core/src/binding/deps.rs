//! Dependencies between top-level definitions.

use std::collections::{BTreeSet, HashMap};

use petgraph::algo::toposort;
use petgraph::graphmap::DiGraphMap;

use super::{resolve, Resolution};
use crate::syntax::{ExpKind, Program};

/// Edge `i -> j` when definition `i` uses a variable bound by definition `j`.
#[derive(Clone, Debug)]
pub struct DepGraph {
    graph: DiGraphMap<usize, ()>,
}

impl DepGraph {
    /// Definitions that `def` depends on.
    pub fn deps_of(&self, def: usize) -> BTreeSet<usize> {
        self.graph.neighbors(def).collect()
    }

    /// Definitions that depend on `def`.
    pub fn dependents_of(&self, def: usize) -> BTreeSet<usize> {
        self.graph
            .neighbors_directed(def, petgraph::Direction::Incoming)
            .collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.graph.all_edges().map(|(a, b, _)| (a, b)).collect();
        v.sort();
        v
    }

    /// An order in which every definition comes after its dependencies, or
    /// `None` when definitions depend on each other cyclically.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let mut order = toposort(&self.graph, None).ok()?;
        order.reverse();
        Some(order)
    }
}

/// Dependency graph of the top-level definitions of `p`. Self-references
/// of recursive definitions are not edges.
pub fn deps(p: &Program) -> DepGraph {
    let map = resolve(p);
    let mut owner = HashMap::new();
    for (i, d) in p.defs.iter().enumerate() {
        for v in d.pat.vars() {
            owner.insert(v.id, i);
        }
    }
    let mut graph = DiGraphMap::new();
    for (i, d) in p.defs.iter().enumerate() {
        graph.add_node(i);
        let mut ids = Vec::new();
        d.bound.for_each(&mut |e| {
            if let ExpKind::Var(_) = e.kind {
                ids.push(e.id);
            }
        });
        for id in ids {
            if let Some(Resolution::Bound(b)) = map.use_by_id(id).map(|u| &u.res) {
                if let Some(&j) = owner.get(b) {
                    if j != i {
                        graph.add_edge(i, j, ());
                    }
                }
            }
        }
    }
    DepGraph { graph }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn chain_of_aliases() {
        let p = parse("(def a1 1)\n(def b 'b')\n(def a2 a1)\n(def a3 a2)\n(def main [a3 b])").unwrap();
        let g = deps(&p);
        assert_eq!(g.deps_of(3), [2].into());
        assert_eq!(g.deps_of(2), [0].into());
        assert!(g.deps_of(1).is_empty());
        let order = g.topo_order().unwrap();
        let pos = |d| order.iter().position(|&x| x == d).unwrap();
        assert!(pos(0) < pos(2) && pos(2) < pos(3) && pos(1) < pos(4));
    }

    #[test]
    fn independent_defs_have_no_edges() {
        let p = parse("(def a 1)\n(def b 2)\n(def main [])").unwrap();
        assert!(deps(&p).edges().is_empty());
    }
}
