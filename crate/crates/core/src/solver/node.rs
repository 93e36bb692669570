use crate::dsu::DisjointSets;
use crate::edgeset::EdgeSet;

use super::instance::Instance;

/// A branch-and-bound subproblem: edges decided in, edges decided out, and
/// the budget left after paying for the in-edges.
#[derive(Clone, Debug)]
pub struct SearchNode {
    pub(crate) included: EdgeSet,
    pub(crate) excluded: EdgeSet,
    pub(crate) remaining: i64,
    pub(crate) components: DisjointSets,
    pub(crate) in_points: i64,
}

impl SearchNode {
    /// The subproblem with only the instance's fixed edges decided. Returns
    /// `None` when the fixed in-edges alone exceed the budget.
    pub fn root(inst: &Instance<'_>) -> Option<SearchNode> {
        let mut node = SearchNode {
            included: EdgeSet::new(),
            excluded: inst.fixed_out,
            remaining: inst.budget,
            components: DisjointSets::new(inst.board.city_count()),
            in_points: 0,
        };
        for e in inst.fixed_in.iter() {
            if !node.include(inst, e) {
                return None;
            }
        }
        node.drop_unaffordable(inst);
        Some(node)
    }

    /// Builds a node from explicit decisions; `None` if inconsistent.
    pub fn with_decisions(inst: &Instance<'_>, included: EdgeSet, excluded: EdgeSet) -> Option<SearchNode> {
        if !included.is_disjoint(&excluded) || !inst.fixed_in.is_subset(&included) {
            return None;
        }
        let mut node = SearchNode::root(inst)?;
        node.excluded = node.excluded.union(&excluded);
        if !node.included.is_disjoint(&node.excluded) {
            return None;
        }
        for e in included.difference(&node.included).iter() {
            if !node.include(inst, e) {
                return None;
            }
        }
        node.drop_unaffordable(inst);
        Some(node)
    }

    pub fn included(&self) -> EdgeSet {
        self.included
    }

    pub fn excluded(&self) -> EdgeSet {
        self.excluded
    }

    pub fn remaining(&self) -> i64 {
        self.remaining
    }

    pub fn undecided(&self, inst: &Instance<'_>) -> EdgeSet {
        inst.all_edges().difference(&self.included).difference(&self.excluded)
    }

    /// Adds `edge` to the in-set; false if it does not fit the budget.
    pub(crate) fn include(&mut self, inst: &Instance<'_>, edge: usize) -> bool {
        let cost = inst.cost[edge];
        if cost > self.remaining || self.excluded.contains(edge) {
            return false;
        }
        self.remaining -= cost;
        self.included.insert(edge);
        self.in_points += inst.points[edge];
        let e = &inst.board.edges()[edge];
        self.components.union(e.a, e.b);
        true
    }

    pub(crate) fn exclude(&mut self, edge: usize) {
        self.excluded.insert(edge);
    }

    /// Moves undecided edges that no longer fit into the out-set.
    pub(crate) fn drop_unaffordable(&mut self, inst: &Instance<'_>) {
        for e in self.undecided(inst).iter() {
            if inst.cost[e] > self.remaining {
                self.excluded.insert(e);
            }
        }
    }

    pub fn child_including(&self, inst: &Instance<'_>, edge: usize) -> Option<SearchNode> {
        let mut child = self.clone();
        if !child.include(inst, edge) {
            return None;
        }
        child.drop_unaffordable(inst);
        Some(child)
    }

    pub fn child_excluding(&self, edge: usize) -> SearchNode {
        let mut child = self.clone();
        child.exclude(edge);
        child
    }

    /// Objective value of the in-set alone.
    pub fn in_value(&self, inst: &Instance<'_>) -> i64 {
        inst.evaluate(&self.included)
    }
}
