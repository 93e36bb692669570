use crate::board::Board;
use crate::dsu::DisjointSets;
use crate::edgeset::EdgeSet;

/// The objective the search optimizes, derived from a board plus solve
/// options or a partial game state.
///
/// A selection `S` (always containing `fixed_in`, never touching `fixed_out`,
/// with `sum cost <= budget`) scores
/// `offset + sum_{e in S} points[e] + sum_{k completed by S} weight[k]`.
#[derive(Clone, Debug)]
pub struct Instance<'b> {
    pub(crate) board: &'b Board,
    pub(crate) budget: i64,
    pub(crate) cost: Vec<i64>,
    pub(crate) points: Vec<i64>,
    pub(crate) weight: Vec<i64>,
    pub(crate) offset: i64,
    pub(crate) fixed_in: EdgeSet,
    pub(crate) fixed_out: EdgeSet,
}

impl<'b> Instance<'b> {
    /// Plain instance: every route at its board length and points, every
    /// ticket at its value.
    pub fn new(board: &'b Board, budget: i64) -> Self {
        Instance {
            board,
            budget,
            cost: board.edges().iter().map(|e| e.length).collect(),
            points: board.edges().iter().map(|e| e.points).collect(),
            weight: board.tickets().iter().map(|t| t.value).collect(),
            offset: 0,
            fixed_in: EdgeSet::new(),
            fixed_out: EdgeSet::new(),
        }
    }

    pub fn board(&self) -> &'b Board {
        self.board
    }

    pub fn budget(&self) -> i64 {
        self.budget
    }

    pub fn edge_count(&self) -> usize {
        self.cost.len()
    }

    pub fn ticket_count(&self) -> usize {
        self.weight.len()
    }

    pub fn cost(&self, edge: usize) -> i64 {
        self.cost[edge]
    }

    pub fn points(&self, edge: usize) -> i64 {
        self.points[edge]
    }

    pub fn weight(&self, ticket: usize) -> i64 {
        self.weight[ticket]
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn fixed_in(&self) -> EdgeSet {
        self.fixed_in
    }

    pub fn fixed_out(&self) -> EdgeSet {
        self.fixed_out
    }

    pub fn with_fixed(mut self, fixed_in: EdgeSet, fixed_out: EdgeSet) -> Self {
        self.fixed_in = fixed_in;
        self.fixed_out = fixed_out;
        self
    }

    pub fn with_ticket_weight(mut self, ticket: usize, weight: i64) -> Self {
        self.weight[ticket] = weight;
        self
    }

    pub(crate) fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edge_count())
    }

    pub fn selection_cost(&self, set: &EdgeSet) -> i64 {
        set.iter().map(|e| self.cost[e]).sum()
    }

    pub fn is_feasible(&self, set: &EdgeSet) -> bool {
        self.fixed_in.is_subset(set) && set.is_disjoint(&self.fixed_out) && self.selection_cost(set) <= self.budget
    }

    pub fn components(&self, set: &EdgeSet) -> DisjointSets {
        self.board.components(set)
    }

    /// Objective value of a selection, feasible or not.
    pub fn evaluate(&self, set: &EdgeSet) -> i64 {
        let mut dsu = self.components(set);
        let points: i64 = set.iter().map(|e| self.points[e]).sum();
        let tickets: i64 = self
            .board
            .tickets()
            .iter()
            .filter(|t| self.weight[t.id] != 0 && dsu.connected(t.source, t.target))
            .map(|t| self.weight[t.id])
            .sum();
        self.offset + points + tickets
    }
}
