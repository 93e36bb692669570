use crate::board::Board;
use crate::edgeset::EdgeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArcOrigin {
    /// `(a, b)` for edge `{a, b}` with `a < b`.
    Forward(usize),
    /// `(b, a)` for edge `{a, b}` with `a < b`.
    Backward(usize),
    /// `(t_k, s_k)` for ticket `k`.
    Dummy(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub origin: ArcOrigin,
}

/// The arc set of one ticket's directed graph.
///
/// Arc `2e` is the forward copy of edge `e`, arc `2e + 1` its backward copy,
/// and the last arc is the dummy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TicketGraph {
    pub ticket: usize,
    pub arcs: Vec<Arc>,
}

impl TicketGraph {
    pub fn dummy_index(&self) -> usize {
        self.arcs.len() - 1
    }

    pub fn dummy(&self) -> Arc {
        self.arcs[self.dummy_index()]
    }
}

pub fn build_ticket_graph(board: &Board, ticket: usize) -> TicketGraph {
    let t = &board.tickets()[ticket];
    let mut arcs = Vec::with_capacity(2 * board.edge_count() + 1);
    for e in board.edges() {
        arcs.push(Arc { tail: e.a, head: e.b, origin: ArcOrigin::Forward(e.id) });
        arcs.push(Arc { tail: e.b, head: e.a, origin: ArcOrigin::Backward(e.id) });
    }
    arcs.push(Arc { tail: t.target, head: t.source, origin: ArcOrigin::Dummy(ticket) });
    TicketGraph { ticket, arcs }
}

/// Whether the arcs of `selected` edges plus the dummy arc contain a directed
/// cycle through the dummy arc, i.e. a directed path from `s_k` to `t_k`
/// over selected arcs.
pub fn has_dummy_cycle(board: &Board, graph: &TicketGraph, selected: &EdgeSet) -> bool {
    let dummy = graph.dummy();
    let (start, goal) = (dummy.head, dummy.tail);
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); board.city_count()];
    for arc in &graph.arcs {
        match arc.origin {
            ArcOrigin::Forward(e) | ArcOrigin::Backward(e) if selected.contains(e) => out[arc.tail].push(arc.head),
            _ => {}
        }
    }
    let mut seen = vec![false; board.city_count()];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        if v == goal {
            return true;
        }
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}
