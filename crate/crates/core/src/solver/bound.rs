//! Combinatorial bound for an include/exclude decision node: in-edge
//! points, a fractional knapsack of the undecided edges and the full value
//! of every ticket that can still be reached.

use super::instance::Instance;
use super::node::SearchNode;

/// The undecided part of a node, with in-edge components contracted.
#[derive(Debug)]
pub(crate) struct NodeView {
    /// Component index per city.
    pub comp: Vec<usize>,
    pub comp_count: usize,
    /// CSR adjacency between components over undecided edges: `(edge, comp)`.
    offsets: Vec<usize>,
    arcs: Vec<(usize, usize)>,
    /// Undecided edges that still fit the remaining budget.
    pub items: Vec<usize>,
    /// Tickets with weight that are already connected by the in-edges.
    pub connected_weight: i64,
    /// Tickets with weight, not yet connected, whose cheapest completion fits.
    pub active: Vec<usize>,
    /// Cheapest completion cost (by car length) per ticket; `None` when out
    /// of budget.
    pub reach_cost: Vec<Option<i64>>,
}

impl NodeView {
    pub(crate) fn new(inst: &Instance<'_>, node: &SearchNode) -> NodeView {
        let n = inst.board.city_count();
        let mut comp = vec![usize::MAX; n];
        let mut comp_count = 0;
        let mut root_comp = vec![usize::MAX; n];
        for (city, slot) in comp.iter_mut().enumerate() {
            let r = node.components.root(city);
            if root_comp[r] == usize::MAX {
                root_comp[r] = comp_count;
                comp_count += 1;
            }
            *slot = root_comp[r];
        }

        let undecided = node.undecided(inst);
        let items: Vec<usize> = undecided.iter().filter(|&e| inst.cost[e] <= node.remaining).collect();
        let mut degree = vec![0usize; comp_count + 1];
        let mut pairs = Vec::with_capacity(items.len());
        for &e in &items {
            let edge = &inst.board.edges()[e];
            let (a, b) = (comp[edge.a], comp[edge.b]);
            if a != b {
                degree[a] += 1;
                degree[b] += 1;
                pairs.push((e, a, b));
            }
        }
        let mut offsets = vec![0usize; comp_count + 1];
        for c in 0..comp_count {
            offsets[c + 1] = offsets[c] + degree[c];
        }
        let mut fill = offsets.clone();
        let mut arcs = vec![(0, 0); offsets[comp_count]];
        for (e, a, b) in pairs {
            arcs[fill[a]] = (e, b);
            fill[a] += 1;
            arcs[fill[b]] = (e, a);
            fill[b] += 1;
        }

        let mut view = NodeView {
            comp,
            comp_count,
            offsets,
            arcs,
            items,
            connected_weight: 0,
            active: Vec::new(),
            reach_cost: vec![None; inst.ticket_count()],
        };

        let mut paths = ShortestPaths::new(view.comp_count);
        let mut last_source = usize::MAX;
        let mut order: Vec<usize> = (0..inst.ticket_count()).collect();
        order.sort_by_key(|&k| view.comp[inst.board.tickets()[k].source]);
        for k in order {
            let t = &inst.board.tickets()[k];
            let (s, g) = (view.comp[t.source], view.comp[t.target]);
            if s == g {
                view.reach_cost[k] = Some(0);
                view.connected_weight += inst.weight[k];
                continue;
            }
            if s != last_source {
                paths.run(&view, s, None, node.remaining as f64, |e| inst.cost[e] as f64);
                last_source = s;
            }
            let d = paths.dist[g];
            if d <= node.remaining as f64 {
                view.reach_cost[k] = Some(d as i64);
                if inst.weight[k] > 0 {
                    view.active.push(k);
                }
            }
        }
        view.active.sort_unstable();
        view
    }

    fn neighbours(&self, c: usize) -> &[(usize, usize)] {
        &self.arcs[self.offsets[c]..self.offsets[c + 1]]
    }
}

/// Dense Dijkstra over the contracted component graph.
#[derive(Debug)]
pub(crate) struct ShortestPaths {
    pub dist: Vec<f64>,
    pred: Vec<(usize, usize)>,
    done: Vec<bool>,
}

impl ShortestPaths {
    pub(crate) fn new(n: usize) -> Self {
        ShortestPaths { dist: vec![f64::INFINITY; n], pred: vec![(usize::MAX, usize::MAX); n], done: vec![false; n] }
    }

    /// Runs from `source`, stopping once `target` is settled or every
    /// remaining label exceeds `limit`.
    pub(crate) fn run(
        &mut self,
        view: &NodeView,
        source: usize,
        target: Option<usize>,
        limit: f64,
        cost: impl Fn(usize) -> f64,
    ) {
        let n = view.comp_count;
        self.dist.clear();
        self.dist.resize(n, f64::INFINITY);
        self.pred.clear();
        self.pred.resize(n, (usize::MAX, usize::MAX));
        self.done.clear();
        self.done.resize(n, false);
        self.dist[source] = 0.0;
        loop {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for v in 0..n {
                if !self.done[v] && self.dist[v] < best_d {
                    best_d = self.dist[v];
                    best = v;
                }
            }
            if best == usize::MAX || best_d > limit {
                return;
            }
            self.done[best] = true;
            if Some(best) == target {
                return;
            }
            for &(e, w) in view.neighbours(best) {
                if self.done[w] {
                    continue;
                }
                let nd = best_d + cost(e);
                if nd < self.dist[w] {
                    self.dist[w] = nd;
                    self.pred[w] = (e, best);
                }
            }
        }
    }

    /// Edges of the settled path ending at `target`.
    pub(crate) fn path_to(&self, target: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut at = target;
        while self.pred[at].0 != usize::MAX {
            out.push(self.pred[at].0);
            at = self.pred[at].1;
        }
    }
}

/// Tickets that some feasible completion of `node` could still connect:
/// those whose cheapest completion (in-edges free, out-edges barred) fits
/// the remaining budget.
pub fn reachable_tickets(inst: &Instance<'_>, node: &SearchNode) -> Vec<usize> {
    let view = NodeView::new(inst, node);
    (0..inst.ticket_count()).filter(|&k| view.reach_cost[k].is_some()).collect()
}

/// Combinatorial bound: in-set value, plus the fractional knapsack of the
/// undecided routes' points into the remaining budget, plus the weight of
/// every reachable ticket not yet connected.
pub fn upper_bound(inst: &Instance<'_>, node: &SearchNode) -> i64 {
    combinatorial_bound(inst, node, &NodeView::new(inst, node))
}

pub(crate) fn combinatorial_bound(inst: &Instance<'_>, node: &SearchNode, view: &NodeView) -> i64 {
    let mut items: Vec<usize> = view.items.clone();
    // Highest points per car first.
    items.sort_by(|&a, &b| (inst.points[b] * inst.cost[a]).cmp(&(inst.points[a] * inst.cost[b])).then(a.cmp(&b)));
    let mut room = node.remaining;
    let mut whole = 0i64;
    let mut fraction = 0.0f64;
    for e in items {
        if room == 0 && inst.cost[e] > 0 {
            break;
        }
        if inst.cost[e] <= room {
            room -= inst.cost[e];
            whole += inst.points[e];
        } else {
            fraction = inst.points[e] as f64 * room as f64 / inst.cost[e] as f64;
            break;
        }
    }
    let tickets: i64 = view.active.iter().map(|&k| inst.weight[k]).sum();
    node.in_points + inst.offset + view.connected_weight + whole + (fraction + 1e-9).floor() as i64 + tickets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::testing::{feasible_sets, random_board};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_node<R: Rng>(rng: &mut R, inst: &Instance<'_>) -> Option<SearchNode> {
        let (mut inc, mut exc) = (crate::EdgeSet::new(), crate::EdgeSet::new());
        for e in 0..inst.edge_count() {
            match rng.gen_range(0..4) {
                0 => {
                    inc.insert(e);
                }
                1 => {
                    exc.insert(e);
                }
                _ => {}
            }
        }
        SearchNode::with_decisions(inst, inc, exc)
    }

    #[test]
    fn reach_cost_is_the_cheapest_completion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 150 {
            let board = random_board(&mut rng, 6, 9, 4);
            let budget = rng.gen_range(0..=14);
            let inst = Instance::new(&board, budget);
            let Some(node) = random_node(&mut rng, &inst) else { continue };
            let view = NodeView::new(&inst, &node);
            let completions: Vec<_> = feasible_sets(&inst)
                .into_iter()
                .filter(|s| node.included.is_subset(s) && s.is_disjoint(&node.excluded))
                .collect();
            for (k, t) in board.tickets().iter().enumerate() {
                let cheapest = completions
                    .iter()
                    .filter(|s| inst.components(s).connected(t.source, t.target))
                    .map(|s| inst.selection_cost(&s.difference(&node.included)))
                    .min();
                assert_eq!(view.reach_cost[k], cheapest, "ticket {k}");
            }
            checked += 1;
        }
    }

    #[test]
    fn combinatorial_bound_is_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        while checked < 150 {
            let board = random_board(&mut rng, 6, 9, 4);
            let inst = Instance::new(&board, rng.gen_range(0..=14));
            let Some(node) = random_node(&mut rng, &inst) else { continue };
            let best = feasible_sets(&inst)
                .into_iter()
                .filter(|s| node.included.is_subset(s) && s.is_disjoint(&node.excluded))
                .map(|s| inst.evaluate(&s))
                .max()
                .unwrap();
            assert!(upper_bound(&inst, &node) >= best);
            let reachable = reachable_tickets(&inst, &node);
            assert!(reachable.iter().all(|&k| k < inst.ticket_count()));
            checked += 1;
        }
    }

    #[test]
    fn path_follows_predecessors() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let board = random_board(&mut rng, 7, 10, 2);
        let inst = Instance::new(&board, 100);
        let node = SearchNode::root(&inst).unwrap();
        let view = NodeView::new(&inst, &node);
        let mut paths = ShortestPaths::new(view.comp_count);
        let mut path = Vec::new();
        for target in 1..view.comp_count {
            paths.run(&view, 0, Some(target), f64::INFINITY, |e| inst.cost[e] as f64);
            paths.path_to(target, &mut path);
            let length: i64 = path.iter().map(|&e| inst.cost[e]).sum();
            assert_eq!(length as f64, paths.dist[target]);
            let set: crate::EdgeSet = path.iter().copied().collect();
            assert!(inst.components(&set).connected(0, view.comp.iter().position(|&c| c == target).unwrap()));
        }
    }
}
