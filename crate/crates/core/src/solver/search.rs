//! Depth-first branch-and-bound that builds the selection one connected
//! component at a time.
//!
//! Components are rooted at their smallest node and started in increasing
//! root order, so every selection is reached once: its ticket-carrying
//! components as trees grown route by route from their roots, the rest of
//! its routes as plain points bought at the end. Inside a component the
//! search branches on routes leaving it (take or leave); between
//! components it decides which node, if any, roots the next one.

use std::time::{Duration, Instant};

use crate::edgeset::EdgeSet;
use crate::par;

use super::bound::{NodeView, ShortestPaths};
use super::instance::Instance;
use super::knapsack::integer_knapsack;
use super::node::SearchNode;
use super::rooted::{evaluate, frontier_values, subgradient_step, Base, Prices, Scratch, Status, View};

const EPS: f64 = 1e-6;

/// Subgradient iterations spent on each root while preparing the bounds
/// for later components.
const ROOT_ITERATIONS: usize = 150;
/// Iterations per smaller budget when filling in a root's table.
const TABLE_ITERATIONS: usize = 30;
const FIRST_ITERATIONS: usize = 40;
const CHILD_ITERATIONS: usize = 15;
const FIXED_ITERATIONS: usize = 6;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Limits {
    pub nodes: u64,
    pub time: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Goal {
    /// Find strictly better solutions until none remain.
    Improve,
    /// Stop at the first solution worth at least this much.
    Reach(i64),
}

pub(crate) struct Outcome {
    pub best: Option<(i64, EdgeSet)>,
    pub nodes: u64,
    /// The search ran to completion (not cut short by a limit).
    pub complete: bool,
}

/// Maximizes the instance objective, starting from `seed` if given.
pub(crate) fn maximize(inst: &Instance<'_>, seed: Option<EdgeSet>, limits: Limits, started: Instant) -> Outcome {
    run(inst, Goal::Improve, seed, limits, started)
}

/// Looks for any solution worth at least `target`.
pub(crate) fn reach(inst: &Instance<'_>, target: i64, limits: Limits, started: Instant) -> Outcome {
    run(inst, Goal::Reach(target), None, limits, started)
}

fn run(inst: &Instance<'_>, goal: Goal, seed: Option<EdgeSet>, limits: Limits, started: Instant) -> Outcome {
    if inst.selection_cost(&inst.fixed_in) > inst.budget || !inst.fixed_in.is_disjoint(&inst.fixed_out) {
        return Outcome { best: None, nodes: 0, complete: true };
    }
    let base = Base::new(inst);
    let mut engine = Engine::new(inst, &base, goal, limits, started);
    engine.offer(inst.fixed_in);
    if let Some(seed) = seed.filter(|s| inst.is_feasible(s)) {
        engine.offer(seed);
    }
    engine.offer(greedy_start(inst));
    if !engine.stop() {
        engine.prepare();
    }
    if !engine.stop() {
        let state = State {
            status: vec![Status::Free; base.nodes],
            root: 0,
            tree: EdgeSet::new(),
            tree_out: EdgeSet::new(),
            remaining: base.budget,
            value: base.value,
            comp_edges: 0,
        };
        engine.next_root(state, 0);
    }
    Outcome { best: engine.best, nodes: engine.nodes, complete: !engine.aborted }
}

#[derive(Clone, Debug)]
struct State {
    status: Vec<Status>,
    /// Root of the component being grown.
    root: usize,
    /// Tree routes of all components so far.
    tree: EdgeSet,
    /// Routes ruled out of the current component's tree (they may still be
    /// bought for points).
    tree_out: EdgeSet,
    remaining: i64,
    /// Objective of the fixed routes and tree routes, with the tickets the
    /// components complete.
    value: i64,
    /// Tree routes in the current component.
    comp_edges: usize,
}

struct Engine<'a, 'b> {
    inst: &'a Instance<'b>,
    base: &'a Base,
    goal: Goal,
    best: Option<(i64, EdgeSet)>,
    nodes: u64,
    limits: Limits,
    deadline: Instant,
    aborted: bool,
    found: bool,
    /// Best value offered so far, whatever the goal.
    seen: i64,
    scratch: Scratch,
    /// `future[v][y]`: bound on what components rooted at `v` or later, plus
    /// routes bought for points, add with `y` cars.
    future: Vec<Vec<f64>>,
    /// Prices that bound each root's component well, to start from.
    root_prices: Vec<Prices>,
}

enum Fixing {
    Prune,
    Changed,
    Unchanged,
}

impl<'a, 'b> Engine<'a, 'b> {
    fn new(inst: &'a Instance<'b>, base: &'a Base, goal: Goal, limits: Limits, started: Instant) -> Self {
        Engine {
            inst,
            base,
            goal,
            best: None,
            nodes: 0,
            limits,
            deadline: started + limits.time,
            aborted: false,
            found: false,
            seen: i64::MIN,
            scratch: Scratch::default(),
            future: Vec::new(),
            root_prices: Vec::new(),
        }
    }

    /// Smallest bound value a node needs to be worth exploring.
    fn need(&self) -> f64 {
        match self.goal {
            Goal::Improve => self.best.as_ref().map_or(f64::NEG_INFINITY, |b| (b.0 + 1) as f64),
            Goal::Reach(t) => t as f64,
        }
    }

    fn stop(&self) -> bool {
        self.aborted || self.found
    }

    /// Records a feasible selection after topping it up with spare budget.
    fn offer(&mut self, set: EdgeSet) {
        let set = set.union(&self.inst.fixed_in);
        if self.inst.selection_cost(&set) > self.inst.budget {
            return;
        }
        let set = fill_spare_budget(self.inst, set);
        let mut value = self.inst.evaluate(&set);
        let mut set = set;
        if value > self.seen {
            (value, set) = polish(self.inst, set, value);
            self.seen = value;
        }
        match self.goal {
            Goal::Improve => {
                if self.best.is_none_or(|(v, _)| value > v) {
                    self.best = Some((value, set));
                }
            }
            Goal::Reach(t) => {
                if value >= t {
                    self.best = Some((value, set));
                    self.found = true;
                }
            }
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limits.nodes || (self.nodes.is_multiple_of(16) && Instant::now() >= self.deadline) {
            self.aborted = true;
        }
        !self.aborted
    }

    /// Bounds every root's best component on its own, then combines them
    /// into the `future` tables.
    fn prepare(&mut self) {
        let inst = self.inst;
        let base = self.base;
        let cap = base.budget.max(0) as usize;
        let target = self.best.map_or(0.0, |b| (b.0 - base.value) as f64);
        let per_root = par::map((0..base.nodes).collect(), |r| root_table(inst, base, r, target));

        let mut points_only = vec![0.0f64; cap + 1];
        let free: Vec<usize> = base.free.iter().copied().filter(|&e| inst.cost[e] as usize <= cap).collect();
        for &e in &free {
            let (l, p) = (inst.cost[e] as usize, inst.points[e] as f64);
            for c in (l..=cap).rev() {
                points_only[c] = points_only[c].max(points_only[c - l] + p);
            }
        }
        let mut single = points_only.clone();
        self.future = vec![Vec::new(); base.nodes + 1];
        for v in (0..=base.nodes).rev() {
            if v < base.nodes {
                if let Some(table) = &per_root[v].0 {
                    for (s, &t) in single.iter_mut().zip(table) {
                        *s = s.max(t);
                    }
                }
            }
            let mut combined = vec![0.0f64; cap + 1];
            for y in 0..=cap {
                let mut best = single[y];
                for c in 1..y {
                    best = best.max(combined[y - c] + single[c]);
                }
                combined[y] = best;
            }
            self.future[v] = combined;
        }
        self.root_prices = per_root.into_iter().map(|(_, p)| p).collect();
    }

    /// Starts the next component at some free node `>= from`, or stops
    /// adding components.
    fn next_root(&mut self, mut state: State, from: usize) {
        self.offer(state.tree);
        for v in from..self.base.nodes {
            if self.stop() {
                return;
            }
            if state.status[v] != Status::Free {
                continue;
            }
            if state.value as f64 + self.future[v][state.remaining as usize] < self.need() - EPS {
                break;
            }
            let mut child = state.clone();
            child.status[v] = Status::Current;
            child.root = v;
            child.tree_out = EdgeSet::new();
            child.comp_edges = 0;
            let prices = self.root_prices[v].clone();
            self.grow(child, &prices, FIRST_ITERATIONS);
            state.status[v] = Status::Closed;
        }
    }

    fn join(&self, state: &mut State, edge: usize, node: usize) {
        state.tree.insert(edge);
        state.remaining -= self.inst.cost[edge];
        state.value += self.inst.points[edge];
        state.comp_edges += 1;
        for &ti in &self.base.by_node[node] {
            let (w, s, t) = self.base.tickets[ti];
            let other = if s == node { t } else { s };
            if state.status[other] == Status::Current {
                state.value += w;
            }
        }
        state.status[node] = Status::Current;
    }

    fn grow(&mut self, mut state: State, parent: &Prices, iterations: usize) {
        if self.stop() || !self.tick() {
            return;
        }
        let inst = self.inst;
        let future = std::mem::take(&mut self.future[state.root + 1]);
        let mut prices = parent.clone();
        let mut iterations = iterations;
        let view = loop {
            let view = View::new(inst, self.base, &state.status, state.root, &state.tree, &state.tree_out, state.remaining);
            if view.frontier.is_empty() {
                break None;
            }
            let bound = self.tighten(&state, &view, &mut prices, &future, iterations);
            if bound < self.need() - EPS || self.stop() {
                self.future[state.root + 1] = future;
                return;
            }
            match self.fix(&mut state, &view, &prices, &future) {
                Fixing::Prune => {
                    self.future[state.root + 1] = future;
                    return;
                }
                Fixing::Changed => iterations = iterations.min(FIXED_ITERATIONS),
                Fixing::Unchanged => break Some(view),
            }
        };
        let branch = view.as_ref().map(|view| self.choose_branch(view));
        self.future[state.root + 1] = future;

        let Some((edge, node)) = branch else {
            // Nothing left to grow into: the component is finished.
            if state.comp_edges == 0 {
                return;
            }
            for s in state.status.iter_mut() {
                if *s == Status::Current {
                    *s = Status::Closed;
                }
            }
            let from = state.root + 1;
            self.next_root(state, from);
            return;
        };

        let mut child = state.clone();
        self.join(&mut child, edge, node);
        self.grow(child, &prices, CHILD_ITERATIONS);
        if self.stop() {
            return;
        }
        state.tree_out.insert(edge);
        self.grow(state, &prices, CHILD_ITERATIONS);
    }

    /// Subgradient iterations on the prices; returns the smallest bound seen
    /// and leaves the prices that produced it in `prices`.
    fn tighten(&mut self, state: &State, view: &View, prices: &mut Prices, future: &[f64], iterations: usize) -> f64 {
        let inst = self.inst;
        let mut best = f64::INFINITY;
        let mut best_prices = prices.clone();
        let mut theta = 1.0;
        let mut stale = 0;
        for _ in 0..iterations.max(1) {
            evaluate(inst, view, prices, future, state.value, &mut self.scratch);
            if self.scratch.value < best - 1e-9 {
                best = self.scratch.value;
                best_prices.clone_from(prices);
                stale = 0;
            } else {
                stale += 1;
                if stale >= 4 {
                    theta *= 0.5;
                    stale = 0;
                }
            }
            self.offer_relaxed(state, view);
            let need = self.need();
            if best < need - EPS || self.stop() || theta < 1e-3 {
                break;
            }
            if subgradient_step(view, prices, &mut self.scratch, need - 1.0, theta) == 0.0 {
                break;
            }
        }
        *prices = best_prices;
        best
    }

    /// Turns the relaxed solution in the scratch space into selections.
    fn offer_relaxed(&mut self, state: &State, view: &View) {
        let mut bought = state.tree;
        for &a in &self.scratch.arcs {
            bought.insert(view.arcs[a].edge);
        }
        for &e in &self.scratch.fillers {
            bought.insert(e);
        }
        let mut connected = state.tree;
        for v in 1..view.n {
            if self.scratch.joined[v] {
                for e in self.scratch.path(view, v) {
                    connected.insert(e);
                }
            }
        }
        self.offer(bought);
        if connected != bought {
            self.offer(connected);
        }
    }

    /// Settles routes leaving the component whose choice the bound already
    /// decides.
    fn fix(&mut self, state: &mut State, view: &View, prices: &Prices, future: &[f64]) -> Fixing {
        let inst = self.inst;
        evaluate(inst, view, prices, future, state.value, &mut self.scratch);
        let values = frontier_values(inst, view, state.value, future, &mut self.scratch);
        let need = self.need() - EPS;
        let mut must_in = Vec::new();
        let mut changed = false;
        for (arc, with, without) in values {
            let edge = view.arcs[arc].edge;
            if without < need {
                must_in.push(arc);
            } else if with < need {
                state.tree_out.insert(edge);
                changed = true;
            }
        }
        for arc in must_in {
            let a = view.arcs[arc];
            let node = view.base_of[a.head];
            if state.status[node] == Status::Current || inst.cost[a.edge] > state.remaining {
                return Fixing::Prune;
            }
            self.join(state, a.edge, node);
            changed = true;
        }
        if changed {
            Fixing::Changed
        } else {
            Fixing::Unchanged
        }
    }

    /// The route leaving the component that the most priced paths use, as
    /// `(edge, node it reaches)`.
    fn choose_branch(&self, view: &View) -> (usize, usize) {
        let mut usage = vec![0usize; view.arcs.len()];
        for v in 1..view.n {
            if self.scratch.joined[v] {
                if let Some(first) = self.scratch.first_arc(v) {
                    usage[first] += 1;
                }
            }
        }
        let arc = *view
            .frontier
            .iter()
            .max_by(|&&a, &&b| {
                usage[a]
                    .cmp(&usage[b])
                    .then(self.scratch.profit(a).total_cmp(&self.scratch.profit(b)))
                    .then(b.cmp(&a))
            })
            .expect("branching needs a frontier route");
        let a = view.arcs[arc];
        (a.edge, view.base_of[a.head])
    }
}

/// Bounds, for every budget up to the full one, the best component rooted at
/// `r` on its own. Prices are tuned at the full budget first and then carried
/// down one car at a time; any prices bound every budget, so each entry keeps
/// the smallest value seen.
fn root_table(inst: &Instance<'_>, base: &Base, r: usize, target: f64) -> (Option<Vec<f64>>, Prices) {
    let cap = base.budget.max(0) as usize;
    let zero = vec![0.0; cap + 1];
    let mut prices = Prices::new(base, inst.edge_count());
    let mut status = vec![Status::Free; base.nodes];
    status[r] = Status::Current;
    let mut scratch = Scratch::default();
    let mut table = vec![f64::INFINITY; cap + 1];
    let mut top = None;
    for c in (1..=cap).rev() {
        let view = View::new(inst, base, &status, r, &EdgeSet::new(), &EdgeSet::new(), c as i64);
        if view.n == 1 {
            break;
        }
        let iterations = if c == cap { ROOT_ITERATIONS } else { TABLE_ITERATIONS };
        let mut best = f64::INFINITY;
        let mut best_prices = prices.clone();
        let mut theta = 1.0;
        let mut stale = 0;
        for _ in 0..iterations {
            evaluate(inst, &view, &prices, &zero[..=c], 0, &mut scratch);
            for (slot, &v) in table.iter_mut().zip(scratch.by_capacity(c)) {
                *slot = slot.min(v);
            }
            if scratch.value < best - 1e-9 {
                best = scratch.value;
                best_prices.clone_from(&prices);
                stale = 0;
            } else {
                stale += 1;
                if stale >= 5 {
                    theta *= 0.5;
                    stale = 0;
                }
            }
            if theta < 1e-3 {
                break;
            }
            let goal = if c == cap { target.min(0.9 * scratch.value) } else { 0.9 * scratch.value };
            if subgradient_step(&view, &mut prices, &mut scratch, goal, theta) == 0.0 {
                break;
            }
        }
        prices = best_prices;
        if c == cap {
            top = Some(prices.clone());
        }
    }
    let Some(top) = top else {
        return (None, prices);
    };
    for c in (0..cap).rev() {
        table[c] = table[c].min(table[c + 1]);
    }
    (Some(table), top)
}

/// Local search around a feasible selection: drop up to two routes and
/// refill greedily, keeping any change that scores higher.
fn polish(inst: &Instance<'_>, mut set: EdgeSet, mut value: i64) -> (i64, EdgeSet) {
    let open: Vec<usize> = inst.all_edges().difference(&inst.fixed_out).to_vec();
    'improve: loop {
        let droppable: Vec<usize> = set.difference(&inst.fixed_in).to_vec();
        for i in 0..=droppable.len() {
            for j in i..=droppable.len() {
                let mut trial = set;
                if i < droppable.len() {
                    trial.remove(droppable[i]);
                }
                if j > i && j < droppable.len() {
                    trial.remove(droppable[j]);
                }
                let (trial_value, trial) = greedy_refill(inst, trial, &open);
                if trial_value > value {
                    (value, set) = (trial_value, trial);
                    continue 'improve;
                }
            }
        }
        return (value, set);
    }
}

/// Repeatedly adds the affordable route with the best gain per car.
fn greedy_refill(inst: &Instance<'_>, mut set: EdgeSet, open: &[usize]) -> (i64, EdgeSet) {
    let mut value = inst.evaluate(&set);
    let mut spare = inst.budget - inst.selection_cost(&set);
    loop {
        let mut pick = None;
        let mut pick_rate = 0.0;
        for &e in open {
            if set.contains(e) || inst.cost[e] > spare {
                continue;
            }
            set.insert(e);
            let gain = inst.evaluate(&set) - value;
            set.remove(e);
            let rate = gain as f64 / inst.cost[e].max(1) as f64;
            if gain > 0 && rate > pick_rate {
                pick = Some((e, gain));
                pick_rate = rate;
            }
        }
        let Some((e, gain)) = pick else {
            return (value, set);
        };
        set.insert(e);
        value += gain;
        spare -= inst.cost[e];
    }
}

/// Adds the highest-points routes that fit into the unused budget.
pub(crate) fn fill_spare_budget(inst: &Instance<'_>, set: EdgeSet) -> EdgeSet {
    let spare = inst.budget - inst.selection_cost(&set);
    if spare <= 0 {
        return set;
    }
    let free: Vec<usize> = inst
        .all_edges()
        .difference(&set)
        .difference(&inst.fixed_out)
        .iter()
        .filter(|&e| inst.cost[e] <= spare)
        .collect();
    let weights: Vec<usize> = free.iter().map(|&e| inst.cost[e] as usize).collect();
    let profits: Vec<i64> = free.iter().map(|&e| inst.points[e]).collect();
    let mut out = set;
    for i in integer_knapsack(spare as usize, &weights, &profits) {
        out.insert(free[i]);
    }
    out
}

/// Warm start: repeatedly connect the open ticket with the best value per
/// car of its cheapest completion, then spend what is left on points.
pub(crate) fn greedy_start(inst: &Instance<'_>) -> EdgeSet {
    let Some(mut node) = SearchNode::root(inst) else { return inst.fixed_in };
    loop {
        let view = NodeView::new(inst, &node);
        let tickets = inst.board.tickets();
        let pick = view
            .active
            .iter()
            .filter_map(|&k| view.reach_cost[k].map(|c| (k, c)))
            .max_by(|&(a, ca), &(b, cb)| {
                // w_a / c_a vs w_b / c_b, cheaper ticket first on ties
                (inst.weight[a] * cb.max(1)).cmp(&(inst.weight[b] * ca.max(1))).then(b.cmp(&a))
            });
        let Some((k, _)) = pick else { break };
        let (s, g) = (view.comp[tickets[k].source], view.comp[tickets[k].target]);
        let mut paths = ShortestPaths::new(view.comp_count);
        paths.run(&view, s, Some(g), node.remaining as f64, |e| inst.cost[e] as f64);
        let mut path = Vec::new();
        paths.path_to(g, &mut path);
        for e in path {
            if !node.include(inst, e) {
                return fill_spare_budget(inst, node.included);
            }
        }
        node.drop_unaffordable(inst);
    }
    fill_spare_budget(inst, node.included)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Board;
    use crate::dsu::DisjointSets;
    use crate::solver::testing::{feasible_sets, random_board};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Points of `set` plus the tickets completed inside components whose
    /// smallest city passes `keep`.
    fn rooted_value(inst: &Instance<'_>, set: &EdgeSet, keep: impl Fn(usize) -> bool) -> i64 {
        let board = inst.board;
        let mut dsu = DisjointSets::new(board.city_count());
        for e in set.iter() {
            dsu.union(board.edges()[e].a, board.edges()[e].b);
        }
        let mut low = vec![usize::MAX; board.city_count()];
        for c in 0..board.city_count() {
            let r = dsu.find(c);
            low[r] = low[r].min(c);
        }
        let points: i64 = set.iter().map(|e| inst.points[e]).sum();
        let tickets: i64 = board
            .tickets()
            .iter()
            .filter(|t| dsu.connected(t.source, t.target) && keep(low[dsu.find(t.source)]))
            .map(|t| inst.weight[t.id])
            .sum();
        points + tickets
    }

    fn random_instance<'b>(rng: &mut ChaCha8Rng, board: &'b Board) -> Instance<'b> {
        let total: i64 = board.edges().iter().map(|e| e.length).sum();
        let out: EdgeSet = (0..board.edge_count()).filter(|_| rng.gen_bool(0.15)).collect();
        Instance::new(board, rng.gen_range(0..=total)).with_fixed(EdgeSet::new(), out)
    }

    #[test]
    fn future_tables_bound_later_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let cities = rng.gen_range(3..=7);
            let board = random_board(&mut rng, cities, 10, 4);
            let inst = random_instance(&mut rng, &board);
            let base = Base::new(&inst);
            let limits = Limits { nodes: u64::MAX, time: Duration::from_secs(60) };
            let mut engine = Engine::new(&inst, &base, Goal::Improve, limits, Instant::now());
            engine.prepare();
            let sets = feasible_sets(&inst);
            for v in 0..=base.nodes {
                for c in 0..=inst.budget as usize {
                    let best = sets
                        .iter()
                        .filter(|s| inst.selection_cost(s) <= c as i64)
                        .map(|s| rooted_value(&inst, s, |low| low >= v))
                        .max()
                        .unwrap_or(0);
                    assert!(engine.future[v][c] >= best as f64 - EPS, "v {v} c {c}: {} < {best}", engine.future[v][c]);
                }
            }
        }
    }

    #[test]
    fn root_tables_bound_their_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..60 {
            let cities = rng.gen_range(3..=7);
            let board = random_board(&mut rng, cities, 10, 4);
            let inst = random_instance(&mut rng, &board);
            let base = Base::new(&inst);
            let sets = feasible_sets(&inst);
            for r in 0..base.nodes {
                let (table, _) = root_table(&inst, &base, r, 0.0);
                let Some(table) = table else { continue };
                for (c, &bound) in table.iter().enumerate() {
                    // Only the component of r may carry tickets, and it may
                    // not reach below r.
                    let best = sets
                        .iter()
                        .filter(|s| inst.selection_cost(s) <= c as i64)
                        .filter(|s| {
                            let mut dsu = inst.components(s);
                            (0..r).all(|low| !dsu.connected(low, r))
                        })
                        .map(|s| {
                            let mut dsu = inst.components(s);
                            let root = dsu.find(r);
                            let points: i64 = s.iter().map(|e| inst.points[e]).sum();
                            let won: i64 = board
                                .tickets()
                                .iter()
                                .filter(|t| dsu.find(t.source) == root && dsu.find(t.target) == root)
                                .map(|t| inst.weight[t.id])
                                .sum();
                            points + won
                        })
                        .max()
                        .unwrap_or(0);
                    assert!(bound >= best as f64 - EPS, "root {r} c {c}: {bound} < {best}");
                }
            }
        }
    }

    #[test]
    fn polish_never_loses_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let board = random_board(&mut rng, 6, 9, 3);
            let inst = random_instance(&mut rng, &board);
            let start = greedy_start(&inst);
            assert!(inst.is_feasible(&start));
            let value = inst.evaluate(&start);
            let (better, set) = polish(&inst, start, value);
            assert!(inst.is_feasible(&set));
            assert_eq!(inst.evaluate(&set), better);
            assert!(better >= value);
        }
    }

    #[test]
    fn spare_budget_goes_to_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let board = random_board(&mut rng, 5, 8, 0);
            let inst = random_instance(&mut rng, &board);
            let filled = fill_spare_budget(&inst, EdgeSet::new());
            assert!(inst.is_feasible(&filled));
            let best = feasible_sets(&inst).iter().map(|s| inst.evaluate(s)).max().unwrap();
            assert_eq!(inst.evaluate(&filled), best);
        }
    }
}
