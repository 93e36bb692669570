//! Bound for growing one connected component from a fixed root.
//!
//! A ticket only scores when a single component of the selection joins its
//! two cities. The search therefore builds components one at a time, each
//! rooted at its smallest node, and bounds the growth of the current one.
//! In a tree hanging from a known root every other node has exactly one
//! parent route and a path up to the root. Relaxing "the path of node `v`
//! only uses chosen routes" with prices `mu[v][arc]`, and splitting each
//! ticket's value between its two ends with `alpha`, leaves a choice of at
//! most one parent route per node plus routes bought for points alone: a
//! multiple-choice knapsack solved exactly over the budget.
//!
//! Fixed-in routes are contracted first, so a "node" is a set of cities the
//! fixed routes already join.

use crate::dsu::DisjointSets;
use crate::edgeset::EdgeSet;

use super::instance::Instance;

/// The instance with its fixed-in routes contracted.
#[derive(Debug)]
pub(crate) struct Base {
    pub nodes: usize,
    /// Per route: the nodes it joins (smaller first) when it can still be a
    /// tree route, i.e. it is not fixed and joins two different nodes.
    pub ends: Vec<Option<(usize, usize)>>,
    /// Tickets with weight whose cities lie in different nodes:
    /// `(weight, source node, target node)`.
    pub tickets: Vec<(i64, usize, usize)>,
    /// Per node: indices into `tickets`.
    pub by_node: Vec<Vec<usize>>,
    /// Routes that may still be bought.
    pub free: Vec<usize>,
    /// Objective of the fixed in-set alone.
    pub value: i64,
    /// Budget left after paying for the fixed routes.
    pub budget: i64,
}

impl Base {
    pub(crate) fn new(inst: &Instance<'_>) -> Base {
        let board = inst.board;
        let n = board.city_count();
        let mut dsu = DisjointSets::new(n);
        for e in inst.fixed_in.iter() {
            let edge = &board.edges()[e];
            dsu.union(edge.a, edge.b);
        }
        let mut label = vec![usize::MAX; n];
        let mut node_of = vec![0; n];
        let mut nodes = 0;
        for (city, slot) in node_of.iter_mut().enumerate() {
            let r = dsu.find(city);
            if label[r] == usize::MAX {
                label[r] = nodes;
                nodes += 1;
            }
            *slot = label[r];
        }
        let mut ends = vec![None; inst.edge_count()];
        let mut free = Vec::new();
        for (e, edge) in board.edges().iter().enumerate() {
            if inst.fixed_in.contains(e) || inst.fixed_out.contains(e) {
                continue;
            }
            free.push(e);
            let (p, q) = (node_of[edge.a], node_of[edge.b]);
            if p != q {
                ends[e] = Some((p.min(q), p.max(q)));
            }
        }
        let mut tickets = Vec::new();
        let mut by_node = vec![Vec::new(); nodes];
        for t in board.tickets() {
            let w = inst.weight[t.id];
            let (s, g) = (node_of[t.source], node_of[t.target]);
            if w != 0 && s != g {
                by_node[s].push(tickets.len());
                by_node[g].push(tickets.len());
                tickets.push((w, s, g));
            }
        }
        Base {
            nodes,
            ends,
            tickets,
            by_node,
            free,
            value: inst.evaluate(&inst.fixed_in),
            budget: inst.budget - inst.selection_cost(&inst.fixed_in),
        }
    }
}

/// Role of a node in the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Status {
    /// Not yet placed; may join the current component if its id is larger
    /// than the root's.
    Free,
    /// In the component being grown.
    Current,
    /// In a finished component, or passed over as a root.
    Closed,
}

/// Prices of the relaxation, indexed by base node and directed arc
/// (`2 * edge`, plus one when the arc runs from the larger node).
#[derive(Clone, Debug)]
pub(crate) struct Prices {
    arcs: usize,
    mu: Vec<f64>,
    alpha: Vec<f64>,
}

impl Prices {
    pub(crate) fn new(base: &Base, edges: usize) -> Prices {
        Prices {
            arcs: 2 * edges,
            mu: vec![0.0; base.nodes * 2 * edges],
            alpha: base.tickets.iter().map(|t| t.0 as f64 / 2.0).collect(),
        }
    }

    #[inline]
    fn mu(&self, node: usize, key: usize) -> f64 {
        self.mu[node * self.arcs + key]
    }

    #[inline]
    fn mu_mut(&mut self, node: usize, key: usize) -> &mut f64 {
        &mut self.mu[node * self.arcs + key]
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Arc {
    pub tail: usize,
    pub head: usize,
    pub edge: usize,
    /// Index into the price rows.
    key: usize,
}

/// The part of the instance the current component can still grow into.
/// Local node 0 is the component itself; the others are free nodes within
/// reach of the remaining budget.
#[derive(Debug)]
pub(crate) struct View {
    pub n: usize,
    pub base_of: Vec<usize>,
    pub arcs: Vec<Arc>,
    out_start: Vec<usize>,
    out_arcs: Vec<usize>,
    /// Per local node: arcs into it.
    groups: Vec<Vec<usize>>,
    /// Routes that may be bought for points: free, not yet in a tree.
    pub fillers: Vec<usize>,
    /// `(base ticket, local source, local target, weight)` for tickets the
    /// component could still complete.
    tickets: Vec<(usize, usize, usize, i64)>,
    /// Arcs leaving the component.
    pub frontier: Vec<usize>,
    pub cap: usize,
}

impl View {
    pub(crate) fn new(
        inst: &Instance<'_>,
        base: &Base,
        status: &[Status],
        root: usize,
        tree: &EdgeSet,
        tree_out: &EdgeSet,
        remaining: i64,
    ) -> View {
        let cap = remaining.max(0);
        let joinable = |v: usize| status[v] == Status::Free && v > root;
        let usable = |v: usize| status[v] == Status::Current || joinable(v);

        let mut candidates = Vec::new();
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); base.nodes];
        for (e, ends) in base.ends.iter().enumerate() {
            let Some((p, q)) = *ends else { continue };
            if tree.contains(e) || tree_out.contains(e) || inst.cost[e] > cap {
                continue;
            }
            if !usable(p) || !usable(q) || (status[p] == Status::Current && status[q] == Status::Current) {
                continue;
            }
            candidates.push(e);
            adjacency[p].push((e, q));
            adjacency[q].push((e, p));
        }

        // Cheapest connection (in cars) from the component to each node.
        let mut dist = vec![i64::MAX; base.nodes];
        let mut heap = std::collections::BinaryHeap::new();
        for v in 0..base.nodes {
            if status[v] == Status::Current {
                dist[v] = 0;
                heap.push(std::cmp::Reverse((0i64, v)));
            }
        }
        while let Some(std::cmp::Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(e, w) in &adjacency[v] {
                let nd = d + inst.cost[e];
                if nd <= cap && nd < dist[w] && status[w] != Status::Current {
                    dist[w] = nd;
                    heap.push(std::cmp::Reverse((nd, w)));
                }
            }
        }

        let mut local = vec![usize::MAX; base.nodes];
        let mut base_of = vec![usize::MAX];
        for v in 0..base.nodes {
            if status[v] == Status::Current {
                local[v] = 0;
            } else if dist[v] != i64::MAX {
                local[v] = base_of.len();
                base_of.push(v);
            }
        }
        let n = base_of.len();

        let mut arcs = Vec::new();
        for &e in &candidates {
            let (p, q) = base.ends[e].expect("candidates have ends");
            if local[p] == usize::MAX || local[q] == usize::MAX {
                continue;
            }
            for (from, to, dir) in [(p, q, 0), (q, p, 1)] {
                if local[to] != 0 && dist[from] + inst.cost[e] <= cap {
                    arcs.push(Arc { tail: local[from], head: local[to], edge: e, key: 2 * e + dir });
                }
            }
        }
        let mut out_start = vec![0usize; n + 1];
        for a in &arcs {
            out_start[a.tail + 1] += 1;
        }
        for v in 0..n {
            out_start[v + 1] += out_start[v];
        }
        let mut fill = out_start.clone();
        let mut out_arcs = vec![0; arcs.len()];
        let mut groups = vec![Vec::new(); n];
        let mut frontier = Vec::new();
        for (i, a) in arcs.iter().enumerate() {
            out_arcs[fill[a.tail]] = i;
            fill[a.tail] += 1;
            groups[a.head].push(i);
            if a.tail == 0 {
                frontier.push(i);
            }
        }

        let tickets = base
            .tickets
            .iter()
            .enumerate()
            .filter_map(|(i, &(w, s, t))| {
                let (ls, lt) = (local[s], local[t]);
                (ls != usize::MAX && lt != usize::MAX && (ls, lt) != (0, 0)).then_some((i, ls, lt, w))
            })
            .collect();
        let fillers = base.free.iter().copied().filter(|&e| !tree.contains(e) && inst.cost[e] <= cap).collect();

        View { n, base_of, arcs, out_start, out_arcs, groups, fillers, tickets, frontier, cap: cap as usize }
    }

    fn out(&self, v: usize) -> &[usize] {
        &self.out_arcs[self.out_start[v]..self.out_start[v + 1]]
    }
}

/// One DP stage of the relaxation.
#[derive(Clone, Copy, Debug)]
enum Stage {
    /// Parent choice for a local node.
    Group(usize),
    /// A route bought for points.
    Filler(usize),
    /// Budget handed to later components.
    Future,
}

/// Working memory for [`evaluate`], reused across calls.
#[derive(Debug, Default)]
pub(crate) struct Scratch {
    prize: Vec<f64>,
    price_sum: Vec<f64>,
    profit: Vec<f64>,
    sp: Vec<f64>,
    path_start: Vec<usize>,
    path_arcs: Vec<usize>,
    dist: Vec<f64>,
    pred: Vec<usize>,
    done: Vec<bool>,
    stages: Vec<Stage>,
    /// `table[s * (cap + 1) + c]`: best over stages `< s` within `c` cars.
    table: Vec<f64>,
    choice: Vec<u32>,
    /// `after[s * (cap + 1) + c]`: best over stages `>= s` within `c` cars.
    after: Vec<f64>,
    on_path: Vec<bool>,
    chosen_arc: Vec<bool>,
    /// Outcome of the last evaluation.
    pub value: f64,
    pub arcs: Vec<usize>,
    pub fillers: Vec<usize>,
    pub joined: Vec<bool>,
}

impl Scratch {
    /// Edges on the priced path of local node `v`.
    pub(crate) fn path<'a>(&'a self, view: &'a View, v: usize) -> impl Iterator<Item = usize> + 'a {
        self.path_arcs[self.path_start[v]..self.path_start[v + 1]].iter().map(move |&a| view.arcs[a].edge)
    }

    /// First route of the priced path of local node `v`.
    pub(crate) fn first_arc(&self, v: usize) -> Option<usize> {
        let (lo, hi) = (self.path_start[v], self.path_start[v + 1]);
        (hi > lo).then(|| self.path_arcs[hi - 1])
    }

    pub(crate) fn profit(&self, arc: usize) -> f64 {
        self.profit[arc]
    }

    /// Best value per capacity of the last evaluation, excluding `banked`.
    pub(crate) fn by_capacity(&self, cap: usize) -> &[f64] {
        let w = cap + 1;
        let s = self.stages.len();
        &self.table[s * w..(s + 1) * w]
    }
}

/// Evaluates the relaxation at fixed prices. `future[y]` bounds what later
/// components and their routes can add with `y` cars. The result is left in
/// `scratch`; `scratch.value` includes `banked`.
pub(crate) fn evaluate(
    inst: &Instance<'_>,
    view: &View,
    prices: &Prices,
    future: &[f64],
    banked: i64,
    scratch: &mut Scratch,
) {
    let n = view.n;
    let cap = view.cap;
    let w = cap + 1;
    let s = scratch;

    s.prize.clear();
    s.prize.resize(n, 0.0);
    for &(i, ls, lt, weight) in &view.tickets {
        let weight = weight as f64;
        if ls == 0 {
            s.prize[lt] += weight;
        } else if lt == 0 {
            s.prize[ls] += weight;
        } else {
            let a = prices.alpha[i];
            s.prize[ls] += a;
            s.prize[lt] += weight - a;
        }
    }

    s.price_sum.clear();
    s.price_sum.resize(view.arcs.len(), 0.0);
    for (i, a) in view.arcs.iter().enumerate() {
        s.price_sum[i] = (1..n).map(|v| prices.mu(view.base_of[v], a.key)).sum();
    }

    // Priced path from the component to every node.
    s.sp.clear();
    s.sp.resize(n, f64::INFINITY);
    s.path_start.clear();
    s.path_arcs.clear();
    s.path_start.push(0);
    s.path_start.push(0);
    for v in 1..n {
        let row = view.base_of[v];
        s.dist.clear();
        s.dist.resize(n, f64::INFINITY);
        s.pred.clear();
        s.pred.resize(n, usize::MAX);
        s.done.clear();
        s.done.resize(n, false);
        s.dist[0] = 0.0;
        loop {
            let mut best = usize::MAX;
            let mut best_d = f64::INFINITY;
            for u in 0..n {
                if !s.done[u] && s.dist[u] < best_d {
                    best_d = s.dist[u];
                    best = u;
                }
            }
            if best == usize::MAX {
                break;
            }
            s.done[best] = true;
            if best == v {
                break;
            }
            for &ai in view.out(best) {
                let a = &view.arcs[ai];
                let nd = best_d + prices.mu(row, a.key);
                if nd < s.dist[a.head] {
                    s.dist[a.head] = nd;
                    s.pred[a.head] = ai;
                }
            }
        }
        s.sp[v] = s.dist[v];
        if s.dist[v].is_finite() {
            let mut at = v;
            while at != 0 {
                let ai = s.pred[at];
                s.path_arcs.push(ai);
                at = view.arcs[ai].tail;
            }
        }
        s.path_start.push(s.path_arcs.len());
    }

    s.profit.clear();
    s.profit.resize(view.arcs.len(), f64::NEG_INFINITY);
    s.stages.clear();
    for v in 1..n {
        if !s.sp[v].is_finite() {
            continue;
        }
        for &ai in &view.groups[v] {
            s.profit[ai] = inst.points[view.arcs[ai].edge] as f64 + s.price_sum[ai] + s.prize[v] - s.sp[v];
        }
        s.stages.push(Stage::Group(v));
    }
    for &e in &view.fillers {
        if inst.points[e] > 0 {
            s.stages.push(Stage::Filler(e));
        }
    }
    s.stages.push(Stage::Future);

    let stages = s.stages.len();
    s.table.clear();
    s.table.resize((stages + 1) * w, 0.0);
    s.choice.clear();
    s.choice.resize(stages * w, 0);
    for (si, stage) in s.stages.iter().enumerate() {
        let (prev, next) = s.table[si * w..(si + 2) * w].split_at_mut(w);
        next.copy_from_slice(prev);
        let choice = &mut s.choice[si * w..(si + 1) * w];
        match *stage {
            Stage::Group(v) => {
                for &ai in &view.groups[v] {
                    let p = s.profit[ai];
                    if p <= 0.0 {
                        continue;
                    }
                    let l = inst.cost[view.arcs[ai].edge] as usize;
                    for c in l..w {
                        let take = prev[c - l] + p;
                        if take > next[c] {
                            next[c] = take;
                            choice[c] = ai as u32 + 1;
                        }
                    }
                }
            }
            Stage::Filler(e) => {
                let p = inst.points[e] as f64;
                let l = inst.cost[e] as usize;
                for c in l..w {
                    let take = prev[c - l] + p;
                    if take > next[c] {
                        next[c] = take;
                        choice[c] = 1;
                    }
                }
            }
            Stage::Future => {
                for c in 0..w {
                    for y in 1..=c {
                        let take = prev[c - y] + future[y];
                        if take > next[c] {
                            next[c] = take;
                            choice[c] = y as u32;
                        }
                    }
                }
            }
        }
    }
    s.value = banked as f64 + s.table[stages * w + cap];

    s.arcs.clear();
    s.fillers.clear();
    s.joined.clear();
    s.joined.resize(n, false);
    s.joined[0] = true;
    let mut c = cap;
    for si in (0..stages).rev() {
        let pick = s.choice[si * w + c] as usize;
        if pick == 0 {
            continue;
        }
        match s.stages[si] {
            Stage::Group(v) => {
                let ai = pick - 1;
                s.arcs.push(ai);
                s.joined[v] = true;
                c -= inst.cost[view.arcs[ai].edge] as usize;
            }
            Stage::Filler(e) => {
                s.fillers.push(e);
                c -= inst.cost[e] as usize;
            }
            Stage::Future => c -= pick,
        }
    }
}

/// Projected subgradient step on the prices after [`evaluate`]. Returns
/// the squared norm of the subgradient (zero when the relaxed solution is
/// consistent).
pub(crate) fn subgradient_step(view: &View, prices: &mut Prices, scratch: &mut Scratch, target: f64, theta: f64) -> f64 {
    let n = view.n;
    let s = scratch;
    s.chosen_arc.clear();
    s.chosen_arc.resize(view.arcs.len(), false);
    for &ai in &s.arcs {
        s.chosen_arc[ai] = true;
    }
    let chosen = s.arcs.len();
    s.on_path.clear();
    s.on_path.resize(view.arcs.len(), false);

    let mut norm = 0.0;
    for v in 1..n {
        if s.joined[v] {
            let path = &s.path_arcs[s.path_start[v]..s.path_start[v + 1]];
            let both = path.iter().filter(|&&a| s.chosen_arc[a]).count();
            norm += (chosen + path.len() - 2 * both) as f64;
        } else {
            norm += chosen as f64;
        }
    }
    for &(_, ls, lt, _) in &view.tickets {
        if ls != 0 && lt != 0 && s.joined[ls] != s.joined[lt] {
            norm += 1.0;
        }
    }
    if norm == 0.0 {
        return 0.0;
    }
    let step = theta * (s.value - target).max(0.0) / norm;
    if step == 0.0 {
        return norm;
    }

    for v in 1..n {
        let row = view.base_of[v];
        let (lo, hi) = (s.path_start[v], s.path_start[v + 1]);
        if s.joined[v] {
            for &a in &s.path_arcs[lo..hi] {
                s.on_path[a] = true;
            }
        }
        for &a in &s.arcs {
            if !s.on_path[a] {
                let m = prices.mu_mut(row, view.arcs[a].key);
                *m = (*m - step).max(0.0);
            }
        }
        if s.joined[v] {
            for &a in &s.path_arcs[lo..hi] {
                if !s.chosen_arc[a] {
                    *prices.mu_mut(row, view.arcs[a].key) += step;
                }
                s.on_path[a] = false;
            }
        }
    }
    for &(i, ls, lt, weight) in &view.tickets {
        if ls != 0 && lt != 0 {
            let g = s.joined[ls] as i32 - s.joined[lt] as i32;
            if g != 0 {
                let a = &mut prices.alpha[i];
                *a = (*a - step * g as f64).clamp(0.0, weight as f64);
            }
        }
    }
    norm
}

/// For each frontier arc after [`evaluate`]: the relaxation's value with
/// that arc forced into the component and with it forced out.
pub(crate) fn frontier_values(inst: &Instance<'_>, view: &View, banked: i64, future: &[f64], scratch: &mut Scratch) -> Vec<(usize, f64, f64)> {
    let w = view.cap + 1;
    let s = scratch;
    let stages = s.stages.len();
    s.after.clear();
    s.after.resize((stages + 1) * w, 0.0);
    for si in (0..stages).rev() {
        let (cur, next) = s.after[si * w..(si + 2) * w].split_at_mut(w);
        cur.copy_from_slice(next);
        match s.stages[si] {
            Stage::Group(v) => {
                for &ai in &view.groups[v] {
                    let p = s.profit[ai];
                    if p <= 0.0 {
                        continue;
                    }
                    let l = inst.cost[view.arcs[ai].edge] as usize;
                    for c in l..w {
                        cur[c] = cur[c].max(next[c - l] + p);
                    }
                }
            }
            Stage::Filler(e) => {
                let p = inst.points[e] as f64;
                let l = inst.cost[e] as usize;
                for c in l..w {
                    cur[c] = cur[c].max(next[c - l] + p);
                }
            }
            Stage::Future => {
                for c in 0..w {
                    for y in 1..=c {
                        cur[c] = cur[c].max(next[c - y] + future[y]);
                    }
                }
            }
        }
    }

    let cap = view.cap;
    let split = |si: usize, room: usize| -> f64 {
        let before = &s.table[si * w..(si + 1) * w];
        let after = &s.after[(si + 1) * w..(si + 2) * w];
        (0..=room).map(|c| before[c] + after[room - c]).fold(f64::NEG_INFINITY, f64::max)
    };
    let mut out = Vec::with_capacity(view.frontier.len());
    let mut stage_of = vec![usize::MAX; view.n];
    for (si, stage) in s.stages.iter().enumerate() {
        if let Stage::Group(v) = *stage {
            stage_of[v] = si;
        }
    }
    for &fa in &view.frontier {
        let v = view.arcs[fa].head;
        let item_value = |ai: usize, si: usize| -> f64 {
            let l = inst.cost[view.arcs[ai].edge] as usize;
            if l > cap {
                f64::NEG_INFINITY
            } else {
                s.profit[ai] + split(si, cap - l)
            }
        };
        let si = stage_of[v];
        let without_group = split(si, cap);
        let mut without = without_group;
        for &ai in &view.groups[v] {
            if ai != fa {
                without = without.max(item_value(ai, si));
            }
        }
        let with = item_value(fa, si);
        out.push((fa, banked as f64 + with, banked as f64 + without));
    }
    out
}
