//! Exact maximization of route points plus ticket bonuses under a car budget.
//!
//! [`solve`] runs a depth-first branch-and-bound whose nodes fix routes in or
//! out. Nodes are pruned with the bounds in [`bound`]; after the optimum is
//! proven a second pass makes the answer canonical: among all optimal
//! selections the one returned is the smallest in [`EdgeSet`] order, so the
//! same input always yields the same routes.

pub mod bound;
mod brute;
mod instance;
mod knapsack;
mod node;
mod rooted;
mod search;
#[cfg(test)]
mod testing;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::board::{Board, ScoreBreakdown};
use crate::edgeset::EdgeSet;

pub use bound::{reachable_tickets, upper_bound};
pub use brute::{brute_force, brute_force_instance, BRUTE_FORCE_MAX_EDGES};
pub use instance::Instance;
pub use node::SearchNode;

use search::Limits;

pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;
pub const DEFAULT_TIME_LIMIT: Duration = Duration::from_secs(300);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    /// Routes that must be chosen (and paid for).
    pub forced_in: Vec<usize>,
    /// Routes that may not be chosen.
    pub forced_out: Vec<usize>,
    /// Tickets scored as worthless.
    pub removed_tickets: Vec<usize>,
    pub node_limit: u64,
    pub time_limit: Duration,
    /// Run the tie-break pass. Without it the score is still optimal but
    /// the routes are whichever optimum the search met first.
    pub canonical: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            forced_in: Vec::new(),
            forced_out: Vec::new(),
            removed_tickets: Vec::new(),
            node_limit: DEFAULT_NODE_LIMIT,
            time_limit: DEFAULT_TIME_LIMIT,
            canonical: true,
        }
    }
}

impl SolveOptions {
    pub fn with_limits(mut self, node_limit: u64, time_limit: Duration) -> Self {
        self.node_limit = node_limit;
        self.time_limit = time_limit;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub millis: u64,
    /// No limit cut the optimality proof short.
    pub proven_optimal: bool,
    /// The tie-break pass finished, so `edges` is the canonical optimum.
    pub canonical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub edges: Vec<usize>,
    /// Completed tickets that count towards the score.
    pub tickets: Vec<usize>,
    pub breakdown: ScoreBreakdown,
    pub stats: SolveStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("budget must be non-negative, got {0}")]
    NegativeBudget(i64),
    #[error("route id {0} does not exist")]
    UnknownEdge(usize),
    #[error("ticket id {0} does not exist")]
    UnknownTicket(usize),
    #[error("route {0} is both forced in and forced out")]
    ConflictingEdge(usize),
    #[error("forced routes need {needed} cars but only {budget} are available")]
    BudgetInfeasibleForcedSet { needed: i64, budget: i64 },
    #[error("brute force supports at most {max} routes, board has {edges}")]
    InstanceTooLarge { edges: usize, max: usize },
}

/// An optimum of an [`Instance`] objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: i64,
    pub edges: EdgeSet,
    pub stats: SolveStats,
}

fn check_edges(board: &Board, ids: &[usize]) -> Result<EdgeSet, SolveError> {
    ids.iter().map(|&e| if e < board.edge_count() { Ok(e) } else { Err(SolveError::UnknownEdge(e)) }).collect()
}

fn check_tickets(board: &Board, ids: &[usize]) -> Result<(), SolveError> {
    match ids.iter().find(|&&k| k >= board.ticket_count()) {
        Some(&k) => Err(SolveError::UnknownTicket(k)),
        None => Ok(()),
    }
}

fn check_forced(inst: &Instance<'_>) -> Result<(), SolveError> {
    if inst.budget < 0 {
        return Err(SolveError::NegativeBudget(inst.budget));
    }
    if let Some(e) = inst.fixed_in.intersection(&inst.fixed_out).iter().next() {
        return Err(SolveError::ConflictingEdge(e));
    }
    let needed = inst.selection_cost(&inst.fixed_in);
    if needed > inst.budget {
        return Err(SolveError::BudgetInfeasibleForcedSet { needed, budget: inst.budget });
    }
    Ok(())
}

/// Builds the objective for a plain solve with options applied.
pub fn instance_for<'b>(board: &'b Board, budget: i64, options: &SolveOptions) -> Result<Instance<'b>, SolveError> {
    let fixed_in = check_edges(board, &options.forced_in)?;
    let fixed_out = check_edges(board, &options.forced_out)?;
    check_tickets(board, &options.removed_tickets)?;
    let mut inst = Instance::new(board, budget).with_fixed(fixed_in, fixed_out);
    for &k in &options.removed_tickets {
        inst = inst.with_ticket_weight(k, 0);
    }
    check_forced(&inst)?;
    Ok(inst)
}

/// Maximum-score route selection within `budget` cars.
///
/// If the node or time limit triggers, the best selection found so far is
/// returned with `stats.proven_optimal == false`.
pub fn solve(board: &Board, budget: i64, options: &SolveOptions) -> Result<SolveResult, SolveError> {
    let inst = instance_for(board, budget, options)?;
    let opt = optimize(&inst, options.node_limit, options.time_limit, options.canonical)?;
    Ok(result_from(&inst, &opt))
}

fn result_from(inst: &Instance<'_>, opt: &Optimum) -> SolveResult {
    let board = inst.board;
    let mut dsu = board.components(&opt.edges);
    let tickets: Vec<usize> = board
        .tickets()
        .iter()
        .filter(|t| inst.weight[t.id] > 0 && dsu.connected(t.source, t.target))
        .map(|t| t.id)
        .collect();
    let edge_points = opt.edges.iter().map(|e| inst.points[e]).sum();
    let ticket_points = tickets.iter().map(|&k| inst.weight[k]).sum();
    let breakdown = ScoreBreakdown::new(edge_points, ticket_points);
    debug_assert_eq!(breakdown.total + inst.offset, opt.value);
    SolveResult { edges: opt.edges.to_vec(), tickets, breakdown, stats: opt.stats }
}

/// Optimizes an arbitrary instance objective.
pub fn optimize(inst: &Instance<'_>, node_limit: u64, time_limit: Duration, canonical: bool) -> Result<Optimum, SolveError> {
    check_forced(inst)?;
    let started = Instant::now();
    let limits = Limits { nodes: node_limit, time: time_limit };
    let outcome = search::maximize(inst, None, limits, started);
    let (value, mut edges) = outcome.best.expect("the fixed in-set alone is feasible");
    let mut nodes = outcome.nodes;
    let proven = outcome.complete;
    let mut is_canonical = false;

    if canonical && proven {
        is_canonical = true;
        let mut fixed_in = inst.fixed_in;
        let mut fixed_out = inst.fixed_out;
        for e in 0..inst.edge_count() {
            if fixed_in.contains(e) || fixed_out.contains(e) {
                continue;
            }
            if !edges.contains(e) {
                fixed_out.insert(e);
                continue;
            }
            let mut without = fixed_out;
            without.insert(e);
            let trial = inst.clone().with_fixed(fixed_in, without);
            let remaining = Limits { nodes: node_limit.saturating_sub(nodes), time: limits.time };
            let found = search::reach(&trial, value, remaining, started);
            nodes += found.nodes;
            if !found.complete && found.best.is_none() {
                is_canonical = false;
                break;
            }
            match found.best {
                Some((v, alt)) => {
                    debug_assert_eq!(v, value);
                    edges = alt;
                    fixed_out = without;
                }
                None => {
                    fixed_in.insert(e);
                }
            }
        }
    }

    let stats = SolveStats {
        nodes,
        millis: started.elapsed().as_millis() as u64,
        proven_optimal: proven,
        canonical: is_canonical,
    };
    Ok(Optimum { value, edges, stats })
}

/// Change in the optimal score when ticket `k` becomes worthless; never
/// positive.
pub fn removal_impact(board: &Board, budget: i64, ticket: usize, options: &SolveOptions) -> Result<i64, SolveError> {
    let base = solve_value(board, budget, options)?;
    let mut without = options.clone();
    without.removed_tickets.push(ticket);
    Ok(solve_value(board, budget, &without)? - base)
}

/// Optimal score only (skips the tie-break pass).
pub fn solve_value(board: &Board, budget: i64, options: &SolveOptions) -> Result<i64, SolveError> {
    let options = SolveOptions { canonical: false, ..options.clone() };
    Ok(solve(board, budget, &options)?.breakdown.total)
}

/// A game in progress, seen from one player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameState<'b> {
    pub board: &'b Board,
    /// Cars the player still has.
    pub budget_remaining: i64,
    /// Routes the player already owns; they connect cities for free and
    /// their points are already banked.
    pub mine: Vec<usize>,
    /// Routes claimed by opponents.
    pub blocked: Vec<usize>,
    pub held_tickets: Vec<usize>,
    /// Score tickets the player does not hold when the plan completes them.
    pub count_unheld_tickets: bool,
    /// Deduct the value of held tickets left incomplete.
    pub penalize_incomplete: bool,
}

impl<'b> GameState<'b> {
    pub fn fresh(board: &'b Board, budget: i64) -> Self {
        GameState {
            board,
            budget_remaining: budget,
            mine: Vec::new(),
            blocked: Vec::new(),
            held_tickets: Vec::new(),
            count_unheld_tickets: true,
            penalize_incomplete: true,
        }
    }

    /// Objective over new routes: held tickets score `+d` when completed and
    /// `-d` otherwise (a constant `-d` plus `2d` on completion).
    pub fn instance(&self) -> Result<Instance<'b>, SolveError> {
        let board = self.board;
        let mine = check_edges(board, &self.mine)?;
        let blocked = check_edges(board, &self.blocked)?;
        check_tickets(board, &self.held_tickets)?;
        let mut inst = Instance::new(board, self.budget_remaining).with_fixed(mine, blocked);
        for e in mine.iter() {
            inst.cost[e] = 0;
            inst.points[e] = 0;
        }
        for (k, t) in board.tickets().iter().enumerate() {
            let held = self.held_tickets.contains(&k);
            inst.weight[k] = match (held, self.penalize_incomplete) {
                (true, true) => 2 * t.value,
                (true, false) => t.value,
                (false, _) if self.count_unheld_tickets => t.value,
                (false, _) => 0,
            };
            if held && self.penalize_incomplete {
                inst.offset -= t.value;
            }
        }
        check_forced(&inst)?;
        Ok(inst)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialResult {
    /// New routes to claim, excluding the player's own.
    pub plan: Vec<usize>,
    pub new_edge_points: i64,
    /// Value of counted tickets the plan completes.
    pub ticket_gains: i64,
    /// Value of held tickets left incomplete (deducted).
    pub ticket_penalties: i64,
    pub total: i64,
    pub completed_held: Vec<usize>,
    pub incomplete_held: Vec<usize>,
    pub completed_unheld: Vec<usize>,
    pub stats: SolveStats,
}

/// Best additional score reachable from a partial game.
pub fn solve_partial(state: &GameState<'_>, options: &SolveOptions) -> Result<PartialResult, SolveError> {
    let inst = state.instance()?;
    let opt = optimize(&inst, options.node_limit, options.time_limit, options.canonical)?;
    Ok(partial_result(state, &inst, &opt))
}

fn partial_result(state: &GameState<'_>, inst: &Instance<'_>, opt: &Optimum) -> PartialResult {
    let board = state.board;
    let mine: EdgeSet = state.mine.iter().copied().collect();
    let plan = opt.edges.difference(&mine);
    let mut dsu = board.components(&opt.edges);
    let mut out = PartialResult {
        plan: plan.to_vec(),
        new_edge_points: plan.iter().map(|e| board.edges()[e].points).sum(),
        ticket_gains: 0,
        ticket_penalties: 0,
        total: 0,
        completed_held: Vec::new(),
        incomplete_held: Vec::new(),
        completed_unheld: Vec::new(),
        stats: opt.stats,
    };
    for t in board.tickets() {
        let done = dsu.connected(t.source, t.target);
        let held = state.held_tickets.contains(&t.id);
        match (held, done) {
            (true, true) => {
                out.completed_held.push(t.id);
                out.ticket_gains += t.value;
            }
            (true, false) => {
                out.incomplete_held.push(t.id);
                if state.penalize_incomplete {
                    out.ticket_penalties += t.value;
                }
            }
            (false, true) if state.count_unheld_tickets => {
                out.completed_unheld.push(t.id);
                out.ticket_gains += t.value;
            }
            _ => {}
        }
    }
    out.total = out.new_edge_points + out.ticket_gains - out.ticket_penalties;
    debug_assert_eq!(out.total, inst.evaluate(&opt.edges));
    debug_assert_eq!(out.total, opt.value);
    out
}
