//! Budget sweeps, sensitivity and frequency reports.
//!
//! Every report is built from independent solves on a shared board, so the
//! solves run through [`par::map_with_jobs`] and the rows come back in
//! budget (or ticket) order whatever order they finish in.

use std::io;

use serde::{Deserialize, Serialize};

use crate::board::{Board, ScoreBreakdown};
use crate::par;
use crate::solver::{solve, solve_value, SolveError, SolveOptions, SolveStats};

/// One budget of a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub budget: i64,
    pub total: i64,
    pub edge_points: i64,
    pub ticket_points: i64,
    pub edges: Vec<usize>,
    pub tickets: Vec<usize>,
    pub stats: SolveStats,
}

impl SweepRow {
    pub fn breakdown(&self) -> ScoreBreakdown {
        ScoreBreakdown::new(self.edge_points, self.ticket_points)
    }
}

/// Solves every budget in `from..=to`. `jobs` caps the worker threads (0
/// means the pool default).
pub fn sweep(board: &Board, from: i64, to: i64, options: &SolveOptions, jobs: usize) -> Result<Vec<SweepRow>, SolveError> {
    if from < 0 {
        return Err(SolveError::NegativeBudget(from));
    }
    let budgets: Vec<i64> = (from..=to).collect();
    par::map_with_jobs(jobs, budgets, |budget| {
        let r = solve(board, budget, options)?;
        Ok(SweepRow {
            budget,
            total: r.breakdown.total,
            edge_points: r.breakdown.edge_points,
            ticket_points: r.breakdown.ticket_points,
            edges: r.edges,
            tickets: r.tickets,
            stats: r.stats,
        })
    })
    .into_iter()
    .collect()
}

/// Flat CSV record; id lists are joined with `;`.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRecord {
    budget: i64,
    total: i64,
    edge_points: i64,
    ticket_points: i64,
    num_edges: usize,
    num_tickets: usize,
    edges: String,
    tickets: String,
    nodes: u64,
    millis: u64,
    proven_optimal: bool,
    canonical: bool,
}

fn join_ids(ids: &[usize]) -> String {
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(";")
}

fn split_ids(text: &str) -> Result<Vec<usize>, std::num::ParseIntError> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(str::parse).collect()
}

pub fn write_sweep_csv<W: io::Write>(rows: &[SweepRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(CsvRecord {
            budget: r.budget,
            total: r.total,
            edge_points: r.edge_points,
            ticket_points: r.ticket_points,
            num_edges: r.edges.len(),
            num_tickets: r.tickets.len(),
            edges: join_ids(&r.edges),
            tickets: join_ids(&r.tickets),
            nodes: r.stats.nodes,
            millis: r.stats.millis,
            proven_optimal: r.stats.proven_optimal,
            canonical: r.stats.canonical,
        })?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum CsvReadError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row for budget {budget}: bad id list: {source}")]
    Ids { budget: i64, source: std::num::ParseIntError },
    #[error("row for budget {0}: counts disagree with the id lists")]
    Counts(i64),
}

pub fn read_sweep_csv<R: io::Read>(input: R) -> Result<Vec<SweepRow>, CsvReadError> {
    let mut rows = Vec::new();
    for record in csv::Reader::from_reader(input).deserialize() {
        let r: CsvRecord = record?;
        let ids = |text: &str| split_ids(text).map_err(|source| CsvReadError::Ids { budget: r.budget, source });
        let edges = ids(&r.edges)?;
        let tickets = ids(&r.tickets)?;
        if edges.len() != r.num_edges || tickets.len() != r.num_tickets {
            return Err(CsvReadError::Counts(r.budget));
        }
        rows.push(SweepRow {
            budget: r.budget,
            total: r.total,
            edge_points: r.edge_points,
            ticket_points: r.ticket_points,
            edges,
            tickets,
            stats: SolveStats { nodes: r.nodes, millis: r.millis, proven_optimal: r.proven_optimal, canonical: r.canonical },
        });
    }
    Ok(rows)
}

/// Removal impact of one ticket of the optimum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImpactRow {
    pub ticket: usize,
    pub points: i64,
    /// Optimal score without the ticket minus the optimal score with it.
    pub impact: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sensitivity {
    pub budget: i64,
    pub total: i64,
    pub rows: Vec<ImpactRow>,
}

/// Removal impact of every ticket the (canonical) optimum completes.
pub fn sensitivity(board: &Board, budget: i64, options: &SolveOptions, jobs: usize) -> Result<Sensitivity, SolveError> {
    let base = solve(board, budget, options)?;
    let rows = removal_impacts(board, budget, &base.tickets, options, jobs)?;
    Ok(Sensitivity { budget, total: base.breakdown.total, rows })
}

/// Removal impacts of the given tickets, in the given order.
pub fn removal_impacts(
    board: &Board,
    budget: i64,
    tickets: &[usize],
    options: &SolveOptions,
    jobs: usize,
) -> Result<Vec<ImpactRow>, SolveError> {
    if let Some(&k) = tickets.iter().find(|&&k| k >= board.ticket_count()) {
        return Err(SolveError::UnknownTicket(k));
    }
    let base = solve_value(board, budget, options)?;
    par::map_with_jobs(jobs, tickets.to_vec(), |ticket| {
        let mut without = options.clone();
        without.removed_tickets.push(ticket);
        let impact = solve_value(board, budget, &without)? - base;
        Ok(ImpactRow { ticket, points: board.tickets()[ticket].value, impact })
    })
    .into_iter()
    .collect()
}

/// Printed with every frequency report.
pub const FREQUENCY_CAVEAT: &str = "Counts follow this solver's tie-break among equal-score optima \
(lexicographically smallest route set). Other optimal solutions can change them, so they are not \
expected to match counts produced by another solver.";

/// How often each ticket and route appears in the optimum across a sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrequencyReport {
    pub from: i64,
    pub to: i64,
    pub ticket_counts: Vec<usize>,
    pub edge_counts: Vec<usize>,
}

impl FrequencyReport {
    pub fn from_rows(board: &Board, from: i64, to: i64, rows: &[SweepRow]) -> FrequencyReport {
        let mut ticket_counts = vec![0; board.ticket_count()];
        let mut edge_counts = vec![0; board.edge_count()];
        for r in rows.iter().filter(|r| (from..=to).contains(&r.budget)) {
            for &k in &r.tickets {
                ticket_counts[k] += 1;
            }
            for &e in &r.edges {
                edge_counts[e] += 1;
            }
        }
        FrequencyReport { from, to, ticket_counts, edge_counts }
    }

    pub fn budgets(&self) -> usize {
        (self.to - self.from + 1).max(0) as usize
    }

    /// Up to `n` `(ticket, count)` pairs, most frequent first, ties by id.
    pub fn top_tickets(&self, n: usize) -> Vec<(usize, usize)> {
        top(&self.ticket_counts, n)
    }

    pub fn top_edges(&self, n: usize) -> Vec<(usize, usize)> {
        top(&self.edge_counts, n)
    }
}

fn top(counts: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<(usize, usize)> = counts.iter().copied().enumerate().filter(|&(_, c)| c > 0).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    order.truncate(n);
    order
}

/// Sweeps `from..=to` and counts.
pub fn frequency(
    board: &Board,
    from: i64,
    to: i64,
    options: &SolveOptions,
    jobs: usize,
) -> Result<(FrequencyReport, Vec<SweepRow>), SolveError> {
    let rows = sweep(board, from, to, options, jobs)?;
    Ok((FrequencyReport::from_rows(board, from, to, &rows), rows))
}
