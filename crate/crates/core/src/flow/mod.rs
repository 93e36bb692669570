//! Directed per-ticket graphs and the multicommodity-flow MIP built on them.
//!
//! Each ticket `k` gets a directed copy of the board in which every route
//! `{i, j}` becomes a forward arc `(i, j)` and a backward arc `(j, i)`, plus
//! one dummy arc `(t_k, s_k)`. A route selection completes ticket `k` exactly
//! when the selected arcs and the dummy arc close a directed cycle.

mod graph;
mod lp;
mod model;
mod solution;

pub use graph::{build_ticket_graph, has_dummy_cycle, Arc, ArcOrigin, TicketGraph};
pub use lp::{emit_lp, lp_string};
pub use model::{build_model, Constraint, FlowModel, LinkingMode, ModelCounts, ModelOptions, Sense, VarKind, Variable, YDomain};
pub use solution::{extract_solution, route_flows, ExtractError, Extraction, ModelSolution, READOUT_TOLERANCE};
