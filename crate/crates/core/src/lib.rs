//! Exact optimization for budgeted route selection on railway-building board
//! games.
//!
//! A [`Board`] holds cities, routes (edges with a car length and a point
//! value) and tickets (city pairs with a bonus). Choosing routes within a car
//! budget scores every route's points plus the bonus of every ticket whose
//! cities end up connected. [`solver::solve`] finds a provably optimal choice
//! by branch-and-bound, [`flow`] builds the equivalent multicommodity-flow
//! MIP and writes it as an LP file for external solvers, and [`analysis`]
//! runs budget sweeps, ticket-removal sensitivity and frequency reports.

pub mod analysis;
pub mod board;
pub mod dsu;
pub mod edgeset;
pub mod flow;
pub mod par;
pub mod solver;

pub use board::{Board, BoardError, City, Edge, EdgeSubset, RawBoard, ScoreBreakdown, Ticket, ValidationError};
pub use edgeset::EdgeSet;
pub use solver::{solve, solve_partial, GameState, SolveError, SolveOptions, SolveResult};
