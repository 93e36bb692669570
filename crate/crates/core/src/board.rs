//! Problem instances: cities, routes and tickets, plus scoring of route
//! subsets.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsu::DisjointSets;
use crate::edgeset::EdgeSet;

/// Board file contents as written on disk, before validation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawBoard {
    pub name: String,
    pub cities: Vec<String>,
    pub routes: Vec<RawRoute>,
    pub tickets: Vec<RawTicket>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRoute {
    pub a: String,
    pub b: String,
    pub length: i64,
    pub points: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTicket {
    pub a: String,
    pub b: String,
    pub points: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct City {
    pub id: usize,
    pub name: String,
}

/// An undirected route. Endpoints are stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub length: i64,
    pub points: i64,
}

impl Edge {
    pub fn other(&self, city: usize) -> usize {
        if city == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// A destination ticket between `source < target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ticket {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("board has no cities")]
    EmptyBoard,
    #[error("city #{index} has an empty name")]
    EmptyCityName { index: usize },
    #[error("city name {name:?} appears more than once")]
    DuplicateCity { name: String },
    #[error("{context} references unknown city {name:?}")]
    DanglingCityReference { context: String, name: String },
    #[error("route #{route} is a self-loop at {city:?}")]
    SelfLoop { route: usize, city: String },
    #[error("{context} has non-positive {field} {value}")]
    NonpositiveWeight { context: String, field: &'static str, value: i64 },
    #[error("route #{route} duplicates route #{first} between {a:?} and {b:?}")]
    DuplicateEdge { route: usize, first: usize, a: String, b: String },
    #[error("ticket #{ticket} joins {city:?} to itself")]
    TicketSelfPair { ticket: usize, city: String },
    #[error("ticket #{ticket} duplicates ticket #{first} between {a:?} and {b:?}")]
    DuplicateTicket { ticket: usize, first: usize, a: String, b: String },
    #[error("ticket #{ticket} ({a:?}-{b:?}) coincides with a single route")]
    TicketEqualsEdge { ticket: usize, a: String, b: String },
    #[error("ticket #{ticket} ({a:?}-{b:?}) joins cities in different components")]
    TicketEndpointsDisconnected { ticket: usize, a: String, b: String },
    #[error("route graph is disconnected ({components} components)")]
    DisconnectedGraph { components: usize },
    #[error("board has {count} routes; at most {max} are supported")]
    TooManyEdges { count: usize, max: usize },
}

#[derive(Debug, Error)]
pub enum BoardError {
    #[error("cannot read board file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed board file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid board:\n{}", list_errors(.0))]
    Invalid(Vec<ValidationError>),
}

fn list_errors(errors: &[ValidationError]) -> String {
    errors.iter().map(|e| format!("  - {e}")).collect::<Vec<_>>().join("\n")
}

/// A validated, immutable board.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    name: String,
    cities: Vec<City>,
    edges: Vec<Edge>,
    tickets: Vec<Ticket>,
    /// Incident edge ids per city.
    adjacency: Vec<Vec<usize>>,
}

impl Board {
    pub fn load(path: impl AsRef<Path>) -> Result<Board, BoardError> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Board, BoardError> {
        let raw: RawBoard = serde_json::from_str(text)?;
        Board::validate(&raw).map_err(BoardError::Invalid)
    }

    /// Checks every standing assumption and reports all violations at once.
    pub fn validate(raw: &RawBoard) -> Result<Board, Vec<ValidationError>> {
        let mut errors = Vec::new();

        if raw.cities.is_empty() {
            errors.push(ValidationError::EmptyBoard);
        }
        let mut seen = HashSet::new();
        for (i, name) in raw.cities.iter().enumerate() {
            if name.trim().is_empty() {
                errors.push(ValidationError::EmptyCityName { index: i });
            } else if !seen.insert(name.as_str()) {
                errors.push(ValidationError::DuplicateCity { name: name.clone() });
            }
        }
        // First occurrence wins for duplicated names.
        let index: HashMap<&str, usize> =
            raw.cities.iter().enumerate().rev().map(|(i, n)| (n.as_str(), i)).collect();
        let lookup = |name: &str, context: String, errors: &mut Vec<ValidationError>| {
            let id = index.get(name).copied();
            if id.is_none() {
                errors.push(ValidationError::DanglingCityReference { context, name: name.to_string() });
            }
            id
        };

        if raw.routes.len() > EdgeSet::CAPACITY {
            errors.push(ValidationError::TooManyEdges { count: raw.routes.len(), max: EdgeSet::CAPACITY });
        }

        let mut edges = Vec::with_capacity(raw.routes.len());
        let mut pair_to_route: HashMap<(usize, usize), usize> = HashMap::new();
        for (r, route) in raw.routes.iter().enumerate() {
            let ctx = || format!("route #{r}");
            let a = lookup(&route.a, ctx(), &mut errors);
            let b = lookup(&route.b, ctx(), &mut errors);
            for (field, value) in [("length", route.length), ("points", route.points)] {
                if value <= 0 {
                    errors.push(ValidationError::NonpositiveWeight { context: ctx(), field, value });
                }
            }
            let (Some(a), Some(b)) = (a, b) else { continue };
            if a == b {
                errors.push(ValidationError::SelfLoop { route: r, city: route.a.clone() });
                continue;
            }
            let key = (a.min(b), a.max(b));
            if let Some(&first) = pair_to_route.get(&key) {
                errors.push(ValidationError::DuplicateEdge {
                    route: r,
                    first,
                    a: raw.cities[key.0].clone(),
                    b: raw.cities[key.1].clone(),
                });
                continue;
            }
            pair_to_route.insert(key, r);
            edges.push(Edge { id: edges.len(), a: key.0, b: key.1, length: route.length, points: route.points });
        }

        let n = raw.cities.len();
        let mut dsu = DisjointSets::new(n);
        for e in &edges {
            dsu.union(e.a, e.b);
        }

        let mut tickets = Vec::with_capacity(raw.tickets.len());
        let mut ticket_pairs: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, ticket) in raw.tickets.iter().enumerate() {
            let ctx = || format!("ticket #{t}");
            let a = lookup(&ticket.a, ctx(), &mut errors);
            let b = lookup(&ticket.b, ctx(), &mut errors);
            if ticket.points <= 0 {
                errors.push(ValidationError::NonpositiveWeight { context: ctx(), field: "points", value: ticket.points });
            }
            let (Some(a), Some(b)) = (a, b) else { continue };
            if a == b {
                errors.push(ValidationError::TicketSelfPair { ticket: t, city: ticket.a.clone() });
                continue;
            }
            let key = (a.min(b), a.max(b));
            let names = || (raw.cities[key.0].clone(), raw.cities[key.1].clone());
            if let Some(&first) = ticket_pairs.get(&key) {
                let (a, b) = names();
                errors.push(ValidationError::DuplicateTicket { ticket: t, first, a, b });
                continue;
            }
            ticket_pairs.insert(key, t);
            if pair_to_route.contains_key(&key) {
                let (a, b) = names();
                errors.push(ValidationError::TicketEqualsEdge { ticket: t, a, b });
            }
            if !dsu.connected(key.0, key.1) {
                let (a, b) = names();
                errors.push(ValidationError::TicketEndpointsDisconnected { ticket: t, a, b });
            }
            tickets.push(Ticket { id: tickets.len(), source: key.0, target: key.1, value: ticket.points });
        }

        if n > 0 {
            // Later copies of a duplicated name are never referenced.
            let mut roots: Vec<usize> = index.values().map(|&c| dsu.find(c)).collect();
            roots.sort_unstable();
            roots.dedup();
            let components = roots.len();
            if components > 1 {
                errors.push(ValidationError::DisconnectedGraph { components });
            }
        }

        if !errors.is_empty() {
            return Err(errors);
        }

        let mut adjacency = vec![Vec::new(); n];
        for e in &edges {
            adjacency[e.a].push(e.id);
            adjacency[e.b].push(e.id);
        }
        let cities = raw.cities.iter().enumerate().map(|(id, name)| City { id, name: name.clone() }).collect();
        Ok(Board { name: raw.name.clone(), cities, edges, tickets, adjacency })
    }

    /// Inverse of [`Board::validate`]; feeding the result back validates cleanly.
    pub fn to_raw(&self) -> RawBoard {
        let name = |c: usize| self.cities[c].name.clone();
        RawBoard {
            name: self.name.clone(),
            cities: self.cities.iter().map(|c| c.name.clone()).collect(),
            routes: self
                .edges
                .iter()
                .map(|e| RawRoute { a: name(e.a), b: name(e.b), length: e.length, points: e.points })
                .collect(),
            tickets: self
                .tickets
                .iter()
                .map(|t| RawTicket { a: name(t.source), b: name(t.target), points: t.value })
                .collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cities(&self) -> &[City] {
        &self.cities
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tickets(&self) -> &[Ticket] {
        &self.tickets
    }

    pub fn city_count(&self) -> usize {
        self.cities.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ticket_count(&self) -> usize {
        self.tickets.len()
    }

    pub fn incident_edges(&self, city: usize) -> &[usize] {
        &self.adjacency[city]
    }

    pub fn city_name(&self, city: usize) -> &str {
        &self.cities[city].name
    }

    /// Case-insensitive lookup.
    pub fn city_by_name(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        self.cities.iter().position(|c| c.name.eq_ignore_ascii_case(name))
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.adjacency.get(lo)?.iter().copied().find(|&e| self.edges[e].b == hi && self.edges[e].a == lo)
    }

    pub fn ticket_between(&self, a: usize, b: usize) -> Option<usize> {
        let (lo, hi) = (a.min(b), a.max(b));
        self.tickets.iter().position(|t| t.source == lo && t.target == hi)
    }

    /// Parses a `"CityA|CityB"` selector, ignoring case and order.
    pub fn parse_pair(&self, selector: &str) -> Option<(usize, usize)> {
        let (a, b) = selector.split_once('|')?;
        Some((self.city_by_name(a)?, self.city_by_name(b)?))
    }

    pub fn edge_label(&self, edge: usize) -> String {
        let e = &self.edges[edge];
        format!("{} to {}", self.city_name(e.a), self.city_name(e.b))
    }

    pub fn ticket_label(&self, ticket: usize) -> String {
        let t = &self.tickets[ticket];
        format!("{} to {}", self.city_name(t.source), self.city_name(t.target))
    }

    pub fn subset(&self, members: EdgeSet) -> EdgeSubset<'_> {
        EdgeSubset::new(self, members)
    }

    pub fn empty_subset(&self) -> EdgeSubset<'_> {
        EdgeSubset::new(self, EdgeSet::new())
    }

    /// Union-find over the cities joined by `members`.
    pub fn components(&self, members: &EdgeSet) -> DisjointSets {
        let mut dsu = DisjointSets::new(self.cities.len());
        for e in members.iter() {
            let edge = &self.edges[e];
            dsu.union(edge.a, edge.b);
        }
        dsu
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub edge_points: i64,
    pub ticket_points: i64,
    pub total: i64,
}

impl ScoreBreakdown {
    pub fn new(edge_points: i64, ticket_points: i64) -> Self {
        ScoreBreakdown { edge_points, ticket_points, total: edge_points + ticket_points }
    }
}

impl fmt::Display for ScoreBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (routes {}, tickets {})", self.total, self.edge_points, self.ticket_points)
    }
}

/// A candidate route selection on a board.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeSubset<'b> {
    board: &'b Board,
    members: EdgeSet,
}

impl<'b> EdgeSubset<'b> {
    /// Ids at or beyond the board's edge count are dropped.
    pub fn new(board: &'b Board, members: EdgeSet) -> Self {
        EdgeSubset { board, members: members.intersection(&EdgeSet::full(board.edge_count())) }
    }

    pub fn from_ids(board: &'b Board, ids: impl IntoIterator<Item = usize>) -> Self {
        Self::new(board, EdgeSet::from_ids(ids))
    }

    pub fn board(&self) -> &'b Board {
        self.board
    }

    pub fn members(&self) -> EdgeSet {
        self.members
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.members.contains(edge)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn total_length(&self) -> i64 {
        self.members.iter().map(|e| self.board.edges[e].length).sum()
    }

    pub fn edge_points(&self) -> i64 {
        self.members.iter().map(|e| self.board.edges[e].points).sum()
    }

    /// Tickets whose cities are joined by the selected routes.
    pub fn completed_tickets(&self) -> Vec<usize> {
        let mut dsu = self.board.components(&self.members);
        self.board.tickets.iter().filter(|t| dsu.connected(t.source, t.target)).map(|t| t.id).collect()
    }

    pub fn score(&self) -> ScoreBreakdown {
        let tickets: i64 = self.completed_tickets().iter().map(|&k| self.board.tickets[k].value).sum();
        ScoreBreakdown::new(self.edge_points(), tickets)
    }
}

/// Validation problems found in a board that was already accepted; always
/// empty for boards built through [`Board::validate`].
pub fn revalidate(board: &Board) -> Vec<ValidationError> {
    match Board::validate(&board.to_raw()) {
        Ok(_) => Vec::new(),
        Err(errors) => errors,
    }
}
