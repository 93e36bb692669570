//! Random toy boards shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use railmax_core::{Board, RawBoard};
use railmax_core::board::{RawRoute, RawTicket};

/// Points a route of each length scores.
pub const POINTS: [i64; 7] = [0, 1, 2, 4, 7, 10, 15];

/// A connected board with `cities` cities, up to `edges` routes and up to
/// `tickets` tickets; retries until the result validates.
pub fn random_board<R: Rng>(rng: &mut R, cities: usize, edges: usize, tickets: usize) -> Board {
    loop {
        if let Ok(board) = Board::validate(&random_raw(rng, cities, edges, tickets)) {
            return board;
        }
    }
}

pub fn random_raw<R: Rng>(rng: &mut R, cities: usize, edges: usize, tickets: usize) -> RawBoard {
    let names: Vec<String> = (0..cities).map(|i| format!("C{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut order: Vec<usize> = (0..cities).collect();
    order.shuffle(rng);
    for i in 1..cities {
        let j = rng.gen_range(0..i);
        pairs.push((order[i].min(order[j]), order[i].max(order[j])));
    }
    let mut tries = 0;
    while pairs.len() < edges && tries < 200 {
        tries += 1;
        let a = rng.gen_range(0..cities);
        let b = rng.gen_range(0..cities);
        let p = (a.min(b), a.max(b));
        if a != b && !pairs.contains(&p) {
            pairs.push(p);
        }
    }
    pairs.shuffle(rng);
    let routes = pairs
        .iter()
        .map(|&(a, b)| {
            let length = rng.gen_range(1..=6);
            RawRoute { a: names[a].clone(), b: names[b].clone(), length, points: POINTS[length as usize] }
        })
        .collect();
    let mut ticket_pairs: Vec<(usize, usize)> = Vec::new();
    let mut tries = 0;
    while ticket_pairs.len() < tickets && tries < 200 {
        tries += 1;
        let a = rng.gen_range(0..cities);
        let b = rng.gen_range(0..cities);
        let p = (a.min(b), a.max(b));
        if a != b && !pairs.contains(&p) && !ticket_pairs.contains(&p) {
            ticket_pairs.push(p);
        }
    }
    let tickets = ticket_pairs
        .iter()
        .map(|&(a, b)| RawTicket { a: names[a].clone(), b: names[b].clone(), points: rng.gen_range(2..=22) })
        .collect();
    RawBoard { name: "toy".into(), cities: names, routes, tickets }
}

pub fn usa() -> Board {
    Board::load(concat!(env!("CARGO_MANIFEST_DIR"), "/../../boards/usa.json")).expect("bundled USA board loads")
}

pub fn toy9() -> Board {
    Board::load(concat!(env!("CARGO_MANIFEST_DIR"), "/../../boards/toy9.json")).expect("bundled toy board loads")
}

/// Routes of the published 45-car optimum with their lengths.
pub const PUBLISHED_ROUTES: [(&str, &str, i64); 18] = [
    ("Vancouver", "Seattle", 1),
    ("Seattle", "Portland", 1),
    ("Portland", "San Francisco", 5),
    ("San Francisco", "Los Angeles", 3),
    ("Los Angeles", "Phoenix", 3),
    ("Phoenix", "Santa Fe", 3),
    ("Santa Fe", "Denver", 2),
    ("Denver", "Kansas City", 4),
    ("Kansas City", "Saint Louis", 2),
    ("Saint Louis", "Nashville", 2),
    ("Nashville", "Atlanta", 1),
    ("Atlanta", "Miami", 5),
    ("Saint Louis", "Chicago", 2),
    ("Chicago", "Pittsburgh", 3),
    ("Pittsburgh", "Toronto", 2),
    ("Pittsburgh", "New York", 2),
    ("New York", "Boston", 2),
    ("Boston", "Montreal", 2),
];

/// Tickets of the published 45-car optimum: (a, b, points, removal impact).
pub const PUBLISHED_IMPACTS: [(&str, &str, i64, i64); 16] = [
    ("Atlanta", "New York", 6, 0),
    ("Atlanta", "Montreal", 9, -9),
    ("Los Angeles", "Seattle", 9, -9),
    ("Chicago", "Santa Fe", 9, -9),
    ("Miami", "Toronto", 10, -1),
    ("Phoenix", "Portland", 11, -5),
    ("Denver", "Pittsburgh", 11, 0),
    ("Boston", "Miami", 12, -1),
    ("Santa Fe", "Vancouver", 13, -13),
    ("Chicago", "Los Angeles", 16, -15),
    ("Atlanta", "San Francisco", 17, -13),
    ("Nashville", "Portland", 17, 0),
    ("Los Angeles", "Miami", 20, -1),
    ("Montreal", "Vancouver", 20, -20),
    ("Los Angeles", "New York", 21, -21),
    ("New York", "Seattle", 22, -1),
];

pub fn edge_named(board: &Board, a: &str, b: &str) -> usize {
    let (a, b) = (board.city_by_name(a).expect("city"), board.city_by_name(b).expect("city"));
    board.edge_between(a, b).expect("route exists")
}

pub fn ticket_named(board: &Board, a: &str, b: &str) -> usize {
    let (a, b) = (board.city_by_name(a).expect("city"), board.city_by_name(b).expect("city"));
    board.ticket_between(a, b).expect("ticket exists")
}

pub fn published_routes(board: &Board) -> railmax_core::EdgeSet {
    PUBLISHED_ROUTES.iter().map(|&(a, b, _)| edge_named(board, a, b)).collect()
}

/// Independent connectivity check by breadth-first search over `members`.
pub fn bfs_connected(board: &Board, members: &railmax_core::EdgeSet, from: usize, to: usize) -> bool {
    let mut seen = vec![false; board.city_count()];
    let mut queue = std::collections::VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for e in board.edges() {
            if members.contains(e.id) && (e.a == v || e.b == v) {
                let w = if e.a == v { e.b } else { e.a };
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    false
}
