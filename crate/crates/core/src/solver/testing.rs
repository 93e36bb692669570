//! Random toy boards for the solver's unit tests.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::board::{Board, RawBoard, RawRoute, RawTicket};
use crate::edgeset::EdgeSet;

use super::instance::Instance;

pub(crate) fn random_board<R: Rng>(rng: &mut R, cities: usize, edges: usize, tickets: usize) -> Board {
    loop {
        let names: Vec<String> = (0..cities).map(|i| format!("c{i}")).collect();
        let mut pairs: Vec<(usize, usize)> = (1..cities).map(|i| (rng.gen_range(0..i), i)).collect();
        for _ in 0..100 {
            if pairs.len() >= edges {
                break;
            }
            let (a, b) = (rng.gen_range(0..cities), rng.gen_range(0..cities));
            if a != b && !pairs.contains(&(a.min(b), a.max(b))) {
                pairs.push((a.min(b), a.max(b)));
            }
        }
        pairs.shuffle(rng);
        let routes = pairs
            .iter()
            .map(|&(a, b)| {
                let length = rng.gen_range(1..=5);
                RawRoute { a: names[a].clone(), b: names[b].clone(), length, points: rng.gen_range(1..=8) }
            })
            .collect();
        let mut ticket_pairs = Vec::new();
        for _ in 0..100 {
            if ticket_pairs.len() >= tickets {
                break;
            }
            let (a, b) = (rng.gen_range(0..cities), rng.gen_range(0..cities));
            let p = (a.min(b), a.max(b));
            if a != b && !pairs.contains(&p) && !ticket_pairs.contains(&p) {
                ticket_pairs.push(p);
            }
        }
        let tickets = ticket_pairs
            .iter()
            .map(|&(a, b)| RawTicket { a: names[a].clone(), b: names[b].clone(), points: rng.gen_range(1..=20) })
            .collect();
        if let Ok(board) = Board::validate(&RawBoard { name: "t".into(), cities: names, routes, tickets }) {
            return board;
        }
    }
}

/// Every selection allowed by the instance's fixed sets and budget.
pub(crate) fn feasible_sets(inst: &Instance<'_>) -> Vec<EdgeSet> {
    let m = inst.edge_count();
    (0u32..1 << m)
        .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect::<EdgeSet>())
        .filter(|s| inst.is_feasible(s))
        .collect()
}
