use crate::board::Board;
use crate::edgeset::EdgeSet;
use crate::par;

use super::instance::Instance;
use super::{result_from, Optimum, SolveError, SolveResult, SolveStats};

/// Largest board [`brute_force`] will enumerate.
pub const BRUTE_FORCE_MAX_EDGES: usize = 24;

/// Exhaustive optimum over all `2^|E|` selections, with the same tie-break as
/// [`super::solve`]. Independent of the search code.
pub fn brute_force(board: &Board, budget: i64) -> Result<SolveResult, SolveError> {
    if budget < 0 {
        return Err(SolveError::NegativeBudget(budget));
    }
    let inst = Instance::new(board, budget);
    let opt = brute_force_instance(&inst)?;
    Ok(result_from(&inst, &opt))
}

pub fn brute_force_instance(inst: &Instance<'_>) -> Result<Optimum, SolveError> {
    let m = inst.edge_count();
    if m > BRUTE_FORCE_MAX_EDGES {
        return Err(SolveError::InstanceTooLarge { edges: m, max: BRUTE_FORCE_MAX_EDGES });
    }
    let started = std::time::Instant::now();
    let total = 1u64 << m;
    let chunk = 1u64 << m.min(12);
    let chunks: Vec<u64> = (0..total.div_ceil(chunk)).collect();
    let best = par::map(chunks, |c| {
        let mut best: Option<(i64, EdgeSet)> = None;
        for mask in c * chunk..((c + 1) * chunk).min(total) {
            let set: EdgeSet = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
            if !inst.is_feasible(&set) {
                continue;
            }
            let value = inst.evaluate(&set);
            if best.is_none_or(|(v, s)| value > v || (value == v && set < s)) {
                best = Some((value, set));
            }
        }
        best
    })
    .into_iter()
    .flatten()
    .reduce(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let (value, edges) = best.ok_or(SolveError::BudgetInfeasibleForcedSet {
        needed: inst.selection_cost(&inst.fixed_in),
        budget: inst.budget,
    })?;
    let stats = SolveStats {
        nodes: total,
        millis: started.elapsed().as_millis() as u64,
        proven_optimal: true,
        canonical: true,
    };
    Ok(Optimum { value, edges, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{RawBoard, RawRoute, RawTicket};

    fn triangle() -> Board {
        let route = |a: &str, b: &str, length, points| RawRoute { a: a.into(), b: b.into(), length, points };
        Board::validate(&RawBoard {
            name: "triangle".into(),
            cities: vec!["A".into(), "B".into(), "C".into(), "D".into()],
            routes: vec![route("A", "B", 2, 2), route("B", "C", 2, 2), route("A", "D", 3, 4)],
            tickets: vec![RawTicket { a: "A".into(), b: "C".into(), points: 5 }],
        })
        .unwrap()
    }

    #[test]
    fn small_board_by_hand() {
        let board = triangle();
        let values: Vec<i64> = (0..=7).map(|b| brute_force(&board, b).unwrap().breakdown.total).collect();
        // 3 cars: A-D alone (4). 4: A-B-C with the ticket (9). 7: everything.
        assert_eq!(values, vec![0, 0, 2, 4, 9, 9, 9, 13]);
        // At 2 cars A-B and B-C tie; the set without route 0 sorts first.
        assert_eq!(brute_force(&board, 2).unwrap().edges, vec![1]);
    }

    #[test]
    fn limits_and_errors() {
        let board = triangle();
        assert!(matches!(brute_force(&board, -1), Err(SolveError::NegativeBudget(-1))));
        let inst = Instance::new(&board, 1).with_fixed([2].into_iter().collect(), EdgeSet::new());
        assert!(matches!(brute_force_instance(&inst), Err(SolveError::BudgetInfeasibleForcedSet { .. })));
    }
}
