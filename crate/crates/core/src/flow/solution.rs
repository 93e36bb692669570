use std::collections::VecDeque;

use thiserror::Error;

use crate::board::Board;
use crate::edgeset::EdgeSet;

use super::model::{FlowModel, Sense, VarKind};

/// Slack allowed on bounds, rows, integrality and the dummy-arc readout.
pub const READOUT_TOLERANCE: f64 = 1e-6;

/// Values for every model variable: `x_values[e]` and `y_values[k][arc]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSolution {
    pub x_values: Vec<f64>,
    pub y_values: Vec<Vec<f64>>,
}

impl ModelSolution {
    pub fn zeros(model: &FlowModel) -> Self {
        ModelSolution {
            x_values: vec![0.0; model.edge_count],
            y_values: vec![vec![0.0; model.arcs_per_ticket]; model.ticket_count],
        }
    }

    fn value(&self, model: &FlowModel, var: usize) -> f64 {
        if var < model.edge_count {
            self.x_values[var]
        } else {
            let rest = var - model.edge_count;
            self.y_values[rest / model.arcs_per_ticket][rest % model.arcs_per_ticket]
        }
    }

    pub fn objective(&self, model: &FlowModel) -> f64 {
        model.objective.iter().map(|&(v, c)| c as f64 * self.value(model, v)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ExtractError {
    #[error("solution has wrong shape for this model")]
    ShapeMismatch,
    #[error("variable {name} = {value} violates its domain")]
    InfeasibleVariable { name: String, value: f64 },
    #[error("constraint {name} violated by {violation}")]
    InfeasibleSolution { name: String, violation: f64 },
    #[error("dummy-arc readout {readout:?} disagrees with connectivity {connected:?}")]
    ReadoutMismatch { readout: Vec<usize>, connected: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub edges: EdgeSet,
    pub tickets: Vec<usize>,
    pub total: i64,
}

/// Maps a feasible model solution back to a route selection.
///
/// The selection is `{e : x_e = 1}` and the completed tickets are those with
/// unit flow on their dummy arc. That readout must agree with union-find
/// connectivity of the selection, otherwise the solution (or the model) is
/// inconsistent and [`ExtractError::ReadoutMismatch`] is returned.
pub fn extract_solution(board: &Board, model: &FlowModel, solution: &ModelSolution) -> Result<Extraction, ExtractError> {
    if solution.x_values.len() != model.edge_count
        || solution.y_values.len() != model.ticket_count
        || solution.y_values.iter().any(|y| y.len() != model.arcs_per_ticket)
    {
        return Err(ExtractError::ShapeMismatch);
    }
    for (var, info) in model.variables.iter().enumerate() {
        let value = solution.value(model, var);
        let in_range = value >= -READOUT_TOLERANCE && value <= info.upper + READOUT_TOLERANCE;
        let integral = info.kind == VarKind::Continuous || (value - value.round()).abs() <= READOUT_TOLERANCE;
        if !in_range || !integral || !value.is_finite() {
            return Err(ExtractError::InfeasibleVariable { name: info.name.clone(), value });
        }
    }
    for row in &model.constraints {
        let lhs: f64 = row.terms.iter().map(|&(v, c)| c as f64 * solution.value(model, v)).sum();
        let violation = match row.sense {
            Sense::LessEqual => lhs - row.rhs as f64,
            Sense::Equal => (lhs - row.rhs as f64).abs(),
        };
        if violation > READOUT_TOLERANCE {
            return Err(ExtractError::InfeasibleSolution { name: row.name.clone(), violation });
        }
    }

    let edges: EdgeSet = (0..model.edge_count).filter(|&e| solution.x_values[e] > 0.5).collect();
    let readout: Vec<usize> = (0..model.ticket_count)
        .filter(|&k| (solution.y_values[k][model.arcs_per_ticket - 1] - 1.0).abs() <= READOUT_TOLERANCE)
        .collect();
    let subset = board.subset(edges);
    let connected = subset.completed_tickets();
    if readout != connected {
        return Err(ExtractError::ReadoutMismatch { readout, connected });
    }
    Ok(Extraction { edges, tickets: readout, total: subset.score().total })
}

/// A feasible solution for `selected`: unit flow along a shortest-hop path
/// plus the dummy arc for every ticket the selection completes.
pub fn route_flows(board: &Board, model: &FlowModel, selected: &EdgeSet) -> ModelSolution {
    let mut solution = ModelSolution::zeros(model);
    for e in selected.iter() {
        solution.x_values[e] = 1.0;
    }
    for (k, ticket) in board.tickets().iter().enumerate() {
        let Some(path) = hop_path(board, selected, ticket.source, ticket.target) else { continue };
        let graph = &model.graphs[k];
        let mut at = ticket.source;
        for e in path {
            solution.y_values[k][graph.arc_from(e, at)] = 1.0;
            at = board.edges()[e].other(at);
        }
        solution.y_values[k][graph.dummy_index()] = 1.0;
    }
    solution
}

fn hop_path(board: &Board, selected: &EdgeSet, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut via: Vec<Option<usize>> = vec![None; board.city_count()];
    let mut seen = vec![false; board.city_count()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut at = to;
            while let Some(e) = via[at] {
                path.push(e);
                at = board.edges()[e].other(at);
            }
            path.reverse();
            return Some(path);
        }
        for &e in board.incident_edges(v) {
            let w = board.edges()[e].other(v);
            if selected.contains(e) && !seen[w] {
                seen[w] = true;
                via[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{build_model, ModelOptions};

    fn line() -> Board {
        Board::from_json(
            r#"{"name":"line","cities":["a","b","c"],
            "routes":[{"a":"a","b":"b","length":1,"points":1},{"a":"b","b":"c","length":2,"points":2}],
            "tickets":[{"a":"a","b":"c","points":5}]}"#,
        )
        .unwrap()
    }

    #[test]
    fn zeros_extract_to_nothing() {
        let b = line();
        let m = build_model(&b, 3, ModelOptions::default());
        let e = extract_solution(&b, &m, &ModelSolution::zeros(&m)).unwrap();
        assert_eq!(e, Extraction { edges: EdgeSet::new(), tickets: vec![], total: 0 });
    }

    #[test]
    fn routed_flows_extract_to_the_selection() {
        let b = line();
        let m = build_model(&b, 3, ModelOptions::default());
        let all = EdgeSet::from_ids([0, 1]);
        let sol = route_flows(&b, &m, &all);
        assert_eq!(sol.objective(&m), 8.0);
        assert_eq!(extract_solution(&b, &m, &sol).unwrap(), Extraction { edges: all, tickets: vec![0], total: 8 });
    }

    #[test]
    fn violations_are_reported() {
        let b = line();
        let m = build_model(&b, 2, ModelOptions::default());
        let over = route_flows(&b, &m, &EdgeSet::from_ids([0, 1]));
        assert!(matches!(extract_solution(&b, &m, &over), Err(ExtractError::InfeasibleSolution { name, .. }) if name == "budget"));

        let mut leak = ModelSolution::zeros(&m);
        leak.y_values[0][4] = 1.0;
        assert!(matches!(extract_solution(&b, &m, &leak), Err(ExtractError::InfeasibleSolution { .. })));

        let mut half = ModelSolution::zeros(&m);
        half.x_values[0] = 0.5;
        assert!(matches!(extract_solution(&b, &m, &half), Err(ExtractError::InfeasibleVariable { .. })));

        let mut short = ModelSolution::zeros(&m);
        short.y_values.clear();
        assert_eq!(extract_solution(&b, &m, &short), Err(ExtractError::ShapeMismatch));
    }

    #[test]
    fn fractional_dummy_flow_does_not_count() {
        let b = line();
        let m = build_model(&b, 3, ModelOptions::default());
        let mut sol = route_flows(&b, &m, &EdgeSet::from_ids([0, 1]));
        for y in sol.y_values[0].iter_mut() {
            *y *= 0.5;
        }
        assert_eq!(
            extract_solution(&b, &m, &sol),
            Err(ExtractError::ReadoutMismatch { readout: vec![], connected: vec![0] })
        );
    }
}
