use crate::board::Board;

use super::graph::{build_ticket_graph, ArcOrigin, TicketGraph};

/// How the "flow only on chosen routes" rows are written.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LinkingMode {
    /// One row per edge: `sum_k (y_fwd,k + y_bwd,k) <= |K| x_e`.
    #[default]
    Aggregated,
    /// One row per edge and ticket: `y_fwd,k + y_bwd,k <= x_e`.
    Strict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum YDomain {
    /// `0 <= y <= 1`.
    #[default]
    Continuous,
    Binary,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ModelOptions {
    pub linking: LinkingMode,
    pub y_domain: YDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    LessEqual,
    Equal,
}

/// A linear row `sum coef * var (<= | =) rhs` with integer data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelCounts {
    pub binary: usize,
    pub continuous: usize,
    pub constraints: usize,
}

impl std::fmt::Display for ModelCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} binary, {} continuous, {} constraints", self.binary, self.continuous, self.constraints)
    }
}

/// The route-selection MIP: binary `x_e` per edge, flow `y_{a,k}` per arc of
/// each ticket graph, a budget row, linking rows and flow-balance rows.
#[derive(Clone, Debug)]
pub struct FlowModel {
    pub board_name: String,
    pub budget: i64,
    pub options: ModelOptions,
    pub edge_count: usize,
    pub ticket_count: usize,
    pub arcs_per_ticket: usize,
    pub graphs: Vec<TicketGraph>,
    pub variables: Vec<Variable>,
    /// Maximized.
    pub objective: Vec<(usize, i64)>,
    pub constraints: Vec<Constraint>,
}

impl FlowModel {
    pub fn x_var(&self, edge: usize) -> usize {
        edge
    }

    pub fn y_var(&self, ticket: usize, arc: usize) -> usize {
        self.edge_count + ticket * self.arcs_per_ticket + arc
    }

    pub fn dummy_var(&self, ticket: usize) -> usize {
        self.y_var(ticket, self.arcs_per_ticket - 1)
    }

    pub fn counts(&self) -> ModelCounts {
        let binary = self.variables.iter().filter(|v| v.kind == VarKind::Binary).count();
        ModelCounts { binary, continuous: self.variables.len() - binary, constraints: self.constraints.len() }
    }
}

pub fn build_model(board: &Board, budget: i64, options: ModelOptions) -> FlowModel {
    let m = board.edge_count();
    let graphs: Vec<TicketGraph> = (0..board.ticket_count()).map(|k| build_ticket_graph(board, k)).collect();
    let arcs_per_ticket = 2 * m + 1;
    let mut model = FlowModel {
        board_name: board.name().to_string(),
        budget,
        options,
        edge_count: m,
        ticket_count: graphs.len(),
        arcs_per_ticket,
        graphs: Vec::new(),
        variables: Vec::with_capacity(m + graphs.len() * arcs_per_ticket),
        objective: Vec::new(),
        constraints: Vec::new(),
    };

    for e in board.edges() {
        model.variables.push(Variable { name: format!("x_e{}", e.id), kind: VarKind::Binary, upper: 1.0 });
        model.objective.push((e.id, e.points));
    }
    let y_kind = match options.y_domain {
        YDomain::Continuous => VarKind::Continuous,
        YDomain::Binary => VarKind::Binary,
    };
    for g in &graphs {
        for arc in &g.arcs {
            model.variables.push(Variable {
                name: format!("y_k{}_a{}_{}", g.ticket, arc.tail, arc.head),
                kind: y_kind,
                upper: 1.0,
            });
        }
    }
    model.graphs = graphs;
    for k in 0..model.ticket_count {
        let value = board.tickets()[k].value;
        model.objective.push((model.dummy_var(k), value));
    }

    model.constraints.push(Constraint {
        name: "budget".into(),
        terms: board.edges().iter().map(|e| (e.id, e.length)).collect(),
        sense: Sense::LessEqual,
        rhs: budget,
    });

    let k_count = model.ticket_count as i64;
    match options.linking {
        LinkingMode::Aggregated if k_count > 0 => {
            for e in 0..m {
                let mut terms = vec![(model.x_var(e), -k_count)];
                for k in 0..model.ticket_count {
                    terms.push((model.y_var(k, 2 * e), 1));
                    terms.push((model.y_var(k, 2 * e + 1), 1));
                }
                model.constraints.push(Constraint { name: format!("link_e{e}"), terms, sense: Sense::LessEqual, rhs: 0 });
            }
        }
        LinkingMode::Aggregated => {}
        LinkingMode::Strict => {
            for k in 0..model.ticket_count {
                for e in 0..m {
                    let terms = vec![(model.x_var(e), -1), (model.y_var(k, 2 * e), 1), (model.y_var(k, 2 * e + 1), 1)];
                    model.constraints.push(Constraint {
                        name: format!("link_e{e}_k{k}"),
                        terms,
                        sense: Sense::LessEqual,
                        rhs: 0,
                    });
                }
            }
        }
    }

    for k in 0..model.ticket_count {
        // inflow - outflow per city
        let mut per_city: Vec<Vec<(usize, i64)>> = vec![Vec::new(); board.city_count()];
        for (a, arc) in model.graphs[k].arcs.iter().enumerate() {
            let var = model.y_var(k, a);
            per_city[arc.head].push((var, 1));
            per_city[arc.tail].push((var, -1));
        }
        for (city, mut terms) in per_city.into_iter().enumerate() {
            terms.sort_unstable();
            model.constraints.push(Constraint {
                name: format!("bal_k{k}_v{city}"),
                terms,
                sense: Sense::Equal,
                rhs: 0,
            });
        }
    }
    model
}

impl TicketGraph {
    /// Index of the arc of `edge` pointing away from `from`.
    pub fn arc_from(&self, edge: usize, from: usize) -> usize {
        let fwd = 2 * edge;
        if self.arcs[fwd].tail == from {
            fwd
        } else {
            debug_assert!(matches!(self.arcs[fwd + 1].origin, ArcOrigin::Backward(e) if e == edge));
            fwd + 1
        }
    }
}
