//! `railmax`: solves, budget sweeps, removal sensitivity, frequency reports,
//! LP export and the HTTP service.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use railmax_core::analysis::{self, FREQUENCY_CAVEAT};
use railmax_core::flow::{build_model, emit_lp, LinkingMode, ModelOptions};
use railmax_core::{solve, Board, SolveOptions};
use railmax_service::{ServiceConfig, SolveReport};
use serde::Serialize;

const DEFAULT_BOARD: &str = "boards/usa.json";

#[derive(Parser)]
#[command(name = "railmax", version, about = "Exact route selection under a train-car budget")]
struct Cli {
    /// Board file (JSON). A positional board after the subcommand wins.
    #[arg(long, global = true, env = "RAILMAX_BOARD")]
    board: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seconds per solve before returning the incumbent.
    #[arg(long, global = true, value_name = "SECS")]
    time_limit: Option<f64>,
    /// Search nodes per solve before returning the incumbent.
    #[arg(long, global = true, value_name = "N")]
    node_limit: Option<u64>,
    /// Worker threads for sweeps and sensitivity (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Best routes for one budget.
    Solve(SolveArgs),
    /// Optimum for every budget in a range, as CSV.
    Sweep(SweepArgs),
    /// Score lost when each ticket of the optimum is removed.
    Sensitivity(SensitivityArgs),
    /// How often tickets and routes appear in the optima of a range.
    Frequency(FrequencyArgs),
    /// Write the flow model as an LP file.
    EmitLp(EmitLpArgs),
    /// Run the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args)]
struct BoardArg {
    /// Board file; overrides --board.
    #[arg(value_name = "BOARD")]
    path: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    board: BoardArg,
    /// Train cars available.
    #[arg(long, allow_hyphen_values = true)]
    budget: i64,
    /// Ticket to score as worthless, as "CityA|CityB" or an id. Repeatable.
    #[arg(long, value_name = "SEL")]
    remove_ticket: Vec<String>,
    /// Route that must be chosen. Repeatable.
    #[arg(long, value_name = "SEL")]
    force_edge: Vec<String>,
    /// Route that may not be chosen. Repeatable.
    #[arg(long, value_name = "SEL")]
    ban_edge: Vec<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    board: BoardArg,
    /// First budget.
    #[arg(long, default_value_t = 1)]
    from: i64,
    /// Last budget, inclusive.
    #[arg(long, default_value_t = 50)]
    to: i64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SensitivityArgs {
    #[command(flatten)]
    board: BoardArg,
    /// Train cars available.
    #[arg(long, allow_hyphen_values = true)]
    budget: i64,
    /// Print CSV instead of text.
    #[arg(long, conflicts_with = "json")]
    csv: bool,
}

#[derive(Args)]
struct FrequencyArgs {
    #[command(flatten)]
    board: BoardArg,
    /// First budget.
    #[arg(long, default_value_t = 1)]
    from: i64,
    /// Last budget, inclusive.
    #[arg(long, default_value_t = 50)]
    to: i64,
    /// Length of the printed top lists.
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Also write the underlying sweep as CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmitLpArgs {
    #[command(flatten)]
    board: BoardArg,
    /// Train cars available.
    #[arg(long, allow_hyphen_values = true)]
    budget: i64,
    /// One linking row per (ticket, route) instead of one per route.
    #[arg(long)]
    strict_linking: bool,
    /// LP destination; stdout when absent (counts then go to stderr).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ServeArgs {
    #[command(flatten)]
    board: BoardArg,
    /// Overrides RAILMAX_PORT.
    #[arg(long)]
    port: Option<u16>,
    /// Built web UI to serve under `/`; overrides RAILMAX_UI_DIR.
    #[arg(long)]
    ui_dir: Option<PathBuf>,
}

/// Whether every solve behind a command finished its proof.
enum Outcome {
    Proven,
    Limited,
}

fn main() -> ExitCode {
    // Usage errors exit 1 like other input errors; clap's own code 2 would
    // read as "limit reached".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(Outcome::Proven) => ExitCode::SUCCESS,
        Ok(Outcome::Limited) => {
            eprintln!("warning: a search limit stopped the proof; results are the best found, not proven optimal");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Sensitivity(args) => cmd_sensitivity(cli, args),
        Command::Frequency(args) => cmd_frequency(cli, args),
        Command::EmitLp(args) => cmd_emit_lp(cli, args),
        Command::Serve(args) => cmd_serve(cli, args),
    }
}

impl Cli {
    fn load_board(&self, arg: &BoardArg) -> Result<Board> {
        let path = arg.path.as_deref().or(self.board.as_deref()).unwrap_or(Path::new(DEFAULT_BOARD));
        Board::load(path).with_context(|| format!("loading board {}", path.display()))
    }

    fn options(&self) -> Result<SolveOptions> {
        let mut options = SolveOptions::default();
        if let Some(n) = self.node_limit {
            options.node_limit = n;
        }
        if let Some(secs) = self.time_limit {
            options.time_limit = Duration::try_from_secs_f64(secs).map_err(|_| anyhow!("bad --time-limit {secs}"))?;
        }
        Ok(options)
    }
}

fn outcome(proven: bool) -> Outcome {
    if proven {
        Outcome::Proven
    } else {
        Outcome::Limited
    }
}

fn check_range(from: i64, to: i64) -> Result<()> {
    if from < 0 || from > to {
        bail!("need 0 <= --from <= --to, got {from}..{to}");
    }
    Ok(())
}

/// Parses `"CityA|CityB"` (any case, either order) or a numeric id.
fn select(board: &Board, selector: &str, what: &str, count: usize, find: impl Fn(usize, usize) -> Option<usize>) -> Result<usize> {
    if let Ok(id) = selector.trim().parse::<usize>() {
        if id < count {
            return Ok(id);
        }
        bail!("{what} id {id} out of range (board has {count})");
    }
    let (a, b) = board
        .parse_pair(selector)
        .ok_or_else(|| anyhow!("{what} {selector:?}: expected \"CityA|CityB\" with known cities"))?;
    find(a, b).ok_or_else(|| anyhow!("no {what} between {} and {}", board.city_name(a), board.city_name(b)))
}

fn select_edges(board: &Board, selectors: &[String]) -> Result<Vec<usize>> {
    selectors.iter().map(|s| select(board, s, "route", board.edge_count(), |a, b| board.edge_between(a, b))).collect()
}

fn select_tickets(board: &Board, selectors: &[String]) -> Result<Vec<usize>> {
    selectors.iter().map(|s| select(board, s, "ticket", board.ticket_count(), |a, b| board.ticket_between(a, b))).collect()
}

fn print_json(value: &impl Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_solve(cli: &Cli, args: &SolveArgs) -> Result<Outcome> {
    let board = cli.load_board(&args.board)?;
    let options = SolveOptions {
        removed_tickets: select_tickets(&board, &args.remove_ticket)?,
        forced_in: select_edges(&board, &args.force_edge)?,
        forced_out: select_edges(&board, &args.ban_edge)?,
        ..cli.options()?
    };
    let result = solve(&board, args.budget, &options)?;
    let report = SolveReport::new(&board, args.budget, &result);
    if cli.json {
        print_json(&report)?;
    } else {
        let mut out = io::stdout().lock();
        writeln!(
            out,
            "Budget {}: total {} (route points {}, ticket points {})",
            report.budget, report.total, report.edge_points, report.ticket_points
        )?;
        writeln!(out, "\nRoutes: {} using {} cars", report.edges.len(), report.length)?;
        for &e in &report.edges {
            let edge = &board.edges()[e];
            writeln!(out, "  {:<36} length {}  points {:>2}", board.edge_label(e), edge.length, edge.points)?;
        }
        writeln!(out, "\nTickets completed: {}", report.tickets.len())?;
        for &k in &report.tickets {
            writeln!(out, "  {:<36} value {:>2}", board.ticket_label(k), board.tickets()[k].value)?;
        }
        writeln!(
            out,
            "\nSearch: {} nodes, {} ms, {}{}",
            report.nodes,
            report.millis,
            if report.proven_optimal { "proven optimal" } else { "NOT proven optimal" },
            if report.canonical { ", canonical tie-break" } else { "" }
        )?;
    }
    Ok(outcome(report.proven_optimal))
}

fn write_rows_csv(rows: &[analysis::SweepRow], path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    analysis::write_sweep_csv(rows, BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<Outcome> {
    check_range(args.from, args.to)?;
    let board = cli.load_board(&args.board)?;
    let rows = analysis::sweep(&board, args.from, args.to, &cli.options()?, cli.jobs)?;
    if cli.json {
        print_json(&rows)?;
    }
    match &args.out {
        Some(path) => {
            write_rows_csv(&rows, path)?;
            if !cli.json {
                println!("wrote {} rows to {}", rows.len(), path.display());
            }
        }
        None if !cli.json => analysis::write_sweep_csv(&rows, io::stdout().lock())?,
        None => {}
    }
    Ok(outcome(rows.iter().all(|r| r.stats.proven_optimal)))
}

#[derive(Serialize)]
struct ImpactLine<'a> {
    ticket: usize,
    name: &'a str,
    points: i64,
    impact: i64,
}

fn cmd_sensitivity(cli: &Cli, args: &SensitivityArgs) -> Result<Outcome> {
    let board = cli.load_board(&args.board)?;
    let options = cli.options()?;
    let base = solve(&board, args.budget, &options)?;
    let rows = analysis::removal_impacts(&board, args.budget, &base.tickets, &options, cli.jobs)?;
    let labels: Vec<String> = rows.iter().map(|r| board.ticket_label(r.ticket)).collect();
    let lines: Vec<ImpactLine> = rows
        .iter()
        .zip(&labels)
        .map(|(r, name)| ImpactLine { ticket: r.ticket, name, points: r.points, impact: r.impact })
        .collect();
    if cli.json {
        print_json(&serde_json::json!({ "budget": args.budget, "total": base.breakdown.total, "rows": lines }))?;
    } else if args.csv {
        let mut w = csv::Writer::from_writer(io::stdout().lock());
        for line in &lines {
            w.serialize(line)?;
        }
        w.flush()?;
    } else {
        println!("Budget {}: optimum {} completing {} tickets", args.budget, base.breakdown.total, lines.len());
        println!("{:<36} {:>6} {:>7}", "ticket", "points", "impact");
        for line in &lines {
            println!("{:<36} {:>6} {:>7}", line.name, line.points, line.impact);
        }
    }
    Ok(outcome(base.stats.proven_optimal))
}

#[derive(Serialize)]
struct Counted<'a> {
    id: usize,
    name: String,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<&'a i64>,
}

fn cmd_frequency(cli: &Cli, args: &FrequencyArgs) -> Result<Outcome> {
    check_range(args.from, args.to)?;
    let board = cli.load_board(&args.board)?;
    let (report, rows) = analysis::frequency(&board, args.from, args.to, &cli.options()?, cli.jobs)?;
    if let Some(path) = &args.out {
        write_rows_csv(&rows, path)?;
    }
    let tickets: Vec<Counted> = report
        .top_tickets(args.top)
        .into_iter()
        .map(|(k, count)| Counted { id: k, name: board.ticket_label(k), count, value: Some(&board.tickets()[k].value) })
        .collect();
    let routes: Vec<Counted> = report
        .top_edges(args.top)
        .into_iter()
        .map(|(e, count)| Counted { id: e, name: board.edge_label(e), count, value: None })
        .collect();
    if cli.json {
        print_json(&serde_json::json!({
            "caveat": FREQUENCY_CAVEAT,
            "report": report,
            "top_tickets": tickets,
            "top_routes": routes,
        }))?;
    } else {
        println!("Note: {FREQUENCY_CAVEAT}\n");
        println!("Budgets {}..={} ({} optima)\n", report.from, report.to, report.budgets());
        println!("Most frequent tickets:");
        for t in &tickets {
            println!("  {:<36} value {:>2}  {:>3} of {}", t.name, t.value.copied().unwrap_or(0), t.count, report.budgets());
        }
        println!("\nMost frequent routes:");
        for r in &routes {
            println!("  {:<36} {:>3} of {}", r.name, r.count, report.budgets());
        }
    }
    Ok(outcome(rows.iter().all(|r| r.stats.proven_optimal)))
}

fn cmd_emit_lp(cli: &Cli, args: &EmitLpArgs) -> Result<Outcome> {
    if args.budget < 0 {
        bail!("budget must be non-negative, got {}", args.budget);
    }
    let board = cli.load_board(&args.board)?;
    let linking = if args.strict_linking { LinkingMode::Strict } else { LinkingMode::Aggregated };
    let model = build_model(&board, args.budget, ModelOptions { linking, ..ModelOptions::default() });
    let counts = model.counts();
    match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            emit_lp(&model, &mut w).and_then(|_| w.flush()).with_context(|| format!("writing {}", path.display()))?;
            println!("{counts}");
        }
        None => {
            let mut out = io::stdout().lock();
            emit_lp(&model, &mut out)?;
            eprintln!("{counts}");
        }
    }
    Ok(Outcome::Proven)
}

fn cmd_serve(cli: &Cli, args: &ServeArgs) -> Result<Outcome> {
    tracing_subscriber::fmt().with_max_level(tracing_subscriber::filter::LevelFilter::INFO).init();
    let board = cli.load_board(&args.board)?;
    let mut config = ServiceConfig::from_env()?;
    if let Some(port) = args.port {
        config.port = port;
    }
    if let Some(dir) = &args.ui_dir {
        config.ui_dir = Some(dir.clone());
    }
    if let Some(secs) = cli.time_limit {
        config.time_limit = Duration::try_from_secs_f64(secs).map_err(|_| anyhow!("bad --time-limit {secs}"))?;
    }
    if let Some(n) = cli.node_limit {
        config.node_limit = n;
    }
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(railmax_service::serve(board, config))?;
    Ok(Outcome::Proven)
}
