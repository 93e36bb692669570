use std::path::PathBuf;
use std::process::{Command, Output};

use railmax_core::analysis::read_sweep_csv;
use railmax_core::{Board, EdgeSet};
use serde_json::Value;

fn board_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../boards").join(name)
}

fn railmax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_railmax"))
        .args(args)
        .env_remove("RAILMAX_BOARD")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn usa() -> String {
    board_path("usa.json").display().to_string()
}

fn toy() -> String {
    board_path("toy9.json").display().to_string()
}

/// Re-scores the printed edge set with the board model, leaving out the
/// value of `removed` tickets.
fn assert_rescores(board: &Board, v: &Value, removed: &[usize]) {
    let edges: EdgeSet = v["edges"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap() as usize).collect();
    let s = board.subset(edges);
    let lost: i64 = s.completed_tickets().iter().filter(|k| removed.contains(k)).map(|&k| board.tickets()[k].value).sum();
    assert_eq!(s.score().total - lost, v["total"].as_i64().unwrap());
    assert_eq!(s.total_length(), v["length"].as_i64().unwrap());
    assert!(s.total_length() <= v["budget"].as_i64().unwrap());
}

fn assert_self_consistent(board: &Board, v: &Value) {
    assert_rescores(board, v, &[]);
}

#[test]
fn solve_45_text_and_json() {
    let out = railmax(&["solve", &usa(), "--budget", "45"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("total 285"), "{text}");
    assert!(text.contains("ticket points 223"));
    assert!(text.contains("Routes: 18 using 45 cars"));
    assert!(text.contains("Portland to San Francisco"));

    let out = railmax(&["solve", "--board", &usa(), "--budget", "45", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["total"].as_i64(), v["ticket_points"].as_i64()), (Some(285), Some(223)));
    assert_self_consistent(&Board::load(usa()).unwrap(), &v);
}

#[test]
fn solve_zero_and_removed_ticket() {
    let out = railmax(&["solve", &usa(), "--budget", "0", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total"].as_i64(), Some(0));

    let out = railmax(&["solve", &usa(), "--budget", "45", "--remove-ticket", "montreal|VANCOUVER", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["total"].as_i64(), Some(265));
    let board = Board::load(usa()).unwrap();
    let removed = board.ticket_between(board.city_by_name("Montreal").unwrap(), board.city_by_name("Vancouver").unwrap());
    assert_rescores(&board, &v, &[removed.unwrap()]);
}

#[test]
fn forced_and_banned_routes_are_respected() {
    let board = Board::load(toy()).unwrap();
    let out = railmax(&["solve", &toy(), "--budget", "12", "--force-edge", "8|5", "--ban-edge", "2|3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let edges: Vec<u64> = v["edges"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).collect();
    let id = |a, b| board.edge_between(board.city_by_name(a).unwrap(), board.city_by_name(b).unwrap()).unwrap() as u64;
    assert!(edges.contains(&id("5", "8")));
    assert!(!edges.contains(&id("2", "3")));
    assert_self_consistent(&board, &v);
}

#[test]
fn input_errors_exit_1() {
    for args in [
        vec!["solve", "/nonexistent/board.json", "--budget", "5"],
        vec!["solve", "--board", "/nonexistent/board.json", "--budget", "5"],
        vec!["solve", &usa(), "--budget", "5", "--force-edge", "Nowhere|Boston"],
        vec!["solve", &usa(), "--budget", "5", "--ban-edge", "Miami|Seattle"],
        vec!["solve", &usa(), "--budget", "-3"],
        vec!["solve", &usa(), "--budget", "2", "--force-edge", "Portland|San Francisco"],
        vec!["sweep", &usa(), "--from", "5", "--to", "2"],
        vec!["sweep", &toy(), "--from", "0", "--to", "1", "--out", "/nonexistent/dir/rows.csv"],
    ] {
        let out = railmax(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("error"), "{args:?}");
    }
}

#[test]
fn limits_exit_2() {
    let out = railmax(&["solve", &usa(), "--budget", "30", "--node-limit", "5", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["proven_optimal"], Value::Bool(false));
    assert_self_consistent(&Board::load(usa()).unwrap(), &v);
}

#[test]
fn sweep_writes_csv_that_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let out = railmax(&["sweep", &toy(), "--from", "0", "--to", "30", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let rows = read_sweep_csv(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 31);
    let board = Board::load(toy()).unwrap();
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.budget, i as i64);
        let s = board.subset(r.edges.iter().copied().collect());
        assert_eq!(s.score().total, r.total);
        assert!(s.total_length() <= r.budget);
    }
    assert!(rows.windows(2).all(|w| w[0].total <= w[1].total));

    let out = railmax(&["sweep", &usa(), "--from", "0", "--to", "0"]);
    let rows = read_sweep_csv(out.stdout.as_slice()).unwrap();
    assert_eq!((rows.len(), rows[0].total), (1, 0));
}

#[test]
fn sensitivity_on_toy_and_ticketless_boards() {
    let out = railmax(&["sensitivity", &toy(), "--budget", "20", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let (points, impact) = (row["points"].as_i64().unwrap(), row["impact"].as_i64().unwrap());
        assert!(-points <= impact && impact <= 0);
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plain.json");
    std::fs::write(
        &path,
        r#"{"name":"plain","cities":["A","B","C"],"routes":[{"a":"A","b":"B","length":1,"points":1},{"a":"B","b":"C","length":2,"points":2}],"tickets":[]}"#,
    )
    .unwrap();
    let out = railmax(&["sensitivity", path.to_str().unwrap(), "--budget", "3", "--csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "");
}

#[test]
fn frequency_is_annotated() {
    let out = railmax(&["frequency", &toy(), "--from", "0", "--to", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("Note: Counts follow this solver's tie-break"));
    let out = railmax(&["frequency", &toy(), "--from", "1", "--to", "25", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["caveat"].is_string());
    assert!(v["report"]["ticket_counts"].as_array().unwrap().iter().all(|c| c.as_u64().unwrap() <= 25));
}

#[test]
fn emit_lp_prints_counts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("usa.lp");
    let out = railmax(&["emit-lp", &usa(), "--budget", "45", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "78 binary, 4710 continuous, 1159 constraints");
    let lp = std::fs::read_to_string(&path).unwrap();
    assert!(lp.lines().any(|l| l == "Maximize") && lp.trim_end().ends_with("End"));

    let out = railmax(&["emit-lp", &usa(), "--budget", "45", "--strict-linking", "--out", path.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), format!("78 binary, 4710 continuous, {} constraints", 1 + 78 * 30 + 30 * 36));

    let out = railmax(&["emit-lp", &toy(), "--budget", "10"]);
    assert!(stdout(&out).contains("budget:"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("binary"));
}
