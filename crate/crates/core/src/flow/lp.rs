use std::io::{self, Write};

use super::model::{FlowModel, Sense, VarKind};

const TERMS_PER_LINE: usize = 8;

/// Writes `model` in LP file format. Output depends only on the model, so
/// identical models give identical bytes.
pub fn emit_lp<W: Write>(model: &FlowModel, out: &mut W) -> io::Result<()> {
    let linking = match model.options.linking {
        super::LinkingMode::Aggregated => "aggregated",
        super::LinkingMode::Strict => "strict",
    };
    writeln!(out, "\\ railmax flow model for board {}", model.board_name)?;
    writeln!(out, "\\ budget {}, linking {linking}", model.budget)?;
    writeln!(out, "Maximize")?;
    write_expression(model, out, "obj", &model.objective)?;
    writeln!(out)?;

    writeln!(out, "Subject To")?;
    for row in &model.constraints {
        write_expression(model, out, &row.name, &row.terms)?;
        let op = match row.sense {
            Sense::LessEqual => "<=",
            Sense::Equal => "=",
        };
        writeln!(out, " {op} {}", row.rhs)?;
    }

    writeln!(out, "Bounds")?;
    for var in model.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
        writeln!(out, " 0 <= {} <= {}", var.name, var.upper)?;
    }

    writeln!(out, "Binary")?;
    let binaries: Vec<&str> =
        model.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.as_str()).collect();
    for chunk in binaries.chunks(TERMS_PER_LINE) {
        writeln!(out, " {}", chunk.join(" "))?;
    }
    writeln!(out, "End")
}

pub fn lp_string(model: &FlowModel) -> String {
    let mut buf = Vec::new();
    emit_lp(model, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("LP output is ASCII")
}

/// Writes ` name: t1 + t2 ...` without a trailing newline, wrapping long rows
/// onto indented continuation lines.
fn write_expression<W: Write>(model: &FlowModel, out: &mut W, name: &str, terms: &[(usize, i64)]) -> io::Result<()> {
    write!(out, " {name}:")?;
    if terms.is_empty() {
        return write!(out, " 0 {}", model.variables.first().map_or("x_e0", |v| v.name.as_str()));
    }
    for (i, &(var, coef)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            write!(out, "\n   ")?;
        }
        let sign = if coef < 0 { "-" } else { "+" };
        if i == 0 && coef >= 0 {
            write!(out, " {} {}", coef, model.variables[var].name)?;
        } else {
            write!(out, " {sign} {} {}", coef.abs(), model.variables[var].name)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{build_model, ModelOptions};
    use crate::Board;

    #[test]
    fn one_edge_file_is_minimal() {
        let b = Board::from_json(
            r#"{"name":"one","cities":["a","b"],"routes":[{"a":"a","b":"b","length":3,"points":4}],"tickets":[]}"#,
        )
        .unwrap();
        let text = lp_string(&build_model(&b, 2, ModelOptions::default()));
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('\\')).collect();
        assert_eq!(body, ["Maximize", " obj: 4 x_e0", "Subject To", " budget: 3 x_e0 <= 2", "Bounds", "Binary", " x_e0", "End"]);
    }

    #[test]
    fn long_rows_wrap_and_signs_are_explicit() {
        let b = Board::from_json(
            r#"{"name":"p","cities":["a","b","c"],
            "routes":[{"a":"a","b":"b","length":1,"points":1},{"a":"b","b":"c","length":1,"points":1}],
            "tickets":[{"a":"a","b":"c","points":2}]}"#,
        )
        .unwrap();
        let text = lp_string(&build_model(&b, 2, ModelOptions::default()));
        assert!(text.contains(" link_e0: - 1 x_e0 + 1 y_k0_a0_1 + 1 y_k0_a1_0 <= 0"), "{text}");
        assert!(text.contains(" 0 <= y_k0_a2_0 <= 1"));
        assert_eq!(text, lp_string(&build_model(&b, 2, ModelOptions::default())));
    }
}
