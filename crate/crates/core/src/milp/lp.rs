use std::fmt::Write;

use super::{ExportModel, Row, VarType};

const WIDTH: usize = 78;

fn number(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// Appends `pieces` to `out`, wrapping onto indented continuation lines.
fn wrapped(out: &mut String, head: &str, pieces: &[String]) {
    let mut line = String::from(head);
    for piece in pieces {
        if line.len() + 1 + piece.len() > WIDTH && line.len() > head.len() {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
            line.push_str(piece);
        } else {
            if !line.ends_with(' ') {
                line.push(' ');
            }
            line.push_str(piece);
        }
    }
    out.push_str(&line);
    out.push('\n');
}

fn term(first: bool, coef: f64, name: &str) -> String {
    let sign = if coef < 0.0 { "-" } else { "+" };
    let mag = coef.abs();
    let body = if mag == 1.0 {
        name.to_string()
    } else {
        format!("{} {name}", number(mag))
    };
    match (first, coef < 0.0) {
        (true, false) => body,
        _ => format!("{sign} {body}"),
    }
}

fn row_pieces(model: &ExportModel, row: &Row) -> Vec<String> {
    let mut pieces: Vec<String> = row
        .terms
        .iter()
        .enumerate()
        .map(|(i, &(v, c))| term(i == 0, c, &model.registry.vars[v].name))
        .collect();
    if pieces.is_empty() {
        pieces.push("0 L".into());
    }
    pieces.push(format!("{} {}", row.sense.symbol(), number(row.rhs)));
    pieces
}

/// Renders the model in LP text format. Output depends only on the model,
/// so identical instances give byte-identical files.
pub fn write_lp(model: &ExportModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.header);
    out.push_str("Maximize\n obj: L\nSubject To\n");
    for row in &model.rows {
        wrapped(&mut out, &format!(" {}:", row.name), &row_pieces(model, row));
    }
    out.push_str("Bounds\n");
    for var in &model.registry.vars {
        let default_binary = var.ty == VarType::Binary && var.lower == 0.0 && var.upper == 1.0;
        let default_cont = var.ty == VarType::Continuous && var.lower == 0.0 && var.upper.is_infinite();
        if default_binary || default_cont {
            continue;
        }
        if var.lower == var.upper {
            let _ = writeln!(out, " {} = {}", var.name, number(var.lower));
        } else if var.upper.is_infinite() {
            let _ = writeln!(out, " {} >= {}", var.name, number(var.lower));
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", number(var.lower), var.name, number(var.upper));
        }
    }
    for (section, ty) in [("General", VarType::Integer), ("Binary", VarType::Binary)] {
        let names: Vec<String> = model
            .registry
            .vars
            .iter()
            .filter(|v| v.ty == ty)
            .map(|v| v.name.clone())
            .collect();
        if !names.is_empty() {
            out.push_str(section);
            out.push('\n');
            wrapped(&mut out, "", &names);
        }
    }
    out.push_str("End\n");
    out
}
