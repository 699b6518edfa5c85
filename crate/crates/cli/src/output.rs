use serde_json::Value;

use crate::args::{Command, Format};
use crate::{usage, CliError};

/// Renders a report. CSV is available for the grid commands only: one header
/// row, then one row per grid point (axis values first, then result fields).
/// Non-finite numbers appear as empty cells.
pub fn render(cmd: &Command, report: &Value, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| usage(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => csv_grid(cmd, &report["results"]),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_grid(cmd: &Command, results: &Value) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let points = results["points"].as_array().cloned().unwrap_or_default();
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    match cmd {
        Command::Scan(a) => {
            let mut header: Vec<String> = a.axis.iter().map(|s| s.name.clone()).collect();
            header.extend(["label", "physical", "max_imag", "min_gap"].map(String::from));
            w.write_record(&header).map_err(io)?;
            for p in &points {
                let mut row: Vec<String> = p["values"].as_array().map(|v| v.iter().map(cell).collect()).unwrap_or_default();
                row.extend(["label", "physical", "max_imag", "min_gap"].iter().map(|k| cell(&p[*k])));
                w.write_record(&row).map_err(io)?;
            }
        }
        Command::Pseudo(a) => {
            let mut header: Vec<String> = ["re", "im", "s_min"].map(String::from).to_vec();
            header.extend(a.eps.iter().map(|e| format!("in_eps_{e}")));
            w.write_record(&header).map_err(io)?;
            for p in &points {
                let mut row: Vec<String> = ["re", "im", "s_min"].iter().map(|k| cell(&p[*k])).collect();
                if let Some(inside) = p["inside"].as_array() {
                    row.extend(inside.iter().map(cell));
                }
                w.write_record(&row).map_err(io)?;
            }
        }
        other => return Err(usage(format!("csv output is only available for scan and pseudo, not {}", other.name()))),
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| usage(e.to_string()))
}
