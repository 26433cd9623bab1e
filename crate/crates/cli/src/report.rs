//! Run reports and their CSV/JSON emission.
//!
//! Reports embed the resolved configuration so any report file is
//! self-reproducing. Numeric CSV cells carry 12 significant digits in
//! fixed notation; files end every line with LF. Wall-clock duration is
//! printed to the console but kept out of the files so identical
//! (config, seed) runs emit byte-identical reports.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, ReportFormat};
use crate::error::CliError;

/// One table cell.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Int(i64),
    Number(f64),
}

impl Cell {
    pub fn text(value: impl Into<String>) -> Self {
        Cell::Text(value.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Number(x) => format_significant(*x),
        }
    }
}

/// Fixed-notation formatting with 12 significant digits.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000000".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).clamp(0, 30) as usize;
    format!("{x:.decimals$}")
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Everything one experiment run produced.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub experiment: String,
    pub toolkit_version: String,
    pub config: ExperimentConfig,
    pub tables: Vec<Table>,
    /// Raw trial stream (written as its own CSV file), if the experiment
    /// produces one.
    #[serde(skip)]
    pub record_stream: Option<(String, Vec<String>)>,
    #[serde(skip)]
    pub duration: std::time::Duration,
}

impl RunReport {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            experiment: config.experiment.clone(),
            toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            tables: Vec::new(),
            record_stream: None,
            duration: std::time::Duration::ZERO,
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    file.write_all(contents.as_bytes())
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn config_echo_lines(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# experiment = {}\n", report.experiment));
    out.push_str(&format!("# toolkit_version = {}\n", report.toolkit_version));
    out.push_str(&format!("# seed = {}\n", report.config.seed));
    out.push_str(&format!("# trials = {}\n", report.config.trials));
    for (key, value) in &report.config.params {
        out.push_str(&format!(
            "# params.{key} = {}\n",
            serde_json::to_string(value).expect("parameter serializes")
        ));
    }
    out
}

/// Write the report files; returns the paths created.
pub fn emit_report(report: &RunReport, config: &ExperimentConfig) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(&config.out_dir).map_err(|source| CliError::Io {
        path: config.out_dir.clone(),
        source,
    })?;
    let mut written = Vec::new();

    match config.format {
        ReportFormat::Csv => {
            for table in &report.tables {
                let path = config
                    .out_dir
                    .join(format!("{}_{}.csv", report.experiment, table.name));
                let mut text = config_echo_lines(report);
                text.push_str(&table.columns.join(","));
                text.push('\n');
                for row in &table.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    text.push_str(&cells.join(","));
                    text.push('\n');
                }
                write_file(&path, &text)?;
                written.push(path);
            }
        }
        ReportFormat::Json => {
            let path = config.out_dir.join(format!("{}.json", report.experiment));
            let mut text =
                serde_json::to_string_pretty(report).expect("report serializes to JSON");
            text.push('\n');
            write_file(&path, &text)?;
            written.push(path);
        }
    }

    if let Some((name, rows)) = &report.record_stream {
        let path = config.out_dir.join(name);
        let mut text = String::with_capacity(rows.iter().map(|r| r.len() + 1).sum());
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        write_file(&path, &text)?;
        written.push(path);
    }
    Ok(written)
}
