//! Provenance, report and table emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pfem::fdtd::GridSpec;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Everything needed to reproduce an output file.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub threads: usize,
    pub alpha: Option<f64>,
    pub grid: Option<GridSpec>,
}

impl Provenance {
    pub fn new(command: &'static str, config: &[u8], seed: u64, threads: usize) -> Self {
        Self {
            tool: "pfem",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config_sha256: hex::encode(Sha256::digest(config)),
            seed,
            threads,
            alpha: None,
            grid: None,
        }
    }

    /// `# key: value` lines for CSV headers.
    fn comment_lines(&self) -> String {
        let mut s = format!(
            "# tool: {} {}\n# command: {}\n# config_sha256: {}\n# seed: {}\n# threads: {}\n",
            self.tool, self.version, self.command, self.config_sha256, self.seed, self.threads
        );
        if let Some(a) = self.alpha {
            s.push_str(&format!("# alpha: {a:e}\n"));
        }
        if let Some(g) = &self.grid {
            s.push_str(&format!(
                "# grid: dimension={} cells={} length={:e} dt={:e} duration={:e}\n",
                g.dimension, g.cells, g.length, g.dt, g.duration
            ));
        }
        s
    }
}

/// Rows of a CSV table with a fixed header.
#[derive(Clone, Debug)]
pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(_) => Value::Null,
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, provenance: &Provenance) -> String {
        let mut s = provenance.comment_lines();
        s.push_str(&self.header.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    Value::Object(
                        self.header
                            .iter()
                            .zip(row)
                            .map(|(h, c)| (h.to_string(), c.json()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// Destination for a command's report and tables.
pub struct Sink {
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Sink {
    /// Writes `report.json` plus one file per table under `--out`, or prints to
    /// stdout: the report with tables embedded for JSON, or a `# report:`
    /// comment line followed by the tables for CSV.
    pub fn emit(&self, provenance: &Provenance, report: Value, tables: &[Table]) -> CliResult<()> {
        let mut report = report;
        if let Value::Object(map) = &mut report {
            map.insert(
                "provenance".into(),
                serde_json::to_value(provenance).expect("serializable"),
            );
            if self.format == Format::Json {
                for t in tables {
                    map.insert(t.name.into(), t.to_json());
                }
            }
        }
        let pretty = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
        match &self.out {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("report.json"), pretty)?;
                if self.format == Format::Csv {
                    for t in tables {
                        fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv(provenance))?;
                    }
                }
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                match self.format {
                    Format::Json => stdout.write_all(pretty.as_bytes())?,
                    Format::Csv if tables.is_empty() => stdout.write_all(pretty.as_bytes())?,
                    Format::Csv => {
                        let scalars = serde_json::to_string(&strip_provenance(&report)).expect("serializable");
                        stdout.write_all(format!("# report: {scalars}\n").as_bytes())?;
                        for (i, t) in tables.iter().enumerate() {
                            if i > 0 {
                                stdout.write_all(b"\n")?;
                            }
                            stdout.write_all(t.to_csv(provenance).as_bytes())?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dir(&self) -> Option<&Path> {
        self.out.as_deref()
    }
}

fn strip_provenance(report: &Value) -> Value {
    let mut r = report.clone();
    if let Value::Object(map) = &mut r {
        map.remove("provenance");
    }
    r
}
