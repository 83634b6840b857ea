//! Run directories, CSV tables and the run manifest.
//!
//! Every CSV opens with `#`-prefixed comment lines (tool version, config hash,
//! description) followed by one header row. Floats are written with 17
//! significant digits, which round-trips every `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Result, RunError};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the parent of timestamped run directories.
pub const RUNS_DIR_ENV: &str = "MEMSPIN_RUNS_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::I(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::S(s)
    }
}

pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::F(x) => format_f64(*x),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

/// A table waiting to be written.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub description: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(description: impl Into<String>, columns: &[&str]) -> Self {
        Table { description: description.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path, config_hash: &str) -> Result<()> {
        let csv_err = |source| RunError::Csv { path: path.to_path_buf(), source };
        let file = File::create(path).map_err(RunError::io(path))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "# memspin {TOOL_VERSION}").map_err(RunError::io(path))?;
        writeln!(out, "# config_hash {config_hash}").map_err(RunError::io(path))?;
        for line in self.description.lines() {
            writeln!(out, "# {line}").map_err(RunError::io(path))?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
        }
        w.flush().map_err(RunError::io(path))?;
        Ok(())
    }
}

/// A CSV file read back: its comment lines, header and rows as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvData {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvData {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Column `name` parsed as floats.
    pub fn floats(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        self.rows.iter().map(|r| r.get(i)?.parse().ok()).collect()
    }
}

pub fn read_csv(path: &Path) -> Result<CsvData> {
    let file = File::open(path).map_err(RunError::io(path))?;
    let mut comments = Vec::new();
    let mut body = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(RunError::io(path))?;
        match line.strip_prefix('#') {
            Some(c) if body.is_empty() => comments.push(c.trim_start().to_string()),
            _ => {
                body.push_str(&line);
                body.push('\n');
            }
        }
    }
    let csv_err = |source| RunError::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let columns = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()
        .map_err(csv_err)?;
    Ok(CsvData { comments, columns, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputEntry {
    pub role: String,
    pub path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub timestamp: String,
    pub config_hash: String,
    pub config_file: String,
    pub outputs: Vec<OutputEntry>,
}

/// Collects tables into a run directory and writes the manifest last.
#[derive(Debug)]
pub struct RunDir {
    pub path: PathBuf,
    hash: String,
    manifest: RunManifest,
}

/// `out` if given, else `$MEMSPIN_RUNS_DIR/<timestamp>-<hash>` (default parent `runs`).
pub fn resolve_out_dir(out: Option<&Path>, hash: &str, timestamp: &chrono::DateTime<chrono::Utc>) -> PathBuf {
    match out {
        Some(p) => p.to_path_buf(),
        None => {
            let root = std::env::var_os(RUNS_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("runs"));
            root.join(format!("{}-{hash}", timestamp.format("%Y%m%dT%H%M%SZ")))
        }
    }
}

impl RunDir {
    pub fn create(out: Option<&Path>, command: &str, hash: &str, config_text: &str) -> Result<RunDir> {
        let now = chrono::Utc::now();
        let path = resolve_out_dir(out, hash, &now);
        std::fs::create_dir_all(&path).map_err(RunError::io(&path))?;
        let cfg_path = path.join("config.toml");
        std::fs::write(&cfg_path, config_text).map_err(RunError::io(&cfg_path))?;
        Ok(RunDir {
            path,
            hash: hash.to_string(),
            manifest: RunManifest {
                tool_version: TOOL_VERSION.to_string(),
                command: command.to_string(),
                timestamp: now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                config_hash: hash.to_string(),
                config_file: "config.toml".into(),
                outputs: Vec::new(),
            },
        })
    }

    pub fn write(&mut self, name: &str, role: &str, table: &Table) -> Result<PathBuf> {
        let p = self.path.join(name);
        table.write(&p, &self.hash)?;
        self.manifest.outputs.push(OutputEntry { role: role.to_string(), path: name.to_string() });
        Ok(p)
    }

    pub fn finish(self) -> Result<PathBuf> {
        let p = self.path.join("manifest.toml");
        let text = toml::to_string(&self.manifest).expect("manifest serialises");
        std::fs::write(&p, text).map_err(RunError::io(&p))?;
        Ok(self.path)
    }
}
