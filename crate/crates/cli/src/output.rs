//! Tables, data files and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use photon_bec::params::DerivedQuantities;
use serde::{Serialize, Serializer};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Count(usize),
    Text(String),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".to_string(),
            Cell::Num(x) => format!("{x:e}"),
            Cell::Count(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Num(_) => s.serialize_none(),
            Cell::Count(n) => s.serialize_u64(*n as u64),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Count(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Column-labelled rows; every column carries an SI unit.
#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[(S, &str)]) -> Self {
        Self {
            columns: columns
                .iter()
                .map(|(n, u)| Column { name: n.as_ref().to_string(), unit: u.to_string() })
                .collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.columns {
            out.push_str(&format!("# column: {} [{}]\n", c.name, c.unit));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8"));
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serializes");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
pub fn print(text: &str) -> Result<()> {
    match std::io::stdout().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Output { path: PathBuf::from("<stdout>"), source: e }),
        _ => Ok(()),
    }
}

/// One point that could not be evaluated.
#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub series: String,
    pub value: f64,
    pub error: String,
    #[serde(skip)]
    source: photon_bec::Error,
}

/// Point counts and failures of a run.
#[derive(Debug, Default)]
pub struct Tally {
    pub total: usize,
    pub failures: Vec<Failure>,
}

impl Tally {
    /// Records a point; on failure returns NaN so the row stays in place.
    pub fn record(&mut self, series: &str, value: f64, result: photon_bec::Result<f64>) -> f64 {
        self.total += 1;
        result.unwrap_or_else(|e| {
            self.total -= 1;
            self.fail(series, value, &e);
            f64::NAN
        })
    }

    pub fn fail(&mut self, series: &str, value: f64, error: &photon_bec::Error) {
        self.total += 1;
        self.failures.push(Failure {
            series: series.to_string(),
            value,
            error: error.to_string(),
            source: error.clone(),
        });
    }

    pub fn succeed(&mut self, points: usize) {
        self.total += points;
    }

    /// No point succeeding is a solver error; more than a tenth failing is
    /// a partial failure.
    pub fn verdict(&self) -> Result<()> {
        let failed = self.failures.len();
        if failed > 0 && failed == self.total {
            Err(CliError::Solver(self.failures[0].source.clone()))
        } else if failed * 10 > self.total {
            Err(CliError::Partial { failed, total: self.total })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    derived: Option<DerivedQuantities>,
    files: &'a [String],
    points: usize,
    failures: &'a [Failure],
    notes: &'a [String],
    wall_time_s: f64,
}

/// Destination of a command's output. Without an output directory only
/// the primary table is printed to stdout.
pub struct Sink<'a> {
    config: &'a RunConfig,
    command: String,
    dir: Option<PathBuf>,
    files: Vec<String>,
    notes: Vec<String>,
    start: Instant,
}

impl<'a> Sink<'a> {
    pub fn new(config: &'a RunConfig, command: impl Into<String>, dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).map_err(|source| CliError::Output { path: d.clone(), source })?;
        }
        Ok(Self {
            config,
            command: command.into(),
            dir,
            files: Vec::new(),
            notes: Vec::new(),
            start: Instant::now(),
        })
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    fn write(&mut self, name: String, contents: &str) -> Result<()> {
        let dir = self.dir.as_ref().expect("write needs a directory");
        let path = dir.join(&name);
        fs::write(&path, contents).map_err(|source| CliError::Output { path, source })?;
        self.files.push(name);
        Ok(())
    }

    /// Writes `<stem>.<ext>`, or prints the table when there is no directory.
    pub fn primary(&mut self, stem: &str, table: &Table) -> Result<()> {
        let text = table.render(self.config.format);
        match self.dir {
            Some(_) => self.write(format!("{stem}.{}", self.config.format.extension()), &text),
            None => print(&text),
        }
    }

    /// Writes `<stem>.<ext>` only when there is a directory.
    pub fn secondary(&mut self, stem: &str, table: &Table) -> Result<()> {
        if self.dir.is_some() {
            let text = table.render(self.config.format);
            self.write(format!("{stem}.{}", self.config.format.extension()), &text)?;
        }
        Ok(())
    }

    /// Writes the manifest, reports failures on stderr and applies the
    /// partial-failure rule.
    pub fn finish(self, tally: &Tally) -> Result<()> {
        for f in &tally.failures {
            eprintln!("warning: {} at {:e}: {}", f.series, f.value, f.error);
        }
        if let Some(dir) = &self.dir {
            let manifest = Manifest {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                command: &self.command,
                config: self.config,
                derived: DerivedQuantities::from_config(&self.config.cavity).ok(),
                files: &self.files,
                points: tally.total,
                failures: &tally.failures,
                notes: &self.notes,
                wall_time_s: self.start.elapsed().as_secs_f64(),
            };
            let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            text.push('\n');
            let path = dir.join("manifest.json");
            fs::write(&path, text).map_err(|source| CliError::Output { path, source })?;
        }
        tally.verdict()
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }
}
