//! CSV tables: header row, `{:.12e}` reals, LF line endings.

use std::fs;
use std::path::Path;

use super::convergence::ConvergenceReport;
use crate::Result;

/// A CSV cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.12e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// In-memory table written in one go.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, self.to_csv_bytes()?)?;
        Ok(())
    }
}

/// Columns `alpha0, param, error, rate` for one or more reports.
pub fn convergence_table(reports: &[&ConvergenceReport]) -> Table {
    let mut table = Table::new(&["alpha0", "param", "error", "rate"]);
    for report in reports {
        for row in &report.rows {
            table.push(vec![report.alpha0.into(), row.param.into(), row.error.into(), row.rate.into()]);
        }
    }
    table
}

/// Columns `x` followed by one column per named profile, all at the nodes `x`.
pub fn profile_table(x: &[f64], columns: &[(&str, &[f64])]) -> Table {
    let mut header = vec!["x"];
    header.extend(columns.iter().map(|(name, _)| *name));
    let mut table = Table::new(&header);
    for (i, &xi) in x.iter().enumerate() {
        let mut row = vec![Cell::Real(xi)];
        row.extend(columns.iter().map(|(_, v)| Cell::Real(v[i])));
        table.push(row);
    }
    table
}
