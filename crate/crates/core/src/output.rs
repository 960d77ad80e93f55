//! In-memory result tables and their CSV serialization.
//!
//! Floats are written with 17 significant digits so that reparsing yields
//! the in-memory value bit for bit.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Floor used by the `*_clamped` columns in place of `-inf` dB.
pub const CLAMP_DB: f64 = -300.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Real(f64),
    Count(usize),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Real(x) if x.is_finite() => write!(f, "{x:.16e}"),
            Cell::Real(x) if x.is_nan() => f.write_str("nan"),
            Cell::Real(x) => f.write_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Cell::Count(n) => write!(f, "{n}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Count(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Rectangular table with a named header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row; panics if its width differs from the header's.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match the header");
        self.rows.push(row);
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Numeric values of a column, `None` if the column is missing or holds
    /// text.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        self.rows
            .iter()
            .map(|r| match r[k] {
                Cell::Real(x) => Some(x),
                Cell::Count(n) => Some(n as f64),
                Cell::Text(_) => None,
            })
            .collect()
    }

    /// Text values of a column.
    pub fn labels(&self, name: &str) -> Option<Vec<String>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].to_string()).collect())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_string))?;
        }
        w.into_inner().map_err(|e| Error::io("<memory>", e.into_error()))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()?).map_err(|e| Error::io(path, e))
    }
}

/// Writes `name.csv` for every table into `dir`, creating it if needed.
pub fn write_tables(dir: impl AsRef<Path>, tables: &[(String, Table)]) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    tables
        .iter()
        .map(|(name, table)| {
            let path = dir.join(format!("{name}.csv"));
            table.write_csv(&path)?;
            Ok(path)
        })
        .collect()
}

/// `-inf` dB mapped to [`CLAMP_DB`], everything else passed through.
pub fn clamp_db(x: f64) -> f64 {
    x.max(CLAMP_DB)
}
