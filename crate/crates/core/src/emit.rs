//! CSV output with fixed 12-significant-digit float formatting.
//!
//! Columns are lowercase snake_case; complex values are split into `_re` and
//! `_im` columns; booleans are written as `0`/`1`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scientific notation with 12 significant digits. Negative zero is written
/// as zero so output does not depend on the sign of rounding residue.
pub fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Self {
            header: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self) -> RowBuilder<'_> {
        RowBuilder {
            table: self,
            cells: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

pub struct RowBuilder<'a> {
    table: &'a mut CsvTable,
    cells: Vec<String>,
}

impl RowBuilder<'_> {
    pub fn num(mut self, v: f64) -> Self {
        self.cells.push(fmt_sig(v));
        self
    }

    pub fn complex(mut self, v: Complex64) -> Self {
        self.cells.push(fmt_sig(v.re));
        self.cells.push(fmt_sig(v.im));
        self
    }

    pub fn int(mut self, v: impl Into<i64>) -> Self {
        self.cells.push(v.into().to_string());
        self
    }

    pub fn flag(mut self, v: bool) -> Self {
        self.cells.push(if v { "1" } else { "0" }.into());
        self
    }

    pub fn text(mut self, v: &str) -> Self {
        self.cells.push(v.to_string());
        self
    }

    pub fn push(self) {
        debug_assert_eq!(self.cells.len(), self.table.header.len());
        self.table.rows.push(self.cells);
    }
}

/// Parsed numeric CSV: header plus rows of `f64`.
#[derive(Clone, Debug)]
pub struct NumericCsv {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl NumericCsv {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn get(&self, row: usize, name: &str) -> f64 {
        let c = self
            .column(name)
            .unwrap_or_else(|| panic!("no column {name}"));
        self.rows[row][c]
    }
}

/// Reads back a CSV produced by [`CsvTable`]. Non-numeric cells (such as
/// contour names) parse as NaN.
pub fn read_numeric_csv(text: &str) -> Result<NumericCsv> {
    let mut lines = text.lines();
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Config("empty csv".into()))?
        .split(',')
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (k, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| c.parse::<f64>().unwrap_or(f64::NAN))
            .collect();
        if row.len() != header.len() {
            return Err(Error::Config(format!(
                "csv row {} has {} cells, header has {}",
                k + 1,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok(NumericCsv { header, rows })
}
