//! Report output: deterministic CSV rows and JSON values.
//!
//! Exact rationals print as "p/q" with the denominator always present;
//! floats print with fixed precision in CSV and as plain JSON numbers in
//! JSON. Row order is fixed by the campaigns, so identical flags produce
//! identical bytes.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// Fixed-precision float formatting for CSV cells.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.12e}")
}

/// Canonical "p/q" rendering of an exact rational.
pub fn fmt_ratio(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn ratio_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Escapes a CSV cell if it contains separators or quotes.
fn csv_cell(cell: &str) -> String {
    if cell.contains(',') || cell.contains('"') || cell.contains('\n') {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Destination for one report: stdout or a file.
pub struct ReportSink {
    writer: Box<dyn Write>,
}

impl ReportSink {
    pub fn create(path: Option<&Path>) -> anyhow::Result<ReportSink> {
        let writer: Box<dyn Write> = match path {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
                anyhow::anyhow!("cannot write report to {}: {e}", path.display())
            })?)),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(ReportSink { writer })
    }

    pub fn write_csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        writeln!(self.writer, "{}", header.join(","))?;
        for row in rows {
            debug_assert_eq!(row.len(), header.len());
            let line: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            writeln!(self.writer, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&mut self, value: &serde_json::Value) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut self.writer, value)?;
        writeln!(self.writer)?;
        Ok(())
    }

    pub fn finish(&mut self) -> anyhow::Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}
