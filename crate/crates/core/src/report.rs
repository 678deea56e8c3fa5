//! Flat report tables: CSV with a `#`-prefixed JSON header line, or one JSON
//! document with the header as a field.

use crate::error::{Error, Result};
use serde::Serialize;
use std::io::Write;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportHeader {
    pub report: String,
    pub version: String,
    pub config_hash: String,
}

impl ReportHeader {
    pub fn new(report: impl Into<String>, config_hash: impl Into<String>) -> Self {
        ReportHeader { report: report.into(), version: ARTIFACT_VERSION.to_string(), config_hash: config_hash.into() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidInput(format!("unknown format {s:?} (csv|json)"))),
        }
    }
}

pub fn write_csv<R: Serialize>(out: &mut dyn Write, header: &ReportHeader, rows: &[R]) -> Result<()> {
    writeln!(out, "# {}", serde_json::to_string(header)?)?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonReport<'a, R> {
    header: &'a ReportHeader,
    rows: &'a [R],
}

pub fn write_json<R: Serialize>(out: &mut dyn Write, header: &ReportHeader, rows: &[R]) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, &JsonReport { header, rows })?;
    writeln!(out)?;
    Ok(())
}

pub fn write_report<R: Serialize>(out: &mut dyn Write, format: Format, header: &ReportHeader, rows: &[R]) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, header, rows),
        Format::Json => write_json(out, header, rows),
    }
}

/// `(m, j, k, a, b, abs_err)`
#[derive(Clone, Debug, Serialize)]
pub struct OverlapRow {
    pub m: i64,
    pub j: i64,
    pub k: i64,
    pub a: f64,
    pub b: f64,
    pub abs_err: f64,
}

/// `(m, k, pairing, limit, abs_err)`
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub m: i64,
    pub k: i64,
    pub pairing: f64,
    pub limit: f64,
    pub abs_err: f64,
}

/// `(irrep, l, m, band_norm)`
#[derive(Clone, Debug, Serialize)]
pub struct BandNormRow {
    pub irrep: String,
    pub mu: String,
    pub l: i64,
    pub m: i64,
    pub band_norm: f64,
}

/// `(mu, n, residual)`
#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerCsvRow {
    pub mu: String,
    pub i: usize,
    pub n: i64,
    pub residual: f64,
}

/// `(lambda, pi, alt_mult)`
#[derive(Clone, Debug, Serialize)]
pub struct IndexCsvRow {
    pub lambda: String,
    pub pi: String,
    pub alt_mult: i64,
}

/// `(lambda, edge, pi, defect_max_string)`; an empty field means no defect.
#[derive(Clone, Debug, Serialize)]
pub struct DefectCsvRow {
    pub lambda: String,
    pub edge: String,
    pub pi: String,
    pub defect_max_string: Option<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_json_header_and_quotes_labels() {
        let h = ReportHeader::new("index", "abc");
        let rows = vec![IndexCsvRow { lambda: "1,0".into(), pi: "1,0,0".into(), alt_mult: 1 }];
        let mut buf = Vec::new();
        write_csv(&mut buf, &h, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# "));
        let parsed: serde_json::Value = serde_json::from_str(&first[2..]).unwrap();
        assert_eq!(parsed["config_hash"], "abc");
        assert_eq!(parsed["version"], ARTIFACT_VERSION);
        assert_eq!(lines.next().unwrap(), "lambda,pi,alt_mult");
        assert_eq!(lines.next().unwrap(), "\"1,0\",\"1,0,0\",1");
    }

    #[test]
    fn json_report_round_trips() {
        let h = ReportHeader::new("overlap", "x");
        let rows = vec![OverlapRow { m: 1, j: 0, k: 0, a: 0.5, b: 0.5, abs_err: 0.0 }];
        let mut buf = Vec::new();
        write_json(&mut buf, &h, &rows).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["a"], 0.5);
        assert_eq!(v["header"]["report"], "overlap");
    }

    #[test]
    fn format_parse() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}
