//! CSV/JSON result documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precoders::ComplexityFormulas;
use crate::sim::{SerCurve, SerPoint, SimConfig};

pub const CSV_HEADER: &str = "snr_db,solver,ser,symbol_errors,symbols_sent,mean_tstar,mean_chi";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub solver: String,
    pub mean_tstar: Option<f64>,
    pub mean_chi: f64,
}

/// Enough to rerun a sweep bit-for-bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub config: SimConfig,
    pub solvers: Vec<String>,
    pub workers: usize,
    pub wall_clock_seconds: f64,
    pub complexity: Vec<SolverSummary>,
    pub formulas: ComplexityFormulas,
    #[serde(default)]
    pub refusals: Vec<String>,
}

impl RunManifest {
    pub fn summarize(curves: &[SerCurve]) -> Vec<SolverSummary> {
        curves
            .iter()
            .filter_map(|c| {
                c.points.first().map(|p| SolverSummary {
                    solver: c.solver.clone(),
                    mean_tstar: p.mean_tstar,
                    mean_chi: p.mean_chi,
                })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub manifest: RunManifest,
    pub curves: Vec<SerCurve>,
}

/// `%g`-style formatting with six significant digits.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_row(solver: &str, p: &SerPoint) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        format_sig6(p.snr_db),
        solver,
        format_sig6(p.ser),
        p.symbol_errors,
        p.symbols_sent,
        p.mean_tstar.map(format_sig6).unwrap_or_default(),
        format_sig6(p.mean_chi),
    )
}

pub fn to_csv(curves: &[SerCurve]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for c in curves {
        for p in &c.points {
            out.push_str(&csv_row(&c.solver, p));
            out.push('\n');
        }
    }
    out
}

pub fn emit_results(curves: &[SerCurve], manifest: &RunManifest, format: Format) -> Result<String> {
    match format {
        Format::Csv => Ok(to_csv(curves)),
        Format::Json => {
            let doc = ResultsDocument { manifest: manifest.clone(), curves: curves.to_vec() };
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// One data row of a results CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRow {
    pub snr_db: f64,
    pub solver: String,
    pub ser: f64,
    pub symbol_errors: u64,
    pub symbols_sent: u64,
    pub mean_tstar: Option<f64>,
    pub mean_chi: f64,
}

fn bad(line: usize, what: &str) -> Error {
    Error::Config(format!("results CSV line {line}: {what}"))
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(bad(1, "unexpected header"));
    }
    let float = |s: &str, n: usize| s.parse::<f64>().map_err(|_| bad(n, "bad number"));
    let int = |s: &str, n: usize| s.parse::<u64>().map_err(|_| bad(n, "bad count"));
    lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, line)| {
            let n = i + 2;
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(n, "expected 7 fields"));
            }
            Ok(CsvRow {
                snr_db: float(f[0], n)?,
                solver: f[1].to_string(),
                ser: float(f[2], n)?,
                symbol_errors: int(f[3], n)?,
                symbols_sent: int(f[4], n)?,
                mean_tstar: if f[5].is_empty() { None } else { Some(float(f[5], n)?) },
                mean_chi: float(f[6], n)?,
            })
        })
        .collect()
}
