//! Text formats shared with the command line tool.
//!
//! CSV output uses LF line endings and Rust's shortest round-trip float
//! formatting, which always uses `.` as the decimal separator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::randtests::{TestReport, Verdict};

/// One integer per line.
pub fn integers_to_csv(values: &[u64]) -> String {
    let mut s = String::with_capacity(values.len() * 8);
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

/// One value per line.
pub fn reals_to_csv(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 12);
    for v in values {
        s.push_str(&v.to_string());
        s.push('\n');
    }
    s
}

/// Parses a numeric sequence from either a JSON array or one value per line.
///
/// In the line format blank lines are skipped, each remaining line must hold
/// exactly one number, and a single non-numeric first line is accepted as a
/// header.
pub fn parse_sequence(text: &str) -> Result<Vec<f64>> {
    let trimmed = text.trim_start_matches('\u{feff}').trim();
    if trimmed.starts_with('[') {
        let values: Vec<f64> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return check_finite(values);
    }
    let mut values = Vec::new();
    for (lineno, line) in trimmed.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let field = line.trim_end_matches(',').trim();
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if lineno == 0 => {}
            Err(_) => {
                return Err(Error::Parse(format!(
                    "line {}: {field:?} is not a number",
                    lineno + 1
                )))
            }
        }
    }
    check_finite(values)
}

fn check_finite(values: Vec<f64>) -> Result<Vec<f64>> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Parse(format!("value at position {i} is not finite"))),
        None => Ok(values),
    }
}

/// Parses a sequence of residues `0 <= r < m` and normalizes it to `r / m`.
pub fn parse_residues(text: &str, m: u64) -> Result<Vec<f64>> {
    let raw = parse_sequence(text)?;
    let ints = raw
        .iter()
        .map(|&v| {
            if v.fract() != 0.0 || v < 0.0 || v >= u64::MAX as f64 {
                Err(Error::Parse(format!("{v} is not a nonnegative integer")))
            } else {
                Ok(v as u64)
            }
        })
        .collect::<Result<Vec<u64>>>()?;
    crate::prng::normalize(&ints, m)
}

pub const REPORT_CSV_HEADER: [&str; 5] = ["test", "statistic", "df", "p_value", "verdict"];

#[derive(Serialize, Deserialize)]
struct ReportRow {
    test: String,
    statistic: f64,
    df: u32,
    p_value: f64,
    verdict: Verdict,
}

/// Fixed-column CSV `test,statistic,df,p_value,verdict`.
pub fn reports_to_csv(reports: &[TestReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(REPORT_CSV_HEADER)
        .expect("writing to memory");
    for r in reports {
        w.serialize(ReportRow {
            test: r.test_name.clone(),
            statistic: r.statistic,
            df: r.df,
            p_value: r.p_value,
            verdict: r.verdict,
        })
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is UTF-8")
}

pub fn reports_from_csv(text: &str) -> Result<Vec<TestReport>> {
    let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if headers.iter().ne(REPORT_CSV_HEADER) {
        return Err(Error::Parse(format!(
            "expected header {}",
            REPORT_CSV_HEADER.join(",")
        )));
    }
    r.deserialize::<ReportRow>()
        .map(|row| {
            let row = row.map_err(|e| Error::Parse(e.to_string()))?;
            if !(0.0..=1.0).contains(&row.p_value) {
                return Err(Error::Parse(format!(
                    "p-value {} outside [0, 1]",
                    row.p_value
                )));
            }
            Ok(TestReport {
                test_name: row.test,
                statistic: row.statistic,
                df: row.df,
                p_value: row.p_value,
                verdict: row.verdict,
            })
        })
        .collect()
}
