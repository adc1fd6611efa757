//! Text formats: UCR-style label-first files and the series CSV written by
//! the commands.
//!
//! UCR files hold one series per line, the class label first, then the
//! values. Fields are separated by tabs or commas; the separator is taken
//! from the first data line and must be used consistently. Blank lines and
//! lines starting with `#` are ignored. Trailing `NaN` fields (the padding
//! used for variable-length UCR sets) are dropped.
//!
//! Series CSV files start with `# key: value` comment lines, then a header
//! row `label,0,1,...`, then one row per series.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Dataset, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Layout {
    /// First field is the class label.
    #[default]
    Labelled,
    /// Every field is a value; all series share the empty label.
    Unlabelled,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn detect_separator(line: &str, lineno: usize) -> Result<char> {
    match (line.contains('\t'), line.contains(',')) {
        (true, false) => Ok('\t'),
        (false, true) => Ok(','),
        (true, true) => Err(parse_err(lineno, "line mixes tab and comma separators")),
        (false, false) => Err(parse_err(lineno, "no tab or comma separator found")),
    }
}

/// Parses UCR-style text.
pub fn parse_delimited(text: &str, layout: Layout) -> Result<Dataset> {
    let mut separator = None;
    let mut series = Vec::new();
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let sep = match separator {
            Some(sep) => {
                let other = if sep == '\t' { ',' } else { '\t' };
                if line.contains(other) {
                    return Err(parse_err(lineno, "separator differs from earlier lines"));
                }
                sep
            }
            None => *separator.insert(detect_separator(line, lineno)?),
        };
        let mut fields = line.split(sep).map(str::trim);
        let label = match layout {
            Layout::Labelled => fields.next().unwrap_or_default().to_string(),
            Layout::Unlabelled => String::new(),
        };
        let mut values = fields
            .enumerate()
            .map(|(col, f)| {
                f.parse::<f64>().map_err(|_| parse_err(lineno, format!("field {} is not a number: '{f}'", col + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        while values.last().is_some_and(|v| v.is_nan()) {
            values.pop();
        }
        let ts = TimeSeries::new(values).map_err(|e| parse_err(lineno, e.to_string()))?;
        series.push(ts);
        labels.push(label);
    }
    if series.is_empty() {
        return Err(Error::EmptyFile);
    }
    match layout {
        Layout::Labelled => Dataset::with_labels(series, labels),
        Layout::Unlabelled => Dataset::new(series),
    }
}

pub fn load_delimited(path: impl AsRef<Path>, layout: Layout) -> Result<Dataset> {
    parse_delimited(&fs::read_to_string(path)?, layout)
}

/// Loads a label-first UCR file.
pub fn load_ucr(path: impl AsRef<Path>) -> Result<Dataset> {
    load_delimited(path, Layout::Labelled)
}

/// Tab-separated, label-first text. Values use the shortest representation
/// that parses back to the same `f64`. Unlabelled datasets get label `0`.
pub fn format_ucr(d: &Dataset) -> String {
    let mut out = String::new();
    for (i, s) in d.iter().enumerate() {
        let label = d.labels().map_or("0", |l| l[i].as_str());
        out.push_str(label);
        for v in s.values() {
            write!(out, "\t{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn save_ucr(path: impl AsRef<Path>, d: &Dataset) -> Result<()> {
    fs::write(path, format_ucr(d))?;
    Ok(())
}

/// One row of a series CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub label: String,
    pub values: Vec<f64>,
}

impl CsvRow {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        CsvRow { label: label.into(), values }
    }
}

pub fn format_series_csv(comments: &[(&str, String)], rows: &[CsvRow]) -> String {
    let mut out = String::new();
    for (key, value) in comments {
        writeln!(out, "# {key}: {value}").expect("writing to a String");
    }
    let width = rows.iter().map(|r| r.values.len()).max().unwrap_or(0);
    out.push_str("label");
    for t in 0..width {
        write!(out, ",{t}").expect("writing to a String");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row.label);
        for v in &row.values {
            write!(out, ",{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_series_csv(path: impl AsRef<Path>, comments: &[(&str, String)], rows: &[CsvRow]) -> Result<()> {
    fs::write(path, format_series_csv(comments, rows))?;
    Ok(())
}

/// Reads a file written by [`write_series_csv`].
pub fn read_series_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !seen_header {
            seen_header = true;
            if line.split(',').next() == Some("label") {
                continue;
            }
        }
        let mut fields = line.split(',');
        let label = fields.next().unwrap_or_default().to_string();
        let values = fields
            .map(|f| f.trim().parse::<f64>().map_err(|_| parse_err(idx + 1, format!("'{f}' is not a number"))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(CsvRow { label, values });
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(rows)
}
