use std::fmt::Write as _;
use std::str::FromStr;

use super::{EvalError, EvalReport, Setting};

const METRICS: [&str; 3] = ["MRR", "P@1", "P@10"];
const ABSENT: &str = "--";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(format!("unknown report format {s:?}")),
        }
    }
}

/// A parsed report line: method label and the 12 metric cells.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub cells: [Option<f64>; 12],
}

fn csv_header() -> Vec<String> {
    let mut h = vec!["method".to_string()];
    for s in Setting::ALL {
        for m in METRICS {
            h.push(format!("{s} {m}"));
        }
    }
    h
}

/// One row per report, one column per setting × (MRR, P@1, P@10). Text uses
/// two decimals; CSV keeps full precision. Absent cells print as `--`.
pub fn render_report(reports: &[EvalReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(reports),
        ReportFormat::Csv => render_csv(reports),
    }
}

fn render_text(reports: &[EvalReport]) -> String {
    let width = reports
        .iter()
        .map(|r| r.label.chars().count())
        .max()
        .unwrap_or(0)
        .max(6);
    let cell = 6;
    let group = 3 * (cell + 1);
    let mut out = String::new();

    write!(out, "{:width$}", "").unwrap();
    for s in Setting::ALL {
        write!(out, " {:<w$}", s.as_str(), w = group - 1).unwrap();
    }
    out = out.trim_end().to_string();
    out.push('\n');

    write!(out, "{:width$}", "method").unwrap();
    for _ in Setting::ALL {
        for m in METRICS {
            write!(out, " {m:>cell$}").unwrap();
        }
    }
    out.push('\n');

    for r in reports {
        write!(out, "{:width$}", r.label).unwrap();
        for v in r.metric_row() {
            match v {
                Some(x) => write!(out, " {x:>cell$.2}").unwrap(),
                None => write!(out, " {ABSENT:>cell$}").unwrap(),
            }
        }
        out.push('\n');
    }
    out
}

fn render_csv(reports: &[EvalReport]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(csv_header()).unwrap();
    for r in reports {
        let mut rec = vec![r.label.clone()];
        rec.extend(
            r.metric_row()
                .iter()
                .map(|v| v.map_or(ABSENT.to_string(), |x| x.to_string())),
        );
        w.write_record(&rec).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Parses CSV written by [`render_report`].
pub fn parse_report_csv(text: &str) -> Result<Vec<ReportRow>, EvalError> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 1;
        let rec = rec.map_err(|e| EvalError::Malformed {
            line,
            reason: e.to_string(),
        })?;
        if i == 0 {
            if rec.iter().ne(csv_header().iter().map(String::as_str)) {
                return Err(EvalError::Malformed {
                    line,
                    reason: "unexpected header".into(),
                });
            }
            continue;
        }
        if rec.len() != 13 {
            return Err(EvalError::Malformed {
                line,
                reason: format!("expected 13 columns, found {}", rec.len()),
            });
        }
        let mut cells = [None; 12];
        for (c, field) in cells.iter_mut().zip(rec.iter().skip(1)) {
            if field != ABSENT {
                *c = Some(field.parse::<f64>().map_err(|_| EvalError::Malformed {
                    line,
                    reason: format!("bad number {field:?}"),
                })?);
            }
        }
        rows.push(ReportRow {
            label: rec[0].to_string(),
            cells,
        });
    }
    Ok(rows)
}
