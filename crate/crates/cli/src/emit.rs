//! Serialization of reports and tables.

use anyhow::Result;
use flopgw::givental::genus_one::GenusOneTable;
use flopgw::verify::{Check, Report};

use crate::config::Format;

fn params_text(c: &Check) -> String {
    c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn emit_report(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => csv_bytes(
            &["id", "anchor", "params", "status", "residual"],
            report.entries.iter().map(|c| {
                vec![
                    c.id.clone(),
                    c.anchor.clone(),
                    params_text(c),
                    serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
                    c.residual.clone(),
                ]
            }),
        ),
        Format::Text => {
            let mut s = String::new();
            for c in &report.entries {
                let mark = if c.passed() { '✓' } else { '✗' };
                s.push_str(&format!("{mark} {} [{}] {}: {}\n", c.id, c.anchor, params_text(c), c.residual));
            }
            let passed = report.entries.iter().filter(|c| c.passed()).count();
            s.push_str(&format!("{}: {passed}/{} passed", report.suite, report.entries.len()));
            if let Some(ms) = report.timing_ms {
                s.push_str(&format!(" in {ms} ms"));
            }
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit_tables(tables: &[GenusOneTable], format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(tables)? + "\n"),
        Format::Csv => {
            // a single r keeps the plain two-column layout
            if let [t] = tables {
                csv_bytes(&["d", "invariant"], t.rows.iter().map(|row| vec![row.degree.to_string(), fmt_rat(&row.value)]))
            } else {
                csv_bytes(
                    &["r", "d", "invariant"],
                    tables.iter().flat_map(|t| {
                        t.rows.iter().map(move |row| vec![t.r.to_string(), row.degree.to_string(), fmt_rat(&row.value)])
                    }),
                )
            }
        }
        Format::Text => {
            let mut s = String::new();
            for t in tables {
                for row in &t.rows {
                    s.push_str(&format!("r={} d={} {}\n", t.r, row.degree, fmt_rat(&row.value)));
                }
            }
            Ok(s)
        }
    }
}

fn fmt_rat(x: &flopgw::algebra::Rational) -> String {
    flopgw::algebra::rational::display_rational(x)
}
