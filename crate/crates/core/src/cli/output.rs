use std::fs;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

use super::{Format, RunConfig};
use crate::ftvn::{CheckReport, Status};

/// One emitted item: its JSON form, its text line and the status it
/// contributes to the exit code, if any.
#[derive(Debug, Clone)]
pub struct Record {
    pub json: Value,
    pub text: String,
    pub status: Option<Status>,
}

impl Record {
    pub fn report(r: &CheckReport) -> Self {
        Self {
            json: to_value(r),
            text: r.text_line(),
            status: Some(r.status),
        }
    }

    pub fn value(v: &impl Serialize, text: String, status: Option<Status>) -> Self {
        Self {
            json: to_value(v),
            text,
            status,
        }
    }
}

pub(crate) fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Newline-delimited JSON or text on stdout; with `-o`, a JSON array or the
/// text lines in the file.
pub(crate) fn emit(config: &RunConfig, records: &[Record]) -> io::Result<()> {
    let body = match (config.format, &config.output_path) {
        (Format::Json, Some(_)) => {
            let items: Vec<&Value> = records.iter().map(|r| &r.json).collect();
            let mut s = serde_json::to_string_pretty(&items).map_err(io::Error::other)?;
            s.push('\n');
            s
        }
        (Format::Json, None) => records.iter().map(|r| format!("{}\n", r.json)).collect(),
        (Format::Text, _) => records.iter().map(|r| format!("{}\n", r.text)).collect(),
    };
    match &config.output_path {
        Some(path) => fs::write(path, body),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()
        }
    }
}

pub(crate) fn format_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}
