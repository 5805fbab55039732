//! Flat report records and the json-lines / csv writers.
//!
//! One record per comparison, fields in a fixed order shared by both
//! formats, so a stream is greppable and re-parsable losslessly.

use std::io::Write;

use heinzlab::suite::InequalityReport;
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct FlatRecord {
    pub id: String,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub ladder_n: u32,
    pub ladder_m: u32,
    pub r0: f64,
    pub norm: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub tol_used: f64,
    pub order: usize,
    pub seed: u64,
    pub cond_cap: f64,
    pub x_kind: String,
}

impl From<&InequalityReport> for FlatRecord {
    fn from(r: &InequalityReport) -> Self {
        FlatRecord {
            id: r.id.clone(),
            nu: r.params.nu,
            alpha: r.params.alpha,
            beta: r.params.beta,
            ladder_n: r.params.ladder_n,
            ladder_m: r.params.ladder_m,
            r0: r.params.r0(),
            norm: r.norm.clone(),
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            pass: r.pass,
            tol_used: r.tol_used,
            order: r.instance.order,
            seed: r.instance.seed,
            cond_cap: r.instance.cond_cap,
            x_kind: r.instance.x_kind.to_string(),
        }
    }
}

pub const CSV_HEADER: &str = "id,nu,alpha,beta,ladder_n,ladder_m,r0,norm,lhs,rhs,margin,pass,\
                              tol_used,order,seed,cond_cap,x_kind";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json-lines" | "jsonl" => Ok(OutputFormat::JsonLines),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(CliError::usage(format!(
                "unknown format '{other}' (expected json-lines or csv)"
            ))),
        }
    }
}

/// Streams records in one of the two formats, emitting the csv header once.
pub struct RecordWriter<W: Write> {
    sink: W,
    format: OutputFormat,
    header_written: bool,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(sink: W, format: OutputFormat) -> Self {
        RecordWriter {
            sink,
            format,
            header_written: false,
        }
    }

    pub fn write(&mut self, record: &FlatRecord) -> Result<(), CliError> {
        match self.format {
            OutputFormat::JsonLines => {
                let line = serde_json::to_string(record)
                    .map_err(|e| CliError::usage(format!("serialization failed: {e}")))?;
                writeln!(self.sink, "{line}").map_err(CliError::io)?;
            }
            OutputFormat::Csv => {
                if !self.header_written {
                    writeln!(self.sink, "{CSV_HEADER}").map_err(CliError::io)?;
                    self.header_written = true;
                }
                writeln!(
                    self.sink,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    record.id,
                    record.nu,
                    record.alpha,
                    record.beta,
                    record.ladder_n,
                    record.ladder_m,
                    record.r0,
                    record.norm,
                    record.lhs,
                    record.rhs,
                    record.margin,
                    record.pass,
                    record.tol_used,
                    record.order,
                    record.seed,
                    record.cond_cap,
                    record.x_kind
                )
                .map_err(CliError::io)?;
            }
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), CliError> {
        self.sink.flush().map_err(CliError::io)
    }
}
