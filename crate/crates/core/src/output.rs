//! Plot-ready tables and metadata.
//!
//! CSV files have a header line, `.` as decimal separator and every number
//! written in scientific notation with 17 significant digits (`{:.16e}`), so
//! that repeated runs with a fixed seed are byte-identical.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::fieldgen::RNG_ALGORITHM;

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// A named numeric table with a frozen column schema.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Optional leading text column: (header, one label per row).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<(String, Vec<String>)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
            labels: None,
        }
    }

    /// A table whose first column holds text labels.
    pub fn labeled<S: Into<String>>(
        label_header: &str,
        columns: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            labels: Some((label_header.to_string(), Vec::new())),
            ..Self::new(columns)
        }
    }

    pub fn push_labeled(&mut self, label: impl Into<String>, row: Vec<f64>) {
        self.labels
            .as_mut()
            .expect("table was built with Table::labeled")
            .1
            .push(label.into());
        self.push(row);
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let header = self.labels.iter().map(|(h, _)| h.as_str());
        w.write_record(header.chain(self.columns.iter().map(String::as_str)))?;
        for (i, row) in self.rows.iter().enumerate() {
            let label = self.labels.iter().map(|(_, l)| l[i].clone());
            w.write_record(label.chain(row.iter().map(|&v| format_number(v))))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is ascii"))
    }
}

/// Run metadata attached to every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub version: &'static str,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub rng: &'static str,
    /// Quantity name → what it is.
    pub labels: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new(command: impl Into<String>, config: serde_json::Value, seed: Option<u64>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config,
            seed,
            rng: RNG_ALGORITHM,
            labels: BTreeMap::new(),
        }
    }

    pub fn label(mut self, quantity: &str, description: &str) -> Self {
        self.labels
            .insert(quantity.to_string(), description.to_string());
        self
    }
}
