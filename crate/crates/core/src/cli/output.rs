//! JSON and CSV emission.

use std::io::Write;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::padic::ExactRational;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One invocation's output sink.
pub(crate) struct Output<'a> {
    pub format: Format,
    pub sink: &'a mut dyn Write,
}

impl Output<'_> {
    /// A single top-level object carrying `schema_version` and `command`.
    pub fn json(&mut self, command: &str, body: &impl Serialize) -> std::io::Result<()> {
        let mut value = serde_json::to_value(body).map_err(std::io::Error::other)?;
        let object = match value.as_object_mut() {
            Some(object) => object,
            None => unreachable!("command bodies serialize to objects"),
        };
        object.insert("schema_version".into(), SCHEMA_VERSION.into());
        object.insert("command".into(), command.into());
        serde_json::to_writer_pretty(&mut *self.sink, &value).map_err(std::io::Error::other)?;
        writeln!(self.sink)
    }

    pub fn csv(&mut self, header: &[&str], rows: &[Vec<String>]) -> std::io::Result<()> {
        let mut writer = csv::Writer::from_writer(&mut *self.sink);
        writer.write_record(header)?;
        for row in rows {
            writer.write_record(row)?;
        }
        writer.flush()
    }
}

pub(crate) fn fraction(r: &ExactRational) -> String {
    crate::discrepancy::format_fraction(r)
}

/// Decimal rendering for the `*_approx` columns.
pub(crate) fn approx(r: &ExactRational) -> String {
    r.to_f64().map_or_else(String::new, decimal)
}

pub(crate) fn decimal(x: f64) -> String {
    format!("{x:.12}")
}
