//! Flat output records written as JSON lines or CSV.

use potlab_core::geometry::SpherePoint;
use potlab_core::records::{json_number, json_point};
use potlab_core::solver::fmt_f64;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
    Point(SpherePoint),
    Bool(bool),
    Missing,
}

impl Cell {
    fn json(&self) -> String {
        match self {
            Cell::Num(x) => json_number(*x).get().to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Cell::Point(p) => json_point(*p).get().to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "null".into(),
        }
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_f64(*x),
            Cell::Num(_) | Cell::Missing => String::new(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Point(SpherePoint::Infinity) => "infinity".into(),
            Cell::Point(SpherePoint::Finite(z)) => format!("{} {}", fmt_f64(z.re), fmt_f64(z.im)),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// Ordered `(column, value)` pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(pub Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Record(Vec::new())
    }

    pub fn with(mut self, key: &'static str, value: Cell) -> Self {
        self.0.push((key, value));
        self
    }

    pub fn num(self, key: &'static str, x: f64) -> Self {
        self.with(key, Cell::Num(x))
    }

    pub fn text(self, key: &'static str, s: impl Into<String>) -> Self {
        self.with(key, Cell::Text(s.into()))
    }

    pub fn to_json(&self) -> String {
        let fields: Vec<String> = self
            .0
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key"), v.json()))
            .collect();
        format!("{{{}}}", fields.join(","))
    }
}

/// CSV text for records sharing the columns of the first one.
pub fn to_csv(records: &[Record]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = records.first() {
        w.write_record(first.0.iter().map(|(k, _)| *k))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    for r in records {
        w.write_record(r.0.iter().map(|(_, v)| v.csv()))
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json_lines(records: &[Record]) -> String {
    records.iter().map(|r| r.to_json() + "\n").collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv_agree_on_columns() {
        let r = Record::new()
            .num("radius", 2.0)
            .with("pole", Cell::Point(SpherePoint::Infinity))
            .num("bad", f64::NAN);
        assert_eq!(
            r.to_json(),
            r#"{"radius":2.0000000000000000e0,"pole":"infinity","bad":null}"#
        );
        let csv = to_csv(&[r]).unwrap();
        assert_eq!(csv, "radius,pole,bad\n2.0000000000000000e0,infinity,\n");
    }
}
