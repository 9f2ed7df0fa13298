//! Rows of constrained-entanglement results, as CSV or JSON lines.

use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use ssr_core::entanglement::{AsymptoticsRow, Method};

use crate::error::{CliError, Result};
use crate::files::format_sig17;

pub const HEADER: [&str; 7] = [
    "n",
    "unconstrained_ebits",
    "sn_ebits",
    "su2_ebits",
    "sn_per_element",
    "duality_ratio",
    "method",
];

/// Columns that were not computed are `None`: empty in CSV, `null` in JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub n: usize,
    #[serde(serialize_with = "sig17")]
    pub unconstrained_ebits: f64,
    #[serde(serialize_with = "sig17_opt")]
    pub sn_ebits: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub su2_ebits: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub sn_per_element: Option<f64>,
    #[serde(serialize_with = "sig17_opt")]
    pub duality_ratio: Option<f64>,
    pub method: String,
}

fn sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    RawValue::from_string(format_sig17(*x))
        .map_err(serde::ser::Error::custom)?
        .serialize(s)
}

fn sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => sig17(v, s),
        None => s.serialize_none(),
    }
}

impl ReportRow {
    pub fn from_asymptotics(row: &AsymptoticsRow) -> Self {
        Self {
            n: row.n,
            unconstrained_ebits: row.n as f64,
            sn_ebits: Some(row.sn_ebits),
            su2_ebits: Some(row.su2_ebits),
            sn_per_element: Some(row.sn_per_element),
            duality_ratio: Some(row.duality_ratio),
            method: Method::ClosedForm.as_str().into(),
        }
    }

    fn csv_fields(&self) -> [String; 7] {
        let opt = |x: Option<f64>| x.map(format_sig17).unwrap_or_default();
        [
            self.n.to_string(),
            format_sig17(self.unconstrained_ebits),
            opt(self.sn_ebits),
            opt(self.su2_ebits),
            opt(self.sn_per_element),
            opt(self.duality_ratio),
            self.method.clone(),
        ]
    }

    fn from_csv_record(record: &csv::StringRecord) -> Result<Self> {
        if record.len() != HEADER.len() {
            return Err(CliError::Malformed(format!(
                "expected {} columns, found {}",
                HEADER.len(),
                record.len()
            )));
        }
        let float = |i: usize| -> Result<f64> {
            record[i]
                .parse::<f64>()
                .map_err(|e| CliError::Malformed(format!("column {}: {e}", HEADER[i])))
        };
        let opt = |i: usize| -> Result<Option<f64>> {
            if record[i].is_empty() {
                Ok(None)
            } else {
                float(i).map(Some)
            }
        };
        Ok(Self {
            n: record[0]
                .parse()
                .map_err(|e| CliError::Malformed(format!("column n: {e}")))?,
            unconstrained_ebits: float(1)?,
            sn_ebits: opt(2)?,
            su2_ebits: opt(3)?,
            sn_per_element: opt(4)?,
            duality_ratio: opt(5)?,
            method: record[6].to_string(),
        })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report rows always serialize")
    }

    pub fn parse_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| CliError::Malformed(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Header plus one line per row (CSV), or one JSON object per line.
pub fn render(rows: &[ReportRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            writer.write_record(HEADER).expect("in-memory write");
            for row in rows {
                writer.write_record(row.csv_fields()).expect("in-memory write");
            }
            String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("ASCII output")
        }
        Format::Json => rows.iter().map(|r| r.to_json_line() + "\n").collect(),
    }
}

pub fn parse(text: &str, format: Format) -> Result<Vec<ReportRow>> {
    match format {
        Format::Csv => {
            let mut reader = csv::Reader::from_reader(text.as_bytes());
            let header = reader.headers().map_err(|e| CliError::Malformed(e.to_string()))?;
            if header.iter().ne(HEADER) {
                return Err(CliError::Malformed(format!("unexpected header {header:?}")));
            }
            reader
                .records()
                .map(|r| {
                    let record = r.map_err(|e| CliError::Malformed(e.to_string()))?;
                    ReportRow::from_csv_record(&record)
                })
                .collect()
        }
        Format::Json => text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(ReportRow::parse_json_line)
            .collect(),
    }
}
