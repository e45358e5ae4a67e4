//! Tabular figure data with lossless CSV and JSON encodings.
//!
//! A dataset is a row-major grid over its axes (last axis fastest). Every
//! column holds one value per grid point; a dataset without axes holds a
//! single row.
//!
//! CSV layout: one leading `#` line carrying the figure id, axis names,
//! scales and lengths, and the metadata as a JSON object, followed by an
//! RFC-4180 table whose first columns are the expanded axis coordinates.
//! Numbers are written with 17 significant digits.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub scale: AxisScale,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureDataset {
    pub figure_id: String,
    pub axes: Vec<Axis>,
    pub columns: Vec<Column>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CsvPreamble {
    figure_id: String,
    axes: Vec<CsvAxis>,
    metadata: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct CsvAxis {
    name: String,
    scale: AxisScale,
    len: usize,
}

fn fmt_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl FigureDataset {
    pub fn new(figure_id: impl Into<String>) -> Self {
        Self {
            figure_id: figure_id.into(),
            axes: Vec::new(),
            columns: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_axis(
        mut self,
        name: impl Into<String>,
        scale: AxisScale,
        values: Vec<f64>,
    ) -> Self {
        self.axes.push(Axis {
            name: name.into(),
            scale,
            values,
        });
        self
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.columns.push(Column {
            name: name.into(),
            values,
        });
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(String::as_str)
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta(key)?.parse().ok()
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.iter().find(|a| a.name == name)
    }

    /// Number of grid points (product of axis lengths).
    pub fn rows(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Checks equal column lengths, finite values, unique names and strictly
    /// monotone axes.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Dataset(format!("{}: {msg}", self.figure_id)));
        let mut names = std::collections::BTreeSet::new();
        for a in &self.axes {
            if !names.insert(a.name.as_str()) {
                return bad(format!("duplicate name `{}`", a.name));
            }
            if a.values.is_empty() {
                return bad(format!("axis `{}` is empty", a.name));
            }
            if a.values.iter().any(|v| !v.is_finite()) {
                return bad(format!("axis `{}` has non-finite values", a.name));
            }
            let up = a.values.windows(2).all(|w| w[1] > w[0]);
            let down = a.values.windows(2).all(|w| w[1] < w[0]);
            if !(up || down) {
                return bad(format!("axis `{}` is not strictly monotone", a.name));
            }
            if a.scale == AxisScale::Log && a.values.iter().any(|&v| v <= 0.0) {
                return bad(format!("log axis `{}` has nonpositive values", a.name));
            }
        }
        let rows = self.rows();
        for c in &self.columns {
            if !names.insert(c.name.as_str()) {
                return bad(format!("duplicate name `{}`", c.name));
            }
            if c.values.len() != rows {
                return bad(format!(
                    "column `{}` has {} values, grid has {rows}",
                    c.name,
                    c.values.len()
                ));
            }
            if let Some(v) = c.values.iter().find(|v| !v.is_finite()) {
                return bad(format!("column `{}` holds non-finite value {v}", c.name));
            }
        }
        Ok(())
    }

    /// Axis coordinates of grid row `row`.
    fn coordinates(&self, row: usize) -> Vec<f64> {
        let mut stride = self.rows();
        self.axes
            .iter()
            .map(|a| {
                stride /= a.values.len();
                a.values[(row / stride) % a.values.len()]
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        self.validate()?;
        let mut out = out;
        let preamble = CsvPreamble {
            figure_id: self.figure_id.clone(),
            axes: self
                .axes
                .iter()
                .map(|a| CsvAxis {
                    name: a.name.clone(),
                    scale: a.scale,
                    len: a.values.len(),
                })
                .collect(),
            metadata: self.metadata.clone(),
        };
        write!(out, "#{}\r\n", serde_json::to_string(&preamble)?)?;
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        let header: Vec<&str> = self
            .axes
            .iter()
            .map(|a| a.name.as_str())
            .chain(self.columns.iter().map(|c| c.name.as_str()))
            .collect();
        w.write_record(&header)?;
        for row in 0..self.rows() {
            let record: Vec<String> = self
                .coordinates(row)
                .into_iter()
                .chain(self.columns.iter().map(|c| c.values[row]))
                .map(fmt_number)
                .collect();
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Dataset(e.to_string()))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (first, rest) = text
            .split_once("\r\n")
            .or_else(|| text.split_once('\n'))
            .ok_or_else(|| Error::Dataset("missing CSV preamble".into()))?;
        let preamble: CsvPreamble = serde_json::from_str(
            first
                .strip_prefix('#')
                .ok_or_else(|| Error::Dataset("CSV preamble must start with '#'".into()))?,
        )?;
        let mut reader = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
        let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
        let n_axes = preamble.axes.len();
        if header.len() < n_axes {
            return Err(Error::Dataset("header shorter than axis list".into()));
        }
        for (a, h) in preamble.axes.iter().zip(&header) {
            if &a.name != h {
                return Err(Error::Dataset(format!(
                    "axis `{}` missing from header",
                    a.name
                )));
            }
        }
        let mut table: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
        for record in reader.records() {
            let record = record?;
            for (i, field) in record.iter().enumerate() {
                let v: f64 = field
                    .parse()
                    .map_err(|_| Error::Dataset(format!("bad number `{field}`")))?;
                table[i].push(v);
            }
        }
        let rows: usize = preamble.axes.iter().map(|a| a.len).product();
        if table.iter().any(|c| c.len() != rows) {
            return Err(Error::Dataset(format!("expected {rows} rows")));
        }
        let mut stride = rows;
        let axes = preamble
            .axes
            .iter()
            .zip(&table)
            .map(|(a, coords)| {
                stride /= a.len.max(1);
                Axis {
                    name: a.name.clone(),
                    scale: a.scale,
                    values: (0..a.len).map(|i| coords[i * stride]).collect(),
                }
            })
            .collect();
        let columns = header[n_axes..]
            .iter()
            .zip(table.into_iter().skip(n_axes))
            .map(|(name, values)| Column {
                name: name.clone(),
                values,
            })
            .collect();
        let ds = FigureDataset {
            figure_id: preamble.figure_id,
            axes,
            columns,
            metadata: preamble.metadata,
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn to_json_string(&self) -> Result<String> {
        self.validate()?;
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let ds: FigureDataset = serde_json::from_str(text)?;
        ds.validate()?;
        Ok(ds)
    }

    pub fn encode(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv_string(),
            Format::Json => self.to_json_string().map(|mut s| {
                s.push('\n');
                s
            }),
        }
    }

    pub fn decode(text: &str, format: Format) -> Result<Self> {
        match format {
            Format::Csv => Self::from_csv_str(text),
            Format::Json => Self::from_json_str(text),
        }
    }
}

/// `count` points from `lo` to `hi` inclusive, evenly spaced in log.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut out: Vec<f64> = (0..count)
                .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
                .collect();
            out[0] = lo;
            out[count - 1] = hi;
            out
        }
    }
}

/// `count` points from `lo` to `hi` inclusive, evenly spaced.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
