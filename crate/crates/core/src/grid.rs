//! Grid specifications and the rectangular `Delta` grid written by the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Inclusive uniform grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidGrid("count must be positive".into()));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        Ok(Self { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.start.min(self.stop)
    }

    pub fn max(&self) -> f64 {
        self.start.max(self.stop)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidGrid(format!("expected start:stop:count, got '{s}'")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidGrid(format!("bad number '{p}' in '{s}'")))
        };
        let count = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidGrid(format!("bad count '{}' in '{s}'", parts[2])))?;
        GridSpec::new(num(parts[0])?, num(parts[1])?, count)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

/// Row-major grid of `Delta` values over `axis1 x axis2`.
///
/// Flagged cells (divergent partition function) hold `NaN` in memory and are
/// written as `null` in JSON and as an empty field in CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaGrid {
    pub axis1_name: String,
    pub axis2_name: String,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Vec<f64>,
    #[serde(serialize_with = "nan_as_null", deserialize_with = "null_as_nan")]
    pub cells: Vec<f64>,
    /// For each axis1 row, the axis2 index of the smallest finite cell.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_argmin: Option<Vec<Option<usize>>>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

fn nan_as_null<S: Serializer>(cells: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(cells.iter().map(|&v| if v.is_finite() { Some(v) } else { None }))
}

fn null_as_nan<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<f64>, D::Error> {
    let raw: Vec<Option<f64>> = Vec::deserialize(d)?;
    Ok(raw.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
}

/// 17 significant digits, scientific notation, `.` separator.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

impl DeltaGrid {
    pub fn new(
        axis1_name: impl Into<String>,
        axis1_values: Vec<f64>,
        axis2_name: impl Into<String>,
        axis2_values: Vec<f64>,
        cells: Vec<f64>,
    ) -> Result<Self> {
        if cells.len() != axis1_values.len() * axis2_values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} cells for a {}x{} grid",
                cells.len(),
                axis1_values.len(),
                axis2_values.len()
            )));
        }
        Ok(Self {
            axis1_name: axis1_name.into(),
            axis2_name: axis2_name.into(),
            axis1_values,
            axis2_values,
            cells,
            row_argmin: None,
            metadata: BTreeMap::new(),
        })
    }

    pub fn rows(&self) -> usize {
        self.axis1_values.len()
    }

    pub fn cols(&self) -> usize {
        self.axis2_values.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.cells[i * self.cols()..(i + 1) * self.cols()]
    }

    pub fn flagged_count(&self) -> usize {
        self.cells.iter().filter(|v| !v.is_finite()).count()
    }

    pub fn all_flagged(&self) -> bool {
        self.flagged_count() == self.cells.len()
    }

    /// Indices `(i, j)` of the finite cell minimising `key(cell)`.
    pub fn argmin_by<F: Fn(f64) -> f64>(&self, key: F) -> Option<(usize, usize)> {
        let mut best: Option<(usize, f64)> = None;
        for (idx, &v) in self.cells.iter().enumerate() {
            if !v.is_finite() {
                continue;
            }
            let k = key(v);
            if best.is_none_or(|(_, b)| k < b) {
                best = Some((idx, k));
            }
        }
        best.map(|(idx, _)| (idx / self.cols(), idx % self.cols()))
    }

    pub fn compute_row_argmin(&self) -> Vec<Option<usize>> {
        (0..self.rows())
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| v.is_finite())
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .map(|(j, _)| j)
            })
            .collect()
    }

    /// CSV with one line per cell in row-major order.
    ///
    /// `axis2_first` swaps the first two columns; when `row_argmin` is set a
    /// trailing `is_row_argmin` column marks the minimum of each row.
    pub fn to_csv(&self, axis2_first: bool) -> String {
        let mut out = String::new();
        let (c1, c2) = if axis2_first {
            (&self.axis2_name, &self.axis1_name)
        } else {
            (&self.axis1_name, &self.axis2_name)
        };
        out.push_str(c1);
        out.push(',');
        out.push_str(c2);
        out.push_str(",delta");
        if self.row_argmin.is_some() {
            out.push_str(",is_row_argmin");
        }
        out.push('\n');
        for (i, &x1) in self.axis1_values.iter().enumerate() {
            for (j, &x2) in self.axis2_values.iter().enumerate() {
                let (a, b) = if axis2_first { (x2, x1) } else { (x1, x2) };
                let v = self.get(i, j);
                let cell = if v.is_finite() { format_number(v) } else { String::new() };
                let _ = write!(out, "{},{},{}", format_number(a), format_number(b), cell);
                if let Some(marks) = &self.row_argmin {
                    let flag = u8::from(marks[i] == Some(j));
                    let _ = write!(out, ",{flag}");
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("grid serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: DeltaGrid = serde_json::from_str(text).map_err(|e| Error::InvalidGrid(format!("json: {e}")))?;
        if g.cells.len() != g.rows() * g.cols() {
            return Err(Error::InvalidGrid("cell count does not match axes".into()));
        }
        Ok(g)
    }
}
