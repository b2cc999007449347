//! Per-feature min-max scaling fitted on training rows.

use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct MinMaxScaler {
    ranges: Vec<(f64, f64)>,
}

impl MinMaxScaler {
    /// Records the per-column minimum and maximum of `rows`.
    pub fn fit<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?.as_ref();
        let mut ranges: Vec<(f64, f64)> = first.iter().map(|&v| (v, v)).collect();
        for row in rows {
            let row = row.as_ref();
            if row.len() != ranges.len() {
                return Err(Error::Shape {
                    expected: ranges.len(),
                    found: row.len(),
                });
            }
            for (r, &v) in ranges.iter_mut().zip(row) {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter("feature value is not finite"));
                }
                r.0 = r.0.min(v);
                r.1 = r.1.max(v);
            }
        }
        Ok(Self { ranges })
    }

    pub fn from_ranges(ranges: Vec<(f64, f64)>) -> Self {
        Self { ranges }
    }

    pub fn ranges(&self) -> &[(f64, f64)] {
        &self.ranges
    }

    /// Maps each column to `(x - min) / (max - min)`; constant columns map to 0.
    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.ranges.len() {
            return Err(Error::Shape {
                expected: self.ranges.len(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(&self.ranges)
            .map(|(&v, &(lo, hi))| {
                if hi > lo {
                    (v - lo) / (hi - lo)
                } else {
                    v - lo
                }
            })
            .collect())
    }
}
