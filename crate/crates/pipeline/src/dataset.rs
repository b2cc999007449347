//! Labeled feature tables: CSV IO, sample capping and stratified splits.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::seq::{index, SliceRandom};
use tnfin_core::glcm::FEATURE_NAMES;
use tnfin_core::rng::substream;

use crate::error::{PipelineError, Result};
use crate::format::significant;

pub const FEATURE_COUNT: usize = 6;

const TAG_CAP: u64 = 0xCA9;
const TAG_SPLIT: u64 = 0x5B1;

/// Feature rows with class indices into `class_names`.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub class_names: Vec<String>,
    pub rows: Vec<[f64; FEATURE_COUNT]>,
    pub labels: Vec<usize>,
}

impl FeatureTable {
    /// Builds a table from string labels; classes are indexed in
    /// lexicographic name order.
    pub fn from_named(rows: Vec<[f64; FEATURE_COUNT]>, names: &[String]) -> Self {
        let mut class_names: Vec<String> = names.to_vec();
        class_names.sort();
        class_names.dedup();
        let labels = names
            .iter()
            .map(|n| class_names.binary_search(n).expect("name is present"))
            .collect();
        Self {
            class_names,
            rows,
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Indices of the rows of each class, in table order.
    pub fn class_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.class_count()];
        for (i, &l) in self.labels.iter().enumerate() {
            members[l].push(i);
        }
        members
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            class_names: self.class_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i]).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Collapses every class except `positive` into one `rest` class.
    pub fn binarize(&self, positive: &str) -> Result<Self> {
        let pos = self
            .class_names
            .iter()
            .position(|c| c == positive)
            .ok_or_else(|| {
                PipelineError::Config(format!("binary_positive class `{positive}` not in dataset"))
            })?;
        let names: Vec<String> = self
            .labels
            .iter()
            .map(|&l| {
                if l == pos {
                    positive.to_string()
                } else {
                    format!("not-{positive}")
                }
            })
            .collect();
        Ok(Self::from_named(self.rows.clone(), &names))
    }
}

pub fn csv_header() -> String {
    let mut h = FEATURE_NAMES.join(",");
    h.push_str(",label");
    h
}

/// Writes the feature CSV: fixed header, 10 significant digits, LF endings.
pub fn write_feature_csv(
    path: &Path,
    rows: &[[f64; FEATURE_COUNT]],
    labels: &[String],
) -> Result<()> {
    let mut out = String::new();
    out.push_str(&csv_header());
    out.push('\n');
    for (row, label) in rows.iter().zip(labels) {
        for v in row {
            out.push_str(&significant(*v, 10));
            out.push(',');
        }
        out.push_str(label);
        out.push('\n');
    }
    let mut f = fs::File::create(path).map_err(|e| PipelineError::io(path, e))?;
    f.write_all(out.as_bytes())
        .map_err(|e| PipelineError::io(path, e))
}

/// Reads a feature CSV written by [`write_feature_csv`].
pub fn read_feature_csv(path: &Path) -> Result<FeatureTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != csv_header() {
        return Err(PipelineError::Data(format!(
            "{}: unknown header `{header}`, expected `{}`",
            path.display(),
            csv_header()
        )));
    }
    let mut rows = Vec::new();
    let mut names = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row_no = i + 2;
        let record = record
            .map_err(|e| PipelineError::Data(format!("{}: row {row_no}: {e}", path.display())))?;
        if record.len() != FEATURE_COUNT + 1 {
            return Err(PipelineError::Data(format!(
                "{}: row {row_no}: expected {} fields, found {}",
                path.display(),
                FEATURE_COUNT + 1,
                record.len()
            )));
        }
        let mut row = [0.0; FEATURE_COUNT];
        for (k, v) in row.iter_mut().enumerate() {
            *v = record[k]
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| {
                    PipelineError::Data(format!(
                        "{}: row {row_no}: non-numeric {} `{}`",
                        path.display(),
                        FEATURE_NAMES[k],
                        &record[k]
                    ))
                })?;
        }
        let label = record[FEATURE_COUNT].trim();
        if label.is_empty() {
            return Err(PipelineError::Data(format!(
                "{}: row {row_no}: empty label",
                path.display()
            )));
        }
        rows.push(row);
        names.push(label.to_string());
    }
    Ok(FeatureTable::from_named(rows, &names))
}

/// Per-class quotas summing to `cap`, proportional to class sizes
/// (largest remainder, ties to the lower class index).
fn quotas(sizes: &[usize], cap: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut q: Vec<usize> = sizes.iter().map(|&n| n * cap / total).collect();
    let mut rest = cap - q.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(sizes[c] * cap % total), c));
    for c in order {
        if rest == 0 {
            break;
        }
        if q[c] < sizes[c] {
            q[c] += 1;
            rest -= 1;
        }
    }
    q
}

/// Class-stratified seeded subsample of at most `cap` rows; original row
/// order is kept.
pub fn cap_samples(table: &FeatureTable, cap: usize, seed: u64) -> FeatureTable {
    if table.len() <= cap {
        return table.clone();
    }
    let members = table.class_members();
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let quota = quotas(&sizes, cap);
    let mut keep = Vec::with_capacity(cap);
    for (c, idx) in members.iter().enumerate() {
        let mut rng = substream(seed, &[TAG_CAP, c as u64]);
        keep.extend(
            index::sample(&mut rng, idx.len(), quota[c])
                .into_iter()
                .map(|k| idx[k]),
        );
    }
    keep.sort_unstable();
    table.subset(&keep)
}

/// Row indices of a stratified train/test split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified shuffle split. Each class contributes
/// `round(fraction * size)` training rows, kept within `1..size` so both
/// sides see every class.
pub fn split(table: &FeatureTable, fraction: f64, seed: u64, cycle: usize) -> Result<Split> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(PipelineError::Config(format!(
            "train_fraction {fraction} must lie in (0, 1)"
        )));
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (c, mut idx) in table.class_members().into_iter().enumerate() {
        if idx.len() < 2 {
            return Err(PipelineError::Data(format!(
                "class `{}` has {} sample(s); stratified splitting needs at least 2",
                table.class_names[c],
                idx.len()
            )));
        }
        idx.shuffle(&mut substream(seed, &[TAG_SPLIT, cycle as u64, c as u64]));
        let n_train = ((fraction * idx.len() as f64).round() as usize).clamp(1, idx.len() - 1);
        train.extend_from_slice(&idx[..n_train]);
        test.extend_from_slice(&idx[n_train..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}
