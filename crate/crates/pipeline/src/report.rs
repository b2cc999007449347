//! Aggregation, statistical comparison and CSV emission of experiment
//! results.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use tnfin_core::stats::{kruskal_wallis, mann_whitney_u, Metric};

use crate::error::{PipelineError, Result};
use crate::format::exact;

pub const HISTOGRAM_BINS: usize = 20;

pub const METRICS_FILE: &str = "metrics.csv";
pub const CYCLES_FILE: &str = "metrics_cycles.csv";
pub const KW_FILE: &str = "stats_kw.csv";
pub const MWU_FILE: &str = "stats_mwu.csv";
pub const CURVES_FILE: &str = "mse_curves.csv";
pub const HIST_FILE: &str = "error_hist.csv";
pub const CONFIG_ECHO_FILE: &str = "config_echo";

const NA: &str = "n/a";

/// Per-cycle metric values indexed by (variant, cycle, class, metric).
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub variants: Vec<String>,
    pub class_names: Vec<String>,
    pub cycles: usize,
    values: Vec<f64>,
}

fn metric_index(m: Metric) -> usize {
    Metric::ALL
        .iter()
        .position(|x| *x == m)
        .expect("metric listed in ALL")
}

impl MetricTable {
    pub fn new(variants: Vec<String>, class_names: Vec<String>, cycles: usize) -> Self {
        let len = variants.len() * cycles * class_names.len() * Metric::ALL.len();
        Self {
            variants,
            class_names,
            cycles,
            values: vec![f64::NAN; len],
        }
    }

    fn slot(&self, variant: usize, cycle: usize, class: usize, metric: Metric) -> usize {
        ((variant * self.cycles + cycle) * self.class_names.len() + class) * Metric::ALL.len()
            + metric_index(metric)
    }

    pub fn get(&self, variant: usize, cycle: usize, class: usize, metric: Metric) -> f64 {
        self.values[self.slot(variant, cycle, class, metric)]
    }

    pub fn set(&mut self, variant: usize, cycle: usize, class: usize, metric: Metric, value: f64) {
        let i = self.slot(variant, cycle, class, metric);
        self.values[i] = value;
    }

    /// Values of one (variant, class, metric) across cycles.
    pub fn series(&self, variant: usize, class: usize, metric: Metric) -> Vec<f64> {
        (0..self.cycles)
            .map(|c| self.get(variant, c, class, metric))
            .collect()
    }

    /// Per-cycle average over classes.
    pub fn macro_series(&self, variant: usize, metric: Metric) -> Vec<f64> {
        let k = self.class_names.len() as f64;
        (0..self.cycles)
            .map(|c| {
                (0..self.class_names.len())
                    .map(|j| self.get(variant, c, j, metric))
                    .sum::<f64>()
                    / k
            })
            .collect()
    }

    /// Mean over cycles and classes.
    pub fn overall_mean(&self, variant: usize, metric: Metric) -> f64 {
        mean(&self.macro_series(variant, metric))
    }

    pub fn variant_index(&self, name: &str) -> Option<usize> {
        self.variants.iter().position(|v| v == name)
    }
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n - 1 denominator); 0 for a single value.
pub fn sample_std(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}

/// `20` equal-width bins over `[min, max]` of `values`, as
/// `(bin_center, count)`. A zero-width range is widened to `v +- 0.5`.
pub fn histogram(values: &[f64]) -> Vec<(f64, usize)> {
    let (mut lo, mut hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if values.is_empty() {
        (lo, hi) = (0.0, 0.0);
    }
    if hi <= lo {
        (lo, hi) = (lo - 0.5, hi + 0.5);
    }
    let width = (hi - lo) / HISTOGRAM_BINS as f64;
    let mut counts = [0usize; HISTOGRAM_BINS];
    for &v in values {
        let b = (((v - lo) / width) as usize).min(HISTOGRAM_BINS - 1);
        counts[b] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(b, &n)| (lo + (b as f64 + 0.5) * width, n))
        .collect()
}

/// Kruskal-Wallis p-value across variants for every (class, metric);
/// `None` where the test is not defined.
pub fn kruskal_table(table: &MetricTable) -> Vec<Vec<Option<f64>>> {
    (0..table.class_names.len())
        .map(|class| {
            Metric::ALL
                .iter()
                .map(|&m| {
                    if table.variants.len() < 2 {
                        return None;
                    }
                    let groups: Vec<Vec<f64>> = (0..table.variants.len())
                        .map(|v| table.series(v, class, m))
                        .collect();
                    kruskal_wallis(&groups).ok().map(|r| r.p_value)
                })
                .collect()
        })
        .collect()
}

/// Pairwise Mann-Whitney p-values on per-cycle macro averages, indexed
/// `[metric][row][col]`; defined below the diagonal only.
pub fn mann_whitney_table(table: &MetricTable) -> Vec<Vec<Vec<Option<f64>>>> {
    let n = table.variants.len();
    Metric::ALL
        .iter()
        .map(|&m| {
            let series: Vec<Vec<f64>> = (0..n).map(|v| table.macro_series(v, m)).collect();
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            (j < i)
                                .then(|| {
                                    mann_whitney_u(&series[i], &series[j])
                                        .ok()
                                        .map(|r| r.p_value)
                                })
                                .flatten()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn cell(p: Option<f64>) -> String {
    p.map_or_else(|| NA.to_string(), exact)
}

pub fn metrics_csv(table: &MetricTable) -> String {
    let mut out = format!("class,metric,{}\n", table.variants.join(","));
    for (class, name) in table.class_names.iter().enumerate() {
        for m in Metric::ALL {
            let _ = write!(out, "{name},{}", m.name());
            for v in 0..table.variants.len() {
                let s = table.series(v, class, m);
                let _ = write!(out, ",{} ± {}", exact(mean(&s)), exact(sample_std(&s)));
            }
            out.push('\n');
        }
    }
    out
}

pub fn cycles_csv(table: &MetricTable) -> String {
    let mut out = String::from("variant,cycle,class,metric,value\n");
    for (v, variant) in table.variants.iter().enumerate() {
        for cycle in 0..table.cycles {
            for (class, name) in table.class_names.iter().enumerate() {
                for m in Metric::ALL {
                    let _ = writeln!(
                        out,
                        "{variant},{cycle},{name},{},{}",
                        m.name(),
                        exact(table.get(v, cycle, class, m))
                    );
                }
            }
        }
    }
    out
}

pub fn kruskal_csv(table: &MetricTable) -> String {
    let names: Vec<&str> = Metric::ALL.iter().map(Metric::name).collect();
    let mut out = format!("class,{}\n", names.join(","));
    for (class, row) in kruskal_table(table).iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|p| cell(*p)).collect();
        let _ = writeln!(out, "{},{}", table.class_names[class], cells.join(","));
    }
    out
}

pub fn mann_whitney_csv(table: &MetricTable) -> String {
    let mut out = format!("metric,model,{}\n", table.variants.join(","));
    for (m, rows) in Metric::ALL.iter().zip(mann_whitney_table(table)) {
        for (i, row) in rows.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, p)| {
                    if j < i {
                        cell(*p)
                    } else if j == i {
                        NA.to_string()
                    } else {
                        String::new()
                    }
                })
                .collect();
            let _ = writeln!(
                out,
                "{},{},{}",
                m.name(),
                table.variants[i],
                cells.join(",")
            );
        }
    }
    out
}

pub fn histogram_csv(residuals: &[f64]) -> String {
    let mut out = String::from("bin_center,count\n");
    for (center, count) in histogram(residuals) {
        let _ = writeln!(out, "{},{count}", exact(center));
    }
    out
}

/// Parses `metrics_cycles.csv` back into a table. Variants, classes and
/// cycles keep their order of first appearance.
pub fn parse_cycles_csv(text: &str) -> Result<MetricTable> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| PipelineError::Data(e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != ["variant", "cycle", "class", "metric", "value"] {
        return Err(PipelineError::Data(format!(
            "{CYCLES_FILE}: unexpected header"
        )));
    }
    let mut rows = Vec::new();
    let (mut variants, mut classes) = (Vec::<String>::new(), Vec::<String>::new());
    let mut cycles = 0;
    for (i, rec) in reader.records().enumerate() {
        let row_no = i + 2;
        let bad = |what: &str| PipelineError::Data(format!("{CYCLES_FILE}: row {row_no}: {what}"));
        let rec = rec.map_err(|e| bad(&e.to_string()))?;
        let cycle: usize = rec[1].parse().map_err(|_| bad("bad cycle"))?;
        let metric = Metric::ALL
            .into_iter()
            .find(|m| m.name() == &rec[3])
            .ok_or_else(|| bad("unknown metric"))?;
        let value: f64 = rec[4].parse().map_err(|_| bad("bad value"))?;
        for (list, name) in [(&mut variants, &rec[0]), (&mut classes, &rec[2])] {
            if !list.iter().any(|x| x == name) {
                list.push(name.to_string());
            }
        }
        cycles = cycles.max(cycle + 1);
        rows.push((rec[0].to_string(), cycle, rec[2].to_string(), metric, value));
    }
    let mut table = MetricTable::new(variants, classes, cycles);
    for (v, cycle, c, m, value) in rows {
        let vi = table.variant_index(&v).expect("collected");
        let ci = table
            .class_names
            .iter()
            .position(|x| *x == c)
            .expect("collected");
        table.set(vi, cycle, ci, m, value);
    }
    if table.values.iter().any(|v| v.is_nan()) {
        return Err(PipelineError::Data(format!(
            "{CYCLES_FILE}: missing (variant, cycle, class, metric) rows"
        )));
    }
    Ok(table)
}

/// Fails early when `dir` cannot be created or written to.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    let probe = dir.join(".write_probe");
    fs::write(&probe, b"").map_err(|e| PipelineError::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| PipelineError::io(&probe, e))
}

/// Writes every `(file name, contents)` pair into `dir`. If any write
/// fails, files already written by this call are removed.
pub fn write_all(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        if let Err(e) = fs::write(&path, contents) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(PipelineError::io(path, e));
        }
        written.push(path);
    }
    Ok(written)
}

/// The metric-derived artifacts, regenerable from `metrics_cycles.csv`.
pub fn metric_files(table: &MetricTable) -> Vec<(&'static str, String)> {
    vec![
        (METRICS_FILE, metrics_csv(table)),
        (KW_FILE, kruskal_csv(table)),
        (MWU_FILE, mann_whitney_csv(table)),
    ]
}
