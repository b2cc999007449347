//! Multi-cycle training and evaluation of the configured model variants.

use std::path::PathBuf;

use rayon::prelude::*;
use tnfin_core::cso::train_tnfin_cso_observed;
use tnfin_core::glcm::PreprocessConfig;
use tnfin_core::rng::{derive_key, substream};
use tnfin_core::scaling::MinMaxScaler;
use tnfin_core::stats::{confusion, decide_class, metrics, Metric};
use tnfin_core::tnfin::train_gd_observed;
use tnfin_core::{Layout, Sample, TnfinNetwork};

use crate::config::{DataSource, ExperimentConfig, Variant};
use crate::dataset::{cap_samples, read_feature_csv, split, FeatureTable};
use crate::error::{PipelineError, Result};
use crate::featurize::{featurize_dir, FeaturizeConfig};
use crate::format::exact;
use crate::report::{self, MetricTable};

/// Target range of the consequent initialization; slightly wider than the
/// 0/1 one-vs-rest targets so the network can saturate.
pub const TARGET_RANGE: (f64, f64) = (-0.25, 1.25);

const TAG_INIT: u64 = 0x1217;
const TAG_TRAIN: u64 = 0x7A41;

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub variant: Variant,
    pub cycle: usize,
    /// 0 is the untrained network.
    pub iteration: usize,
    pub train_mse: f64,
    pub test_mse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub metrics: MetricTable,
    /// Class-averaged MSE curves of every (variant, cycle).
    pub curves: Vec<CurvePoint>,
    /// Test residuals `T - O` of every class network, pooled over cycles.
    pub residuals: Vec<f64>,
    /// Variant whose residuals are pooled.
    pub residual_variant: Variant,
    /// Metrics reported as 0 because their denominator was 0.
    pub warnings: Vec<String>,
}

impl ExperimentReport {
    pub fn variant_index(&self, v: Variant) -> Option<usize> {
        self.metrics.variant_index(v.name())
    }

    /// Class-averaged curve of one (variant, cycle).
    pub fn curve(&self, variant: Variant, cycle: usize) -> Vec<&CurvePoint> {
        self.curves
            .iter()
            .filter(|p| p.variant == variant && p.cycle == cycle)
            .collect()
    }
}

/// Reads or featurizes the configured source, optionally binarizes it and
/// applies the stratified sample cap.
pub fn load_dataset(config: &ExperimentConfig) -> Result<FeatureTable> {
    let table = match &config.source {
        DataSource::FeatureCsv(p) => read_feature_csv(p)?,
        DataSource::ImageDir(p) => featurize_dir(
            p,
            &FeaturizeConfig {
                preprocess: PreprocessConfig {
                    side: config.image_side,
                    levels: config.gray_levels,
                },
                offset: config.glcm_offset,
            },
        )?,
    };
    let table = match &config.binary_positive {
        Some(pos) => table.binarize(pos)?,
        None => table,
    };
    if table.class_count() < 2 {
        return Err(PipelineError::Data(
            "dataset must contain at least 2 classes".into(),
        ));
    }
    Ok(cap_samples(&table, config.sample_cap, config.seed))
}

/// Scaled train/test data and starting networks of one cycle.
struct CyclePlan {
    train: Vec<Vec<f64>>,
    train_labels: Vec<usize>,
    test: Vec<Vec<f64>>,
    test_labels: Vec<usize>,
    /// One untrained network per class, shared by every variant.
    initial: Vec<TnfinNetwork>,
}

fn plan_cycle(table: &FeatureTable, config: &ExperimentConfig, cycle: usize) -> Result<CyclePlan> {
    let s = split(table, config.train_fraction, config.seed, cycle)?;
    let raw =
        |idx: &[usize]| -> Vec<Vec<f64>> { idx.iter().map(|&i| table.rows[i].to_vec()).collect() };
    let (mut train, mut test) = (raw(&s.train), raw(&s.test));
    let core = |e| PipelineError::from_core(&format!("cycle {cycle}"), e);
    let scaler = MinMaxScaler::fit(&train).map_err(core)?;
    let ranges = if config.scale_features {
        for row in train.iter_mut().chain(test.iter_mut()) {
            *row = scaler.transform(row).map_err(core)?;
        }
        MinMaxScaler::fit(&train).map_err(core)?.ranges().to_vec()
    } else {
        scaler.ranges().to_vec()
    };
    let layout =
        Layout::new(ranges.len(), config.mfs_per_input, ranges, TARGET_RANGE).map_err(core)?;
    let initial = (0..table.class_count())
        .map(|k| {
            TnfinNetwork::initialize(
                layout.clone(),
                &mut substream(config.seed, &[TAG_INIT, cycle as u64, k as u64]),
            )
            .map_err(core)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CyclePlan {
        train,
        train_labels: s.train.iter().map(|&i| table.labels[i]).collect(),
        test,
        test_labels: s.test.iter().map(|&i| table.labels[i]).collect(),
        initial,
    })
}

fn one_vs_rest(rows: &[Vec<f64>], labels: &[usize], class: usize) -> Vec<Sample> {
    rows.iter()
        .zip(labels)
        .map(|(r, &l)| Sample::new(r.clone(), if l == class { 1.0 } else { 0.0 }))
        .collect()
}

/// Mean squared error (twice the mean half-squared loss).
fn mse(net: &TnfinNetwork, data: &[Sample]) -> f64 {
    net.mean_loss(data).map_or(f64::NAN, |l| 2.0 * l)
}

struct JobOutput {
    test_outputs: Vec<f64>,
    train_curve: Vec<f64>,
    test_curve: Vec<f64>,
}

fn run_job(
    config: &ExperimentConfig,
    plan: &CyclePlan,
    cycle: usize,
    variant: Variant,
    class: usize,
) -> Result<JobOutput> {
    let train = one_vs_rest(&plan.train, &plan.train_labels, class);
    let test = one_vs_rest(&plan.test, &plan.test_labels, class);
    let init = &plan.initial[class];
    let mut train_curve = vec![mse(init, &train)];
    let mut test_curve = vec![mse(init, &test)];
    let mut record = |net: &TnfinNetwork, loss: f64| {
        train_curve.push(2.0 * loss / train.len() as f64);
        test_curve.push(mse(net, &test));
    };
    let trained = match variant {
        Variant::Gd => {
            let epochs = config.resolved_gd_epochs(init.layout().param_count());
            train_gd_observed(
                init,
                &train,
                config.gd_learning_rate,
                epochs,
                |_, net, loss| record(net, loss),
            )?
            .0
        }
        Variant::CsoConstant | Variant::CsoAdaptive => {
            let v = Variant::ALL
                .iter()
                .position(|x| *x == variant)
                .expect("listed") as u64;
            let seed = derive_key(config.seed, &[TAG_TRAIN, cycle as u64, v, class as u64]);
            let cso = config.cso_for(variant, seed);
            train_tnfin_cso_observed(init, &train, &cso, |_, net, loss| record(net, loss))?.0
        }
    };
    let test_outputs = test
        .iter()
        .map(|s| trained.output(&s.features))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if test_curve.iter().any(|v| !v.is_finite()) {
        return Err(tnfin_core::Error::Evaluation("test loss is not finite").into());
    }
    Ok(JobOutput {
        test_outputs,
        train_curve,
        test_curve,
    })
}

/// Trains and evaluates every (cycle, variant, class) network. Jobs run in
/// parallel; each draws from its own RNG substream, so the report does not
/// depend on scheduling.
pub fn run_experiment(config: &ExperimentConfig, table: &FeatureTable) -> Result<ExperimentReport> {
    config.validate()?;
    let classes = table.class_count();
    let plans = (0..config.cycles)
        .map(|c| plan_cycle(table, config, c))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize, usize)> = (0..config.cycles)
        .flat_map(|c| {
            (0..config.variants.len()).flat_map(move |v| (0..classes).map(move |k| (c, v, k)))
        })
        .collect();
    let results: Vec<Result<JobOutput>> = jobs
        .par_iter()
        .map(|&(c, v, k)| {
            let variant = config.variants[v];
            run_job(config, &plans[c], c, variant, k).map_err(|e| {
                let tag = format!(
                    "cycle {c}, variant {}, class {}",
                    variant.name(),
                    table.class_names[k]
                );
                match e {
                    PipelineError::Numeric(m) => PipelineError::Numeric(format!("{tag}: {m}")),
                    PipelineError::Data(m) => PipelineError::Data(format!("{tag}: {m}")),
                    PipelineError::Config(m) => PipelineError::Config(format!("{tag}: {m}")),
                    other => other,
                }
            })
        })
        .collect();
    let outputs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let variant_names = config
        .variants
        .iter()
        .map(|v| v.name().to_string())
        .collect();
    let mut table_out = MetricTable::new(variant_names, table.class_names.clone(), config.cycles);
    let residual_variant = if config.variants.contains(&Variant::CsoAdaptive) {
        Variant::CsoAdaptive
    } else {
        config.variants[0]
    };
    let mut curves = Vec::new();
    let mut residuals = Vec::new();
    let mut warnings = Vec::new();
    let mut chunks = outputs.chunks_exact(classes);
    for (c, plan) in plans.iter().enumerate() {
        for (v, &variant) in config.variants.iter().enumerate() {
            let out = chunks.next().expect("one chunk per (cycle, variant)");
            let predicted = (0..plan.test.len())
                .map(|i| decide_class(&out.iter().map(|o| o.test_outputs[i]).collect::<Vec<_>>()))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| {
                    PipelineError::from_core(&format!("cycle {c}, variant {}", variant.name()), e)
                })?;
            for (k, job) in out.iter().enumerate() {
                let report = metrics(&confusion(&predicted, &plan.test_labels, k)?);
                for d in &report.degenerate {
                    warnings.push(format!(
                        "cycle {c}, variant {}, class {}: {} undefined (0/0), reported as 0",
                        variant.name(),
                        table.class_names[k],
                        d.name()
                    ));
                }
                let m = report.values;
                for metric in Metric::ALL {
                    table_out.set(v, c, k, metric, m.get(metric));
                }
                if variant == residual_variant {
                    residuals.extend(
                        job.test_outputs
                            .iter()
                            .zip(&plan.test_labels)
                            .map(|(o, &l)| f64::from(u8::from(l == k)) - o),
                    );
                }
            }
            let len = out[0].train_curve.len();
            for it in 0..len {
                let avg = |f: fn(&JobOutput) -> &Vec<f64>| {
                    out.iter().map(|o| f(o)[it]).sum::<f64>() / classes as f64
                };
                curves.push(CurvePoint {
                    variant,
                    cycle: c,
                    iteration: it,
                    train_mse: avg(|o| &o.train_curve),
                    test_mse: avg(|o| &o.test_curve),
                });
            }
        }
    }
    Ok(ExperimentReport {
        metrics: table_out,
        curves,
        residuals,
        residual_variant,
        warnings,
    })
}

pub fn curves_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("variant,cycle,iteration,train_mse,test_mse\n");
    for p in &report.curves {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.variant.name(),
            p.cycle,
            p.iteration,
            exact(p.train_mse),
            exact(p.test_mse)
        ));
    }
    out
}

/// Every artifact of a run as `(file name, contents)`.
pub fn artifacts(
    config: &ExperimentConfig,
    report: &ExperimentReport,
) -> Vec<(&'static str, String)> {
    let mut files = report::metric_files(&report.metrics);
    files.push((report::CYCLES_FILE, report::cycles_csv(&report.metrics)));
    files.push((report::CURVES_FILE, curves_csv(report)));
    files.push((report::HIST_FILE, report::histogram_csv(&report.residuals)));
    files.push((report::CONFIG_ECHO_FILE, config.echo()));
    files
}

/// Checks the output directory, loads the data, runs every cycle and writes
/// the artifacts. Returns the report and the written paths.
pub fn run_and_emit(config: &ExperimentConfig) -> Result<(ExperimentReport, Vec<PathBuf>)> {
    config.validate()?;
    report::ensure_writable(&config.output_dir)?;
    let table = load_dataset(config)?;
    let report = run_experiment(config, &table)?;
    let written = report::write_all(&config.output_dir, &artifacts(config, &report))?;
    Ok((report, written))
}
