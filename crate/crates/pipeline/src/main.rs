use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use tnfin_core::glcm::PreprocessConfig;
use tnfin_core::stats::Metric;
use tnfin_pipeline::config::{flag_name, read_config_file, resolve, KEYS};
use tnfin_pipeline::dataset::write_feature_csv;
use tnfin_pipeline::experiment::run_and_emit;
use tnfin_pipeline::featurize::{featurize_dir, FeaturizeConfig};
use tnfin_pipeline::report::{self, parse_cycles_csv};
use tnfin_pipeline::synth::{blobs, write_textures, BlobConfig};
use tnfin_pipeline::{PipelineError, Result};

fn cli() -> Command {
    let train = KEYS.iter().fold(
        Command::new("train")
            .about("Run the multi-cycle experiment described by a config file")
            .arg(
                Arg::new("config")
                    .short('c')
                    .long("config")
                    .value_parser(value_parser!(PathBuf)),
            ),
        |cmd, key| {
            cmd.arg(
                Arg::new(*key)
                    .long(flag_name(key))
                    .value_name("VALUE")
                    .help(format!("Override `{key}`")),
            )
        },
    );
    Command::new("tnfin")
        .about("Evolving Tsukamoto neuro-fuzzy classifiers on GLCM texture features")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(
            Command::new("featurize")
                .about("Extract GLCM features from <dir>/<class>/*.{png,jpg,jpeg}")
                .arg(
                    Arg::new("image_dir")
                        .required(true)
                        .value_parser(value_parser!(PathBuf)),
                )
                .arg(
                    Arg::new("output")
                        .short('o')
                        .long("output")
                        .required(true)
                        .value_parser(value_parser!(PathBuf)),
                )
                .arg(
                    Arg::new("image_side")
                        .long("image-side")
                        .default_value("224")
                        .value_parser(value_parser!(usize)),
                )
                .arg(
                    Arg::new("gray_levels")
                        .long("gray-levels")
                        .default_value("8")
                        .value_parser(value_parser!(usize)),
                )
                .arg(
                    Arg::new("glcm_offset")
                        .long("glcm-offset")
                        .default_value("0,1")
                        .allow_hyphen_values(true),
                ),
        )
        .subcommand(train)
        .subcommand(
            Command::new("evaluate")
                .about("Re-aggregate metrics_cycles.csv of a finished run into the summary tables")
                .arg(
                    Arg::new("run_dir")
                        .required(true)
                        .value_parser(value_parser!(PathBuf)),
                )
                .arg(
                    Arg::new("output")
                        .short('o')
                        .long("output")
                        .value_parser(value_parser!(PathBuf)),
                ),
        )
        .subcommand(
            Command::new("synth-data")
                .about("Generate synthetic datasets")
                .subcommand_required(true)
                .subcommand(
                    Command::new("blobs")
                        .about("3-class Gaussian blobs in feature space, written as a feature CSV")
                        .arg(
                            Arg::new("output")
                                .short('o')
                                .long("output")
                                .required(true)
                                .value_parser(value_parser!(PathBuf)),
                        )
                        .arg(
                            Arg::new("samples")
                                .long("samples")
                                .default_value("600")
                                .value_parser(value_parser!(usize)),
                        )
                        .arg(
                            Arg::new("separation")
                                .long("separation")
                                .default_value("2")
                                .value_parser(value_parser!(f64)),
                        )
                        .arg(
                            Arg::new("seed")
                                .long("seed")
                                .default_value("7")
                                .value_parser(value_parser!(u64)),
                        ),
                )
                .subcommand(
                    Command::new("textures")
                        .about("Constant, stripe and noise PNG textures in one folder per family")
                        .arg(
                            Arg::new("output")
                                .short('o')
                                .long("output")
                                .required(true)
                                .value_parser(value_parser!(PathBuf)),
                        )
                        .arg(
                            Arg::new("per_family")
                                .long("per-family")
                                .default_value("10")
                                .value_parser(value_parser!(usize)),
                        )
                        .arg(
                            Arg::new("side")
                                .long("side")
                                .default_value("32")
                                .value_parser(value_parser!(usize)),
                        )
                        .arg(
                            Arg::new("seed")
                                .long("seed")
                                .default_value("7")
                                .value_parser(value_parser!(u64)),
                        ),
                ),
        )
        .arg(
            Arg::new("quiet")
                .short('q')
                .long("quiet")
                .global(true)
                .action(ArgAction::SetTrue),
        )
}

fn path<'a>(m: &'a ArgMatches, id: &str) -> &'a Path {
    m.get_one::<PathBuf>(id).expect("required argument")
}

fn featurize(m: &ArgMatches) -> Result<String> {
    let offset = m.get_one::<String>("glcm_offset").expect("defaulted");
    let mut raw = BTreeMap::new();
    raw.insert("images".to_string(), "-".to_string());
    raw.insert("glcm_offset".to_string(), offset.clone());
    let glcm_offset = resolve(&raw)?.glcm_offset;
    let config = FeaturizeConfig {
        preprocess: PreprocessConfig {
            side: *m.get_one("image_side").expect("defaulted"),
            levels: *m.get_one("gray_levels").expect("defaulted"),
        },
        offset: glcm_offset,
    };
    if config.preprocess.side == 0 || !(2..=256).contains(&config.preprocess.levels) {
        return Err(PipelineError::Config(
            "image side must be positive and gray levels in 2..=256".into(),
        ));
    }
    let table = featurize_dir(path(m, "image_dir"), &config)?;
    let names: Vec<String> = table
        .labels
        .iter()
        .map(|&l| table.class_names[l].clone())
        .collect();
    let out = path(m, "output");
    write_feature_csv(out, &table.rows, &names)?;
    Ok(format!(
        "wrote {} feature rows ({} classes) to {}",
        table.len(),
        table.class_count(),
        out.display()
    ))
}

fn train(m: &ArgMatches) -> Result<String> {
    let mut raw = match m.get_one::<PathBuf>("config") {
        Some(p) => read_config_file(p)?,
        None => BTreeMap::new(),
    };
    for key in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            raw.insert(key.to_string(), v.clone());
        }
    }
    // a data source given on the command line replaces the file's
    if m.get_one::<String>("features").is_some() {
        raw.remove("images");
    } else if m.get_one::<String>("images").is_some() {
        raw.remove("features");
    }
    let config = resolve(&raw)?;
    let (report, written) = run_and_emit(&config)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let mut summary = format!(
        "wrote {} files to {}\n",
        written.len(),
        config.output_dir.display()
    );
    for (v, name) in report.metrics.variants.iter().enumerate() {
        summary.push_str(&format!(
            "{name}: mean accuracy {:.4}, mean F1 {:.4}\n",
            report.metrics.overall_mean(v, Metric::Accuracy),
            report.metrics.overall_mean(v, Metric::F1)
        ));
    }
    Ok(summary.trim_end().to_string())
}

fn evaluate(m: &ArgMatches) -> Result<String> {
    let run_dir = path(m, "run_dir");
    let out = m
        .get_one::<PathBuf>("output")
        .map_or(run_dir, |p| p.as_path());
    let src = run_dir.join(report::CYCLES_FILE);
    let text = fs::read_to_string(&src).map_err(|e| PipelineError::Io {
        path: src,
        source: e,
    })?;
    let table = parse_cycles_csv(&text)?;
    report::ensure_writable(out)?;
    let written = report::write_all(out, &report::metric_files(&table))?;
    Ok(format!(
        "wrote {} files to {}",
        written.len(),
        out.display()
    ))
}

fn synth(m: &ArgMatches) -> Result<String> {
    match m.subcommand() {
        Some(("blobs", m)) => {
            let config = BlobConfig {
                samples: *m.get_one("samples").expect("defaulted"),
                separation: *m.get_one("separation").expect("defaulted"),
                seed: *m.get_one("seed").expect("defaulted"),
            };
            if config.samples < 3 || !config.separation.is_finite() {
                return Err(PipelineError::Config(
                    "need at least 3 samples and a finite separation".into(),
                ));
            }
            let t = blobs(&config);
            let names: Vec<String> = t.labels.iter().map(|&l| t.class_names[l].clone()).collect();
            let out = path(m, "output");
            write_feature_csv(out, &t.rows, &names)?;
            Ok(format!(
                "wrote {} blob samples to {}",
                t.len(),
                out.display()
            ))
        }
        Some(("textures", m)) => {
            let out = path(m, "output");
            let per_family: usize = *m.get_one("per_family").expect("defaulted");
            write_textures(
                out,
                per_family,
                *m.get_one("side").expect("defaulted"),
                *m.get_one("seed").expect("defaulted"),
            )?;
            Ok(format!(
                "wrote {} textures to {}",
                3 * per_family,
                out.display()
            ))
        }
        _ => unreachable!("subcommand required"),
    }
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let quiet = matches.get_flag("quiet");
    let result = match matches.subcommand() {
        Some(("featurize", m)) => featurize(m),
        Some(("train", m)) => train(m),
        Some(("evaluate", m)) => evaluate(m),
        Some(("synth-data", m)) => synth(m),
        _ => unreachable!("subcommand required"),
    };
    match result {
        Ok(msg) => {
            if !quiet {
                println!("{msg}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tnfin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
