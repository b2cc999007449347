//! Experiment configuration: a flat `key = value` file whose keys can all
//! be overridden from the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tnfin_core::cso::{CsoConfig, Inertia};

use crate::error::{PipelineError, Result};
use crate::format::exact;

/// Every recognized key, in `config_echo` order.
pub const KEYS: [&str; 28] = [
    "features",
    "images",
    "output_dir",
    "seed",
    "cycles",
    "train_fraction",
    "sample_cap",
    "variants",
    "constant_w",
    "mfs_per_input",
    "scale_features",
    "binary_positive",
    "gd_learning_rate",
    "gd_epochs",
    "cso_smp",
    "cso_srd",
    "cso_cdc",
    "cso_spc",
    "cso_mixture_ratio",
    "cso_c1",
    "cso_w_start",
    "cso_iterations",
    "cso_population",
    "cso_epochs_per_iteration",
    "image_side",
    "gray_levels",
    "glcm_offset",
    "extended_protocol",
];

/// Outer iteration count selected by `extended_protocol`.
pub const EXTENDED_PROTOCOL_ITERATIONS: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataSource {
    FeatureCsv(PathBuf),
    ImageDir(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Gd,
    CsoConstant,
    CsoAdaptive,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Gd, Variant::CsoConstant, Variant::CsoAdaptive];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Gd => "gd",
            Variant::CsoConstant => "cso-constant",
            Variant::CsoAdaptive => "cso-adaptive",
        }
    }
}

impl FromStr for Variant {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                PipelineError::Config(format!(
                    "unknown variant `{s}` (expected gd, cso-constant or cso-adaptive)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epochs {
    /// Matched to the CSO loss-evaluation budget.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub cycles: usize,
    pub train_fraction: f64,
    pub sample_cap: usize,
    pub variants: Vec<Variant>,
    pub constant_w: f64,
    pub mfs_per_input: usize,
    pub scale_features: bool,
    /// Merge every other class into one when set.
    pub binary_positive: Option<String>,
    pub gd_learning_rate: f64,
    pub gd_epochs: Epochs,
    /// Adaptive-inertia settings; the constant variant swaps the inertia.
    pub cso: CsoConfig,
    pub image_side: usize,
    pub gray_levels: usize,
    pub glcm_offset: (isize, isize),
    pub extended_protocol: bool,
}

impl ExperimentConfig {
    /// Defaults with the given data source.
    pub fn new(source: DataSource) -> Self {
        Self {
            source,
            output_dir: PathBuf::from("results"),
            seed: 0,
            cycles: 10,
            train_fraction: 0.8,
            sample_cap: 1000,
            variants: Variant::ALL.to_vec(),
            constant_w: 0.9,
            mfs_per_input: 3,
            scale_features: true,
            binary_positive: None,
            gd_learning_rate: 1e-3,
            gd_epochs: Epochs::Auto,
            cso: CsoConfig::default(),
            image_side: 224,
            gray_levels: 8,
            glcm_offset: (0, 1),
            extended_protocol: false,
        }
    }

    /// CSO settings of a variant, seeded with `seed`.
    pub fn cso_for(&self, variant: Variant, seed: u64) -> CsoConfig {
        let inertia = match variant {
            Variant::CsoConstant => Inertia::Constant(self.constant_w),
            _ => Inertia::Adaptive,
        };
        CsoConfig {
            inertia,
            seed,
            ..self.cso.clone()
        }
    }

    /// GD epoch count; `Auto` spends about as many loss evaluations as a CSO
    /// run (each epoch costs `2 * params + 1`).
    pub fn resolved_gd_epochs(&self, params: usize) -> usize {
        match self.gd_epochs {
            Epochs::Fixed(n) => n,
            Epochs::Auto => (self.cso.evaluation_budget() / (2 * params + 1)).max(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        if self.cycles == 0 {
            return bad("cycles must be at least 1");
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return bad("train_fraction must lie in (0, 1)");
        }
        if self.sample_cap < 2 {
            return bad("sample_cap must be at least 2");
        }
        if self.variants.is_empty() {
            return bad("at least one variant is required");
        }
        if self.mfs_per_input == 0 {
            return bad("mfs_per_input must be at least 1");
        }
        if !(self.gd_learning_rate >= 0.0 && self.gd_learning_rate.is_finite()) {
            return bad("gd_learning_rate must be finite and nonnegative");
        }
        if !self.constant_w.is_finite() {
            return bad("constant_w must be finite");
        }
        if self.image_side == 0 {
            return bad("image_side must be positive");
        }
        if !(2..=256).contains(&self.gray_levels) {
            return bad("gray_levels must lie in 2..=256");
        }
        self.cso
            .validate()
            .map_err(|e| PipelineError::Config(format!("cso: {e}")))
    }

    /// Every key with its resolved value, in [`KEYS`] order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let path = |p: &Path| p.display().to_string();
        let (features, images) = match &self.source {
            DataSource::FeatureCsv(p) => (path(p), String::new()),
            DataSource::ImageDir(p) => (String::new(), path(p)),
        };
        let variants = self
            .variants
            .iter()
            .map(|v| v.name())
            .collect::<Vec<_>>()
            .join(",");
        let gd_epochs = match self.gd_epochs {
            Epochs::Auto => "auto".to_string(),
            Epochs::Fixed(n) => n.to_string(),
        };
        let values = [
            features,
            images,
            path(&self.output_dir),
            self.seed.to_string(),
            self.cycles.to_string(),
            exact(self.train_fraction),
            self.sample_cap.to_string(),
            variants,
            exact(self.constant_w),
            self.mfs_per_input.to_string(),
            self.scale_features.to_string(),
            self.binary_positive.clone().unwrap_or_default(),
            exact(self.gd_learning_rate),
            gd_epochs,
            self.cso.smp.to_string(),
            exact(self.cso.srd),
            exact(self.cso.cdc),
            self.cso.spc.to_string(),
            exact(self.cso.mixture_ratio),
            exact(self.cso.c1),
            exact(self.cso.w_start),
            self.cso.iterations.to_string(),
            self.cso.population.to_string(),
            self.cso.epochs_per_iteration.to_string(),
            self.image_side.to_string(),
            self.gray_levels.to_string(),
            format!("{},{}", self.glcm_offset.0, self.glcm_offset.1),
            self.extended_protocol.to_string(),
        ];
        KEYS.into_iter().zip(values).collect()
    }

    /// `key = value` lines that [`parse_config`] reads back into `self`.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries() {
            let _ = writeln!(out, "{k} = {v}");
        }
        out
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// unknown and repeated keys are errors.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            PipelineError::Config(format!("line {}: expected `key = value`", n + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(PipelineError::Config(format!(
                "line {}: unknown key `{key}`",
                n + 1
            )));
        }
        if map
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(PipelineError::Config(format!(
                "line {}: duplicate key `{key}`",
                n + 1
            )));
        }
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
    parse_config(&text)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| PipelineError::Config(format!("{key}: cannot parse `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(PipelineError::Config(format!(
            "{key}: expected true or false, got `{value}`"
        ))),
    }
}

/// Builds a validated configuration from raw key/value pairs, applying
/// defaults for absent keys. Empty values count as absent.
pub fn resolve(raw: &BTreeMap<String, String>) -> Result<ExperimentConfig> {
    let get = |k: &str| raw.get(k).map(String::as_str).filter(|v| !v.is_empty());
    for key in raw.keys() {
        if !KEYS.contains(&key.as_str()) {
            return Err(PipelineError::Config(format!("unknown key `{key}`")));
        }
    }
    let source = match (get("features"), get("images")) {
        (Some(f), None) => DataSource::FeatureCsv(PathBuf::from(f)),
        (None, Some(i)) => DataSource::ImageDir(PathBuf::from(i)),
        _ => {
            return Err(PipelineError::Config(
                "exactly one of `features` or `images` must be set".into(),
            ))
        }
    };
    let mut c = ExperimentConfig::new(source);
    for (key, value) in raw {
        let v = value.trim();
        if v.is_empty() {
            continue;
        }
        match key.as_str() {
            "features" | "images" => {}
            "output_dir" => c.output_dir = PathBuf::from(v),
            "seed" => c.seed = parse(key, v)?,
            "cycles" => c.cycles = parse(key, v)?,
            "train_fraction" => c.train_fraction = parse(key, v)?,
            "sample_cap" => c.sample_cap = parse(key, v)?,
            "variants" => {
                let mut vs = Vec::new();
                for name in v.split(',').map(str::trim) {
                    let variant: Variant = name.parse()?;
                    if vs.contains(&variant) {
                        return Err(PipelineError::Config(format!(
                            "variants: `{name}` listed twice"
                        )));
                    }
                    vs.push(variant);
                }
                c.variants = vs;
            }
            "constant_w" => c.constant_w = parse(key, v)?,
            "mfs_per_input" => c.mfs_per_input = parse(key, v)?,
            "scale_features" => c.scale_features = parse_bool(key, v)?,
            "binary_positive" => c.binary_positive = Some(v.to_string()),
            "gd_learning_rate" => c.gd_learning_rate = parse(key, v)?,
            "gd_epochs" => {
                c.gd_epochs = if v == "auto" {
                    Epochs::Auto
                } else {
                    Epochs::Fixed(parse(key, v)?)
                }
            }
            "cso_smp" => c.cso.smp = parse(key, v)?,
            "cso_srd" => c.cso.srd = parse(key, v)?,
            "cso_cdc" => c.cso.cdc = parse(key, v)?,
            "cso_spc" => c.cso.spc = parse_bool(key, v)?,
            "cso_mixture_ratio" => c.cso.mixture_ratio = parse(key, v)?,
            "cso_c1" => c.cso.c1 = parse(key, v)?,
            "cso_w_start" => c.cso.w_start = parse(key, v)?,
            "cso_iterations" => c.cso.iterations = parse(key, v)?,
            "cso_population" => c.cso.population = parse(key, v)?,
            "cso_epochs_per_iteration" => c.cso.epochs_per_iteration = parse(key, v)?,
            "image_side" => c.image_side = parse(key, v)?,
            "gray_levels" => c.gray_levels = parse(key, v)?,
            "glcm_offset" => {
                let (dy, dx) = v.split_once(',').ok_or_else(|| {
                    PipelineError::Config(format!("glcm_offset: expected `dy,dx`, got `{v}`"))
                })?;
                c.glcm_offset = (parse(key, dy.trim())?, parse(key, dx.trim())?);
            }
            "extended_protocol" => c.extended_protocol = parse_bool(key, v)?,
            _ => unreachable!("keys checked above"),
        }
    }
    if c.extended_protocol && get("cso_iterations").is_none() {
        c.cso.iterations = EXTENDED_PROTOCOL_ITERATIONS;
    }
    c.validate()?;
    Ok(c)
}

/// Kebab-case command-line flag of a key.
pub fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}
