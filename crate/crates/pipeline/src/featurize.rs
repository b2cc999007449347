//! Image folders to GLCM feature tables.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use tnfin_core::glcm::{
    compute_glcm, extract_features, preprocess, Offset, PreprocessConfig, RawImage,
};

use crate::dataset::{FeatureTable, FEATURE_COUNT};
use crate::error::{PipelineError, Result};

const EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeaturizeConfig {
    pub preprocess: PreprocessConfig,
    pub offset: Offset,
}

impl Default for FeaturizeConfig {
    fn default() -> Self {
        Self {
            preprocess: PreprocessConfig::default(),
            offset: (0, 1),
        }
    }
}

/// Lists `(class, image path)` pairs of `<root>/<class>/*.{png,jpg,jpeg}`,
/// classes and files in lexicographic order.
pub fn scan_image_dir(root: &Path) -> Result<Vec<(String, PathBuf)>> {
    let read = |dir: &Path| -> Result<Vec<PathBuf>> {
        let mut entries = fs::read_dir(dir)
            .map_err(|e| PipelineError::io(dir, e))?
            .map(|e| {
                e.map(|e| e.path())
                    .map_err(|err| PipelineError::io(dir, err))
            })
            .collect::<Result<Vec<_>>>()?;
        entries.sort();
        Ok(entries)
    };
    let classes: Vec<PathBuf> = read(root)?.into_iter().filter(|p| p.is_dir()).collect();
    if classes.len() < 2 {
        return Err(PipelineError::Data(format!(
            "{}: expected at least 2 class subdirectories, found {}",
            root.display(),
            classes.len()
        )));
    }
    let mut images = Vec::new();
    for dir in classes {
        let class = dir
            .file_name()
            .and_then(|n| n.to_str())
            .map(str::to_string)
            .ok_or_else(|| {
                PipelineError::Data(format!(
                    "{}: class directory name is not UTF-8",
                    dir.display()
                ))
            })?;
        let before = images.len();
        for file in read(&dir)? {
            let ext = file
                .extension()
                .and_then(|e| e.to_str())
                .map(str::to_ascii_lowercase);
            if file.is_file() && ext.is_some_and(|e| EXTENSIONS.contains(&e.as_str())) {
                images.push((class.clone(), file));
            }
        }
        if images.len() == before {
            return Err(PipelineError::Data(format!(
                "{}: class has no images",
                dir.display()
            )));
        }
    }
    Ok(images)
}

fn load_raw(path: &Path) -> std::result::Result<RawImage, String> {
    let img = image::open(path).map_err(|e| e.to_string())?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let (channels, data) = if img.color().has_color() {
        (3, img.into_rgb8().into_raw())
    } else {
        (1, img.into_luma8().into_raw())
    };
    RawImage::new(w, h, channels, data).map_err(|e| e.to_string())
}

/// Feature vector of a single image file.
pub fn featurize_image(
    path: &Path,
    config: &FeaturizeConfig,
) -> std::result::Result<[f64; FEATURE_COUNT], String> {
    let raw = load_raw(path)?;
    let gray = preprocess(&raw, &config.preprocess).map_err(|e| e.to_string())?;
    let glcm = compute_glcm(&gray, config.offset).map_err(|e| e.to_string())?;
    Ok(extract_features(&glcm, &gray)
        .map_err(|e| e.to_string())?
        .to_array())
}

/// Featurizes every image under `root`. Failures are collected so the
/// error lists every unreadable image, not just the first.
pub fn featurize_dir(root: &Path, config: &FeaturizeConfig) -> Result<FeatureTable> {
    let images = scan_image_dir(root)?;
    let results: Vec<_> = images
        .par_iter()
        .map(|(_, p)| featurize_image(p, config))
        .collect();
    let failures: Vec<String> = images
        .iter()
        .zip(&results)
        .filter_map(|((_, p), r)| r.as_ref().err().map(|e| format!("  {}: {e}", p.display())))
        .collect();
    if !failures.is_empty() {
        return Err(PipelineError::Data(format!(
            "{} image(s) could not be featurized:\n{}",
            failures.len(),
            failures.join("\n")
        )));
    }
    let rows = results
        .into_iter()
        .map(|r| r.expect("failures handled"))
        .collect();
    let names: Vec<String> = images.into_iter().map(|(c, _)| c).collect();
    Ok(FeatureTable::from_named(rows, &names))
}
