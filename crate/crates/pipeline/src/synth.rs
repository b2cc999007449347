//! Synthetic datasets: Gaussian feature blobs and small texture images.

use std::fs;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use tnfin_core::rng::substream;

use crate::dataset::{FeatureTable, FEATURE_COUNT};
use crate::error::{PipelineError, Result};

pub const BLOB_CLASSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobConfig {
    pub samples: usize,
    /// Mean offset of each class along its own feature dimensions, in
    /// units of the (unit) standard deviation.
    pub separation: f64,
    pub seed: u64,
}

impl Default for BlobConfig {
    fn default() -> Self {
        Self {
            samples: 600,
            separation: 2.0,
            seed: 7,
        }
    }
}

/// Three isotropic unit-variance Gaussian classes in 6-D. Class `c` has
/// mean `separation` on every dimension `d` with `d % 3 == c` and 0
/// elsewhere, so each pair of class means is `2 * separation` apart in
/// squared distance. Samples are dealt to classes round-robin.
pub fn blobs(config: &BlobConfig) -> FeatureTable {
    let mut rng = substream(config.seed, &[0xB10B]);
    let noise = Normal::new(0.0, 1.0).expect("unit normal");
    let mut rows = Vec::with_capacity(config.samples);
    let mut names = Vec::with_capacity(config.samples);
    for i in 0..config.samples {
        let class = i % BLOB_CLASSES;
        let mut row = [0.0; FEATURE_COUNT];
        for (d, v) in row.iter_mut().enumerate() {
            let mean = if d % BLOB_CLASSES == class {
                config.separation
            } else {
                0.0
            };
            *v = mean + noise.sample(&mut rng);
        }
        rows.push(row);
        names.push(format!("c{class}"));
    }
    FeatureTable::from_named(rows, &names)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextureFamily {
    Constant,
    Stripes,
    Noise,
}

impl TextureFamily {
    pub const ALL: [TextureFamily; 3] = [
        TextureFamily::Constant,
        TextureFamily::Stripes,
        TextureFamily::Noise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TextureFamily::Constant => "constant",
            TextureFamily::Stripes => "stripes",
            TextureFamily::Noise => "noise",
        }
    }
}

/// Renders one `side x side` 8-bit gray texture.
pub fn texture<R: Rng + ?Sized>(family: TextureFamily, side: usize, rng: &mut R) -> Vec<u8> {
    match family {
        TextureFamily::Constant => vec![rng.random::<u8>(); side * side],
        TextureFamily::Stripes => {
            let period = rng.random_range(2..=8usize);
            let (lo, hi) = (rng.random_range(0..96u8), rng.random_range(160..=255u8));
            let vertical = rng.random_bool(0.5);
            (0..side * side)
                .map(|i| {
                    let (y, x) = (i / side, i % side);
                    let t = if vertical { x } else { y };
                    if (t / period) % 2 == 0 {
                        lo
                    } else {
                        hi
                    }
                })
                .collect()
        }
        TextureFamily::Noise => (0..side * side).map(|_| rng.random::<u8>()).collect(),
    }
}

/// Writes `per_family` PNG textures of every family into
/// `<root>/<family>/<family>_NN.png`.
pub fn write_textures(root: &Path, per_family: usize, side: usize, seed: u64) -> Result<()> {
    if side == 0 || per_family == 0 {
        return Err(PipelineError::Config(
            "texture side and count must be positive".into(),
        ));
    }
    let side_u32 =
        u32::try_from(side).map_err(|_| PipelineError::Config("texture side too large".into()))?;
    for (f, family) in TextureFamily::ALL.into_iter().enumerate() {
        let dir = root.join(family.name());
        fs::create_dir_all(&dir).map_err(|e| PipelineError::io(&dir, e))?;
        let mut rng = substream(seed, &[0x7E47, f as u64]);
        for i in 0..per_family {
            let pixels = texture(family, side, &mut rng);
            let path = dir.join(format!("{}_{i:02}.png", family.name()));
            let img = image::GrayImage::from_raw(side_u32, side_u32, pixels)
                .expect("buffer matches size");
            img.save(&path)
                .map_err(|e| PipelineError::Data(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blobs_are_balanced_and_centered() {
        let t = blobs(&BlobConfig::default());
        assert_eq!(t.len(), 600);
        assert_eq!(t.class_names, ["c0", "c1", "c2"]);
        for (c, members) in t.class_members().iter().enumerate() {
            assert_eq!(members.len(), 200);
            for d in 0..FEATURE_COUNT {
                let mean = members.iter().map(|&i| t.rows[i][d]).sum::<f64>() / 200.0;
                let expected = if d % 3 == c { 2.0 } else { 0.0 };
                // standard error of the mean is 1/sqrt(200) ~ 0.07
                assert!((mean - expected).abs() < 0.3, "class {c} dim {d}: {mean}");
            }
        }
        assert_eq!(t, blobs(&BlobConfig::default()));
    }

    #[test]
    fn textures_have_expected_structure() {
        let mut rng = substream(1, &[]);
        let c = texture(TextureFamily::Constant, 8, &mut rng);
        assert!(c.iter().all(|&p| p == c[0]));
        let s = texture(TextureFamily::Stripes, 16, &mut rng);
        let mut distinct = s.clone();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 2);
        assert_eq!(texture(TextureFamily::Noise, 5, &mut rng).len(), 25);
    }
}
