use super::{GlcmMatrix, GrayImage};
use crate::math::sqrt;
use crate::{Error, Result};

/// Column order of the feature vector, as written to feature files.
pub const FEATURE_NAMES: [&str; 6] = [
    "contrast",
    "correlation",
    "energy",
    "homogeneity",
    "mean",
    "std",
];

/// The six texture features that form a network input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub contrast: f64,
    pub correlation: f64,
    pub energy: f64,
    pub homogeneity: f64,
    pub mean: f64,
    pub std: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.contrast,
            self.correlation,
            self.energy,
            self.homogeneity,
            self.mean,
            self.std,
        ]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            contrast: v[0],
            correlation: v[1],
            energy: v[2],
            homogeneity: v[3],
            mean: v[4],
            std: v[5],
        }
    }
}

/// Contrast, correlation, energy and homogeneity of `glcm`, plus mean and
/// standard deviation of `img`'s gray-level histogram.
///
/// Correlation uses the GLCM marginal mean and variance and is defined as 1
/// when the marginal variance is zero.
pub fn extract_features(glcm: &GlcmMatrix, img: &GrayImage) -> Result<FeatureVector> {
    let l = glcm.levels();
    if img.levels() != l {
        return Err(Error::Shape {
            expected: l,
            found: img.levels(),
        });
    }
    let mut contrast = 0.0;
    let mut energy = 0.0;
    let mut homogeneity = 0.0;
    let mut mu = 0.0;
    for i in 0..l {
        for j in 0..l {
            let p = glcm.get(i, j);
            let d = i as f64 - j as f64;
            contrast += d * d * p;
            energy += p * p;
            homogeneity += p / (1.0 + d * d);
            mu += i as f64 * p;
        }
    }
    let mut var = 0.0;
    let mut cov = 0.0;
    for i in 0..l {
        for j in 0..l {
            let p = glcm.get(i, j);
            let di = i as f64 - mu;
            let dj = j as f64 - mu;
            var += di * di * p;
            cov += di * dj * p;
        }
    }
    let correlation = if var > 0.0 {
        (cov / var).clamp(-1.0, 1.0)
    } else {
        1.0
    };

    let hist = img.histogram();
    let mean: f64 = hist.iter().enumerate().map(|(i, h)| i as f64 * h).sum();
    let spread: f64 = hist
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let d = i as f64 - mean;
            d * d * h
        })
        .sum();
    Ok(FeatureVector {
        contrast,
        correlation,
        energy,
        homogeneity,
        mean,
        std: sqrt(spread),
    })
}
