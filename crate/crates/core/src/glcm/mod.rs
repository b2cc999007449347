//! Texture features from gray-level co-occurrence matrices.

mod features;
mod image;
mod matrix;

pub use features::{extract_features, FeatureVector, FEATURE_NAMES};
pub use image::{preprocess, GrayImage, PreprocessConfig, RawImage};
pub use matrix::{compute_glcm, GlcmMatrix, Offset};
