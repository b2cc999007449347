use alloc::vec::Vec;

use crate::math::floor;
use crate::{Error, Result};

/// Decoded 8-bit image, row-major and channel-interleaved. One or two
/// channels are gray (+ alpha); three or four are RGB (+ alpha).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<u8>,
}

impl RawImage {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if !(1..=4).contains(&channels) {
            return Err(Error::InvalidParameter("images must have 1 to 4 channels"));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidParameter("image must not be empty"));
        }
        if data.len() != width * height * channels {
            return Err(Error::Shape {
                expected: width * height * channels,
                found: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    /// Unweighted mean of the color channels of every pixel; alpha is ignored.
    fn gray(&self) -> Vec<f64> {
        let color = if self.channels >= 3 { 3 } else { 1 };
        self.data
            .chunks_exact(self.channels)
            .map(|px| {
                if color == 1 {
                    f64::from(px[0])
                } else {
                    (f64::from(px[0]) + f64::from(px[1]) + f64::from(px[2])) / 3.0
                }
            })
            .collect()
    }
}

/// Quantized grayscale image with every pixel in `0..levels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    levels: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, levels: usize, pixels: Vec<u8>) -> Result<Self> {
        if !(1..=256).contains(&levels) {
            return Err(Error::InvalidParameter("gray levels must lie in 1..=256"));
        }
        if pixels.len() != width * height {
            return Err(Error::Shape {
                expected: width * height,
                found: pixels.len(),
            });
        }
        if pixels.iter().any(|&p| usize::from(p) >= levels) {
            return Err(Error::InvalidParameter("pixel exceeds gray level count"));
        }
        Ok(Self {
            width,
            height,
            levels,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, y: usize, x: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Normalized gray-level histogram.
    pub fn histogram(&self) -> Vec<f64> {
        let mut counts = alloc::vec![0u64; self.levels];
        for &p in &self.pixels {
            counts[usize::from(p)] += 1;
        }
        let n = self.pixels.len() as f64;
        counts.into_iter().map(|c| c as f64 / n).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreprocessConfig {
    /// Output images are `side x side`.
    pub side: usize,
    pub levels: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            side: 224,
            levels: 8,
        }
    }
}

#[inline]
fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + t * (b - a)
}

/// Bilinear resampling with pixel-center alignment and edge clamping.
fn resize_bilinear(src: &[f64], width: usize, height: usize, side: usize) -> Vec<f64> {
    let axis = |dst: usize, len: usize| {
        let pos =
            ((dst as f64 + 0.5) * len as f64 / side as f64 - 0.5).clamp(0.0, (len - 1) as f64);
        let i0 = floor(pos) as usize;
        let i1 = (i0 + 1).min(len - 1);
        (i0, i1, pos - i0 as f64)
    };
    let mut out = Vec::with_capacity(side * side);
    for dy in 0..side {
        let (y0, y1, fy) = axis(dy, height);
        for dx in 0..side {
            let (x0, x1, fx) = axis(dx, width);
            let top = lerp(src[y0 * width + x0], src[y0 * width + x1], fx);
            let bottom = lerp(src[y1 * width + x0], src[y1 * width + x1], fx);
            out.push(lerp(top, bottom, fy));
        }
    }
    out
}

/// Grayscale conversion, bilinear resize to `side x side` and quantization
/// `level = floor(gray * L / 256)` clamped to `L - 1`.
pub fn preprocess(raw: &RawImage, config: &PreprocessConfig) -> Result<GrayImage> {
    if config.side == 0 {
        return Err(Error::InvalidParameter("output side must be positive"));
    }
    let gray = raw.gray();
    let resized = if raw.width == config.side && raw.height == config.side {
        gray
    } else {
        resize_bilinear(&gray, raw.width, raw.height, config.side)
    };
    let l = config.levels as f64;
    let top = config.levels.saturating_sub(1) as f64;
    let pixels = resized
        .iter()
        .map(|&g| floor(g * l / 256.0).clamp(0.0, top) as u8)
        .collect();
    GrayImage::new(config.side, config.side, config.levels, pixels)
}
