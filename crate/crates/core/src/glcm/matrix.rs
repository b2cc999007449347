use alloc::vec::Vec;

use super::GrayImage;
use crate::{Error, Result};

/// Pixel displacement `(dy, dx)` from a reference pixel to its neighbor.
pub type Offset = (isize, isize);

/// Normalized symmetric co-occurrence matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GlcmMatrix {
    levels: usize,
    entries: Vec<f64>,
    offset: Offset,
}

impl GlcmMatrix {
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn offset(&self) -> Offset {
        self.offset
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.levels + j]
    }

    /// Row-major `levels x levels` entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }
}

/// Counts every in-bounds `(pixel, pixel + offset)` level pair, adds the
/// transpose and normalizes to unit mass.
pub fn compute_glcm(img: &GrayImage, offset: Offset) -> Result<GlcmMatrix> {
    let l = img.levels();
    let (dy, dx) = offset;
    let mut counts = alloc::vec![0u64; l * l];
    let mut pairs = 0u64;
    for y in 0..img.height() {
        let Some(ny) = y.checked_add_signed(dy).filter(|&v| v < img.height()) else {
            continue;
        };
        for x in 0..img.width() {
            let Some(nx) = x.checked_add_signed(dx).filter(|&v| v < img.width()) else {
                continue;
            };
            let a = usize::from(img.get(y, x));
            let b = usize::from(img.get(ny, nx));
            counts[a * l + b] += 1;
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(Error::DegenerateImage);
    }
    let total = (2 * pairs) as f64;
    let mut entries = alloc::vec![0.0; l * l];
    for i in 0..l {
        for j in 0..l {
            entries[i * l + j] = (counts[i * l + j] + counts[j * l + i]) as f64 / total;
        }
    }
    Ok(GlcmMatrix {
        levels: l,
        entries,
        offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn constant_image_has_single_entry() {
        let img = GrayImage::new(4, 4, 8, vec![5; 16]).unwrap();
        let g = compute_glcm(&img, (0, 1)).unwrap();
        assert_eq!(g.get(5, 5), 1.0);
        assert_eq!(g.entries().iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn two_by_two_stripes() {
        let img = GrayImage::new(2, 2, 2, vec![0, 1, 0, 1]).unwrap();
        let g = compute_glcm(&img, (0, 1)).unwrap();
        assert_eq!(g.entries(), [0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn negative_and_vertical_offsets() {
        let img = GrayImage::new(2, 2, 2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(
            compute_glcm(&img, (1, 0)).unwrap().entries(),
            [0.5, 0.0, 0.0, 0.5]
        );
        assert_eq!(
            compute_glcm(&img, (0, -1)).unwrap().entries(),
            [0.0, 0.5, 0.5, 0.0]
        );
    }

    #[test]
    fn no_pairs_is_degenerate() {
        let img = GrayImage::new(1, 3, 2, vec![0, 1, 0]).unwrap();
        assert_eq!(
            compute_glcm(&img, (0, 1)).unwrap_err(),
            Error::DegenerateImage
        );
    }
}
