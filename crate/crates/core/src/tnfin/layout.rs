use alloc::vec::Vec;

use crate::{Error, Result};

const WIDTH_FLOOR_FRACTION: f64 = 1e-6;
const BOUND_MARGIN: f64 = 0.5;

/// Shape of a network plus the data ranges its parameters are scaled to.
///
/// The ranges drive initialization, the positivity floors applied when a
/// parameter vector is decoded, and the search box handed to optimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    inputs: usize,
    mfs_per_input: usize,
    rule_count: usize,
    feature_ranges: Vec<(f64, f64)>,
    target_range: (f64, f64),
}

/// Per-parameter search box in the flat parameter layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

fn check_range(range: (f64, f64), what: &'static str) -> Result<()> {
    if range.0.is_finite() && range.1.is_finite() && range.0 <= range.1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

/// Span used for scaling; a degenerate range counts as unit width.
fn effective_span((lo, hi): (f64, f64)) -> f64 {
    let span = hi - lo;
    if span > 0.0 {
        span
    } else {
        1.0
    }
}

impl Layout {
    pub fn new(
        inputs: usize,
        mfs_per_input: usize,
        feature_ranges: Vec<(f64, f64)>,
        target_range: (f64, f64),
    ) -> Result<Self> {
        if inputs == 0 {
            return Err(Error::InvalidParameter("network needs at least one input"));
        }
        if mfs_per_input == 0 {
            return Err(Error::InvalidParameter(
                "network needs at least one MF per input",
            ));
        }
        if feature_ranges.len() != inputs {
            return Err(Error::Shape {
                expected: inputs,
                found: feature_ranges.len(),
            });
        }
        for &r in &feature_ranges {
            check_range(r, "feature range must be finite and ordered")?;
        }
        check_range(target_range, "target range must be finite and ordered")?;
        let rule_count = u32::try_from(inputs)
            .ok()
            .and_then(|n| mfs_per_input.checked_pow(n))
            .ok_or(Error::InvalidParameter("rule count overflows"))?;
        Ok(Self {
            inputs,
            mfs_per_input,
            rule_count,
            feature_ranges,
            target_range,
        })
    }

    /// Layout with every feature and the target ranging over `[0, 1]`.
    pub fn unit(inputs: usize, mfs_per_input: usize) -> Result<Self> {
        Self::new(
            inputs,
            mfs_per_input,
            alloc::vec![(0.0, 1.0); inputs],
            (0.0, 1.0),
        )
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn mfs_per_input(&self) -> usize {
        self.mfs_per_input
    }

    /// `mfs_per_input ^ inputs`.
    pub fn rule_count(&self) -> usize {
        self.rule_count
    }

    pub fn feature_ranges(&self) -> &[(f64, f64)] {
        &self.feature_ranges
    }

    pub fn target_range(&self) -> (f64, f64) {
        self.target_range
    }

    pub fn mf_count(&self) -> usize {
        self.inputs * self.mfs_per_input
    }

    /// Centers and widths of every MF, then centers and spreads of every rule.
    pub fn param_count(&self) -> usize {
        2 * self.mf_count() + 2 * self.rule_count
    }

    /// MF index selected by `rule` for `input` (input 0 is the most
    /// significant mixed-radix digit).
    pub fn rule_digit(&self, rule: usize, input: usize) -> usize {
        let shift = self.inputs - 1 - input;
        let mut r = rule;
        for _ in 0..shift {
            r /= self.mfs_per_input;
        }
        r % self.mfs_per_input
    }

    pub(crate) fn width_floor(&self, input: usize) -> f64 {
        WIDTH_FLOOR_FRACTION * effective_span(self.feature_ranges[input])
    }

    pub(crate) fn spread_floor(&self) -> f64 {
        WIDTH_FLOOR_FRACTION * effective_span(self.target_range)
    }

    pub(crate) fn initial_width(&self, input: usize) -> f64 {
        let span = effective_span(self.feature_ranges[input]);
        if self.mfs_per_input > 1 {
            span / (2.0 * (self.mfs_per_input - 1) as f64)
        } else {
            span / 2.0
        }
    }

    pub(crate) fn initial_center(&self, input: usize, mf: usize) -> f64 {
        let (lo, hi) = self.feature_ranges[input];
        if self.mfs_per_input > 1 {
            lo + (hi - lo) * mf as f64 / (self.mfs_per_input - 1) as f64
        } else {
            0.5 * (lo + hi)
        }
    }

    pub(crate) fn initial_spread(&self) -> f64 {
        effective_span(self.target_range) / 4.0
    }

    /// Search box: each parameter's initialization range widened by half its
    /// span on both sides (point-initialized widths and spreads use half
    /// their value).
    pub fn param_bounds(&self) -> ParamBounds {
        let n = self.param_count();
        let mut lower = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        for i in 0..self.inputs {
            let (lo, hi) = self.feature_ranges[i];
            let margin = BOUND_MARGIN * effective_span((lo, hi));
            for _ in 0..self.mfs_per_input {
                lower.push(lo - margin);
                upper.push(hi + margin);
            }
        }
        for i in 0..self.inputs {
            let w = self.initial_width(i);
            for _ in 0..self.mfs_per_input {
                lower.push(w * (1.0 - BOUND_MARGIN));
                upper.push(w * (1.0 + BOUND_MARGIN));
            }
        }
        let (tlo, thi) = self.target_range;
        let margin = BOUND_MARGIN * effective_span(self.target_range);
        for _ in 0..self.rule_count {
            lower.push(tlo - margin);
            upper.push(thi + margin);
        }
        let s = self.initial_spread();
        for _ in 0..self.rule_count {
            lower.push(s * (1.0 - BOUND_MARGIN));
            upper.push(s * (1.0 + BOUND_MARGIN));
        }
        ParamBounds { lower, upper }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let full = Layout::unit(6, 3).unwrap();
        assert_eq!(full.rule_count(), 729);
        assert_eq!(full.param_count(), 18 + 18 + 729 + 729);
        assert_eq!(full.param_count(), 1494);
        let small = Layout::unit(2, 2).unwrap();
        assert_eq!(small.param_count(), 16);
    }

    #[test]
    fn digits_are_big_endian() {
        let l = Layout::unit(3, 3).unwrap();
        // 14 = 1*9 + 1*3 + 2
        assert_eq!(l.rule_digit(14, 0), 1);
        assert_eq!(l.rule_digit(14, 1), 1);
        assert_eq!(l.rule_digit(14, 2), 2);
        assert_eq!(l.rule_digit(26, 0), 2);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Layout::unit(0, 3).is_err());
        assert!(Layout::unit(3, 0).is_err());
        assert!(Layout::new(2, 2, alloc::vec![(0.0, 1.0)], (0.0, 1.0)).is_err());
        assert!(Layout::new(1, 2, alloc::vec![(1.0, 0.0)], (0.0, 1.0)).is_err());
        assert!(Layout::unit(64, 3).is_err());
    }

    #[test]
    fn bounds_contain_initialization() {
        let l = Layout::new(2, 3, alloc::vec![(0.0, 2.0), (-1.0, 1.0)], (-0.25, 1.25)).unwrap();
        let b = l.param_bounds();
        assert_eq!(b.lower.len(), l.param_count());
        assert_eq!(b.lower[0], -1.0);
        assert_eq!(b.upper[0], 3.0);
        // width of input 0 initializes to 2 / 4 = 0.5
        assert_eq!(b.lower[6], 0.25);
        assert_eq!(b.upper[6], 0.75);
        for (lo, hi) in b.lower.iter().zip(&b.upper) {
            assert!(lo < hi);
        }
    }
}
