use crate::math::sqrt;
use crate::tnfin::EPS_FIRE;
use crate::{Error, Result};

/// Direction of a rule's monotone consequent membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Odd rules in 1-based numbering: `y = c - d * sqrt(1/w - 1)`.
    Decreasing,
    /// Even rules in 1-based numbering: `y = c + d * sqrt(1/w - 1)`.
    Increasing,
}

impl Orientation {
    /// Orientation of the rule with 0-based index `rule`.
    pub fn for_rule(rule: usize) -> Self {
        // 0-based even is 1-based odd
        if rule.is_multiple_of(2) {
            Orientation::Decreasing
        } else {
            Orientation::Increasing
        }
    }
}

/// Tsukamoto consequent of one rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsukamotoConsequent {
    center: f64,
    spread: f64,
    orientation: Orientation,
}

impl TsukamotoConsequent {
    pub fn new(center: f64, spread: f64, orientation: Orientation) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter("consequent center must be finite"));
        }
        if !(spread > 0.0 && spread.is_finite()) {
            return Err(Error::InvalidParameter(
                "consequent spread must be positive and finite",
            ));
        }
        Ok(Self {
            center,
            spread,
            orientation,
        })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Crisp rule output `y` and the weighted layer-4 output `w * y` for the
    /// normalized firing strength `w`.
    ///
    /// `w` is clamped to `[EPS_FIRE, 1]` inside the reciprocal only; the
    /// weighting uses `w` as given.
    #[inline]
    pub fn defuzzify(&self, normalized: f64) -> (f64, f64) {
        let w = normalized.clamp(EPS_FIRE, 1.0);
        let offset = self.spread * sqrt(1.0 / w - 1.0);
        let y = match self.orientation {
            Orientation::Decreasing => self.center - offset,
            Orientation::Increasing => self.center + offset,
        };
        (y, normalized * y)
    }
}
