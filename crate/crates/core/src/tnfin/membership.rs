use crate::{Error, Result};

/// Bell-shaped antecedent membership `1 / (1 + ((x - c) / a)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFunction {
    center: f64,
    width: f64,
}

impl MembershipFunction {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter("membership center must be finite"));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(
                "membership width must be positive and finite",
            ));
        }
        Ok(Self { center, width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// Membership degree of `x`, in `(0, 1]` and exactly 1 at the center.
    #[inline]
    pub fn evaluate(&self, x: f64) -> f64 {
        let z = (x - self.center) / self.width;
        1.0 / (1.0 + z * z)
    }
}
