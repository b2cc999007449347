use alloc::vec::Vec;

use rand::Rng;

use super::{Layout, MembershipFunction, Orientation, TsukamotoConsequent};
use crate::{Error, Result};

/// A full rule-grid TNFIN. Immutable once built; trainers return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct TnfinNetwork {
    layout: Layout,
    /// Input-major: `mfs[input * mfs_per_input + j]`.
    mfs: Vec<MembershipFunction>,
    consequents: Vec<TsukamotoConsequent>,
}

impl TnfinNetwork {
    /// Builds a network from an input-major MF list and per-rule
    /// `(center, spread)` pairs. Rule orientation follows index parity.
    ///
    /// Widths and spreads must sit at or above the layout's positivity floors
    /// so that encoding and decoding round-trip exactly.
    pub fn new(
        layout: Layout,
        mfs: Vec<MembershipFunction>,
        consequents: &[(f64, f64)],
    ) -> Result<Self> {
        if mfs.len() != layout.mf_count() {
            return Err(Error::Shape {
                expected: layout.mf_count(),
                found: mfs.len(),
            });
        }
        if consequents.len() != layout.rule_count() {
            return Err(Error::Shape {
                expected: layout.rule_count(),
                found: consequents.len(),
            });
        }
        for (idx, mf) in mfs.iter().enumerate() {
            if mf.width() < layout.width_floor(idx / layout.mfs_per_input()) {
                return Err(Error::InvalidParameter(
                    "membership width below positivity floor",
                ));
            }
        }
        let spread_floor = layout.spread_floor();
        let consequents = consequents
            .iter()
            .enumerate()
            .map(|(k, &(c, d))| {
                if d < spread_floor {
                    return Err(Error::InvalidParameter(
                        "consequent spread below positivity floor",
                    ));
                }
                TsukamotoConsequent::new(c, d, Orientation::for_rule(k))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layout,
            mfs,
            consequents,
        })
    }

    /// Default initialization: MF centers evenly spaced over each feature
    /// range, widths `range / (2 (m - 1))`, consequent centers uniform over
    /// the target range and spreads a quarter of the target range.
    pub fn initialize<R: Rng + ?Sized>(layout: Layout, rng: &mut R) -> Result<Self> {
        let m = layout.mfs_per_input();
        let mut mfs = Vec::with_capacity(layout.mf_count());
        for i in 0..layout.inputs() {
            let width = layout.initial_width(i);
            for j in 0..m {
                mfs.push(MembershipFunction::new(layout.initial_center(i, j), width)?);
            }
        }
        let (tlo, thi) = layout.target_range();
        let spread = layout.initial_spread();
        let consequents: Vec<(f64, f64)> = (0..layout.rule_count())
            .map(|_| (tlo + (thi - tlo) * rng.random::<f64>(), spread))
            .collect();
        Self::new(layout, mfs, &consequents)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn membership(&self, input: usize, mf: usize) -> &MembershipFunction {
        &self.mfs[input * self.layout.mfs_per_input() + mf]
    }

    pub fn memberships(&self) -> &[MembershipFunction] {
        &self.mfs
    }

    pub fn consequent(&self, rule: usize) -> &TsukamotoConsequent {
        &self.consequents[rule]
    }

    pub fn consequents(&self) -> &[TsukamotoConsequent] {
        &self.consequents
    }

    /// Flat parameter vector: MF centers, MF widths, rule centers, rule spreads.
    pub fn encode(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.layout.param_count());
        out.extend(self.mfs.iter().map(|mf| mf.center()));
        out.extend(self.mfs.iter().map(|mf| mf.width()));
        out.extend(self.consequents.iter().map(|c| c.center()));
        out.extend(self.consequents.iter().map(|c| c.spread()));
        out
    }

    /// Inverse of [`encode`](Self::encode). Widths and spreads below the
    /// layout's positivity floors are raised to the floor; non-finite values
    /// are rejected.
    pub fn decode(layout: &Layout, params: &[f64]) -> Result<Self> {
        if params.len() != layout.param_count() {
            return Err(Error::Shape {
                expected: layout.param_count(),
                found: params.len(),
            });
        }
        let nm = layout.mf_count();
        let nr = layout.rule_count();
        let m = layout.mfs_per_input();
        let (centers, rest) = params.split_at(nm);
        let (widths, rest) = rest.split_at(nm);
        let (rule_centers, spreads) = rest.split_at(nr);

        let mfs = centers
            .iter()
            .zip(widths)
            .enumerate()
            .map(|(idx, (&c, &w))| {
                if w.is_nan() {
                    return Err(Error::InvalidParameter("membership width is NaN"));
                }
                MembershipFunction::new(c, w.max(layout.width_floor(idx / m)))
            })
            .collect::<Result<Vec<_>>>()?;
        let floor = layout.spread_floor();
        let consequents = rule_centers
            .iter()
            .zip(spreads)
            .enumerate()
            .map(|(k, (&c, &d))| {
                if d.is_nan() {
                    return Err(Error::InvalidParameter("consequent spread is NaN"));
                }
                TsukamotoConsequent::new(c, d.max(floor), Orientation::for_rule(k))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layout: layout.clone(),
            mfs,
            consequents,
        })
    }
}
