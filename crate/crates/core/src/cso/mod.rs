//! Cat swarm optimization over real vectors.
//!
//! Each cat alternates between seeking mode (local sampling around its own
//! position) and tracing mode (velocity-driven movement towards the swarm's
//! best position). Fitness is minimized.

mod seeking;
mod swarm;
mod tracing;
mod train;

pub use seeking::{seeking_step, selection_probabilities};
pub use swarm::{assign_modes, minimize, minimize_observed};
pub use tracing::{adaptive_weight, tracing_step};
pub use train::{train_tnfin_cso, train_tnfin_cso_observed};

use alloc::vec::Vec;

use crate::{Error, Result};

/// Inertia weight schedule applied to the previous velocity in tracing mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Inertia {
    /// Plain velocity accumulation (weight 1).
    Unit,
    Constant(f64),
    /// `w_start + (i_max - i) / (2 i_max)`, decaying over the outer iterations.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsoConfig {
    /// Seeking memory pool: candidate positions per seeking cat.
    pub smp: usize,
    /// Seeking range: relative mutation magnitude.
    pub srd: f64,
    /// Fraction of dimensions mutated per candidate.
    pub cdc: f64,
    /// Self-position consideration: keep the current position as a candidate.
    pub spc: bool,
    /// Fraction of cats placed in tracing mode each round.
    pub mixture_ratio: f64,
    /// Acceleration coefficient.
    pub c1: f64,
    pub w_start: f64,
    pub inertia: Inertia,
    pub iterations: usize,
    pub population: usize,
    /// Population update rounds per outer iteration.
    pub epochs_per_iteration: usize,
    pub seed: u64,
}

impl Default for CsoConfig {
    fn default() -> Self {
        Self {
            smp: 3,
            srd: 0.1,
            cdc: 1.0,
            spc: true,
            mixture_ratio: 0.5,
            c1: 2.05,
            w_start: 0.15,
            inertia: Inertia::Adaptive,
            iterations: 200,
            population: 40,
            epochs_per_iteration: 5,
            seed: 0,
        }
    }
}

fn in_unit_interval(v: f64) -> bool {
    v > 0.0 && v <= 1.0
}

impl CsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.smp < 1 {
            return Err(Error::InvalidConfig("smp must be at least 1"));
        }
        if !in_unit_interval(self.srd) {
            return Err(Error::InvalidConfig("srd must lie in (0, 1]"));
        }
        if !in_unit_interval(self.cdc) {
            return Err(Error::InvalidConfig("cdc must lie in (0, 1]"));
        }
        if !in_unit_interval(self.mixture_ratio) {
            return Err(Error::InvalidConfig("mixture ratio must lie in (0, 1]"));
        }
        if self.population < 2 {
            return Err(Error::InvalidConfig("population must be at least 2"));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::InvalidConfig("c1 must be positive"));
        }
        if !self.w_start.is_finite() {
            return Err(Error::InvalidConfig("w_start must be finite"));
        }
        if let Inertia::Constant(w) = self.inertia {
            if !w.is_finite() {
                return Err(Error::InvalidConfig("constant inertia must be finite"));
            }
        }
        if self.iterations == 0 || self.epochs_per_iteration == 0 {
            return Err(Error::InvalidConfig(
                "iterations and epochs per iteration must be positive",
            ));
        }
        Ok(())
    }

    /// Inertia weight used during outer iteration `iteration`.
    pub fn inertia_weight(&self, iteration: usize) -> f64 {
        match self.inertia {
            Inertia::Unit => 1.0,
            Inertia::Constant(w) => w,
            Inertia::Adaptive => adaptive_weight(self.w_start, iteration, self.iterations),
        }
    }

    /// Number of cats placed in tracing mode each round.
    pub fn tracing_count(&self) -> usize {
        let n = crate::math::round(self.mixture_ratio * self.population as f64) as usize;
        n.min(self.population)
    }

    /// Fitness evaluations a full run performs when every evaluation is
    /// finite: initialization plus every round's new candidates.
    pub fn evaluation_budget(&self) -> usize {
        let tracing = self.tracing_count();
        let seeking = self.population - tracing;
        let per_seeker = if self.spc { self.smp - 1 } else { self.smp };
        let rounds = self.iterations * self.epochs_per_iteration;
        self.population + rounds * (seeking * per_seeker + tracing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Seeking,
    Tracing,
}

/// One member of the swarm.
#[derive(Debug, Clone, PartialEq)]
pub struct Cat {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    /// Fitness of `position`; `+inf` when the evaluation was not finite.
    pub fitness: f64,
    pub mode: Mode,
}

impl Cat {
    /// Cat at rest at `position`.
    pub fn at_rest(position: Vec<f64>, fitness: f64) -> Self {
        let velocity = alloc::vec![0.0; position.len()];
        Self {
            position,
            velocity,
            fitness,
            mode: Mode::Seeking,
        }
    }
}

/// Axis-aligned search box. Positions are clamped into it after every move.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Velocity limit as a fraction of each dimension's bound width.
pub const VMAX_FRACTION: f64 = 0.2;

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::Shape {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidParameter(
                "search space needs at least one dimension",
            ));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))
        {
            return Err(Error::InvalidParameter("bounds must be finite and ordered"));
        }
        Ok(Self { lower, upper })
    }

    /// The same interval `[lo, hi]` in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(alloc::vec![lo; dim], alloc::vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn vmax(&self, d: usize) -> f64 {
        VMAX_FRACTION * self.width(d)
    }

    pub fn clamp(&self, d: usize, v: f64) -> f64 {
        v.clamp(self.lower[d], self.upper[d])
    }

    /// Smallest box containing `self` and `point`.
    pub fn enclosing(&self, point: &[f64]) -> Result<Self> {
        if point.len() != self.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                found: point.len(),
            });
        }
        Self::new(
            self.lower
                .iter()
                .zip(point)
                .map(|(l, p)| l.min(*p))
                .collect(),
            self.upper
                .iter()
                .zip(point)
                .map(|(u, p)| u.max(*p))
                .collect(),
        )
    }
}

/// Outcome of a [`minimize`] run.
#[derive(Debug, Clone, PartialEq)]
pub struct CsoReport {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// Best-so-far fitness after each outer iteration.
    pub fitness_curve: Vec<f64>,
    pub evaluations: usize,
}

pub(crate) fn score<F: Fn(&[f64]) -> f64>(fitness: &F, position: &[f64]) -> f64 {
    let v = fitness(position);
    if v.is_finite() {
        v
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = CsoConfig::default();
        c.validate().unwrap();
        assert_eq!(c.tracing_count(), 20);
        // 40 initial + 1000 rounds * (20 seekers * 2 copies + 20 tracers)
        assert_eq!(c.evaluation_budget(), 40 + 1000 * 60);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = [
            CsoConfig {
                smp: 0,
                ..Default::default()
            },
            CsoConfig {
                srd: 0.0,
                ..Default::default()
            },
            CsoConfig {
                cdc: 1.5,
                ..Default::default()
            },
            CsoConfig {
                mixture_ratio: 0.0,
                ..Default::default()
            },
            CsoConfig {
                population: 1,
                ..Default::default()
            },
            CsoConfig {
                c1: 0.0,
                ..Default::default()
            },
            CsoConfig {
                iterations: 0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn bounds_checks() {
        assert!(Bounds::new(alloc::vec![0.0], alloc::vec![1.0, 2.0]).is_err());
        assert!(Bounds::new(alloc::vec![1.0], alloc::vec![0.0]).is_err());
        assert!(Bounds::new(alloc::vec![], alloc::vec![]).is_err());
        let b = Bounds::uniform(2, -5.0, 5.0).unwrap();
        assert_eq!(b.vmax(1), 2.0);
        let e = b.enclosing(&[7.0, 0.0]).unwrap();
        assert_eq!(e.upper(), [7.0, 5.0]);
    }
}
