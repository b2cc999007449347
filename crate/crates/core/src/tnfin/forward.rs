use alloc::vec;
use alloc::vec::Vec;

use super::{Sample, TnfinNetwork};
use crate::{Error, Result};

/// Firing-strength degeneracy threshold. Totals below it are rejected and
/// normalized strengths are clamped to it before the consequent reciprocal.
pub const EPS_FIRE: f64 = 1e-12;

/// Every intermediate value of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardTrace {
    /// Input-major membership degrees (layer 1).
    pub memberships: Vec<f64>,
    /// Rule firing strengths (layer 2).
    pub firing: Vec<f64>,
    /// Normalized firing strengths (layer 3).
    pub normalized: Vec<f64>,
    /// Crisp per-rule consequent values `y_k`.
    pub rule_values: Vec<f64>,
    /// Weighted rule outputs `w_k * y_k` (layer 4).
    pub rule_outputs: Vec<f64>,
    /// Network output (layer 5).
    pub output: f64,
}

/// Reusable buffers for allocation-free repeated evaluation.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    memberships: Vec<f64>,
    strengths: Vec<f64>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Divides each strength by the total.
pub fn normalize(firing: &[f64]) -> Result<Vec<f64>> {
    let mut out = firing.to_vec();
    normalize_in_place(&mut out)?;
    Ok(out)
}

fn normalize_in_place(strengths: &mut [f64]) -> Result<()> {
    if let Some(&bad) = strengths.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::InvalidParameter(if bad.is_nan() {
            "firing strength is NaN"
        } else {
            "firing strength is negative"
        }));
    }
    let total: f64 = strengths.iter().sum();
    if !(total >= EPS_FIRE) || !total.is_finite() {
        return Err(Error::DegenerateFiring { total });
    }
    for w in strengths.iter_mut() {
        *w /= total;
    }
    Ok(())
}

impl TnfinNetwork {
    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.layout().inputs() {
            return Err(Error::Shape {
                expected: self.layout().inputs(),
                found: x.len(),
            });
        }
        Ok(())
    }

    fn memberships_into(&self, x: &[f64], out: &mut Vec<f64>) {
        let m = self.layout().mfs_per_input();
        out.clear();
        out.extend(
            self.memberships()
                .iter()
                .enumerate()
                .map(|(idx, mf)| mf.evaluate(x[idx / m])),
        );
    }

    /// Expands per-input memberships into rule strengths, input 0 most
    /// significant. Each strength is the left-to-right product over inputs.
    fn strengths_into(&self, memberships: &[f64], out: &mut Vec<f64>) {
        let m = self.layout().mfs_per_input();
        out.clear();
        out.resize(self.layout().rule_count(), 0.0);
        out[0] = 1.0;
        let mut len = 1;
        for mu in memberships.chunks_exact(m) {
            for k in (0..len).rev() {
                let v = out[k];
                for j in (0..m).rev() {
                    out[k * m + j] = v * mu[j];
                }
            }
            len *= m;
        }
    }

    /// Layer-2 firing strength of every rule.
    pub fn firing_strengths(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut mu = Vec::new();
        let mut w = Vec::new();
        self.memberships_into(x, &mut mu);
        self.strengths_into(&mu, &mut w);
        Ok(w)
    }

    /// Full forward pass with every layer recorded.
    pub fn forward(&self, x: &[f64]) -> Result<ForwardTrace> {
        self.check_input(x)?;
        let mut memberships = Vec::new();
        let mut firing = Vec::new();
        self.memberships_into(x, &mut memberships);
        self.strengths_into(&memberships, &mut firing);
        let normalized = normalize(&firing)?;
        let mut rule_values = vec![0.0; normalized.len()];
        let mut rule_outputs = vec![0.0; normalized.len()];
        let mut output = 0.0;
        for (k, (cons, &w)) in self.consequents().iter().zip(&normalized).enumerate() {
            let (y, o) = cons.defuzzify(w);
            rule_values[k] = y;
            rule_outputs[k] = o;
            output += o;
        }
        Ok(ForwardTrace {
            memberships,
            firing,
            normalized,
            rule_values,
            rule_outputs,
            output,
        })
    }

    /// Network output using caller-provided buffers. Bitwise identical to
    /// `forward(x)?.output`.
    pub fn output_with(&self, x: &[f64], ws: &mut Workspace) -> Result<f64> {
        self.check_input(x)?;
        self.memberships_into(x, &mut ws.memberships);
        self.strengths_into(&ws.memberships, &mut ws.strengths);
        normalize_in_place(&mut ws.strengths)?;
        Ok(self
            .consequents()
            .iter()
            .zip(&ws.strengths)
            .fold(0.0, |acc, (cons, &w)| acc + cons.defuzzify(w).1))
    }

    pub fn output(&self, x: &[f64]) -> Result<f64> {
        self.output_with(x, &mut Workspace::new())
    }

    /// Sum-of-squares error `1/2 * sum (T - O)^2` over `data`.
    pub fn loss(&self, data: &[Sample]) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut ws = Workspace::new();
        let mut sum = 0.0;
        for s in data {
            let r = s.target - self.output_with(&s.features, &mut ws)?;
            sum += r * r;
        }
        Ok(0.5 * sum)
    }

    /// [`loss`](Self::loss) divided by the number of samples; the quantity
    /// reported on training curves.
    pub fn mean_loss(&self, data: &[Sample]) -> Result<f64> {
        Ok(self.loss(data)? / data.len() as f64)
    }
}
