use alloc::vec::Vec;

use crate::{Error, Result};

/// One-vs-rest tallies for a single positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Counts with the roles of positive and negative exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            tp: self.tn,
            fp: self.fn_,
            tn: self.tp,
            fn_: self.fp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Accuracy,
    Sensitivity,
    Specificity,
    F1,
}

impl Metric {
    pub const ALL: [Metric; 4] = [
        Metric::Accuracy,
        Metric::Sensitivity,
        Metric::Specificity,
        Metric::F1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Sensitivity => "sensitivity",
            Metric::Specificity => "specificity",
            Metric::F1 => "f1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricSet {
    pub accuracy: f64,
    pub sensitivity: f64,
    pub specificity: f64,
    pub f1: f64,
}

impl MetricSet {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Accuracy => self.accuracy,
            Metric::Sensitivity => self.sensitivity,
            Metric::Specificity => self.specificity,
            Metric::F1 => self.f1,
        }
    }
}

/// Metric values plus the metrics whose denominator was zero (reported as 0).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricReport {
    pub values: MetricSet,
    pub degenerate: Vec<Metric>,
}

/// One-vs-rest confusion counts for `positive`.
pub fn confusion(
    predicted: &[usize],
    actual: &[usize],
    positive: usize,
) -> Result<ConfusionCounts> {
    if predicted.is_empty() || predicted.len() != actual.len() {
        return Err(Error::LabelMismatch {
            predicted: predicted.len(),
            actual: actual.len(),
        });
    }
    let mut c = ConfusionCounts::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p == positive, a == positive) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, false) => c.tn += 1,
            (false, true) => c.fn_ += 1,
        }
    }
    Ok(c)
}

/// Accuracy, sensitivity, specificity and F1. Numerators and denominators
/// are formed in integers and divided once.
pub fn metrics(c: &ConfusionCounts) -> MetricReport {
    let mut degenerate = Vec::new();
    let mut ratio = |num: u64, den: u64, which: Metric| {
        if den == 0 {
            degenerate.push(which);
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let values = MetricSet {
        accuracy: ratio(c.tp + c.tn, c.total(), Metric::Accuracy),
        sensitivity: ratio(c.tp, c.tp + c.fn_, Metric::Sensitivity),
        specificity: ratio(c.tn, c.tn + c.fp, Metric::Specificity),
        f1: ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn_, Metric::F1),
    };
    MetricReport { values, degenerate }
}

/// Index of the largest output; ties go to the lowest index.
pub fn decide_class(outputs: &[f64]) -> Result<usize> {
    if outputs.is_empty() {
        return Err(Error::Evaluation("no class outputs to decide between"));
    }
    if outputs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Evaluation("class output is not finite"));
    }
    Ok(outputs
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > outputs[best] { i } else { best }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_extremes() {
        let c = confusion(&[1, 1, 1], &[1, 1, 1], 1).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                tp: 3,
                ..Default::default()
            }
        );
        let c = confusion(&[0, 2, 0], &[1, 1, 1], 1).unwrap();
        assert_eq!(
            c,
            ConfusionCounts {
                fn_: 3,
                ..Default::default()
            }
        );
        assert!(confusion(&[], &[], 0).is_err());
        assert!(confusion(&[0], &[0, 1], 0).is_err());
    }

    #[test]
    fn three_class_hand_tally() {
        let actual = [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2];
        let predicted = [0, 0, 1, 2, 1, 1, 1, 0, 2, 2, 1, 2];
        // class 0: predicted 0 at 0,1,7 -> tp 2, fp 1; actual 0 missed at 2,3 -> fn 2
        assert_eq!(
            confusion(&predicted, &actual, 0).unwrap(),
            ConfusionCounts {
                tp: 2,
                fp: 1,
                tn: 7,
                fn_: 2
            }
        );
        // class 1: predicted 1 at 2,4,5,6,10 -> tp 3, fp 2; missed at 7 -> fn 1
        assert_eq!(
            confusion(&predicted, &actual, 1).unwrap(),
            ConfusionCounts {
                tp: 3,
                fp: 2,
                tn: 6,
                fn_: 1
            }
        );
        // class 2: predicted 2 at 3,8,9,11 -> tp 3, fp 1; missed at 10 -> fn 1
        assert_eq!(
            confusion(&predicted, &actual, 2).unwrap(),
            ConfusionCounts {
                tp: 3,
                fp: 1,
                tn: 7,
                fn_: 1
            }
        );
    }

    #[test]
    fn metric_values() {
        let perfect = metrics(&ConfusionCounts {
            tp: 50,
            tn: 50,
            fp: 0,
            fn_: 0,
        });
        assert_eq!(
            perfect.values,
            MetricSet {
                accuracy: 1.0,
                sensitivity: 1.0,
                specificity: 1.0,
                f1: 1.0
            }
        );
        assert!(perfect.degenerate.is_empty());

        let m = metrics(&ConfusionCounts {
            tp: 9,
            fn_: 1,
            tn: 8,
            fp: 2,
        })
        .values;
        assert_eq!(m.accuracy, 0.85);
        assert_eq!(m.sensitivity, 0.9);
        assert_eq!(m.specificity, 0.8);
        assert_eq!(m.f1, 18.0 / 21.0);

        let none = metrics(&ConfusionCounts {
            tp: 0,
            fn_: 0,
            tn: 5,
            fp: 1,
        });
        assert_eq!(none.values.sensitivity, 0.0);
        assert_eq!(none.degenerate, [Metric::Sensitivity]);
    }

    #[test]
    fn swapping_roles_swaps_rates() {
        let c = ConfusionCounts {
            tp: 7,
            fp: 3,
            tn: 11,
            fn_: 2,
        };
        let a = metrics(&c).values;
        let b = metrics(&c.swapped()).values;
        assert_eq!(a.sensitivity, b.specificity);
        assert_eq!(a.specificity, b.sensitivity);
        assert_eq!(a.accuracy, b.accuracy);
    }

    #[test]
    fn argmax_decisions() {
        assert_eq!(decide_class(&[0.9, 0.1, 0.2]).unwrap(), 0);
        assert_eq!(decide_class(&[0.5, 0.5, 0.1]).unwrap(), 0);
        assert_eq!(decide_class(&[0.1, 0.5, 0.5]).unwrap(), 1);
        assert_eq!(decide_class(&[0.1, 0.2, 0.9]).unwrap(), 2);
        assert!(decide_class(&[0.1, f64::NAN, 0.9]).is_err());
        assert!(decide_class(&[]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn argmax_is_scale_and_permutation_equivariant(
            v in proptest::collection::vec(-10.0..10.0f64, 3),
            s in 0.01..100.0f64,
            rot in 0usize..3,
        ) {
            let k = decide_class(&v).unwrap();
            let scaled: Vec<f64> = v.iter().map(|x| x * s).collect();
            let sk = decide_class(&scaled).unwrap();
            proptest::prop_assert_eq!(v[sk], v[k]);
            let rotated: Vec<f64> = (0..3).map(|i| v[(i + rot) % 3]).collect();
            let rk = decide_class(&rotated).unwrap();
            proptest::prop_assert_eq!(rotated[rk], v[k]);
        }
    }
}
