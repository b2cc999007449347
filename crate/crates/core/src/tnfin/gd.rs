//! Full-batch gradient-descent baseline with central finite differences.

use alloc::vec::Vec;

use super::{Sample, TnfinNetwork};
use crate::{Error, Result};

/// Relative finite-difference step: `h = FD_STEP * max(1, |p|)`.
pub const FD_STEP: f64 = 1e-6;

/// Central-difference gradient of the sum-of-squares loss with respect to
/// every encoded parameter, using steps `step * max(1, |p|)`.
pub fn fd_gradient(net: &TnfinNetwork, data: &[Sample], step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(
            "finite-difference step must be positive",
        ));
    }
    let layout = net.layout();
    let mut params = net.encode();
    let mut grad = Vec::with_capacity(params.len());
    for i in 0..params.len() {
        let p = params[i];
        let h = step * p.abs().max(1.0);
        let (up, down) = (p + h, p - h);
        params[i] = up;
        let e_up = TnfinNetwork::decode(layout, &params)?.loss(data)?;
        params[i] = down;
        let e_down = TnfinNetwork::decode(layout, &params)?.loss(data)?;
        params[i] = p;
        grad.push((e_up - e_down) / (up - down));
    }
    Ok(grad)
}

/// Trains every parameter by `p <- p - learning_rate * dE/dp` for `epochs`
/// full-batch steps. Returns the trained network and the loss curve
/// `[E_0, E_1, ..., E_epochs]`, where `E_0` is the loss before training.
pub fn train_gd(
    net: &TnfinNetwork,
    data: &[Sample],
    learning_rate: f64,
    epochs: usize,
) -> Result<(TnfinNetwork, Vec<f64>)> {
    train_gd_observed(net, data, learning_rate, epochs, |_, _, _| {})
}

/// [`train_gd`] with a callback invoked after every epoch with the epoch
/// number (1-based), the current network and its loss.
pub fn train_gd_observed<F>(
    net: &TnfinNetwork,
    data: &[Sample],
    learning_rate: f64,
    epochs: usize,
    mut observer: F,
) -> Result<(TnfinNetwork, Vec<f64>)>
where
    F: FnMut(usize, &TnfinNetwork, f64),
{
    if !(learning_rate >= 0.0 && learning_rate.is_finite()) {
        return Err(Error::InvalidParameter(
            "learning rate must be finite and nonnegative",
        ));
    }
    let initial = net.loss(data)?;
    if !initial.is_finite() {
        return Err(Error::Divergence { epoch: 0 });
    }
    let mut curve = Vec::with_capacity(epochs + 1);
    curve.push(initial);
    let mut current = net.clone();
    for epoch in 1..=epochs {
        let diverged = Error::Divergence { epoch };
        let grad = fd_gradient(&current, data, FD_STEP).map_err(|_| diverged.clone())?;
        let params: Vec<f64> = current
            .encode()
            .iter()
            .zip(&grad)
            .map(|(p, g)| p - learning_rate * g)
            .collect();
        current = TnfinNetwork::decode(current.layout(), &params).map_err(|_| diverged.clone())?;
        let loss = current.loss(data).map_err(|_| diverged.clone())?;
        if !loss.is_finite() {
            return Err(diverged);
        }
        curve.push(loss);
        observer(epoch, &current, loss);
    }
    Ok((current, curve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tnfin::Layout;
    use alloc::vec;

    fn linear_data() -> Vec<Sample> {
        (0..20)
            .map(|i| {
                let x = i as f64 / 19.0;
                Sample::new(vec![x], 0.2 + 0.6 * x)
            })
            .collect()
    }

    fn small_net() -> TnfinNetwork {
        let layout = Layout::new(1, 2, vec![(0.0, 1.0)], (-0.25, 1.25)).unwrap();
        TnfinNetwork::initialize(layout, &mut crate::rng::substream(5, &[])).unwrap()
    }

    #[test]
    fn zero_learning_rate_is_a_fixed_point() {
        let net = small_net();
        let data = linear_data();
        let (trained, curve) = train_gd(&net, &data, 0.0, 5).unwrap();
        assert_eq!(trained, net);
        assert_eq!(curve.len(), 6);
        assert!(curve.iter().all(|&e| e == curve[0]));
    }

    #[test]
    fn descends_on_linear_data() {
        let net = small_net();
        let data = linear_data();
        let (_, curve) = train_gd(&net, &data, 0.01, 200).unwrap();
        assert!(curve[200] < curve[0], "{} !< {}", curve[200], curve[0]);
    }

    #[test]
    fn huge_step_reports_divergence() {
        let net = small_net();
        let data = linear_data();
        let err = train_gd(&net, &data, 1e300, 3).unwrap_err();
        assert!(matches!(err, Error::Divergence { epoch: 1 }), "{err:?}");
    }

    #[test]
    fn rejects_negative_rate_and_empty_data() {
        let net = small_net();
        assert!(train_gd(&net, &linear_data(), -1.0, 1).is_err());
        assert_eq!(
            train_gd(&net, &[], 0.1, 1).unwrap_err(),
            Error::EmptyDataset
        );
    }
}
