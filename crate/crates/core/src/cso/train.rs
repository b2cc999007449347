use super::{minimize_observed, Bounds, CsoConfig, CsoReport};
use crate::tnfin::{Sample, TnfinNetwork};
use crate::{Error, Result};

/// Trains every TNFIN parameter by cat swarm optimization with the
/// sum-of-squares loss as fitness. The starting network joins the swarm as
/// its first cat, so the result is never worse than the input.
pub fn train_tnfin_cso(
    net: &TnfinNetwork,
    data: &[Sample],
    config: &CsoConfig,
) -> Result<(TnfinNetwork, CsoReport)> {
    train_tnfin_cso_observed(net, data, config, |_, _, _| {})
}

/// [`train_tnfin_cso`] with a per-iteration callback receiving the iteration,
/// the best network so far and its loss.
pub fn train_tnfin_cso_observed<O>(
    net: &TnfinNetwork,
    data: &[Sample],
    config: &CsoConfig,
    mut observer: O,
) -> Result<(TnfinNetwork, CsoReport)>
where
    O: FnMut(usize, &TnfinNetwork, f64),
{
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let layout = net.layout();
    let start = net.encode();
    let box_ = layout.param_bounds();
    let bounds = Bounds::new(box_.lower, box_.upper)?.enclosing(&start)?;
    let fitness = |p: &[f64]| {
        TnfinNetwork::decode(layout, p)
            .and_then(|n| n.loss(data))
            .unwrap_or(f64::INFINITY)
    };
    let report = minimize_observed(fitness, &bounds, config, &[start], |i, best, f| {
        if let Ok(n) = TnfinNetwork::decode(layout, best) {
            observer(i, &n, f);
        }
    })?;
    let trained = TnfinNetwork::decode(layout, &report.best_position)?;
    Ok((trained, report))
}
