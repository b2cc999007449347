use alloc::vec::Vec;
use core::cell::Cell;

use rand::seq::index;
use rand::Rng;

use super::{score, seeking_step, tracing_step, Bounds, Cat, CsoConfig, CsoReport, Mode};
use crate::math::round;
use crate::rng::substream;
use crate::{Error, Result};

const INIT_ATTEMPTS: usize = 11;

// substream tags
const TAG_INIT: u64 = 0;
const TAG_MODES: u64 = 1;
const TAG_STEP: u64 = 2;

/// Flags exactly `round(mixture_ratio * n)` uniformly chosen cats as tracing
/// and the rest as seeking.
pub fn assign_modes<R: Rng + ?Sized>(cats: &mut [Cat], mixture_ratio: f64, rng: &mut R) {
    let n = cats.len();
    let tracing = (round(mixture_ratio * n as f64).max(0.0) as usize).min(n);
    for cat in cats.iter_mut() {
        cat.mode = Mode::Seeking;
    }
    for i in index::sample(rng, n, tracing) {
        cats[i].mode = Mode::Tracing;
    }
}

/// Minimizes `fitness` over `bounds` starting from uniformly random cats.
pub fn minimize<F>(fitness: F, bounds: &Bounds, config: &CsoConfig) -> Result<CsoReport>
where
    F: Fn(&[f64]) -> f64,
{
    minimize_observed(fitness, bounds, config, &[], |_, _, _| {})
}

/// [`minimize`] with explicit starting positions for the first cats and a
/// callback receiving `(iteration, best_position, best_fitness)` after every
/// outer iteration.
///
/// Randomness is drawn from substreams keyed by `(seed, round, cat)`, so a
/// run is fully determined by its configuration and fitness function.
pub fn minimize_observed<F, O>(
    fitness: F,
    bounds: &Bounds,
    config: &CsoConfig,
    seeds: &[Vec<f64>],
    mut observer: O,
) -> Result<CsoReport>
where
    F: Fn(&[f64]) -> f64,
    O: FnMut(usize, &[f64], f64),
{
    config.validate()?;
    let dim = bounds.dim();
    if let Some(bad) = seeds.iter().find(|s| s.len() != dim) {
        return Err(Error::Shape {
            expected: dim,
            found: bad.len(),
        });
    }
    let evaluations = Cell::new(0usize);
    let counted = |p: &[f64]| {
        evaluations.set(evaluations.get() + 1);
        fitness(p)
    };

    let mut cats = Vec::with_capacity(config.population);
    for c in 0..config.population {
        let mut placed = None;
        if let Some(seed) = seeds.get(c) {
            let pos: Vec<f64> = seed
                .iter()
                .enumerate()
                .map(|(d, v)| bounds.clamp(d, *v))
                .collect();
            let f = score(&counted, &pos);
            if f.is_finite() {
                placed = Some(Cat::at_rest(pos, f));
            }
        }
        for attempt in 0..INIT_ATTEMPTS {
            if placed.is_some() {
                break;
            }
            let mut rng = substream(config.seed, &[TAG_INIT, c as u64, attempt as u64]);
            let pos: Vec<f64> = (0..dim)
                .map(|d| bounds.lower()[d] + bounds.width(d) * rng.random::<f64>())
                .collect();
            let f = score(&counted, &pos);
            if f.is_finite() {
                placed = Some(Cat::at_rest(pos, f));
            }
        }
        cats.push(placed.ok_or(Error::Evaluation(
            "cat fitness non-finite after reinitialization",
        ))?);
    }

    let first = cats.iter().enumerate().fold(
        0,
        |b, (i, c)| if c.fitness < cats[b].fitness { i } else { b },
    );
    let mut best_position = cats[first].position.clone();
    let mut best_fitness = cats[first].fitness;
    let mut curve = Vec::with_capacity(config.iterations);

    for iteration in 0..config.iterations {
        for epoch in 0..config.epochs_per_iteration {
            let round_id = (iteration * config.epochs_per_iteration + epoch) as u64;
            assign_modes(
                &mut cats,
                config.mixture_ratio,
                &mut substream(config.seed, &[TAG_MODES, round_id]),
            );
            for (c, cat) in cats.iter_mut().enumerate() {
                let mut rng = substream(config.seed, &[TAG_STEP, round_id, c as u64]);
                *cat = match cat.mode {
                    Mode::Seeking => seeking_step(cat, &counted, bounds, config, &mut rng)?,
                    Mode::Tracing => tracing_step(
                        cat,
                        &best_position,
                        &counted,
                        bounds,
                        config,
                        iteration,
                        &mut rng,
                    ),
                };
            }
            for cat in &cats {
                if cat.fitness < best_fitness {
                    best_fitness = cat.fitness;
                    best_position.clone_from(&cat.position);
                }
            }
        }
        curve.push(best_fitness);
        observer(iteration, &best_position, best_fitness);
    }

    Ok(CsoReport {
        best_position,
        best_fitness,
        fitness_curve: curve,
        evaluations: evaluations.get(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    fn small_config(seed: u64) -> CsoConfig {
        CsoConfig {
            iterations: 30,
            population: 10,
            seed,
            ..Default::default()
        }
    }

    #[test]
    fn mode_partition() {
        let mut cats: Vec<Cat> = (0..40)
            .map(|_| Cat::at_rest(alloc::vec![0.0], 0.0))
            .collect();
        assign_modes(&mut cats, 0.5, &mut substream(1, &[]));
        assert_eq!(cats.iter().filter(|c| c.mode == Mode::Tracing).count(), 20);

        assign_modes(&mut cats, 0.03, &mut substream(1, &[]));
        assert_eq!(cats.iter().filter(|c| c.mode == Mode::Tracing).count(), 1);

        let mut again = cats.clone();
        assign_modes(&mut cats, 0.5, &mut substream(9, &[]));
        assign_modes(&mut again, 0.5, &mut substream(9, &[]));
        assert_eq!(cats, again);
    }

    #[test]
    fn constant_fitness_gives_flat_curve() {
        let bounds = Bounds::uniform(3, -1.0, 1.0).unwrap();
        let report = minimize(|_: &[f64]| 4.0, &bounds, &small_config(1)).unwrap();
        assert_eq!(report.best_fitness, 4.0);
        assert!(report.fitness_curve.iter().all(|&f| f == 4.0));
    }

    #[test]
    fn deterministic_and_elitist() {
        let bounds = Bounds::uniform(5, -5.0, 5.0).unwrap();
        let a = minimize(sphere, &bounds, &small_config(3)).unwrap();
        let b = minimize(sphere, &bounds, &small_config(3)).unwrap();
        assert_eq!(a, b);
        assert!(a.fitness_curve.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(a.fitness_curve.len(), 30);
        assert_eq!(*a.fitness_curve.last().unwrap(), a.best_fitness);
        assert_eq!(sphere(&a.best_position), a.best_fitness);
        assert_eq!(a.evaluations, small_config(3).evaluation_budget());
        let c = minimize(sphere, &bounds, &small_config(4)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn seed_positions_are_used() {
        let bounds = Bounds::uniform(4, -5.0, 5.0).unwrap();
        let report = minimize_observed(
            sphere,
            &bounds,
            &small_config(2),
            &[alloc::vec![0.0; 4]],
            |_, _, _| {},
        )
        .unwrap();
        assert_eq!(report.best_fitness, 0.0);
    }

    #[test]
    fn non_finite_everywhere_is_an_error() {
        let bounds = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let err = minimize(|_: &[f64]| f64::NAN, &bounds, &small_config(1)).unwrap_err();
        assert!(matches!(err, Error::Evaluation(_)));
    }

    #[test]
    fn observer_sees_every_iteration() {
        let bounds = Bounds::uniform(2, -1.0, 1.0).unwrap();
        let mut seen = Vec::new();
        let report = minimize_observed(sphere, &bounds, &small_config(5), &[], |i, _, f| {
            seen.push((i, f))
        })
        .unwrap();
        assert_eq!(seen.len(), 30);
        assert_eq!(
            seen.iter().map(|s| s.1).collect::<Vec<_>>(),
            report.fitness_curve
        );
    }
}
