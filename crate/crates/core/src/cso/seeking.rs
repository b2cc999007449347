use alloc::vec::Vec;

use rand::seq::index;
use rand::Rng;

use super::{score, Bounds, Cat, CsoConfig, Mode};
use crate::math::ceil;
use crate::{Error, Result};

/// Absolute perturbation scale, relative to the bound width, applied to
/// coordinates that are exactly zero (a relative step cannot move them).
const ZERO_KICK: f64 = 1e-3;

/// Selection score of each candidate for minimization:
/// `|FS_i - FS_max| / (FS_max - FS_min)`, or 1 for every candidate when all
/// fitness values are equal.
pub fn selection_probabilities(fitness: &[f64]) -> Vec<f64> {
    let max = fitness.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = fitness.iter().copied().fold(f64::INFINITY, f64::min);
    if max == min {
        return alloc::vec![1.0; fitness.len()];
    }
    fitness
        .iter()
        .map(|f| (f - max).abs() / (max - min))
        .collect()
}

/// Index drawn with probability proportional to `weights`; uniform when the
/// weights sum to zero.
fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return rng.random_range(0..weights.len());
    }
    let target = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if target < acc {
            return i;
        }
    }
    // rounding left target at the very top: last positive weight
    weights
        .iter()
        .rposition(|w| *w > 0.0)
        .unwrap_or(weights.len() - 1)
}

fn mutate<R: Rng + ?Sized>(value: f64, d: usize, bounds: &Bounds, srd: f64, rng: &mut R) -> f64 {
    let u = (2.0 * rng.random::<f64>() - 1.0) * srd;
    let moved = if value == 0.0 {
        u * ZERO_KICK * bounds.width(d)
    } else {
        value * (1.0 + u)
    };
    bounds.clamp(d, moved)
}

/// One seeking-mode move: sample candidate copies of the cat's position,
/// each with a `cdc` fraction of its coordinates scaled by `1 + u`,
/// `u ~ U[-srd, srd]`, then pick one candidate by roulette over
/// [`selection_probabilities`]. Candidates with non-finite fitness are
/// discarded.
pub fn seeking_step<F, R>(
    cat: &Cat,
    fitness: &F,
    bounds: &Bounds,
    config: &CsoConfig,
    rng: &mut R,
) -> Result<Cat>
where
    F: Fn(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let dim = cat.position.len();
    if dim != bounds.dim() {
        return Err(Error::Shape {
            expected: bounds.dim(),
            found: dim,
        });
    }
    let copies = if config.spc {
        config.smp.saturating_sub(1)
    } else {
        config.smp
    };
    let changed = (ceil(config.cdc * dim as f64) as usize).clamp(1, dim);

    let mut candidates: Vec<(Vec<f64>, f64)> = Vec::with_capacity(copies + 1);
    if config.spc && cat.fitness.is_finite() {
        candidates.push((cat.position.clone(), cat.fitness));
    }
    for _ in 0..copies {
        let mut pos = cat.position.clone();
        if changed == dim {
            for (d, v) in pos.iter_mut().enumerate() {
                *v = mutate(*v, d, bounds, config.srd, rng);
            }
        } else {
            for d in index::sample(rng, dim, changed) {
                pos[d] = mutate(pos[d], d, bounds, config.srd, rng);
            }
        }
        let f = score(fitness, &pos);
        if f.is_finite() {
            candidates.push((pos, f));
        }
    }
    if candidates.is_empty() {
        return Err(Error::Evaluation(
            "every seeking candidate has non-finite fitness",
        ));
    }
    let scores: Vec<f64> = candidates.iter().map(|c| c.1).collect();
    let pick = roulette(&selection_probabilities(&scores), rng);
    let (position, fitness) = candidates.swap_remove(pick);
    Ok(Cat {
        position,
        velocity: cat.velocity.clone(),
        fitness,
        mode: Mode::Seeking,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn probabilities_follow_min_convention() {
        assert_eq!(selection_probabilities(&[1.0, 2.0, 3.0]), [1.0, 0.5, 0.0]);
        assert_eq!(selection_probabilities(&[4.0, 4.0, 4.0]), [1.0, 1.0, 1.0]);
    }

    #[test]
    fn roulette_never_picks_zero_weight() {
        let mut rng = substream(1, &[]);
        for _ in 0..2000 {
            assert_ne!(roulette(&[1.0, 0.5, 0.0], &mut rng), 2);
        }
        let mut counts = [0usize; 3];
        for _ in 0..3000 {
            counts[roulette(&[0.0, 0.0, 0.0], &mut rng)] += 1;
        }
        assert!(counts.iter().all(|&c| c > 800), "{counts:?}");
    }

    #[test]
    fn zero_range_keeps_position() {
        let bounds = Bounds::uniform(3, -5.0, 5.0).unwrap();
        let cat = Cat::at_rest(alloc::vec![1.0, 0.0, -2.0], 5.0);
        let config = CsoConfig {
            srd: 0.0,
            ..Default::default()
        };
        let next = seeking_step(&cat, &sphere, &bounds, &config, &mut substream(2, &[])).unwrap();
        assert_eq!(next.position, cat.position);
        assert_eq!(next.fitness, 5.0);
    }

    #[test]
    fn mutation_is_relative_and_bounded() {
        let bounds = Bounds::uniform(4, -5.0, 5.0).unwrap();
        let cat = Cat::at_rest(
            alloc::vec![1.0, -2.0, 4.9, 0.0],
            sphere(&[1.0, -2.0, 4.9, 0.0]),
        );
        let config = CsoConfig {
            spc: false,
            smp: 1,
            ..Default::default()
        };
        let mut rng = substream(3, &[]);
        for _ in 0..200 {
            let next = seeking_step(&cat, &sphere, &bounds, &config, &mut rng).unwrap();
            let p = &next.position;
            assert!((p[0] - 1.0).abs() <= 0.1 + 1e-15);
            assert!((p[1] + 2.0).abs() <= 0.2 + 1e-15);
            assert!(p[2] <= 5.0);
            assert!(p[3].abs() <= 0.1 * 1e-3 * 10.0 + 1e-18);
            assert_eq!(next.fitness, sphere(p));
        }
    }

    #[test]
    fn partial_cdc_changes_subset() {
        let bounds = Bounds::uniform(10, -5.0, 5.0).unwrap();
        let cat = Cat::at_rest(alloc::vec![1.0; 10], 10.0);
        let config = CsoConfig {
            spc: false,
            smp: 1,
            cdc: 0.3,
            ..Default::default()
        };
        let next = seeking_step(&cat, &sphere, &bounds, &config, &mut substream(4, &[])).unwrap();
        let changed = next.position.iter().filter(|v| **v != 1.0).count();
        assert!((1..=3).contains(&changed));
    }

    #[test]
    fn all_non_finite_is_an_error() {
        let bounds = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let cat = Cat::at_rest(alloc::vec![1.0, 1.0], f64::INFINITY);
        let nan = |_: &[f64]| f64::NAN;
        let err = seeking_step(
            &cat,
            &nan,
            &bounds,
            &CsoConfig::default(),
            &mut substream(5, &[]),
        );
        assert!(matches!(err, Err(Error::Evaluation(_))));
    }
}
