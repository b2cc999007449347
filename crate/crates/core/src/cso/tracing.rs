use rand::Rng;

use super::{score, Bounds, Cat, CsoConfig, Mode};

/// Adaptive inertia `w_start + (i_max - i) / (2 i_max)`.
pub fn adaptive_weight(w_start: f64, iteration: usize, max_iterations: usize) -> f64 {
    let i_max = max_iterations as f64;
    w_start + (i_max - iteration as f64) / (2.0 * i_max)
}

/// One tracing-mode move towards `best`.
///
/// Per dimension: `v <- w v + r c1 (best - x)` with a fresh `r ~ U[0, 1]`,
/// `v` clamped to the bound-derived velocity limit, then `x <- x + v` clamped
/// into the box. Fitness is re-evaluated at the new position.
pub fn tracing_step<F, R>(
    cat: &Cat,
    best: &[f64],
    fitness: &F,
    bounds: &Bounds,
    config: &CsoConfig,
    iteration: usize,
    rng: &mut R,
) -> Cat
where
    F: Fn(&[f64]) -> f64,
    R: Rng + ?Sized,
{
    let w = config.inertia_weight(iteration);
    let mut position = cat.position.clone();
    let mut velocity = cat.velocity.clone();
    for d in 0..position.len() {
        let r1: f64 = rng.random();
        let vmax = bounds.vmax(d);
        let v = w * velocity[d] + r1 * config.c1 * (best[d] - position[d]);
        velocity[d] = v.clamp(-vmax, vmax);
        position[d] = bounds.clamp(d, position[d] + velocity[d]);
    }
    let fitness = score(fitness, &position);
    Cat {
        position,
        velocity,
        fitness,
        mode: Mode::Tracing,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cso::Inertia;
    use crate::rng::substream;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn adaptive_weight_endpoints() {
        assert_eq!(adaptive_weight(0.15, 0, 200), 0.65);
        assert_eq!(adaptive_weight(0.15, 200, 200), 0.15);
        assert!(adaptive_weight(0.15, 10, 200) > adaptive_weight(0.15, 11, 200));
    }

    #[test]
    fn best_position_is_a_fixed_point() {
        let bounds = Bounds::uniform(3, -5.0, 5.0).unwrap();
        let best = [0.5, -1.0, 2.0];
        let cat = Cat::at_rest(best.to_vec(), sphere(&best));
        let next = tracing_step(
            &cat,
            &best,
            &sphere,
            &bounds,
            &CsoConfig::default(),
            7,
            &mut substream(1, &[]),
        );
        assert_eq!(next.position, best);
        assert_eq!(next.velocity, [0.0; 3]);
        assert_eq!(next.mode, Mode::Tracing);
    }

    #[test]
    fn velocity_is_clamped() {
        let bounds = Bounds::uniform(2, -5.0, 5.0).unwrap();
        let mut cat = Cat::at_rest(alloc::vec![-5.0, 5.0], 50.0);
        cat.velocity = alloc::vec![100.0, -100.0];
        let config = CsoConfig {
            inertia: Inertia::Unit,
            ..Default::default()
        };
        let mut rng = substream(2, &[]);
        for i in 0..50 {
            cat = tracing_step(&cat, &[5.0, -5.0], &sphere, &bounds, &config, i, &mut rng);
            for d in 0..2 {
                assert!(cat.velocity[d].abs() <= bounds.vmax(d));
                assert!(cat.position[d].abs() <= 5.0);
            }
            assert_eq!(cat.fitness, sphere(&cat.position));
        }
    }

    #[test]
    fn moves_towards_best() {
        let bounds = Bounds::uniform(1, -10.0, 10.0).unwrap();
        let cat = Cat::at_rest(alloc::vec![-4.0], 16.0);
        let config = CsoConfig {
            inertia: Inertia::Constant(0.9),
            ..Default::default()
        };
        let next = tracing_step(
            &cat,
            &[0.0],
            &sphere,
            &bounds,
            &config,
            0,
            &mut substream(3, &[]),
        );
        assert!(next.position[0] >= -4.0);
        assert!(next.velocity[0] >= 0.0);
    }
}
