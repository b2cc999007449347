use rand::Rng;
use tnfin_core::cso::{minimize, Bounds, CsoConfig, Inertia};
use tnfin_core::rng::substream;

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn random_search(bounds: &Bounds, evaluations: usize, seed: u64) -> f64 {
    let mut rng = substream(seed, &[0xBEEF]);
    (0..evaluations)
        .map(|_| {
            let p: Vec<f64> = (0..bounds.dim())
                .map(|d| bounds.lower()[d] + bounds.width(d) * rng.random::<f64>())
                .collect();
            sphere(&p)
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn sphere_reaches_regression_bound() {
    let bounds = Bounds::uniform(10, -5.0, 5.0).unwrap();
    let config = CsoConfig {
        seed: 1,
        ..Default::default()
    };
    let report = minimize(sphere, &bounds, &config).unwrap();
    println!(
        "sphere best {:e} after {} evaluations",
        report.best_fitness, report.evaluations
    );
    assert_eq!(report.fitness_curve.len(), 200);
    assert!(report.best_fitness < 1e-3, "{}", report.best_fitness);
}

#[test]
fn beats_random_search_and_stays_elitist() {
    let bounds = Bounds::uniform(10, -5.0, 5.0).unwrap();
    let mut cso = Vec::new();
    let mut random = Vec::new();
    for seed in 0..10 {
        for inertia in [Inertia::Adaptive, Inertia::Constant(0.9), Inertia::Unit] {
            let config = CsoConfig {
                seed,
                inertia,
                iterations: 50,
                ..Default::default()
            };
            let report = minimize(sphere, &bounds, &config).unwrap();
            assert!(report.fitness_curve.windows(2).all(|w| w[1] <= w[0]));
            if inertia == Inertia::Adaptive {
                cso.push(report.best_fitness);
                random.push(random_search(&bounds, report.evaluations, seed));
            }
        }
    }
    cso.sort_by(f64::total_cmp);
    random.sort_by(f64::total_cmp);
    println!("median cso {:e} random {:e}", cso[5], random[5]);
    assert!(cso[5] < random[5]);
}
