//! Variation and selection operators.

/// current-to-pbest/1: `x + F (pbest - x) + F (r1 - r2)`.
pub fn mutate(parent: &[f64], pbest: &[f64], r1: &[f64], r2: &[f64], f: f64) -> Vec<f64> {
    debug_assert!(f > 0.0 && f <= 1.0, "scaling factor {f} outside (0, 1]");
    parent
        .iter()
        .zip(pbest)
        .zip(r1.iter().zip(r2))
        .map(|((&x, &b), (&a, &c))| x + f * (b - x) + f * (a - c))
        .collect()
}

/// Binomial crossover. Coordinate `d_rand` always comes from the mutant.
pub fn crossover(parent: &[f64], mutant: &[f64], cr: f64, d_rand: usize, draws: &[f64]) -> Vec<f64> {
    parent
        .iter()
        .zip(mutant)
        .zip(draws)
        .enumerate()
        .map(|(d, ((&x, &v), &u))| if u <= cr || d == d_rand { v } else { x })
        .collect()
}

/// Moves violated coordinates halfway between the parent and the bound.
pub fn repair(trial: &mut [f64], parent: &[f64], lower: &[f64], upper: &[f64]) {
    for d in 0..trial.len() {
        if trial[d] < lower[d] {
            trial[d] = (parent[d] + lower[d]) / 2.0;
        } else if trial[d] > upper[d] {
            trial[d] = (parent[d] + upper[d]) / 2.0;
        }
    }
}

/// Greedy replacement rule: the trial must be strictly better.
pub fn trial_wins(trial_fitness: f64, parent_fitness: f64) -> bool {
    trial_fitness < parent_fitness
}
