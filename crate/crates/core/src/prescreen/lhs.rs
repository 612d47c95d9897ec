use rand::seq::SliceRandom;
use rand::Rng;

use crate::benchmark::SearchBounds;

/// Latin hypercube sample of `n` points.
///
/// Each coordinate axis is cut into `n` equal strata; every stratum holds
/// exactly one point, placed uniformly inside it.
pub fn lhs_init<R: Rng + ?Sized>(n: usize, bounds: &SearchBounds, rng: &mut R) -> Vec<Vec<f64>> {
    let dim = bounds.dimension();
    let mut points = vec![vec![0.0; dim]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for d in 0..dim {
        let lo = bounds.lower()[d];
        let width = (bounds.upper()[d] - lo) / n as f64;
        strata.shuffle(rng);
        for (point, &s) in points.iter_mut().zip(&strata) {
            let v = lo + width * (s as f64 + rng.random::<f64>());
            // Rounding can push the top stratum onto the upper bound; keep it half-open.
            point[d] = v.min(lo + width * (s + 1) as f64).max(lo + width * s as f64);
        }
    }
    points
}
