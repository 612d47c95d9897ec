//! Population and meta-model diagnostics.

/// Volume of the bounding box of `points`: product of per-coordinate ranges.
pub fn hyper_volume<P: AsRef<[f64]>>(points: &[P]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let dim = first.as_ref().len();
    let mut lo = first.as_ref().to_vec();
    let mut hi = lo.clone();
    for p in &points[1..] {
        for (d, &v) in p.as_ref().iter().enumerate().take(dim) {
            lo[d] = lo[d].min(v);
            hi[d] = hi[d].max(v);
        }
    }
    lo.iter().zip(&hi).map(|(l, h)| h - l).product()
}

/// Whether `chosen` attains the minimum of the true values.
pub fn selection_accuracy(values: &[f64], chosen: usize) -> bool {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    values[chosen] <= min
}

/// Kendall's tau-b. `None` for fewer than two pairs or a constant input.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len(), "rank correlation needs equal lengths");
    let n = a.len();
    if n < 2 {
        return None;
    }
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut ties_a, mut ties_b) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            if da == 0.0 {
                ties_a += 1;
            }
            if db == 0.0 {
                ties_b += 1;
            }
            let s = da * db;
            if s > 0.0 {
                concordant += 1;
            } else if s < 0.0 {
                discordant += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as i64;
    let denom = (((pairs - ties_a) * (pairs - ties_b)) as f64).sqrt();
    if denom == 0.0 {
        None
    } else {
        Some(((concordant - discordant) as f64 / denom).clamp(-1.0, 1.0))
    }
}

/// `1 - SS_res / SS_tot` without clamping. `None` for fewer than two
/// observations or zero variance.
pub fn r_squared_raw(fitted: &[f64], observed: &[f64]) -> Option<f64> {
    assert_eq!(fitted.len(), observed.len(), "fitted and observed differ in length");
    if observed.len() < 2 {
        return None;
    }
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let ss_tot: f64 = observed.iter().map(|y| (y - mean).powi(2)).sum();
    if !(ss_tot > 0.0) || !ss_tot.is_finite() {
        return None;
    }
    let ss_res: f64 = fitted.iter().zip(observed).map(|(f, y)| (y - f).powi(2)).sum();
    Some(1.0 - ss_res / ss_tot)
}

/// Coefficient of determination clamped to `[0, 1]`.
pub fn r_squared(fitted: &[f64], observed: &[f64]) -> Option<f64> {
    r_squared_raw(fitted, observed).map(|r| r.clamp(0.0, 1.0))
}
