use super::archive::SampleArchive;
use super::features::{centered_feature_map_into, feature_count};
use super::ols::{least_squares, Design};

/// Relative pivot threshold under which a feature column counts as dependent.
pub const RANK_TOL: f64 = 1e-10;

/// Global linear model over the six feature groups.
///
/// Polynomial terms are built in coordinates centred on the sample mean and
/// scaled by the sample half-range; the fitted function is the same, but a
/// tightly clustered archive no longer looks rank deficient.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaModel {
    dimension: usize,
    center: Vec<f64>,
    scale: Vec<f64>,
    coefficients: Vec<f64>,
    fitted: bool,
    r_squared: Option<f64>,
    rank: usize,
    pivot_ratio: f64,
}

impl MetaModel {
    pub fn unfitted(dimension: usize) -> Self {
        Self {
            dimension,
            center: vec![0.0; dimension],
            scale: vec![1.0; dimension],
            coefficients: vec![0.0; feature_count(dimension)],
            fitted: false,
            r_squared: None,
            rank: 0,
            pivot_ratio: 0.0,
        }
    }

    /// Least-squares fit to the archive; unfitted below `feature_count` samples.
    pub fn fit(archive: &SampleArchive, dimension: usize) -> Self {
        Self::fit_samples(archive.positions(), archive.fitness(), dimension)
    }

    pub fn fit_samples(positions: &[Vec<f64>], fitness: &[f64], dimension: usize) -> Self {
        let cols = feature_count(dimension);
        if positions.len() < cols {
            return Self::unfitted(dimension);
        }
        let (center, scale) = frame(positions, dimension);
        let mut design = Design::zeros(positions.len(), cols);
        let mut row = Vec::with_capacity(cols);
        for (i, p) in positions.iter().enumerate() {
            row.clear();
            centered_feature_map_into(p, &center, &scale, &mut row);
            design.set_row(i, &row);
        }
        let fit = least_squares(design, fitness, RANK_TOL);
        let mut model = Self {
            dimension,
            center,
            scale,
            coefficients: fit.coefficients,
            fitted: true,
            r_squared: None,
            rank: fit.rank,
            pivot_ratio: fit.pivot_ratio,
        };
        let predicted: Vec<f64> = positions.iter().map(|p| model.predict(p)).collect();
        model.r_squared = crate::metrics::r_squared_raw(&predicted, fitness);
        model
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Coefficients in the centred basis, see [`centered_feature_map_into`].
    ///
    /// [`centered_feature_map_into`]: super::features::centered_feature_map_into
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn is_fitted(&self) -> bool {
        self.fitted
    }

    /// In-sample coefficient of determination, unclamped.
    pub fn r_squared(&self) -> Option<f64> {
        self.r_squared
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Smallest accepted pivot over the leading one, a conditioning proxy.
    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    /// Centre and half-range of the fitted samples per coordinate.
    pub fn frame(&self) -> (&[f64], &[f64]) {
        (&self.center, &self.scale)
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut features = Vec::with_capacity(self.coefficients.len());
        centered_feature_map_into(x, &self.center, &self.scale, &mut features);
        features
            .iter()
            .zip(&self.coefficients)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Scales every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut m = self.clone();
        for c in &mut m.coefficients {
            *c *= factor;
        }
        m
    }
}

fn frame(positions: &[Vec<f64>], dimension: usize) -> (Vec<f64>, Vec<f64>) {
    let mut lo = vec![f64::INFINITY; dimension];
    let mut hi = vec![f64::NEG_INFINITY; dimension];
    let mut sum = vec![0.0; dimension];
    for p in positions {
        for k in 0..dimension {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
            sum[k] += p[k];
        }
    }
    let center = sum.iter().map(|s| s / positions.len() as f64).collect();
    let scale = lo
        .iter()
        .zip(&hi)
        .map(|(l, h)| {
            let half = 0.5 * (h - l);
            if half > 0.0 && half.is_finite() { half } else { 1.0 }
        })
        .collect();
    (center, scale)
}

/// Index of the smallest surrogate value, lowest index on ties. NaN loses.
pub fn argmin_surrogate(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        let current = values[best];
        if v < current || (current.is_nan() && !v.is_nan()) {
            best = j;
        }
    }
    best
}

/// Chooses among `trials` by surrogate value.
pub fn screen(trials: &[Vec<f64>], model: &MetaModel) -> usize {
    if trials.len() <= 1 {
        return 0;
    }
    let values: Vec<f64> = trials.iter().map(|t| model.predict(t)).collect();
    argmin_surrogate(&values)
}
