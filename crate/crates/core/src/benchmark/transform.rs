use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::seed;

/// Bias added when a combination includes `B`.
pub const DEFAULT_BIAS: f64 = 100.0;
/// Generated shifts are uniform in `[-SHIFT_RANGE, SHIFT_RANGE]^D`.
pub const SHIFT_RANGE: f64 = 80.0;

/// Which transformations are switched on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Combo {
    None,
    Shift,
    BiasShift,
    ShiftRotation,
    BiasShiftRotation,
}

impl Combo {
    pub const ALL: [Combo; 5] = [
        Combo::None,
        Combo::Shift,
        Combo::BiasShift,
        Combo::ShiftRotation,
        Combo::BiasShiftRotation,
    ];

    pub fn has_bias(self) -> bool {
        matches!(self, Combo::BiasShift | Combo::BiasShiftRotation)
    }

    pub fn has_shift(self) -> bool {
        self != Combo::None
    }

    pub fn has_rotation(self) -> bool {
        matches!(self, Combo::ShiftRotation | Combo::BiasShiftRotation)
    }

    pub fn label(self) -> &'static str {
        match self {
            Combo::None => "none",
            Combo::Shift => "S",
            Combo::BiasShift => "B+S",
            Combo::ShiftRotation => "S+R",
            Combo::BiasShiftRotation => "B+S+R",
        }
    }

    /// Filesystem-friendly name.
    pub fn slug(self) -> &'static str {
        match self {
            Combo::None => "none",
            Combo::Shift => "s",
            Combo::BiasShift => "bs",
            Combo::ShiftRotation => "sr",
            Combo::BiasShiftRotation => "bsr",
        }
    }
}

impl fmt::Display for Combo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Combo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_uppercase();
        match norm.as_str() {
            "NONE" => Ok(Combo::None),
            "S" => Ok(Combo::Shift),
            "B+S" | "BS" => Ok(Combo::BiasShift),
            "S+R" | "SR" => Ok(Combo::ShiftRotation),
            "B+S+R" | "BSR" => Ok(Combo::BiasShiftRotation),
            _ => Err(Error::Config(format!("unknown transformation combo `{s}`"))),
        }
    }
}

/// `x -> R (x - S)`, plus an additive bias on the function value.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformationSpec {
    pub combo: Combo,
    pub bias: f64,
    pub shift: Vec<f64>,
    pub rotation: DMatrix<f64>,
}

impl TransformationSpec {
    pub fn identity(dimension: usize) -> Self {
        Self {
            combo: Combo::None,
            bias: 0.0,
            shift: vec![0.0; dimension],
            rotation: DMatrix::identity(dimension, dimension),
        }
    }

    /// Generates the transformation instance for `combo`.
    ///
    /// Shift and rotation come from independent streams of `seed`, so all
    /// combos built from one seed share the same shift vector and matrix.
    pub fn generate(combo: Combo, dimension: usize, seed: u64) -> Self {
        let mut spec = Self::identity(dimension);
        spec.combo = combo;
        if combo.has_bias() {
            spec.bias = DEFAULT_BIAS;
        }
        if combo.has_shift() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::mix(seed, &[seed::label_hash("shift")]));
            spec.shift = (0..dimension)
                .map(|_| rng.random_range(-SHIFT_RANGE..=SHIFT_RANGE))
                .collect();
        }
        if combo.has_rotation() {
            spec.rotation = random_rotation(dimension, seed::mix(seed, &[seed::label_hash("rotation")]));
        }
        spec
    }

    pub fn dimension(&self) -> usize {
        self.shift.len()
    }

    /// Maps a point into the coordinates of the wrapped function.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        if !self.combo.has_rotation() {
            return centered;
        }
        let d = centered.len();
        (0..d)
            .map(|i| (0..d).map(|j| self.rotation[(i, j)] * centered[j]).sum())
            .collect()
    }

    /// Inverse of [`apply`](Self::apply): `S + R^T z`.
    pub fn invert(&self, z: &[f64]) -> Vec<f64> {
        let d = z.len();
        (0..d)
            .map(|i| {
                let back: f64 = if self.combo.has_rotation() {
                    (0..d).map(|j| self.rotation[(j, i)] * z[j]).sum()
                } else {
                    z[i]
                };
                self.shift[i] + back
            })
            .collect()
    }
}

/// Uniformly distributed rotation matrix (orthogonal, determinant +1).
///
/// QR of a seeded standard-normal matrix, with column signs fixed so the
/// triangular factor has a positive diagonal; if the result is a reflection
/// the first column is negated.
pub fn random_rotation(dimension: usize, seed: u64) -> DMatrix<f64> {
    if dimension == 0 {
        return DMatrix::zeros(0, 0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = DMatrix::from_fn(dimension, dimension, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = gaussian.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dimension {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}
