use std::fmt;
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::functions::Component;
use super::transform::{Combo, TransformationSpec, SHIFT_RANGE};
use crate::error::{Error, Result};
use crate::seed;

pub const SUITE_SIZE: usize = 10;
pub const MIN_SUITE_DIM: usize = 2;
pub const MAX_SUITE_DIM: usize = 100;

/// Box constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.is_empty() {
            return Err(Error::Config(format!(
                "bounds need matching non-empty vectors, got {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(d) = (0..lower.len()).find(|&d| !(lower[d] < upper[d]) || !lower[d].is_finite() || !upper[d].is_finite()) {
            return Err(Error::Config(format!(
                "bounds in coordinate {d} are not a finite interval: [{}, {}]",
                lower[d], upper[d]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// `[-100, 100]^dimension`.
    pub fn standard(dimension: usize) -> Self {
        Self {
            lower: vec![-100.0; dimension],
            upper: vec![100.0; dimension],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Unimodal,
    Basic,
    Hybrid,
    Composition,
}

impl Category {
    pub fn name(self) -> &'static str {
        match self {
            Category::Unimodal => "unimodal",
            Category::Basic => "basic",
            Category::Hybrid => "hybrid",
            Category::Composition => "composition",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Components applied to consecutive blocks of a permuted input.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridLayout {
    pub permutation: Vec<usize>,
    pub blocks: Vec<(Component, Range<usize>)>,
}

impl HybridLayout {
    fn new(components: [Component; 3], dimension: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut permutation: Vec<usize> = (0..dimension).collect();
        permutation.shuffle(rng);
        let first = hybrid_block_len(dimension);
        let second = first.min(dimension - first);
        let cuts = [0, first, first + second, dimension];
        let blocks = components
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, cuts[k]..cuts[k + 1]))
            .collect();
        Self { permutation, blocks }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let permuted: Vec<f64> = self.permutation.iter().map(|&p| z[p]).collect();
        self.blocks
            .iter()
            .map(|(c, range)| c.eval(&permuted[range.clone()]))
            .sum()
    }
}

/// Size of each of the two leading hybrid blocks: `round(0.3 * D)`.
pub fn hybrid_block_len(dimension: usize) -> usize {
    (0.3 * dimension as f64).round() as usize
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompositionTerm {
    pub component: Component,
    pub offset: Vec<f64>,
    pub sigma: f64,
    pub lambda: f64,
    pub bias: f64,
}

/// Distance-weighted blend of offset components.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionLayout {
    pub terms: Vec<CompositionTerm>,
}

impl CompositionLayout {
    const SIGMAS: [f64; 3] = [10.0, 20.0, 30.0];
    const BIASES: [f64; 3] = [0.0, 100.0, 200.0];

    fn new(parts: [(Component, f64); 3], dimension: usize, rng: &mut ChaCha8Rng) -> Self {
        let terms = parts
            .iter()
            .enumerate()
            .map(|(k, &(component, lambda))| {
                // The first optimum sits at the origin so the global optimum is known.
                let offset = if k == 0 {
                    vec![0.0; dimension]
                } else {
                    (0..dimension)
                        .map(|_| rng.random_range(-SHIFT_RANGE..=SHIFT_RANGE))
                        .collect()
                };
                CompositionTerm {
                    component,
                    offset,
                    sigma: Self::SIGMAS[k],
                    lambda,
                    bias: Self::BIASES[k],
                }
            })
            .collect();
        Self { terms }
    }

    /// Normalized weights at `z`.
    pub fn weights(&self, z: &[f64]) -> Vec<f64> {
        let dim = z.len() as f64;
        let dist2: Vec<f64> = self
            .terms
            .iter()
            .map(|t| z.iter().zip(&t.offset).map(|(a, o)| (a - o).powi(2)).sum())
            .collect();
        if let Some(hit) = dist2.iter().position(|&d2| d2 == 0.0) {
            let mut w = vec![0.0; self.terms.len()];
            w[hit] = 1.0;
            return w;
        }
        let raw: Vec<f64> = dist2
            .iter()
            .zip(&self.terms)
            .map(|(&d2, t)| (-d2 / (2.0 * dim * t.sigma * t.sigma)).exp() / d2.sqrt())
            .collect();
        let total: f64 = raw.iter().sum();
        if total > 0.0 && total.is_finite() {
            raw.iter().map(|w| w / total).collect()
        } else {
            vec![1.0 / self.terms.len() as f64; self.terms.len()]
        }
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        let weights = self.weights(z);
        let mut shifted = vec![0.0; z.len()];
        self.terms
            .iter()
            .zip(&weights)
            .filter(|(_, &w)| w != 0.0)
            .map(|(t, &w)| {
                for ((s, a), o) in shifted.iter_mut().zip(z).zip(&t.offset) {
                    *s = a - o;
                }
                w * (t.lambda * t.component.eval(&shifted) + t.bias)
            })
            .sum()
    }
}

/// Untransformed body of a suite member. Minimum 0 at the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum BaseFunction {
    Single(Component),
    Hybrid(HybridLayout),
    Composition(CompositionLayout),
}

impl BaseFunction {
    pub fn eval(&self, z: &[f64]) -> f64 {
        match self {
            BaseFunction::Single(c) => c.eval(z),
            BaseFunction::Hybrid(h) => h.eval(z),
            BaseFunction::Composition(c) => c.eval(z),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    id: usize,
    category: Category,
    dimension: usize,
    base: Arc<BaseFunction>,
    /// Applied transformations, oldest first. The newest acts on `x` first.
    transforms: Vec<TransformationSpec>,
    optimum_value: f64,
    optimum_point: Vec<f64>,
}

impl ObjectiveFunction {
    /// Wraps a base whose minimum is 0 at the origin.
    pub fn new(id: usize, category: Category, dimension: usize, base: BaseFunction) -> Self {
        Self {
            id,
            category,
            dimension,
            base: Arc::new(base),
            transforms: Vec::new(),
            optimum_value: 0.0,
            optimum_point: vec![0.0; dimension],
        }
    }

    pub fn id(&self) -> usize {
        self.id
    }

    /// `F1`, `F2`, ...
    pub fn label(&self) -> String {
        format!("F{}", self.id)
    }

    pub fn category(&self) -> Category {
        self.category
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn optimum_value(&self) -> f64 {
        self.optimum_value
    }

    pub fn optimum_point(&self) -> &[f64] {
        &self.optimum_point
    }

    pub fn base(&self) -> &BaseFunction {
        &self.base
    }

    pub fn transforms(&self) -> &[TransformationSpec] {
        &self.transforms
    }

    /// Combination of the most recent transformation, `none` if untransformed.
    pub fn combo(&self) -> Combo {
        self.transforms.last().map_or(Combo::None, |t| t.combo)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        let mut bias = 0.0;
        let mut z = x.to_vec();
        for t in self.transforms.iter().rev() {
            z = t.apply(&z);
            bias += t.bias;
        }
        self.base.eval(&z) + bias
    }

    /// `x -> f(R (x - S)) + B`.
    pub fn apply_transformation(mut self, t: TransformationSpec) -> Result<Self> {
        if t.dimension() != self.dimension || t.rotation.nrows() != self.dimension {
            return Err(Error::Config(format!(
                "transformation has dimension {}, function has {}",
                t.dimension(),
                self.dimension
            )));
        }
        self.optimum_point = t.invert(&self.optimum_point);
        self.optimum_value += t.bias;
        self.transforms.push(t);
        Ok(self)
    }
}

fn check_suite_dimension(dimension: usize) -> Result<()> {
    if (MIN_SUITE_DIM..=MAX_SUITE_DIM).contains(&dimension) {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "suite dimension must be in {MIN_SUITE_DIM}..={MAX_SUITE_DIM}, got {dimension}"
        )))
    }
}

/// Seed of the transformation instance for one member; shared by all combos.
pub fn transformation_seed(suite_seed: u64, id: usize, dimension: usize) -> u64 {
    seed::mix(
        suite_seed,
        &[seed::label_hash("transformation"), id as u64, dimension as u64],
    )
}

/// The ten untransformed members.
pub fn make_suite(dimension: usize, seed: u64) -> Result<Vec<ObjectiveFunction>> {
    check_suite_dimension(dimension)?;
    let structure = |id: usize| {
        ChaCha8Rng::seed_from_u64(seed::mix(
            seed,
            &[seed::label_hash("structure"), id as u64, dimension as u64],
        ))
    };
    use Component::*;
    let single = |id, category, c| ObjectiveFunction::new(id, category, dimension, BaseFunction::Single(c));
    let hybrid = |id: usize, parts| {
        let layout = HybridLayout::new(parts, dimension, &mut structure(id));
        ObjectiveFunction::new(id, Category::Hybrid, dimension, BaseFunction::Hybrid(layout))
    };
    let composition = |id: usize, parts| {
        let layout = CompositionLayout::new(parts, dimension, &mut structure(id));
        ObjectiveFunction::new(id, Category::Composition, dimension, BaseFunction::Composition(layout))
    };
    Ok(vec![
        single(1, Category::Unimodal, BentCigar),
        single(2, Category::Basic, Schwefel),
        single(3, Category::Basic, Rastrigin),
        single(4, Category::Basic, GriewankRosenbrock),
        hybrid(5, [Schwefel, Rastrigin, Elliptic]),
        hybrid(6, [Griewank, Ackley, Rosenbrock]),
        hybrid(7, [HappyCat, GriewankRosenbrock, Schwefel]),
        composition(8, [(Rastrigin, 1.0), (Griewank, 10.0), (Schwefel, 1.0)]),
        composition(9, [(Ackley, 10.0), (Elliptic, 1e-6), (Griewank, 10.0)]),
        composition(10, [(HappyCat, 10.0), (Ackley, 10.0), (Discus, 1e-6)]),
    ])
}

/// The suite with `combo` applied to every member.
pub fn make_transformed_suite(dimension: usize, seed: u64, combo: Combo) -> Result<Vec<ObjectiveFunction>> {
    make_suite(dimension, seed)?
        .into_iter()
        .map(|f| {
            let t = TransformationSpec::generate(combo, dimension, transformation_seed(seed, f.id(), dimension));
            f.apply_transformation(t)
        })
        .collect()
}

/// Single transformed member, `id` in `1..=10`.
pub fn suite_member(dimension: usize, seed: u64, id: usize, combo: Combo) -> Result<ObjectiveFunction> {
    if !(1..=SUITE_SIZE).contains(&id) {
        return Err(Error::Config(format!("function id must be in 1..={SUITE_SIZE}, got {id}")));
    }
    let f = make_suite(dimension, seed)?.swap_remove(id - 1);
    let t = TransformationSpec::generate(combo, dimension, transformation_seed(seed, id, dimension));
    f.apply_transformation(t)
}

pub const MANIFEST_HEADER: &str = "function,category,seed,combo,optimum_value";

/// Delimiter-separated manifest, one row per member after the header.
pub fn suite_manifest(functions: &[ObjectiveFunction], seed: u64) -> String {
    let mut out = String::from(MANIFEST_HEADER);
    out.push('\n');
    for f in functions {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            f.label(),
            f.category(),
            seed,
            f.combo(),
            f.optimum_value()
        );
    }
    out
}
