//! Elementary test functions used as suite members and as building blocks
//! for hybrid and composition functions.
//!
//! Every component takes coordinates on the common `[-100, 100]` scale,
//! applies its own input scaling, and attains its global minimum of zero at
//! the origin.

use std::f64::consts::{E, PI};

/// Shift that moves the modified Schwefel optimum to the origin.
const SCHWEFEL_OFFSET: f64 = 420.968_746_227_503_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    BentCigar,
    Schwefel,
    Rastrigin,
    /// Expanded Griewank applied to consecutive Rosenbrock pairs.
    GriewankRosenbrock,
    Elliptic,
    Discus,
    Griewank,
    Ackley,
    HappyCat,
    Rosenbrock,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::BentCigar => "bent_cigar",
            Component::Schwefel => "schwefel",
            Component::Rastrigin => "rastrigin",
            Component::GriewankRosenbrock => "griewank_rosenbrock",
            Component::Elliptic => "elliptic",
            Component::Discus => "discus",
            Component::Griewank => "griewank",
            Component::Ackley => "ackley",
            Component::HappyCat => "happy_cat",
            Component::Rosenbrock => "rosenbrock",
        }
    }

    /// Evaluates the component. An empty input evaluates to zero.
    pub fn eval(self, x: &[f64]) -> f64 {
        if x.is_empty() {
            return 0.0;
        }
        match self {
            Component::BentCigar => bent_cigar(x),
            Component::Schwefel => schwefel(x),
            Component::Rastrigin => rastrigin(x),
            Component::GriewankRosenbrock => griewank_rosenbrock(x),
            Component::Elliptic => elliptic(x),
            Component::Discus => discus(x),
            Component::Griewank => griewank(x),
            Component::Ackley => ackley(x),
            Component::HappyCat => happy_cat(x),
            Component::Rosenbrock => rosenbrock(x),
        }
    }
}

pub fn bent_cigar(x: &[f64]) -> f64 {
    let head = x[0] * x[0];
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    head + 1e6 * tail
}

fn schwefel_term(z: f64, dim: f64) -> f64 {
    if z.abs() <= 500.0 {
        z * z.abs().sqrt().sin()
    } else if z > 500.0 {
        let m = 500.0 - z % 500.0;
        m * m.abs().sqrt().sin() - (z - 500.0).powi(2) / (10_000.0 * dim)
    } else {
        let m = z.abs() % 500.0 - 500.0;
        m * m.abs().sqrt().sin() - (z + 500.0).powi(2) / (10_000.0 * dim)
    }
}

/// Modified Schwefel function with the usual `1000/100` input scaling.
pub fn schwefel(x: &[f64]) -> f64 {
    let dim = x.len() as f64;
    let peak = schwefel_term(SCHWEFEL_OFFSET, dim);
    x.iter()
        .map(|&v| peak - schwefel_term(10.0 * v + SCHWEFEL_OFFSET, dim))
        .sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| {
            let z = 0.0512 * v;
            z * z - 10.0 * (2.0 * PI * z).cos() + 10.0
        })
        .sum()
}

pub fn griewank_rosenbrock(x: &[f64]) -> f64 {
    let d = x.len();
    (0..d)
        .map(|i| {
            let a = 0.05 * x[i] + 1.0;
            let b = 0.05 * x[(i + 1) % d] + 1.0;
            let t = 100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2);
            t * t / 4000.0 - t.cos() + 1.0
        })
        .sum()
}

pub fn elliptic(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let expo = if d > 1 { 6.0 * i as f64 / (d - 1) as f64 } else { 0.0 };
            10f64.powf(expo) * v * v
        })
        .sum()
}

pub fn discus(x: &[f64]) -> f64 {
    let tail: f64 = x[1..].iter().map(|v| v * v).sum();
    1e6 * x[0] * x[0] + tail
}

pub fn griewank(x: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut prod = 1.0;
    for (i, &v) in x.iter().enumerate() {
        let z = 6.0 * v;
        sum += z * z;
        prod *= (z / ((i + 1) as f64).sqrt()).cos();
    }
    sum / 4000.0 - prod + 1.0
}

pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq: f64 = x.iter().map(|v| v * v).sum();
    let cs: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    -20.0 * (-0.2 * (sq / d).sqrt()).exp() - (cs / d).exp() + 20.0 + E
}

pub fn happy_cat(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let mut sq = 0.0;
    let mut s = 0.0;
    for &v in x {
        let w = 0.05 * v - 1.0;
        sq += w * w;
        s += w;
    }
    (sq - d).abs().powf(0.25) + (0.5 * sq + s) / d + 0.5
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let a = 0.02048 * w[0] + 1.0;
            let b = 0.02048 * w[1] + 1.0;
            100.0 * (a * a - b).powi(2) + (a - 1.0).powi(2)
        })
        .sum()
}
