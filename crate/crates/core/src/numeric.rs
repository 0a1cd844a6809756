//! Finite-difference stencils and quadrature used by the verification paths.

use crate::error::{Error, Result};

/// Values of a function on the uniform grid x₀, x₀ + h, …
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSamples {
    pub x0: f64,
    pub h: f64,
    pub values: Vec<f64>,
}

impl UniformSamples {
    pub fn from_fn(x0: f64, h: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..n).map(|i| f(x0 + i as f64 * h)).collect();
        Self { x0, h, values }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Grid points at which the 5-point stencils are defined.
    pub fn interior(&self) -> std::ops::Range<usize> {
        2..self.len().saturating_sub(2)
    }

    pub fn require_stencil(&self) -> Result<()> {
        if self.len() < 5 {
            return Err(Error::GridTooSmall { needed: 5, got: self.len() });
        }
        Ok(())
    }

    pub fn d1(&self, i: usize) -> f64 {
        let v = &self.values;
        (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * self.h)
    }

    pub fn d2(&self, i: usize) -> f64 {
        let v = &self.values;
        (-v[i - 2] + 16.0 * v[i - 1] - 30.0 * v[i] + 16.0 * v[i + 1] - v[i + 2]) / (12.0 * self.h * self.h)
    }

    /// Root-mean-square of the samples.
    pub fn rms(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        (self.values.iter().map(|v| v * v).sum::<f64>() / self.len() as f64).sqrt()
    }
}

/// Fourth-order central first derivative.
pub fn d1_central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Fourth-order central second derivative.
pub fn d2_central(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h * h)
}

/// Composite Simpson rule over equally spaced samples (odd count).
pub fn simpson(values: &[f64], h: f64) -> Result<f64> {
    let n = values.len();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::Domain(format!("simpson needs an odd number (≥ 3) of samples, got {n}")));
    }
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(acc * h / 3.0)
}

/// Gauss–Legendre 8-point rule on [a, b], composed over `panels` subintervals.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const NODES: [f64; 4] =
        [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const WEIGHTS: [f64; 4] =
        [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * width;
        let half = 0.5 * width;
        for (t, w) in NODES.iter().zip(WEIGHTS.iter()) {
            total += w * half * (f(mid - half * t) + f(mid + half * t));
        }
    }
    total
}
