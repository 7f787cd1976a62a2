//! Variable exponents `p(·)` sampled on a grid.
//!
//! Infinite exponent values are stored as `f64::INFINITY` and every consumer
//! branches on them explicitly; they are never approximated by large finite
//! numbers.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Grid, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct VariableExponent {
    grid: Grid,
    values: Vec<f64>,
    p_minus: f64,
    p_plus: f64,
}

impl VariableExponent {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                found: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if v.is_nan() || v <= 0.0 {
                return Err(Error::InvalidExponent(format!(
                    "exponent must be positive, found {v} at index {i}"
                )));
            }
        }
        let p_minus = values.iter().copied().fold(f64::INFINITY, f64::min);
        let p_plus = values.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            grid,
            values,
            p_minus,
            p_plus,
        })
    }

    pub fn constant(grid: Grid, p: f64) -> Result<Self> {
        Self::new(grid, vec![p; grid.len()])
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Point) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().map(f).collect())
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn p_minus(&self) -> f64 {
        self.p_minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn is_bounded(&self) -> bool {
        self.p_plus.is_finite()
    }

    pub fn is_constant(&self) -> bool {
        self.p_minus == self.p_plus
    }

    /// Pointwise `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> Vec<f64> {
        self.values.iter().map(|&p| if p.is_infinite() { 0.0 } else { 1.0 / p }).collect()
    }

    /// `p(·)/r` for a positive real `r`.
    pub fn divided_by(&self, r: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidExponent(format!("cannot divide an exponent by {r}")));
        }
        Self::new(self.grid, self.values.iter().map(|&p| p / r).collect())
    }

    /// Pointwise `p/q`. Requires `q` bounded.
    pub fn ratio(&self, q: &Self) -> Result<Self> {
        self.same_grid(q)?;
        if !q.is_bounded() {
            return Err(Error::InvalidExponent("p/q needs q bounded".into()));
        }
        Self::new(self.grid, self.values.iter().zip(&q.values).map(|(&p, &q)| p / q).collect())
    }

    pub fn pointwise_min(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Self::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| a.min(b)).collect(),
        )
    }

    pub fn pointwise_max(&self, other: &Self) -> Result<Self> {
        self.same_grid(other)?;
        Self::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| a.max(b)).collect(),
        )
    }

    /// `true` when `self ≤ other` at every lattice point.
    pub fn le(&self, other: &Self) -> bool {
        self.grid == other.grid && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// Pointwise conjugate exponent: `1/p + 1/p' = 1`, `1' = ∞`, `∞' = 1`.
    pub fn conjugate(&self) -> Result<Self> {
        if self.p_minus < 1.0 {
            return Err(Error::InvalidExponent(format!(
                "conjugate exponent needs p >= 1, found p- = {}",
                self.p_minus
            )));
        }
        let values = self
            .values
            .iter()
            .map(|&p| {
                if p == 1.0 {
                    f64::INFINITY
                } else if p.is_infinite() {
                    1.0
                } else {
                    p / (p - 1.0)
                }
            })
            .collect();
        Self::new(self.grid, values)
    }

    /// Grid estimate of `c_log(1/p)`.
    pub fn c_log_reciprocal(&self) -> f64 {
        log_holder_estimate(&self.grid, &self.reciprocal()).c_log_local
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        crate::grid::ensure_same_grid(&self.grid, &other.grid)
    }
}

/// Grid estimates of the log-Hölder constants of a real function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogHolderReport {
    /// `max |g(x) - g(y)| log(e + 1/d(x, y))` over distinct lattice pairs.
    pub c_log_local: f64,
    /// Mean of `g`; the torus has no point at infinity.
    pub g_infinity: f64,
    /// `max |g(x) - g_∞| log(e + |x|)`.
    pub c_log_global: f64,
}

/// Exhaustive pair scan; parallel over the first point with an exact max-reduction.
pub fn log_holder_estimate(grid: &Grid, g: &[f64]) -> LogHolderReport {
    assert_eq!(g.len(), grid.len(), "log_holder_estimate: sample count mismatch");
    let e = std::f64::consts::E;
    let points: Vec<Point> = grid.points().collect();
    let c_log_local = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let mut best = 0.0f64;
            for j in (i + 1)..g.len() {
                let diff = (g[i] - g[j]).abs();
                if diff == 0.0 {
                    continue;
                }
                let d = grid.torus_distance(points[i], points[j]);
                best = best.max(diff * (e + 1.0 / d).ln());
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    let g_infinity = g.iter().sum::<f64>() / g.len() as f64;
    let c_log_global = g
        .iter()
        .zip(&points)
        .map(|(&v, &x)| (v - g_infinity).abs() * (e + grid.norm_from_origin(x)).ln())
        .fold(0.0, f64::max);
    LogHolderReport {
        c_log_local,
        g_infinity,
        c_log_global,
    }
}
