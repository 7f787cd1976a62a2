//! Periodic sampling lattice on the unit torus and the spectral contract
//! every other module is built on.
//!
//! A [`Grid`] of dimension `d ∈ {1, 2}` with `N` points per axis samples the
//! torus `[0, 1)^d` at `x = i / N`. The frequency set is
//! `{2πk : -N/2 <= k < N/2}` per axis, so a lattice function `f` has the
//! spectral representation
//!
//! ```text
//! f(x) = Σ_k c_k e^{2πi k·x},     c_k = N^{-d} Σ_x f(x) e^{-2πi k·x}.
//! ```
//!
//! Integrals are plain Riemann sums with cell volume `N^{-d}`; the domain has
//! measure one, so the quadrature of a lattice function is the mean of its
//! samples.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// A point of the torus. In one dimension the second coordinate is zero.
pub type Point = [f64; 2];

/// Multi-index `γ = (γ₁, γ₂)`; the second entry is ignored in one dimension.
pub type MultiIndex = [u32; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 16, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn one_d(n: usize) -> Result<Self> {
        Self::new(1, n)
    }

    pub fn two_d(n: usize) -> Result<Self> {
        Self::new(2, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    /// Total number of lattice points, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `h^d = N^{-d}`.
    pub fn cell_volume(&self) -> f64 {
        1.0 / self.len() as f64
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// The same torus sampled with twice as many points per axis.
    pub fn refined(&self) -> Grid {
        Grid {
            dim: self.dim,
            n: 2 * self.n,
        }
    }

    /// Per-axis lattice indices of a flat index (row-major, first axis slowest).
    pub fn axis_indices(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 {
            [idx, 0]
        } else {
            [idx / self.n, idx % self.n]
        }
    }

    pub fn flat_index(&self, axis: [usize; 2]) -> usize {
        if self.dim == 1 {
            axis[0]
        } else {
            axis[0] * self.n + axis[1]
        }
    }

    pub fn point(&self, idx: usize) -> Point {
        let [i, j] = self.axis_indices(idx);
        let h = self.spacing();
        if self.dim == 1 {
            [i as f64 * h, 0.0]
        } else {
            [i as f64 * h, j as f64 * h]
        }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// Signed wavenumber `k ∈ [-N/2, N/2)` of a per-axis index.
    pub fn signed_wavenumber(&self, i: usize) -> i64 {
        let half = self.n / 2;
        if i < half {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn wavenumber(&self, idx: usize) -> [i64; 2] {
        let [i, j] = self.axis_indices(idx);
        if self.dim == 1 {
            [self.signed_wavenumber(i), 0]
        } else {
            [self.signed_wavenumber(i), self.signed_wavenumber(j)]
        }
    }

    /// Frequency `ξ = 2πk` attached to a flat spectral index.
    pub fn frequency(&self, idx: usize) -> Point {
        let [k1, k2] = self.wavenumber(idx);
        [2.0 * PI * k1 as f64, 2.0 * PI * k2 as f64]
    }

    pub fn frequency_norm(&self, idx: usize) -> f64 {
        let [a, b] = self.frequency(idx);
        a.hypot(b)
    }

    /// Largest `|ξ|` on the frequency set.
    pub fn max_frequency_norm(&self) -> f64 {
        PI * self.n as f64 * (self.dim as f64).sqrt()
    }

    /// Radius of the largest ball contained in the frequency box, `πN`.
    pub fn nyquist_radius(&self) -> f64 {
        PI * self.n as f64
    }

    /// Wrap-around distance between two torus points.
    pub fn torus_distance(&self, a: Point, b: Point) -> f64 {
        torus_distance(self.dim, a, b)
    }

    /// Distance from the origin of the fundamental-cell representative of `x`.
    pub fn norm_from_origin(&self, x: Point) -> f64 {
        torus_distance(self.dim, x, [0.0, 0.0])
    }
}

/// Wrap-around Euclidean distance on the unit torus of dimension `dim`.
pub fn torus_distance(dim: usize, a: Point, b: Point) -> f64 {
    let axis = |u: f64, v: f64| {
        let d = (u - v).rem_euclid(1.0);
        d.min(1.0 - d)
    };
    if dim == 1 {
        axis(a[0], b[0])
    } else {
        axis(a[0], b[0]).hypot(axis(a[1], b[1]))
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plans(n: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(n), p.plan_fft_inverse(n))
    })
}

fn transform_in_place(grid: &Grid, data: &mut [Complex64], forward: bool) {
    let n = grid.points_per_axis();
    let (fwd, inv) = plans(n);
    let fft = if forward { fwd } else { inv };
    if grid.dim() == 1 {
        fft.process(data);
        return;
    }
    for row in data.chunks_exact_mut(n) {
        fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        for i in 0..n {
            column[i] = data[i * n + j];
        }
        fft.process(&mut column);
        for i in 0..n {
            data[i * n + j] = column[i];
        }
    }
}

/// Normalized spectral coefficients `c_k` in the grid's flat index layout.
pub fn forward_transform(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform_in_place(grid, &mut data, true);
    let scale = grid.cell_volume();
    for c in &mut data {
        *c *= scale;
    }
    data
}

/// Inverse of [`forward_transform`].
pub fn inverse_transform(grid: &Grid, coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut data = coefficients.to_vec();
    transform_in_place(grid, &mut data, false);
    data
}

/// A sampled complex function on a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    samples: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                found: samples.len(),
            });
        }
        if let Some(index) = samples.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { grid, samples })
    }

    pub fn from_real(grid: Grid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: Grid, f: impl FnMut(Point) -> Complex64) -> Self {
        let samples = grid.points().map(f).collect();
        Self { grid, samples }
    }

    pub fn from_real_fn(grid: Grid, mut f: impl FnMut(Point) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(grid: Grid, value: Complex64) -> Self {
        Self {
            grid,
            samples: vec![value; grid.len()],
        }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    /// A single Fourier mode `e^{2πi k·x}`.
    pub fn mode(grid: Grid, k: [i64; 2]) -> Self {
        Self::from_fn(grid, |x| {
            let phase = 2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1]);
            Complex64::from_polar(1.0, phase)
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.map(|z| z * c)
    }

    /// Pointwise `|f|`.
    pub fn abs(&self) -> Self {
        self.map(|z| Complex64::new(z.norm(), 0.0))
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Pointwise product with a real field sampled on the same grid.
    pub fn mul_real(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.samples.len() {
            return Err(Error::SampleCount {
                expected: self.samples.len(),
                found: weights.len(),
            });
        }
        Ok(Self {
            grid: self.grid,
            samples: self.samples.iter().zip(weights).map(|(&z, &w)| z * w).collect(),
        })
    }

    /// Riemann sum `h^d Σ f(x)`.
    pub fn quadrature(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() * self.grid.cell_volume()
    }

    /// Real part of [`quadrature`](Self::quadrature), for callers that know `f` is real.
    pub fn quadrature_real(&self) -> f64 {
        self.quadrature().re
    }

    pub fn spectrum(&self) -> Vec<Complex64> {
        forward_transform(&self.grid, &self.samples)
    }

    pub fn from_spectrum(grid: Grid, coefficients: &[Complex64]) -> Result<Self> {
        if coefficients.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                found: coefficients.len(),
            });
        }
        Ok(Self {
            grid,
            samples: inverse_transform(&grid, coefficients),
        })
    }

    /// `Σ_k |c_k|²`, equal to the quadrature of `|f|²` by Parseval.
    pub fn spectral_energy(&self) -> f64 {
        self.spectrum().iter().map(|c| c.norm_sqr()).sum()
    }

    /// Multiplies the spectrum by `symbol(ξ)` and transforms back.
    pub fn apply_symbol(&self, symbol: impl Fn(Point) -> Complex64) -> Self {
        let mut coefficients = self.spectrum();
        for (idx, c) in coefficients.iter_mut().enumerate() {
            *c *= symbol(self.grid.frequency(idx));
        }
        Self {
            grid: self.grid,
            samples: inverse_transform(&self.grid, &coefficients),
        }
    }

    /// `((iξ)^γ f̂)^∨`.
    pub fn spectral_derivative(&self, gamma: MultiIndex) -> Self {
        let order = if self.grid.dim() == 1 { [gamma[0], 0] } else { gamma };
        if order == [0, 0] {
            return self.clone();
        }
        self.apply_symbol(|xi| {
            let a = Complex64::new(0.0, xi[0]).powu(order[0]);
            let b = Complex64::new(0.0, xi[1]).powu(order[1]);
            a * b
        })
    }

    /// `(mask · f̂)^∨` for a mask sampled on the grid's frequency set.
    pub fn convolve(&self, mask: &FrequencyMask) -> Result<Self> {
        ensure_same_grid(&self.grid, &mask.grid)?;
        let mut coefficients = self.spectrum();
        for (c, m) in coefficients.iter_mut().zip(&mask.values) {
            *c *= *m;
        }
        Ok(Self {
            grid: self.grid,
            samples: inverse_transform(&self.grid, &coefficients),
        })
    }

    /// Periodic convolution `∫ k(x - y) f(y) dy` realized as a Riemann sum.
    pub fn circular_convolve(&self, kernel: &Self) -> Result<Self> {
        ensure_same_grid(&self.grid, &kernel.grid)?;
        let a = self.spectrum();
        let b = kernel.spectrum();
        let product: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Ok(Self {
            grid: self.grid,
            samples: inverse_transform(&self.grid, &product),
        })
    }
}

/// A function on the grid's frequency set, stored in the spectral index layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMask {
    grid: Grid,
    values: Vec<Complex64>,
}

impl FrequencyMask {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(index) = values.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteSample { index });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(Point) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|idx| f(grid.frequency(idx))).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(Point) -> f64) -> Self {
        Self::from_fn(grid, |xi| Complex64::new(f(xi), 0.0))
    }

    pub fn constant(grid: Grid, value: Complex64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    /// Indicator of a single frequency, given by its wavenumber.
    pub fn indicator(grid: Grid, k: [i64; 2]) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                if grid.wavenumber(idx) == k {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value_at_wavenumber(&self, k: [i64; 2]) -> Option<Complex64> {
        let n = self.grid.points_per_axis() as i64;
        let half = n / 2;
        let in_range = |v: i64| (-half..half).contains(&v);
        if !in_range(k[0]) || (self.grid.dim() == 2 && !in_range(k[1])) {
            return None;
        }
        let wrap = |v: i64| v.rem_euclid(n) as usize;
        let idx = self.grid.flat_index([wrap(k[0]), if self.grid.dim() == 2 { wrap(k[1]) } else { 0 }]);
        Some(self.values[idx])
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }
}

/// A finite sequence `(f_ν)_{ν = 0..=J}` of grid functions on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSequence {
    grid: Grid,
    entries: Vec<GridFunction>,
}

impl FunctionSequence {
    pub fn new(entries: Vec<GridFunction>) -> Result<Self> {
        let first = entries
            .first()
            .ok_or_else(|| Error::Precondition("a function sequence needs at least one entry".into()))?;
        let grid = *first.grid();
        for (nu, f) in entries.iter().enumerate() {
            if *f.grid() != grid {
                return Err(Error::GridMismatch(format!("entry {nu} lives on a different grid")));
            }
        }
        Ok(Self { grid, entries })
    }

    /// Sequence of zeros with levels `0..=levels`.
    pub fn zeros(grid: Grid, levels: usize) -> Self {
        Self {
            grid,
            entries: vec![GridFunction::zeros(grid); levels + 1],
        }
    }

    /// Sequence with `f` at level `nu` and zeros elsewhere.
    pub fn single(f: GridFunction, nu: usize, levels: usize) -> Result<Self> {
        if nu > levels {
            return Err(Error::Precondition(format!("level {nu} exceeds {levels}")));
        }
        let grid = *f.grid();
        let mut entries = vec![GridFunction::zeros(grid); levels + 1];
        entries[nu] = f;
        Ok(Self { grid, entries })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// `J`, the index of the last entry.
    pub fn levels(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[GridFunction] {
        &self.entries
    }

    pub fn entry(&self, nu: usize) -> &GridFunction {
        &self.entries[nu]
    }

    pub fn into_entries(self) -> Vec<GridFunction> {
        self.entries
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            grid: self.grid,
            entries: self.entries.iter().map(|f| f.scale_real(c)).collect(),
        }
    }

    pub fn map_entries(&self, f: impl Fn(usize, &GridFunction) -> GridFunction) -> Result<Self> {
        Self::new(self.entries.iter().enumerate().map(|(nu, e)| f(nu, e)).collect())
    }

    /// `|f_ν(x)|` for every level, level-major.
    pub fn magnitudes(&self) -> Vec<Vec<f64>> {
        self.entries.iter().map(|f| f.magnitudes()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|f| f.is_zero())
    }
}

pub(crate) fn ensure_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch(format!(
            "{}D/N={} vs {}D/N={}",
            a.dim(),
            a.points_per_axis(),
            b.dim(),
            b.points_per_axis()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(3, 64).is_err());
        assert!(Grid::new(1, 8).is_err());
        assert!(Grid::new(1, 48).is_err());
        assert!(Grid::new(2, 16).is_ok());
    }

    #[test]
    fn quadrature_of_one_is_exactly_one() {
        for grid in [Grid::one_d(16).unwrap(), Grid::one_d(1024).unwrap(), Grid::two_d(64).unwrap()] {
            let f = GridFunction::constant(grid, c(1.0));
            assert_eq!(f.quadrature_real(), 1.0);
        }
    }

    #[test]
    fn quadrature_of_half_indicator() {
        let grid = Grid::one_d(64).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| if x[0] < 0.5 { 1.0 } else { 0.0 });
        assert_eq!(f.quadrature_real(), 0.5);
    }

    #[test]
    fn quadrature_of_sin_squared() {
        let grid = Grid::one_d(256).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (2.0 * PI * x[0]).sin().powi(2));
        assert!((f.quadrature_real() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn torus_distance_wraps() {
        assert!((torus_distance(1, [0.1, 0.0], [0.9, 0.0]) - 0.2).abs() < 1e-15);
        assert!((torus_distance(2, [0.0, 0.0], [0.75, 0.75]) - (0.125f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn frequency_set_convention() {
        let grid = Grid::one_d(16).unwrap();
        let ks: Vec<i64> = (0..16).map(|i| grid.wavenumber(i)[0]).collect();
        assert_eq!(ks.iter().min(), Some(&-8));
        assert_eq!(ks.iter().max(), Some(&7));
        assert!((grid.frequency(3)[0] - 6.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn round_trip_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for grid in [Grid::one_d(128).unwrap(), Grid::two_d(32).unwrap()] {
            let f = GridFunction::from_fn(grid, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let back = GridFunction::from_spectrum(grid, &f.spectrum()).unwrap();
            let err = f.sub(&back).unwrap().max_abs();
            assert!(err <= 1e-12 * f.max_abs());
        }
    }

    #[test]
    fn mode_has_single_coefficient() {
        let grid = Grid::two_d(16).unwrap();
        let f = GridFunction::mode(grid, [3, -2]);
        let spec = f.spectrum();
        for (idx, coef) in spec.iter().enumerate() {
            let expected = if grid.wavenumber(idx) == [3, -2] { 1.0 } else { 0.0 };
            assert!((coef - c(expected)).norm() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_single_mode() {
        let grid = Grid::one_d(64).unwrap();
        let f = GridFunction::mode(grid, [1, 0]);
        let df = f.spectral_derivative([1, 0]);
        let expected = f.scale(Complex64::new(0.0, 2.0 * PI));
        assert!(df.sub(&expected).unwrap().max_abs() < 1e-12);
        assert_eq!(f.spectral_derivative([0, 0]), f);
    }

    #[test]
    fn second_derivative_of_cosine() {
        let grid = Grid::one_d(64).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (4.0 * PI * x[0]).cos());
        let d2 = f.spectral_derivative([2, 0]);
        let expected = GridFunction::from_real_fn(grid, |x| -16.0 * PI * PI * (4.0 * PI * x[0]).cos());
        assert!(d2.sub(&expected).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn mixed_partial_in_two_dimensions() {
        let grid = Grid::two_d(32).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (2.0 * PI * x[0]).sin() * (4.0 * PI * x[1]).sin());
        let d = f.spectral_derivative([1, 1]);
        let expected = GridFunction::from_real_fn(grid, |x| {
            8.0 * PI * PI * (2.0 * PI * x[0]).cos() * (4.0 * PI * x[1]).cos()
        });
        assert!(d.sub(&expected).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn convolve_with_trivial_masks() {
        let grid = Grid::one_d(64).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (x[0] * 7.0).sin() + x[0]);
        let one = FrequencyMask::constant(grid, c(1.0));
        let zero = FrequencyMask::constant(grid, c(0.0));
        assert!(f.convolve(&one).unwrap().sub(&f).unwrap().max_abs() < 1e-12);
        assert!(f.convolve(&zero).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn convolve_with_indicator_projects() {
        let grid = Grid::one_d(64).unwrap();
        let f = GridFunction::from_real_fn(grid, |x| (x[0] * 5.0).cos() + x[0] * x[0]);
        let k0 = [5, 0];
        let mask = FrequencyMask::indicator(grid, k0);
        let coef = f.spectrum()[grid.flat_index([5, 0])];
        let expected = GridFunction::mode(grid, k0).scale(coef);
        assert!(f.convolve(&mask).unwrap().sub(&expected).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn parseval_on_random_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let grid = if trial % 2 == 0 { Grid::one_d(128).unwrap() } else { Grid::two_d(16).unwrap() };
            let f = GridFunction::from_fn(grid, |_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            let lhs = f.map(|z| c(z.norm_sqr())).quadrature_real();
            let rhs = f.spectral_energy();
            assert!((lhs - rhs).abs() <= 1e-10 * lhs);
        }
    }

    #[test]
    fn convolve_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grid = Grid::one_d(64).unwrap();
        let mask = FrequencyMask::from_fn(grid, |xi| Complex64::new((-xi[0].abs() / 50.0).exp(), xi[0] / 400.0));
        let f = GridFunction::from_fn(grid, |_| c(rng.gen_range(-1.0..1.0)));
        let g = GridFunction::from_fn(grid, |_| c(rng.gen_range(-1.0..1.0)));
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.4));
        let lhs = f.scale(a).add(&g.scale(b)).unwrap().convolve(&mask).unwrap();
        let rhs = f
            .convolve(&mask)
            .unwrap()
            .scale(a)
            .add(&g.convolve(&mask).unwrap().scale(b))
            .unwrap();
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn sample_validation() {
        let grid = Grid::one_d(16).unwrap();
        assert_eq!(
            GridFunction::new(grid, vec![c(0.0); 15]),
            Err(Error::SampleCount { expected: 16, found: 15 })
        );
        let mut v = vec![c(0.0); 16];
        v[4] = c(f64::INFINITY);
        assert_eq!(GridFunction::new(grid, v), Err(Error::NonFiniteSample { index: 4 }));
    }
}
