//! Local means `k(t, f)(x) = ∫ f(x + t y) k(y) dy` for kernels supported in
//! the unit ball, realized on the Fourier side as `f̂(ξ) k̂(-tξ)` with
//! `k̂(η) = ∫ k(y) e^{-iη·y} dy`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{FunctionSequence, GridFunction};

/// Radial bump `c · exp(-1/(1 - |y/ρ|²))` on `|y| < ρ ≤ 1`, normalized to
/// unit integral in the given dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpKernel {
    dim: usize,
    radius: f64,
    normalization: f64,
}

const RADIAL_NODES: usize = 4000;

fn raw_bump(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r * r)).exp()
    }
}

/// Composite Simpson rule on `[0, 1]` with an even node count.
fn simpson(nodes: usize, f: impl Fn(f64) -> f64) -> f64 {
    let n = nodes + nodes % 2;
    let h = 1.0 / n as f64;
    let mut sum = f(0.0) + f(1.0);
    for i in 1..n {
        sum += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
    }
    sum * h / 3.0
}

/// `∫_{|y|<1} raw_bump(|y|) e^{-iη·y} dy` for `|η| = eta`, radial in `dim`.
fn unit_bump_transform(dim: usize, eta: f64) -> f64 {
    // oscillation needs several nodes per period of cos(ηr)
    let nodes = RADIAL_NODES.max((8.0 * eta) as usize);
    if dim == 1 {
        2.0 * simpson(nodes, |r| raw_bump(r) * (eta * r).cos())
    } else {
        2.0 * std::f64::consts::PI * simpson(nodes, |r| raw_bump(r) * libm::j0(eta * r) * r)
    }
}

impl BumpKernel {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Kernel(format!("dimension must be 1 or 2, got {dim}")));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(Error::Kernel(format!("support radius {radius} is outside (0, 1]")));
        }
        let mass = unit_bump_transform(dim, 0.0) * radius.powi(dim as i32);
        Ok(Self {
            dim,
            radius,
            normalization: 1.0 / mass,
        })
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(dim, 1.0).expect("unit radius is valid")
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `k(y)`.
    pub fn value(&self, r: f64) -> f64 {
        self.normalization * raw_bump(r / self.radius)
    }

    /// `k̂(η)` for `|η| = eta`; real and even since the kernel is radial.
    pub fn transform(&self, eta: f64) -> f64 {
        self.normalization * self.radius.powi(self.dim as i32) * unit_bump_transform(self.dim, eta * self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalMeansKernels {
    /// `k_0`, used at level zero.
    pub k0: BumpKernel,
    /// `k^0`; levels `j ≥ 1` use `k^N = Δ^N k^0`.
    pub k_upper: BumpKernel,
}

impl LocalMeansKernels {
    pub fn standard(dim: usize) -> Self {
        Self {
            k0: BumpKernel::standard(dim),
            k_upper: BumpKernel::standard(dim),
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        for k in [&self.k0, &self.k_upper] {
            if k.dim != dim {
                return Err(Error::Kernel(format!("kernel dimension {} does not match grid dimension {dim}", k.dim)));
            }
            if k.transform(0.0) == 0.0 {
                return Err(Error::Kernel("kernel has vanishing integral".into()));
            }
        }
        Ok(())
    }
}

/// Level 0: `k_0(1, f)`; level `j ≥ 1`: `k^N(2^{-j}, f)` with
/// `k̂^N(η) = (-|η|²)^N k̂^0(η)`.
pub fn local_means(f: &GridFunction, kernels: &LocalMeansKernels, n_laplace: u32, levels: usize) -> Result<FunctionSequence> {
    let grid = *f.grid();
    kernels.validate(grid.dim())?;
    let spectrum = f.spectrum();
    let mut entries = Vec::with_capacity(levels + 1);
    for j in 0..=levels {
        let t = 2f64.powi(-(j as i32));
        let mut cache: HashMap<u64, f64> = HashMap::new();
        let coeffs: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let eta = t * grid.frequency_norm(idx);
                let factor = *cache.entry(eta.to_bits()).or_insert_with(|| {
                    if j == 0 {
                        kernels.k0.transform(eta)
                    } else {
                        (-eta * eta).powi(n_laplace as i32) * kernels.k_upper.transform(eta)
                    }
                });
                c * factor
            })
            .collect();
        entries.push(GridFunction::from_spectrum(grid, &coeffs)?);
    }
    FunctionSequence::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn standard_bump_has_unit_integral() {
        // independent oracle: plain midpoint rule on a fine grid
        let m = 200_000;
        let raw: f64 = (0..m)
            .map(|i| {
                let y = -1.0 + (i as f64 + 0.5) * 2.0 / m as f64;
                raw_bump(y.abs())
            })
            .sum::<f64>()
            * 2.0
            / m as f64;
        let k = BumpKernel::standard(1);
        assert!((k.transform(0.0) - 1.0).abs() < 1e-12);
        assert!((k.value(0.0) - (-1f64).exp() / raw).abs() < 1e-9);
        let k2 = BumpKernel::standard(2);
        assert!((k2.transform(0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn transform_matches_direct_integral() {
        let k = BumpKernel::new(1, 0.6).unwrap();
        for eta in [0.0, 3.0, 17.5] {
            let m = 100_000;
            let direct: f64 = (0..m)
                .map(|i| {
                    let y = -0.6 + (i as f64 + 0.5) * 1.2 / m as f64;
                    k.value(y.abs()) * (eta * y).cos()
                })
                .sum::<f64>()
                * 1.2
                / m as f64;
            assert!((k.transform(eta) - direct).abs() < 1e-8, "{eta}");
        }
    }

    #[test]
    fn constant_signal_only_survives_at_level_zero() {
        let g = Grid::one_d(128).unwrap();
        let f = GridFunction::constant(g, Complex64::new(3.0, 0.0));
        let kernels = LocalMeansKernels::standard(1);
        let seq = local_means(&f, &kernels, 2, 5).unwrap();
        assert!(seq.entry(0).samples().iter().all(|z| (z.re - 3.0).abs() < 1e-10));
        assert!(seq.entries()[1..].iter().all(|e| e.max_abs() < 1e-10));
    }

    #[test]
    fn single_mode_is_an_eigenfunction() {
        let g = Grid::one_d(128).unwrap();
        let f = GridFunction::mode(g, [6, 0]);
        let kernels = LocalMeansKernels::standard(1);
        let seq = local_means(&f, &kernels, 1, 4).unwrap();
        let xi = 2.0 * PI * 6.0;
        for j in 1..=4 {
            let eta = xi / 2f64.powi(j as i32);
            let factor = -eta * eta * kernels.k_upper.transform(eta);
            assert!(seq.entry(j).sub(&f.scale_real(factor)).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_kernels() {
        assert!(BumpKernel::new(1, 1.5).is_err());
        assert!(BumpKernel::new(3, 0.5).is_err());
        let g = Grid::one_d(64).unwrap();
        let wrong = LocalMeansKernels::standard(2);
        assert!(local_means(&GridFunction::zeros(g), &wrong, 1, 2).is_err());
    }
}
