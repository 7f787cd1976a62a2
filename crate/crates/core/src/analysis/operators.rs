//! Littlewood–Paley blocks, Peetre maximal functions, lifting, multipliers
//! and the `p_N` seminorm.

use num_complex::Complex64;
use rayon::prelude::*;

use super::system::AnalysisSystem;
use crate::error::Result;
use crate::grid::{ensure_same_grid, forward_transform, inverse_transform, FrequencyMask, FunctionSequence, Grid, GridFunction};

/// `(mask_j · f̂)^∨` for every level of the system.
pub fn littlewood_paley(f: &GridFunction, sys: &AnalysisSystem) -> Result<FunctionSequence> {
    ensure_same_grid(f.grid(), sys.grid())?;
    let grid = *f.grid();
    let spectrum = f.spectrum();
    let entries = sys
        .masks()
        .par_iter()
        .map(|mask| {
            let product: Vec<Complex64> = spectrum.iter().zip(mask.values()).map(|(c, m)| c * m).collect();
            GridFunction::from_spectrum(grid, &product)
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionSequence::new(entries)
}

/// `1 + (2^j d)^a` for every lattice offset, indexed like the grid.
fn peetre_denominators(grid: &Grid, level: usize, a: f64) -> Vec<f64> {
    let scale = 2f64.powi(level as i32);
    (0..grid.len())
        .map(|idx| 1.0 + (scale * grid.norm_from_origin(grid.point(idx))).powf(a))
        .collect()
}

/// `(ψ*_j f)_a(x) = max_y |F_j(y)| / (1 + |2^j(x - y)|^a)` over lattice points
/// `y`, with the torus metric. A discrete maximum: it never exceeds the
/// continuum supremum.
pub fn peetre_maximal(f: &FunctionSequence, a: f64) -> Result<FunctionSequence> {
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let entries = f
        .entries()
        .iter()
        .enumerate()
        .map(|(j, entry)| {
            let denom = peetre_denominators(&grid, j, a);
            let mags = entry.magnitudes();
            let out: Vec<f64> = (0..grid.len())
                .into_par_iter()
                .map(|x| {
                    let [xi, xj] = grid.axis_indices(x);
                    let mut best: f64 = 0.0;
                    for (y, &m) in mags.iter().enumerate() {
                        if m == 0.0 {
                            continue;
                        }
                        let [yi, yj] = grid.axis_indices(y);
                        let offset = grid.flat_index([(xi + n - yi) % n, (xj + n - yj) % n]);
                        best = best.max(m / denom[offset]);
                    }
                    best
                })
                .collect();
            GridFunction::from_real(grid, &out)
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionSequence::new(entries)
}

/// `I_σ f = ((1 + |ξ|²)^{σ/2} f̂)^∨`.
pub fn lift(f: &GridFunction, sigma: f64) -> GridFunction {
    if sigma == 0.0 {
        return f.clone();
    }
    f.apply_symbol(|xi| Complex64::new((1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powf(sigma / 2.0), 0.0))
}

/// `(m f̂)^∨`.
pub fn apply_multiplier(f: &GridFunction, m: &FrequencyMask) -> Result<GridFunction> {
    f.convolve(m)
}

/// All multi-indices of order at most `n` in the grid's dimension.
pub fn multi_indices(dim: usize, n: u32) -> Vec<[u32; 2]> {
    if dim == 1 {
        (0..=n).map(|a| [a, 0]).collect()
    } else {
        (0..=n).flat_map(|d| (0..=d).map(move |b| [d - b, b])).collect()
    }
}

/// `max_x (1 + |x|)^N Σ_{|γ| ≤ N} |D^γ f(x)|` with spectral derivatives and
/// `|x|` measured from the origin on the torus.
pub fn p_n_seminorm(f: &GridFunction, n: u32) -> f64 {
    let grid = *f.grid();
    let spectrum = f.spectrum();
    let mut total = vec![0.0; grid.len()];
    for gamma in multi_indices(grid.dim(), n) {
        let coeffs: Vec<Complex64> = spectrum
            .iter()
            .enumerate()
            .map(|(idx, c)| {
                let xi = grid.frequency(idx);
                c * Complex64::new(0.0, xi[0]).powu(gamma[0]) * Complex64::new(0.0, xi[1]).powu(gamma[1])
            })
            .collect();
        for (t, v) in total.iter_mut().zip(inverse_transform(&grid, &coeffs)) {
            *t += v.norm();
        }
    }
    total
        .iter()
        .enumerate()
        .map(|(idx, t)| (1.0 + grid.norm_from_origin(grid.point(idx))).powi(n as i32) * t)
        .fold(0.0, f64::max)
}

/// `sqrt(Σ_ξ (1 + |ξ|²)^κ |c_ξ|²)`: the Bessel-potential norm of a lattice function.
pub fn bessel_norm(f: &GridFunction, kappa: f64) -> f64 {
    let grid = *f.grid();
    forward_transform(&grid, f.samples())
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let r = grid.frequency_norm(idx);
            (1.0 + r * r).powf(kappa) * c.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::system::Profile;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::one_d(256).unwrap()
    }

    #[test]
    fn theta_blocks_reconstruct_the_signal() {
        let g = grid();
        let f = GridFunction::from_real_fn(g, |x| (2.0 * PI * 3.0 * x[0]).sin() + (-(x[0] - 0.4).powi(2) * 200.0).exp());
        let blocks = littlewood_paley(&f, &AnalysisSystem::theta_partition(g)).unwrap();
        let mut sum = GridFunction::zeros(g);
        for e in blocks.entries() {
            sum = sum.add(e).unwrap();
        }
        assert!(sum.sub(&f).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn single_mode_hits_the_expected_levels() {
        let g = grid();
        let sys = AnalysisSystem::admissible(Profile::Narrow, g, 8).unwrap();
        // |ξ₀| = 2π·5 ≈ 31.4 = 2^5 · 0.98: only level 5 is active under the narrow profile
        let f = GridFunction::mode(g, [5, 0]);
        let blocks = littlewood_paley(&f, &sys).unwrap();
        for j in 0..=8 {
            let expected = sys.radial(j, 2.0 * PI * 5.0);
            assert!((blocks.entry(j).max_abs() - expected).abs() < 1e-12);
            assert_eq!(expected != 0.0, j == 5);
        }
        let c = GridFunction::constant(g, Complex64::new(2.0, 0.0));
        let blocks = littlewood_paley(&c, &sys).unwrap();
        assert!((blocks.entry(0).max_abs() - 2.0).abs() < 1e-12);
        assert!(blocks.entries()[1..].iter().all(|e| e.max_abs() < 1e-14));
    }

    #[test]
    fn peetre_dominates_and_handles_constants() {
        let g = grid();
        let f = GridFunction::from_real_fn(g, |x| (2.0 * PI * 4.0 * x[0]).cos());
        let blocks = littlewood_paley(&f, &AnalysisSystem::admissible(Profile::Classic, g, 6).unwrap()).unwrap();
        let max = peetre_maximal(&blocks, 2.0).unwrap();
        for (p, b) in max.entries().iter().zip(blocks.entries()) {
            for (u, v) in p.samples().iter().zip(b.samples()) {
                assert!(u.re >= v.norm());
            }
        }
        let c = FunctionSequence::new(vec![GridFunction::constant(g, Complex64::new(0.0, -3.0)); 3]).unwrap();
        let max = peetre_maximal(&c, 1.5).unwrap();
        assert!(max.entries().iter().all(|e| e.samples().iter().all(|z| z.re == 3.0)));
    }

    #[test]
    fn peetre_large_a_tends_to_local_maximum() {
        // a → ∞ keeps only |2^j(x-y)| < 1: the limit is the max of |F_j| over the
        // ball of radius 2^{-j}, which is |F_j| itself once 2^j h ≥ 1.
        let g = grid();
        let n = g.points_per_axis();
        let f = GridFunction::from_real_fn(g, |x| 1.5 + (2.0 * PI * x[0]).sin());
        let mags = f.magnitudes();
        let top = n.trailing_zeros() as usize;
        let seq = FunctionSequence::single(f.clone(), top, top).unwrap();
        let at_top = peetre_maximal(&seq, 50.0).unwrap();
        assert!(at_top.entry(top).sub(&f.abs()).unwrap().max_abs() < 1e-12);

        let j = 3;
        let seq = FunctionSequence::single(f.clone(), j, j).unwrap();
        let m = peetre_maximal(&seq, 50.0).unwrap();
        let reach = n >> j;
        let local = |x: usize, r: usize| {
            (0..=r)
                .map(|d| mags[(x + d) % n].max(mags[(x + n - d) % n]))
                .fold(0.0, f64::max)
        };
        let global = mags.iter().copied().fold(0.0, f64::max);
        for x in 0..n {
            // lower: points with 2^j d ≤ 3/4 are damped by at most 1 + 0.75^50
            let lower = local(x, 3 * reach / 4) / (1.0 + 0.75f64.powi(50));
            // upper: points with 2^j d ≥ 1 are at least halved
            let upper = local(x, reach - 1).max(global / 2.0);
            let v = m.entry(j).samples()[x].re;
            assert!(lower <= v && v <= upper, "{x}: {lower} {v} {upper}");
        }
    }

    #[test]
    fn peetre_is_not_monotone_in_a_below_unit_scale() {
        // For 2^j d < 1 the denominator 1 + (2^j d)^a shrinks as a grows, so a
        // spike next to a small value is seen more strongly at larger a.
        let g = Grid::one_d(16).unwrap();
        let mut v = vec![0.0; 16];
        v[1] = 1.0;
        let seq = FunctionSequence::single(GridFunction::from_real(g, &v).unwrap(), 0, 0).unwrap();
        let lo = peetre_maximal(&seq, 1.0).unwrap().entry(0).samples()[0].re;
        let hi = peetre_maximal(&seq, 4.0).unwrap().entry(0).samples()[0].re;
        assert!(hi > lo);
    }

    #[test]
    fn lift_identities() {
        let g = grid();
        let f = GridFunction::from_real_fn(g, |x| (-(x[0] - 0.5).powi(2) * 80.0).exp());
        assert_eq!(lift(&f, 0.0), f);
        let back = lift(&lift(&f, 1.7), -1.7);
        assert!(back.sub(&f).unwrap().max_abs() < 1e-10);
        let m = GridFunction::mode(g, [3, 0]);
        let lifted = lift(&m, 2.0);
        let factor = 1.0 + (2.0 * PI * 3.0f64).powi(2);
        assert!(lifted.sub(&m.scale_real(factor)).unwrap().max_abs() < 1e-9 * factor);
        // lifting commutes with every block
        let sys = AnalysisSystem::admissible(Profile::Classic, g, 6).unwrap();
        let a = littlewood_paley(&lift(&f, 1.0), &sys).unwrap();
        let b = littlewood_paley(&f, &sys).unwrap();
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!(x.sub(&lift(y, 1.0)).unwrap().max_abs() < 1e-10);
        }
    }

    #[test]
    fn multiplier_agreements() {
        let g = grid();
        let f = GridFunction::from_real_fn(g, |x| (2.0 * PI * x[0]).sin() * (2.0 * PI * 7.0 * x[0]).cos());
        let one = FrequencyMask::constant(g, Complex64::new(1.0, 0.0));
        assert!(apply_multiplier(&f, &one).unwrap().sub(&f).unwrap().max_abs() < 1e-13);
        let bessel = FrequencyMask::from_real_fn(g, |xi| (1.0 + xi[0] * xi[0]).powf(0.75));
        let a = apply_multiplier(&f, &bessel).unwrap();
        assert!(a.sub(&lift(&f, 1.5)).unwrap().max_abs() < 1e-10);
        // ξ² is the second derivative up to i² = -1
        let sq = FrequencyMask::from_real_fn(g, |xi| xi[0] * xi[0]);
        let d2 = f.spectral_derivative([2, 0]);
        let b = apply_multiplier(&f, &sq).unwrap();
        assert!(b.add(&d2).unwrap().max_abs() < 1e-9 * d2.max_abs());
    }

    #[test]
    fn p_n_trivial_cases() {
        let g = grid();
        assert_eq!(p_n_seminorm(&GridFunction::zeros(g), 3), 0.0);
        assert!((p_n_seminorm(&GridFunction::constant(g, Complex64::new(1.0, 0.0)), 0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn p_n_of_gaussian_matches_hermite_oracle() {
        let g = grid();
        let s = 0.05;
        let f = GridFunction::from_real_fn(g, |x| {
            let d = if x[0] >= 0.5 { x[0] - 1.0 } else { x[0] };
            (-d * d / (2.0 * s * s)).exp()
        });
        // D^k e^{-x²/2s²} = (-1/s)^k He_k(x/s) e^{-x²/2s²}, probabilists' Hermite polynomials
        let oracle = g
            .points()
            .map(|x| {
                let d = if x[0] >= 0.5 { x[0] - 1.0 } else { x[0] };
                let u = d / s;
                let e = (-u * u / 2.0).exp();
                let he = [1.0, u, u * u - 1.0];
                let sum: f64 = (0..3).map(|k| (he[k] * e / s.powi(k as i32)).abs()).sum();
                (1.0 + d.abs()).powi(2) * sum
            })
            .fold(0.0, f64::max);
        let v = p_n_seminorm(&f, 2);
        assert!((v - oracle).abs() < 1e-3 * oracle, "{v} vs {oracle}");
    }

    #[test]
    fn bessel_norm_of_single_mode() {
        let g = Grid::two_d(32).unwrap();
        let f = GridFunction::mode(g, [2, -3]);
        let xi2 = (2.0 * PI).powi(2) * 13.0;
        assert!((bessel_norm(&f, 1.5) - (1.0 + xi2).powf(0.75)).abs() < 1e-10 * (1.0 + xi2).powf(0.75));
    }
}
