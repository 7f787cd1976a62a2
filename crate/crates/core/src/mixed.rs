//! The mixed spaces `L_{p(·)}(ℓ_{q(·)})` and `ℓ_{q(·)}(L_{p(·)})`, their
//! embeddings, the η-kernel convolution estimates and the discrete
//! convolution inequality for `G_ν = Σ_k 2^{-|k-ν|δ} g_k`.
//!
//! Sequences are finite: every sum over levels runs over `0..=J`, entries
//! past `J` being zero.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::VariableExponent;
use crate::grid::{ensure_same_grid, FunctionSequence, Grid, GridFunction};
use crate::lebesgue::luxemburg_norm;
use crate::solve::{monotone_infimum, BisectionOptions};

/// `(Σ_ν a_ν^q)^{1/q}` for finite `q`, `max_ν a_ν` for `q = ∞`. Scaled by the
/// largest entry so large exponents cannot overflow.
pub fn lq_of(values: impl Iterator<Item = f64> + Clone, q: f64) -> f64 {
    let max = values.clone().fold(0.0, f64::max);
    if max == 0.0 || q.is_infinite() {
        return max;
    }
    let sum: f64 = values.map(|a| (a / max).powf(q)).sum();
    max * sum.powf(1.0 / q)
}

/// `x ↦ ‖(f_ν(x))_ν‖_{ℓ_{q(x)}}`.
pub fn pointwise_lq(mags: &[Vec<f64>], q: &[f64]) -> Vec<f64> {
    (0..q.len())
        .map(|i| lq_of(mags.iter().map(|level| level[i]), q[i]))
        .collect()
}

fn check_grids(f: &FunctionSequence, p: &VariableExponent, q: &VariableExponent) -> Result<()> {
    ensure_same_grid(f.grid(), p.grid())?;
    ensure_same_grid(f.grid(), q.grid())
}

/// `‖(f_ν)_ν‖_{L_{p(·)}(ℓ_{q(·)})}`.
pub fn lp_lq_norm(f: &FunctionSequence, p: &VariableExponent, q: &VariableExponent) -> Result<f64> {
    check_grids(f, p, q)?;
    Ok(lp_lq_norm_of(&f.magnitudes(), p.values(), q.values(), f.grid().cell_volume()))
}

pub fn lp_lq_norm_of(mags: &[Vec<f64>], p: &[f64], q: &[f64], cell: f64) -> f64 {
    luxemburg_norm(&pointwise_lq(mags, q), p, cell, BisectionOptions::default())
}

/// `inf{λ > 0 : ϱ_p(f / λ^{1/q}) ≤ 1}` for one level, with `λ^{1/∞} = 1`.
///
/// Where `q` is infinite the constraint does not depend on `λ`; if no cell
/// with finite `q` carries mass the answer is `0` or `∞` outright.
pub fn level_infimum(mags: &[f64], p: &[f64], q: &[f64], cell: f64, opts: BisectionOptions) -> f64 {
    let mut fixed = 0.0;
    // (ln a, p, q) for cells whose contribution depends on λ with finite p,
    // and the largest a^q over cells with p = ∞ (they force λ ≥ a^q).
    let mut moving = Vec::new();
    let mut floor: f64 = 0.0;
    for i in 0..mags.len() {
        let a = mags[i];
        if a == 0.0 {
            continue;
        }
        match (p[i].is_infinite(), q[i].is_infinite()) {
            (true, true) => {
                if a > 1.0 {
                    return f64::INFINITY;
                }
            }
            (false, true) => fixed += cell * a.powf(p[i]),
            (true, false) => floor = floor.max(a.powf(q[i])),
            (false, false) => moving.push((a.ln(), p[i], q[i])),
        }
    }
    if fixed > 1.0 {
        return f64::INFINITY;
    }
    if moving.is_empty() && floor == 0.0 {
        return 0.0;
    }
    let accept = |lambda: f64| {
        if lambda < floor {
            return false;
        }
        let ll = lambda.ln();
        let sum: f64 = moving.iter().map(|&(la, p, q)| (p * (la - ll / q)).exp()).sum();
        fixed + cell * sum <= 1.0
    };
    let guess = if floor > 0.0 { floor } else { 1.0 };
    monotone_infimum(accept, guess, guess, opts)
}

/// `ϱ_{ℓ_{q(·)}(L_{p(·)})}(f)`: the fast form `Σ_ν ‖|f_ν|^{q}‖_{p/q}` when
/// `q⁺ < ∞`, otherwise a per-level infimum.
pub fn lq_lp_modular(f: &FunctionSequence, p: &VariableExponent, q: &VariableExponent) -> Result<f64> {
    check_grids(f, p, q)?;
    Ok(lq_lp_modular_of(&f.magnitudes(), p.values(), q.values(), f.grid().cell_volume()))
}

pub fn lq_lp_modular_of(mags: &[Vec<f64>], p: &[f64], q: &[f64], cell: f64) -> f64 {
    let opts = BisectionOptions::default();
    if q.iter().all(|v| v.is_finite()) {
        let ratio: Vec<f64> = p.iter().zip(q).map(|(p, q)| p / q).collect();
        mags.iter()
            .map(|level| {
                let powered: Vec<f64> = level.iter().zip(q).map(|(a, q)| a.powf(*q)).collect();
                luxemburg_norm(&powered, &ratio, cell, opts)
            })
            .sum()
    } else {
        lq_lp_modular_general_of(mags, p, q, cell)
    }
}

/// The per-level infimum form for every `q`, finite or not. Agrees with the
/// fast form when `q⁺ < ∞`.
pub fn lq_lp_modular_general(f: &FunctionSequence, p: &VariableExponent, q: &VariableExponent) -> Result<f64> {
    check_grids(f, p, q)?;
    Ok(lq_lp_modular_general_of(&f.magnitudes(), p.values(), q.values(), f.grid().cell_volume()))
}

fn lq_lp_modular_general_of(mags: &[Vec<f64>], p: &[f64], q: &[f64], cell: f64) -> f64 {
    mags.iter()
        .map(|level| level_infimum(level, p, q, cell, BisectionOptions::default()))
        .sum()
}

/// `‖(f_ν)_ν‖_{ℓ_{q(·)}(L_{p(·)})} = inf{μ > 0 : ϱ(f/μ) ≤ 1}`.
pub fn lq_lp_norm(f: &FunctionSequence, p: &VariableExponent, q: &VariableExponent) -> Result<f64> {
    check_grids(f, p, q)?;
    Ok(lq_lp_norm_of(&f.magnitudes(), p.values(), q.values(), f.grid().cell_volume()))
}

pub fn lq_lp_norm_of(mags: &[Vec<f64>], p: &[f64], q: &[f64], cell: f64) -> f64 {
    let opts = BisectionOptions::default();
    // Each level alone already forces μ ≥ ‖f_ν‖_p.
    let lower = mags
        .iter()
        .map(|level| luxemburg_norm(level, p, cell, opts))
        .fold(0.0, f64::max);
    if lower == 0.0 {
        return 0.0;
    }
    let scaled = |mu: f64| -> Vec<Vec<f64>> { mags.iter().map(|l| l.iter().map(|a| a / mu).collect()).collect() };
    monotone_infimum(
        |mu| lq_lp_modular_of(&scaled(mu), p, q, cell) <= 1.0,
        lower,
        lower * (mags.len() as f64),
        opts,
    )
}

/// `‖(‖f_ν‖_{p(·)})_ν‖_{ℓ_q}` for a constant `q`.
pub fn iterated_norm(f: &FunctionSequence, p: &VariableExponent, q: f64) -> Result<f64> {
    ensure_same_grid(f.grid(), p.grid())?;
    let cell = f.grid().cell_volume();
    let norms: Vec<f64> = f
        .magnitudes()
        .iter()
        .map(|level| luxemburg_norm(level, p.values(), cell, BisectionOptions::default()))
        .collect();
    Ok(lq_of(norms.into_iter(), q))
}

/// Measured constants for the `q`-monotonicity and the min/max sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingReport {
    /// `‖F‖_{L_p(ℓ_{q1})} / ‖F‖_{L_p(ℓ_{q0})}`.
    pub lp_lq_constant: f64,
    /// `‖F‖_{ℓ_{q1}(L_p)} / ‖F‖_{ℓ_{q0}(L_p)}`.
    pub lq_lp_constant: f64,
    /// `‖F‖_{L_p(ℓ_{q0})} / ‖F‖_{ℓ_{min(p,q0)}(L_p)}`; `None` unless `p⁺, q0⁺ < ∞`.
    pub sandwich_lower: Option<f64>,
    /// `‖F‖_{ℓ_{max(p,q0)}(L_p)} / ‖F‖_{L_p(ℓ_{q0})}`; `None` unless `p⁺, q0⁺ < ∞`.
    pub sandwich_upper: Option<f64>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        1.0
    } else {
        num / den
    }
}

/// Both mixed norms are non-increasing in `q` (constant one), and
/// `ℓ_{min(p,q)}(L_p) ↪ L_p(ℓ_q) ↪ ℓ_{max(p,q)}(L_p)`.
pub fn embedding_check_lemma21(
    f: &FunctionSequence,
    p: &VariableExponent,
    q0: &VariableExponent,
    q1: &VariableExponent,
) -> Result<EmbeddingReport> {
    check_grids(f, p, q0)?;
    ensure_same_grid(f.grid(), q1.grid())?;
    if !q0.le(q1) {
        return Err(Error::Precondition("q0 <= q1 must hold pointwise".into()));
    }
    let a0 = lp_lq_norm(f, p, q0)?;
    let a1 = lp_lq_norm(f, p, q1)?;
    let b0 = lq_lp_norm(f, p, q0)?;
    let b1 = lq_lp_norm(f, p, q1)?;
    let (sandwich_lower, sandwich_upper) = if p.is_bounded() && q0.is_bounded() {
        let lo = p.pointwise_min(q0)?;
        let hi = p.pointwise_max(q0)?;
        (
            Some(ratio(a0, lq_lp_norm(f, p, &lo)?)),
            Some(ratio(lq_lp_norm(f, p, &hi)?, a0)),
        )
    } else {
        (None, None)
    };
    Ok(EmbeddingReport {
        lp_lq_constant: ratio(a1, a0),
        lq_lp_constant: ratio(b1, b0),
        sandwich_lower,
        sandwich_upper,
    })
}

/// `G_ν = Σ_{k ≤ J} 2^{-|k-ν|δ} g_k` for a nonnegative sequence.
pub fn smooth_sequence(g: &FunctionSequence, delta: f64) -> Result<FunctionSequence> {
    if !(delta > 0.0) {
        return Err(Error::Precondition(format!("delta must be positive, got {delta}")));
    }
    let values = nonnegative_values(g)?;
    let smoothed = smooth_values(&values, delta);
    let grid = *g.grid();
    FunctionSequence::new(
        smoothed
            .into_iter()
            .map(|level| GridFunction::from_real(grid, &level))
            .collect::<Result<_>>()?,
    )
}

fn nonnegative_values(g: &FunctionSequence) -> Result<Vec<Vec<f64>>> {
    g.entries()
        .iter()
        .enumerate()
        .map(|(nu, f)| {
            f.samples()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    if z.im != 0.0 || z.re < 0.0 {
                        Err(Error::Precondition(format!(
                            "sequence entry {nu} is not nonnegative at index {i}"
                        )))
                    } else {
                        Ok(z.re)
                    }
                })
                .collect()
        })
        .collect()
}

fn smooth_values(values: &[Vec<f64>], delta: f64) -> Vec<Vec<f64>> {
    let levels = values.len();
    (0..levels)
        .map(|nu| {
            let mut out = vec![0.0; values[0].len()];
            for (k, level) in values.iter().enumerate() {
                let w = 2f64.powf(-((k as f64) - (nu as f64)).abs() * delta);
                for (o, v) in out.iter_mut().zip(level) {
                    *o += w * v;
                }
            }
            out
        })
        .collect()
}

/// `c(δ) = Σ_{l ∈ ℤ} 2^{-|l|δ/2}`.
pub fn c_delta(delta: f64) -> f64 {
    let r = 2f64.powf(-delta / 2.0);
    (1.0 + r) / (1.0 - r)
}

/// `2 / (1 - 2^{-δ})`.
pub fn minkowski_constant(delta: f64) -> f64 {
    2.0 / (1.0 - 2f64.powf(-delta))
}

/// The periodized η-function `2^{nν} / (1 + 2^ν |x|)^R`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaKernel {
    pub level: usize,
    pub decay: f64,
    pub samples: GridFunction,
    /// `R > n`; below that the periodization diverges and the samples are a
    /// truncation at the image cap.
    pub integrable: bool,
    /// `‖η‖_{L_1}` over the full cap divided by the same over half the cap.
    /// Close to one for integrable kernels.
    pub truncation_growth: f64,
}

const IMAGE_FLOOR: f64 = 1e-15;

fn image_cap(dim: usize) -> i64 {
    if dim == 1 {
        4096
    } else {
        64
    }
}

impl EtaKernel {
    pub fn new(grid: Grid, level: usize, decay: f64) -> Result<Self> {
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(Error::Precondition(format!("decay must be positive, got {decay}")));
        }
        let dim = grid.dim();
        let integrable = decay > dim as f64;
        let cap = image_cap(dim);
        let full = eta_samples(&grid, level, decay, cap, integrable);
        let half = eta_samples(&grid, level, decay, cap / 2, false);
        let l1 = |v: &[f64]| v.iter().sum::<f64>() * grid.cell_volume();
        let full_raw = if integrable {
            l1(&eta_samples(&grid, level, decay, cap, false))
        } else {
            l1(&full)
        };
        Ok(Self {
            level,
            decay,
            samples: GridFunction::from_real(grid, &full)?,
            integrable,
            truncation_growth: full_raw / l1(&half),
        })
    }

    pub fn l1_norm(&self) -> f64 {
        self.samples.quadrature_real()
    }

    pub fn convolve(&self, g: &GridFunction) -> Result<GridFunction> {
        g.circular_convolve(&self.samples)
    }
}

fn eta_samples(grid: &Grid, level: usize, decay: f64, cap: i64, with_tail: bool) -> Vec<f64> {
    let dim = grid.dim();
    let scale = 2f64.powi(level as i32);
    let amplitude = scale.powi(dim as i32);
    let term = |r: f64| amplitude / (1.0 + scale * r).powf(decay);
    let tail = if with_tail {
        let u0 = 1.0 + scale * (cap as f64 + 0.5);
        if dim == 1 {
            2.0 * u0.powf(1.0 - decay) / (decay - 1.0)
        } else {
            2.0 * std::f64::consts::PI * (u0.powf(2.0 - decay) / (decay - 2.0) - u0.powf(1.0 - decay) / (decay - 1.0))
        }
    } else {
        0.0
    };
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let x = grid.point(idx);
            // fundamental-cell representative in [-1/2, 1/2)
            let c = |v: f64| if v >= 0.5 { v - 1.0 } else { v };
            let (x0, x1) = (c(x[0]), c(x[1]));
            let mut sum = 0.0;
            if dim == 1 {
                sum += term(x0.abs());
                for k in 1..=cap {
                    let a = term((x0 + k as f64).abs());
                    let b = term((x0 - k as f64).abs());
                    sum += a + b;
                    if a.max(b) < IMAGE_FLOOR {
                        break;
                    }
                }
            } else {
                // shells of the square image lattice, stopping once a shell is negligible
                sum += term(x0.hypot(x1));
                for shell in 1..=cap {
                    let mut shell_max: f64 = 0.0;
                    let mut shell_sum = 0.0;
                    for k1 in -shell..=shell {
                        for k2 in -shell..=shell {
                            if k1.abs().max(k2.abs()) != shell {
                                continue;
                            }
                            let t = term((x0 + k1 as f64).hypot(x1 + k2 as f64));
                            shell_max = shell_max.max(t);
                            shell_sum += t;
                        }
                    }
                    sum += shell_sum;
                    if shell_max < IMAGE_FLOOR {
                        break;
                    }
                }
            }
            sum + tail
        })
        .collect()
}

/// Measured constants for the smoothing and η-kernel inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvolutionReport {
    pub delta: f64,
    pub decay: f64,
    /// `‖G‖_{L_p(ℓ_q)} / ‖g‖_{L_p(ℓ_q)}`.
    pub smoothing_lp_lq: f64,
    /// `‖G‖_{ℓ_q(L_p)} / ‖g‖_{ℓ_q(L_p)}`.
    pub smoothing_lq_lp: f64,
    /// `2/(1 - 2^{-δ})`, reported when `q` is constant and `p⁻, q ≥ 1`.
    pub minkowski_bound: Option<f64>,
    /// `c(δ)²`.
    pub b_case_constant: f64,
    /// `ϱ_{ℓ_q(L_p)}(G / (c(δ)² μ))` with `μ = ‖g‖_{ℓ_q(L_p)}`.
    pub b_case_modular: f64,
    /// `‖(η_{ν,R} * g_ν)‖_{L_p(ℓ_q)} / ‖g‖_{L_p(ℓ_q)}`.
    pub eta_lp_lq: f64,
    /// `‖(η_{ν,R} * g_ν)‖_{ℓ_q(L_p)} / ‖g‖_{ℓ_q(L_p)}`.
    pub eta_lq_lp: f64,
    /// `R > n`.
    pub eta_integrable: bool,
    /// Largest truncation growth over the kernels used.
    pub eta_truncation_growth: f64,
}

impl ConvolutionReport {
    pub fn minkowski_holds(&self) -> bool {
        self.minkowski_bound
            .map_or(true, |b| self.smoothing_lp_lq <= b * (1.0 + 1e-10))
    }

    pub fn b_case_holds(&self) -> bool {
        self.b_case_modular <= 1.0 + 1e-10
    }
}

/// Runs the smoothing inequalities for `(g_k)` and the η-convolution
/// inequalities with kernels `η_{ν,R}`.
pub fn convolution_inequality_checks(
    g: &FunctionSequence,
    p: &VariableExponent,
    q: &VariableExponent,
    delta: f64,
    decay: f64,
) -> Result<ConvolutionReport> {
    let kernels = eta_kernels(*g.grid(), g.levels(), decay)?;
    convolution_inequality_checks_with(g, p, q, delta, &kernels)
}

/// `η_{ν,R}` for `ν = 0..=levels`.
pub fn eta_kernels(grid: Grid, levels: usize, decay: f64) -> Result<Vec<EtaKernel>> {
    (0..=levels).map(|nu| EtaKernel::new(grid, nu, decay)).collect()
}

/// As [`convolution_inequality_checks`] with kernels built once by [`eta_kernels`].
pub fn convolution_inequality_checks_with(
    g: &FunctionSequence,
    p: &VariableExponent,
    q: &VariableExponent,
    delta: f64,
    kernels: &[EtaKernel],
) -> Result<ConvolutionReport> {
    check_grids(g, p, q)?;
    if kernels.len() != g.levels() + 1 || kernels.iter().enumerate().any(|(nu, k)| k.level != nu) {
        return Err(Error::Precondition("one η kernel per level, in level order".into()));
    }
    for k in kernels {
        ensure_same_grid(g.grid(), k.samples.grid())?;
    }
    let decay = kernels[0].decay;
    let grid = *g.grid();
    let cell = grid.cell_volume();
    let values = nonnegative_values(g)?;
    if !(delta > 0.0) {
        return Err(Error::Precondition(format!("delta must be positive, got {delta}")));
    }
    let big = smooth_values(&values, delta);

    let g_lp_lq = lp_lq_norm_of(&values, p.values(), q.values(), cell);
    let g_lq_lp = lq_lp_norm_of(&values, p.values(), q.values(), cell);
    let big_lp_lq = lp_lq_norm_of(&big, p.values(), q.values(), cell);
    let big_lq_lp = lq_lp_norm_of(&big, p.values(), q.values(), cell);

    let minkowski_bound = (q.is_constant() && q.p_minus() >= 1.0 && p.p_minus() >= 1.0)
        .then(|| minkowski_constant(delta));
    let c = c_delta(delta).powi(2);
    let b_case_modular = if g_lq_lp == 0.0 {
        0.0
    } else {
        let scaled: Vec<Vec<f64>> = big
            .iter()
            .map(|l| l.iter().map(|v| v / (c * g_lq_lp)).collect())
            .collect();
        lq_lp_modular_of(&scaled, p.values(), q.values(), cell)
    };

    let convolved: Vec<Vec<f64>> = kernels
        .iter()
        .zip(g.entries())
        .map(|(k, f)| k.convolve(f).map(|h| h.magnitudes()))
        .collect::<Result<_>>()?;
    let eta_lp_lq = ratio(lp_lq_norm_of(&convolved, p.values(), q.values(), cell), g_lp_lq);
    let eta_lq_lp = ratio(lq_lp_norm_of(&convolved, p.values(), q.values(), cell), g_lq_lp);

    Ok(ConvolutionReport {
        delta,
        decay,
        smoothing_lp_lq: ratio(big_lp_lq, g_lp_lq),
        smoothing_lq_lp: ratio(big_lq_lp, g_lq_lp),
        minkowski_bound,
        b_case_constant: c,
        b_case_modular,
        eta_lp_lq,
        eta_lq_lp,
        eta_integrable: decay > grid.dim() as f64,
        eta_truncation_growth: kernels.iter().map(|k| k.truncation_growth).fold(0.0, f64::max),
    })
}

/// `(|f_ν|^r)_ν` as a sequence, for the `r`-power reduction.
pub fn power_sequence(f: &FunctionSequence, r: f64) -> Result<FunctionSequence> {
    f.map_entries(|_, e| e.map(|z| Complex64::new(z.norm().powf(r), 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::one_d(64).unwrap()
    }

    fn constant(p: f64) -> VariableExponent {
        VariableExponent::constant(grid(), p).unwrap()
    }

    fn random_sequence(rng: &mut ChaCha8Rng, levels: usize) -> FunctionSequence {
        FunctionSequence::new(
            (0..=levels)
                .map(|_| GridFunction::from_real_fn(grid(), |_| rng.gen_range(0.0..2.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn lq_of_handles_edge_cases() {
        assert_eq!(lq_of([0.0, 0.0].into_iter(), 2.0), 0.0);
        assert_eq!(lq_of([3.0, 4.0].into_iter(), f64::INFINITY), 4.0);
        assert!((lq_of([3.0, 4.0].into_iter(), 2.0) - 5.0).abs() < 1e-14);
        assert!(lq_of([1e300, 1e300].into_iter(), 4.0).is_finite());
    }

    #[test]
    fn single_entry_reduces_to_lebesgue_norm() {
        let f = GridFunction::from_real_fn(grid(), |x| 1.0 + (2.0 * PI * x[0]).cos());
        let p = VariableExponent::from_fn(grid(), |x| 1.5 + x[0]).unwrap();
        let q = VariableExponent::from_fn(grid(), |x| 0.8 + 2.0 * x[0]).unwrap();
        let expected = crate::lebesgue::norm(&f, &p).unwrap();
        let seq = FunctionSequence::single(f, 2, 4).unwrap();
        assert!((lp_lq_norm(&seq, &p, &q).unwrap() - expected).abs() < 1e-12 * expected);
        assert!((lq_lp_norm(&seq, &p, &q).unwrap() - expected).abs() < 1e-11 * expected);
    }

    #[test]
    fn zero_sequence() {
        let z = FunctionSequence::zeros(grid(), 3);
        assert_eq!(lp_lq_norm(&z, &constant(2.0), &constant(2.0)).unwrap(), 0.0);
        assert_eq!(lq_lp_norm(&z, &constant(2.0), &constant(f64::INFINITY)).unwrap(), 0.0);
        assert_eq!(lq_lp_modular(&z, &constant(2.0), &constant(3.0)).unwrap(), 0.0);
    }

    #[test]
    fn orthogonal_modes_in_l2_l2() {
        let amps = [0.5, 2.0, 1.5];
        let seq = FunctionSequence::new(
            amps.iter()
                .enumerate()
                .map(|(nu, a)| GridFunction::mode(grid(), [nu as i64 + 1, 0]).scale_real(*a))
                .collect(),
        )
        .unwrap();
        let expected = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        assert!((lp_lq_norm(&seq, &constant(2.0), &constant(2.0)).unwrap() - expected).abs() < 1e-12);
        assert!((lq_lp_norm(&seq, &constant(2.0), &constant(2.0)).unwrap() - expected).abs() < 1e-11);
    }

    #[test]
    fn infinite_q_inner_infimum_is_zero_or_infinity() {
        let p = constant(2.0);
        let q = constant(f64::INFINITY);
        let small = GridFunction::from_real_fn(grid(), |x| 0.5 + 0.3 * x[0]);
        let big = small.scale_real(10.0);
        // direct predicate: ϱ_p(f) ≤ 1 decides everything
        for (f, expect_zero) in [(small, true), (big, false)] {
            let rho = crate::lebesgue::modular(&f, &p).unwrap().value;
            assert_eq!(rho <= 1.0, expect_zero);
            let seq = FunctionSequence::single(f, 0, 0).unwrap();
            let m = lq_lp_modular(&seq, &p, &q).unwrap();
            if expect_zero {
                assert_eq!(m, 0.0);
            } else {
                assert!(m.is_infinite());
            }
        }
    }

    #[test]
    fn l1_l1_modular_is_plain_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seq = random_sequence(&mut rng, 3);
        let expected: f64 = seq.entries().iter().map(|f| f.quadrature_real()).sum();
        let m = lq_lp_modular(&seq, &constant(1.0), &constant(1.0)).unwrap();
        assert!((m - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn fast_and_general_modular_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = VariableExponent::from_fn(grid(), |x| 1.2 + 2.0 * x[0]).unwrap();
        let q = VariableExponent::from_fn(grid(), |x| 3.0 - 2.0 * x[0]).unwrap();
        for _ in 0..10 {
            let seq = random_sequence(&mut rng, 3).scale_real(0.3);
            let a = lq_lp_modular(&seq, &p, &q).unwrap();
            let b = lq_lp_modular_general(&seq, &p, &q).unwrap();
            assert!((a - b).abs() < 1e-10 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn two_identical_entries_in_l2() {
        let f = GridFunction::from_real_fn(grid(), |x| (2.0 * PI * x[0]).sin() + 0.3);
        let single = crate::lebesgue::norm(&f, &constant(2.0)).unwrap();
        let seq = FunctionSequence::new(vec![f.clone(), f]).unwrap();
        let n = lq_lp_norm(&seq, &constant(2.0), &constant(2.0)).unwrap();
        assert!((n - 2f64.sqrt() * single).abs() < 1e-11 * n);
    }

    #[test]
    fn iterated_identity_for_constant_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = VariableExponent::from_fn(grid(), |x| 1.5 + (2.0 * PI * x[0]).sin().abs()).unwrap();
        for q in [1.0, 2.0, f64::INFINITY] {
            let seq = random_sequence(&mut rng, 4);
            let n = lq_lp_norm(&seq, &p, &constant(q)).unwrap();
            let it = iterated_norm(&seq, &p, q).unwrap();
            assert!((n - it).abs() <= 1e-8 * n, "q={q}: {n} vs {it}");
        }
    }

    #[test]
    fn embedding_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let seq = random_sequence(&mut rng, 3);
        let p = constant(2.0);
        let same = embedding_check_lemma21(&seq, &p, &constant(1.5), &constant(1.5)).unwrap();
        assert_eq!(same.lp_lq_constant, 1.0);
        assert_eq!(same.lq_lp_constant, 1.0);
        let r = embedding_check_lemma21(&seq, &p, &constant(1.0), &constant(2.0)).unwrap();
        assert!(r.lp_lq_constant <= 1.0 && r.lq_lp_constant <= 1.0 + 1e-12);
        // p = q: all three norms coincide with the iterated one
        let eq = embedding_check_lemma21(&seq, &p, &p, &p).unwrap();
        assert!((eq.sandwich_lower.unwrap() - 1.0).abs() < 1e-10);
        assert!((eq.sandwich_upper.unwrap() - 1.0).abs() < 1e-10);
        assert!(embedding_check_lemma21(&seq, &p, &constant(2.0), &constant(1.0)).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let levels = 5;
        let spike = FunctionSequence::single(GridFunction::constant(grid(), Complex64::new(1.0, 0.0)), 2, levels).unwrap();
        let g = smooth_sequence(&spike, 1.5).unwrap();
        for nu in 0..=levels {
            let expected = 2f64.powf(-((nu as f64) - 2.0).abs() * 1.5);
            assert!(g.entry(nu).samples().iter().all(|z| (z.re - expected).abs() < 1e-15));
        }
        let ones = FunctionSequence::new(vec![GridFunction::constant(grid(), Complex64::new(1.0, 0.0)); levels + 1]).unwrap();
        let g = smooth_sequence(&ones, 0.7).unwrap();
        let r = 2f64.powf(-0.7);
        for nu in 0..=levels {
            // geometric series oracle: Σ_{m=0}^{ν} r^m + Σ_{m=1}^{J-ν} r^m
            let below = (1.0 - r.powi(nu as i32 + 1)) / (1.0 - r);
            let above = r * (1.0 - r.powi((levels - nu) as i32)) / (1.0 - r);
            assert!((g.entry(nu).samples()[0].re - (below + above)).abs() < 1e-13);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let s = random_sequence(&mut rng, 3);
        let g = smooth_sequence(&s, 60.0).unwrap();
        for (a, b) in g.entries().iter().zip(s.entries()) {
            assert!(a.sub(b).unwrap().max_abs() < 1e-15);
        }
        let neg = FunctionSequence::single(GridFunction::constant(grid(), Complex64::new(-1.0, 0.0)), 0, 1).unwrap();
        assert!(smooth_sequence(&neg, 1.0).is_err());
    }

    #[test]
    fn eta_kernel_integrability() {
        let g = grid();
        let k = EtaKernel::new(g, 2, 3.0).unwrap();
        assert!(k.integrable);
        // ∫_ℝ 2^ν (1+2^ν|x|)^{-R} dx = 2/(R-1)
        assert!((k.l1_norm() - 1.0).abs() < 0.05, "{}", k.l1_norm());
        let bad = EtaKernel::new(g, 1, 0.8).unwrap();
        assert!(!bad.integrable);
        assert!(bad.truncation_growth > 1.05);
    }

    #[test]
    fn single_spike_constant_is_exact() {
        let levels = 4;
        let one = GridFunction::constant(grid(), Complex64::new(1.0, 0.0));
        let g = FunctionSequence::single(one, 1, levels).unwrap();
        let p = constant(2.0);
        let q = constant(1.0);
        let r = convolution_inequality_checks(&g, &p, &q, 1.0, 3.0).unwrap();
        let exact: f64 = (0..=levels).map(|nu| 2f64.powf(-((nu as f64) - 1.0).abs())).sum();
        assert!((r.smoothing_lp_lq - exact).abs() < 1e-10 * exact);
        assert!(r.minkowski_holds() && r.b_case_holds());
    }
}
