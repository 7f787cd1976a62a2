//! The variable exponent Lebesgue space `L_{p(·)}` on the torus.
//!
//! The semimodular is `ϱ(f) = ∫ φ_{p(x)}(|f(x)|) dx` with `φ_p(t) = t^p` for
//! finite `p` and, for `p = ∞`, `0` on `[0, 1]` and `∞` above. The quasi-norm
//! is the Luxemburg infimum `inf{λ > 0 : ϱ(f/λ) ≤ 1}`.
//!
//! On `{p = ∞}` the constraint `ϱ(f/λ) ≤ 1` is exactly `λ ≥ max |f|`, so the
//! norm splits into `max(λ_∞, λ_fin)` where `λ_fin` solves the finite-exponent
//! part by bisection.

use crate::error::{Error, Result};
use crate::exponents::VariableExponent;
use crate::grid::{ensure_same_grid, GridFunction};
use crate::solve::{monotone_infimum, BisectionOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularResult {
    pub value: f64,
    /// Set when `|f| > 1` somewhere on `{p = ∞}`.
    pub infinity_region_violated: bool,
}

/// `ϱ_{p(·)}(f)`.
pub fn modular(f: &GridFunction, p: &VariableExponent) -> Result<ModularResult> {
    ensure_same_grid(f.grid(), p.grid())?;
    Ok(modular_of_magnitudes(&f.magnitudes(), p.values(), f.grid().cell_volume()))
}

pub fn modular_of_magnitudes(mags: &[f64], exps: &[f64], cell: f64) -> ModularResult {
    let mut sum = 0.0;
    let mut violated = false;
    for (&a, &p) in mags.iter().zip(exps) {
        if p.is_infinite() {
            violated |= a > 1.0;
        } else if a > 0.0 {
            sum += a.powf(p);
        }
    }
    ModularResult {
        value: if violated { f64::INFINITY } else { sum * cell },
        infinity_region_violated: violated,
    }
}

/// `‖f‖_{L_{p(·)}}` with the default bisection tolerance.
pub fn norm(f: &GridFunction, p: &VariableExponent) -> Result<f64> {
    norm_with(f, p, BisectionOptions::default())
}

pub fn norm_with(f: &GridFunction, p: &VariableExponent, opts: BisectionOptions) -> Result<f64> {
    ensure_same_grid(f.grid(), p.grid())?;
    Ok(luxemburg_norm(&f.magnitudes(), p.values(), f.grid().cell_volume(), opts))
}

/// Luxemburg norm of the nonnegative field `mags` with exponents `exps`,
/// each cell carrying measure `cell`.
pub fn luxemburg_norm(mags: &[f64], exps: &[f64], cell: f64, opts: BisectionOptions) -> f64 {
    debug_assert_eq!(mags.len(), exps.len());
    let mut sup_infinite: f64 = 0.0;
    let mut log_mag = Vec::with_capacity(mags.len());
    let mut pow = Vec::with_capacity(mags.len());
    for (&a, &p) in mags.iter().zip(exps) {
        if p.is_infinite() {
            sup_infinite = sup_infinite.max(a);
        } else if a > 0.0 {
            log_mag.push(a.ln());
            pow.push(p);
        }
    }
    if log_mag.is_empty() {
        return sup_infinite;
    }
    let finite_modular = |log_lambda: f64| -> f64 {
        log_mag
            .iter()
            .zip(&pow)
            .map(|(&la, &p)| (p * (la - log_lambda)).exp())
            .sum::<f64>()
            * cell
    };
    // Bracket from the min/max sandwich between the modular and the norm.
    let rho = finite_modular(0.0);
    let (p_lo, p_hi) = pow.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &p| (lo.min(p), hi.max(p)));
    let (guess_lo, guess_hi) = if rho.is_finite() && rho > 0.0 {
        let a = rho.powf(1.0 / p_lo);
        let b = rho.powf(1.0 / p_hi);
        (a.min(b) * (1.0 - 1e-12), a.max(b) * (1.0 + 1e-12))
    } else {
        let max = mags.iter().copied().fold(0.0, f64::max);
        (max * 0.5, max)
    };
    let finite = monotone_infimum(|lambda| finite_modular(lambda.ln()) <= 1.0, guess_lo, guess_hi, opts);
    finite.max(sup_infinite)
}

/// Both sides of `‖fg‖_{L_1} ≤ 2 ‖f‖_{L_{p(·)}} ‖g‖_{L_{p'(·)}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPairing {
    pub lhs: f64,
    pub rhs: f64,
}

impl HolderPairing {
    pub fn holds(&self, rel_tol: f64) -> bool {
        self.lhs <= self.rhs * (1.0 + rel_tol)
    }
}

pub fn holder_pairing(f: &GridFunction, g: &GridFunction, p: &VariableExponent) -> Result<HolderPairing> {
    let conjugate = p.conjugate()?;
    let product = f.mul(g)?;
    let one = VariableExponent::constant(*f.grid(), 1.0)?;
    Ok(HolderPairing {
        lhs: norm(&product, &one)?,
        rhs: 2.0 * norm(f, p)? * norm(g, &conjugate)?,
    })
}

/// Extremes of `‖χ_Q‖_{L_{p(·)}} / |Q|^{1/p(x)}` over lattice-anchored cubes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicReport {
    /// Cube side in lattice cells.
    pub side_cells: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    /// `max_ratio / min_ratio`.
    pub spread: f64,
    /// Grid estimate of `c_log(1/p)`.
    pub c_log_reciprocal: f64,
}

/// Cubes `Q = x + [0, side)^d` (wrapping around the torus) for every lattice
/// anchor `x`, compared against `|Q|^{1/p(x)}` at the anchor.
pub fn characteristic_norm_check(p: &VariableExponent, cube_side: f64) -> Result<CharacteristicReport> {
    if !(cube_side > 0.0 && cube_side <= 1.0) {
        return Err(Error::Precondition(format!("cube side must lie in (0, 1], got {cube_side}")));
    }
    if !p.is_bounded() {
        return Err(Error::Precondition("characteristic check needs p+ < ∞".into()));
    }
    let grid = *p.grid();
    let n = grid.points_per_axis();
    let side_cells = ((cube_side * n as f64).round() as usize).clamp(1, n);
    let cell = grid.cell_volume();
    let measure = (side_cells.pow(grid.dim() as u32)) as f64 * cell;
    let opts = BisectionOptions::default();

    let mut max_ratio = 0.0f64;
    let mut min_ratio = f64::INFINITY;
    let mut exps = Vec::with_capacity(side_cells.pow(grid.dim() as u32));
    for anchor in 0..grid.len() {
        let [i0, j0] = grid.axis_indices(anchor);
        exps.clear();
        if grid.dim() == 1 {
            for di in 0..side_cells {
                exps.push(p.value((i0 + di) % n));
            }
        } else {
            for di in 0..side_cells {
                for dj in 0..side_cells {
                    exps.push(p.value(grid.flat_index([(i0 + di) % n, (j0 + dj) % n])));
                }
            }
        }
        let ones = vec![1.0; exps.len()];
        let chi_norm = luxemburg_norm(&ones, &exps, cell, opts);
        let ratio = chi_norm / measure.powf(1.0 / p.value(anchor));
        max_ratio = max_ratio.max(ratio);
        min_ratio = min_ratio.min(ratio);
    }
    Ok(CharacteristicReport {
        side_cells,
        max_ratio,
        min_ratio,
        spread: max_ratio / min_ratio,
        c_log_reciprocal: p.c_log_reciprocal(),
    })
}
