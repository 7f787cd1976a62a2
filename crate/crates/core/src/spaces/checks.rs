//! Corpus-level checks of the equivalences and inequalities between spaces.
//!
//! An equivalence `‖f‖₁ ≈ ‖f‖₂` cannot be confirmed numerically; what can be
//! measured is the band of ratios over a fixed corpus and whether that band
//! is stable when the grid is refined from `N` to `2N`.

use rayon::prelude::*;

use super::corpus::Corpus;
use super::spec::{quasi_norm, quasi_norm_local_means, quasi_norm_maximal_with, Scale, SpaceRecipe, SpaceSpec, Thresholds};
use crate::analysis::local_means::LocalMeansKernels;
use crate::analysis::operators::{apply_multiplier, bessel_norm, lift, littlewood_paley, multi_indices, p_n_seminorm};
use crate::analysis::symbol::{h2_kappa_norm, multiplier_norm_2l, symbol_mask, Symbol};
use crate::error::{Error, Result};
use crate::exponents::VariableExponent;
use crate::grid::{Grid, GridFunction};
use crate::lebesgue::luxemburg_norm;
use crate::mixed::lq_of;
use crate::solve::BisectionOptions;
use crate::weights::verify_admissible;

pub const DRIFT_TOLERANCE: f64 = 0.3;

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub corpus_size: usize,
    /// `|log(max/min) at N - log(max/min) at 2N|`.
    pub refinement_drift: f64,
    pub ratios: Vec<f64>,
    pub refined_ratios: Vec<f64>,
}

impl EquivalenceReport {
    pub fn from_ratios(ratios: Vec<f64>, refined_ratios: Vec<f64>) -> Self {
        let spread = |r: &[f64]| {
            let (lo, hi) = bounds(r);
            (hi / lo).ln()
        };
        let (ratio_min, ratio_max) = bounds(&ratios);
        let refinement_drift = (spread(&ratios) - spread(&refined_ratios)).abs();
        Self {
            ratio_min,
            ratio_max,
            corpus_size: ratios.len(),
            refinement_drift,
            ratios,
            refined_ratios,
        }
    }

    /// `log(ratio_max / ratio_min)` at the base grid.
    pub fn spread(&self) -> f64 {
        (self.ratio_max / self.ratio_min).ln()
    }

    pub fn is_bounded(&self) -> bool {
        self.ratio_min > 0.0 && self.ratio_max.is_finite() && self.spread().is_finite()
    }

    pub fn passes(&self, drift_tolerance: f64) -> bool {
        self.is_bounded() && self.refinement_drift < drift_tolerance
    }
}

fn bounds(r: &[f64]) -> (f64, f64) {
    r.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Evaluates `ratio(f)` over the corpus at `grid` and at `grid.refined()`.
/// `prepare` builds whatever grid-bound data the ratio needs.
pub fn equivalence_report<P, R>(corpus: &Corpus, grid: Grid, prepare: P) -> Result<EquivalenceReport>
where
    P: Fn(Grid) -> Result<R>,
    R: Fn(&GridFunction) -> Result<f64> + Sync,
{
    let run = |g: Grid| -> Result<Vec<f64>> {
        let ratio = prepare(g)?;
        corpus.sample(g).par_iter().map(&ratio).collect()
    };
    Ok(EquivalenceReport::from_ratios(run(grid)?, run(grid.refined())?))
}

fn quotient(num: f64, den: f64) -> Result<f64> {
    if den == 0.0 {
        return Err(Error::Precondition("ratio with a vanishing denominator".into()));
    }
    Ok(num / den)
}

/// Ratios `‖f‖_{spec1} / ‖f‖_{spec2}` for two admissible systems.
pub fn pair_independence_check(corpus: &Corpus, grid: Grid, first: &SpaceRecipe, second: &SpaceRecipe) -> Result<EquivalenceReport> {
    equivalence_report(corpus, grid, |g| {
        let (a, b) = (first.build(g)?, second.build(g)?);
        Ok(move |f: &GridFunction| quotient(quasi_norm(f, &a)?, quasi_norm(f, &b)?))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaximalCheckReport {
    pub thresholds: Thresholds,
    pub a: f64,
    /// Pointwise domination of `|ψ_j * f|` by the Peetre maximal function, everywhere.
    pub dominates: bool,
    /// `maximal / plain`.
    pub maximal_to_plain: EquivalenceReport,
    /// `maximal / quasi_norm`.
    pub maximal_to_quasi_norm: EquivalenceReport,
}

/// Thm. 3.1 with `a = threshold + a_margin`.
pub fn maximal_check(corpus: &Corpus, grid: Grid, recipe: &SpaceRecipe, a_margin: f64) -> Result<MaximalCheckReport> {
    let base = recipe.build(grid)?;
    let thresholds = Thresholds::of(&base, None);
    let a = thresholds.maximal_a + a_margin;
    let run = |g: Grid| -> Result<Vec<(f64, f64, f64, bool)>> {
        let spec = recipe.build(g)?;
        corpus
            .sample(g)
            .par_iter()
            .map(|f| {
                let m = quasi_norm_maximal_with(f, &spec, a, &thresholds)?;
                Ok((m.plain, m.maximal, quasi_norm(f, &spec)?, m.dominates))
            })
            .collect()
    };
    let (coarse, fine) = (run(grid)?, run(grid.refined())?);
    let dominates = coarse.iter().chain(&fine).all(|r| r.3 && r.1 >= r.0);
    let split = |rows: &[(f64, f64, f64, bool)], den: fn(&(f64, f64, f64, bool)) -> f64| -> Vec<f64> {
        rows.iter().map(|r| r.1 / den(r)).collect()
    };
    Ok(MaximalCheckReport {
        thresholds,
        a,
        dominates,
        maximal_to_plain: EquivalenceReport::from_ratios(split(&coarse, |r| r.0), split(&fine, |r| r.0)),
        maximal_to_quasi_norm: EquivalenceReport::from_ratios(split(&coarse, |r| r.2), split(&fine, |r| r.2)),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingReport {
    pub sigma: f64,
    /// `‖I_σ f‖_{(−σ)w} / ‖f‖_w`.
    pub ratios: EquivalenceReport,
    /// `max |I_{−σ} I_σ f − f| / max |f|` over the corpus.
    pub round_trip_error: f64,
    /// Whether the shifted weights pass the admissibility scan with class
    /// `(α, α₁ − σ, α₂ − σ)`.
    pub shift_admissible: bool,
    pub shifted_alpha1: f64,
    pub shifted_alpha2: f64,
    pub measured_alpha1: f64,
    pub measured_alpha2: f64,
}

/// Thm. 4.1: `I_σ` maps `A^w` onto `A^{(−σ)w}`.
pub fn lifting_check(corpus: &Corpus, grid: Grid, recipe: &SpaceRecipe, sigma: f64) -> Result<LiftingReport> {
    let ratios = equivalence_report(corpus, grid, |g| {
        let spec = recipe.build(g)?;
        let shifted = spec.shifted(sigma)?;
        Ok(move |f: &GridFunction| quotient(quasi_norm(&lift(f, sigma), &shifted)?, quasi_norm(f, &spec)?))
    })?;
    let round_trip_error = corpus
        .sample(grid)
        .par_iter()
        .map(|f| lift(&lift(f, sigma), -sigma).sub(f).map(|d| d.max_abs() / f.max_abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let spec = recipe.build(grid)?;
    let shifted = spec.weights().shifted(sigma);
    let audit = verify_admissible(&shifted);
    Ok(LiftingReport {
        sigma,
        ratios,
        round_trip_error,
        shift_admissible: audit.passes,
        shifted_alpha1: shifted.alpha1(),
        shifted_alpha2: shifted.alpha2(),
        measured_alpha1: audit.measured_alpha1,
        measured_alpha2: audit.measured_alpha2,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalReport {
    pub s: f64,
    /// Largest relative gap between `quasi_norm²` and `Σ_j 4^{js} ‖φ_j * f‖₂²`.
    pub parseval_error: f64,
    /// `quasi_norm / ‖f‖_{H^s}`.
    pub sobolev_ratios: EquivalenceReport,
}

/// `p = q ≡ 2`, `w_j = 2^{js}` against Parseval and the Bessel-potential norm.
pub fn classical_check(corpus: &Corpus, grid: Grid, s: f64) -> Result<ClassicalReport> {
    let recipe = SpaceRecipe::classical(Scale::B, 2.0, 2.0, s);
    let spec = recipe.build(grid)?;
    let parseval_error = corpus
        .sample(grid)
        .par_iter()
        .map(|f| {
            let v = quasi_norm(f, &spec)?;
            let spectrum = f.spectrum();
            let oracle: f64 = (0..=spec.levels())
                .map(|j| {
                    let energy: f64 = spectrum
                        .iter()
                        .zip(spec.system().mask(j).values())
                        .map(|(c, m)| (c * m).norm_sqr())
                        .sum();
                    4f64.powf(j as f64 * s) * energy
                })
                .sum();
            Ok((v * v - oracle).abs() / oracle)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let sobolev_ratios = equivalence_report(corpus, grid, |g| {
        let spec = recipe.build(g)?;
        Ok(move |f: &GridFunction| quotient(quasi_norm(f, &spec)?, bessel_norm(f, s)))
    })?;
    Ok(ClassicalReport {
        s,
        parseval_error,
        sobolev_ratios,
    })
}

/// Ratios `quasi_norm_local_means / quasi_norm`.
pub fn local_means_check(
    corpus: &Corpus,
    grid: Grid,
    recipe: &SpaceRecipe,
    kernels: &LocalMeansKernels,
    n_laplace: u32,
) -> Result<EquivalenceReport> {
    equivalence_report(corpus, grid, |g| {
        let spec = recipe.build(g)?;
        Ok(move |f: &GridFunction| quotient(quasi_norm_local_means(f, &spec, kernels, n_laplace)?, quasi_norm(f, &spec)?))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierMode {
    /// Thm. 6.1 with `‖m‖_{2l}`.
    Norm2l(u32),
    /// Thm. 6.5 with `‖m | h₂^κ‖`.
    H2Kappa(f64),
    /// Cor. 6.6: F scale, `q ≡ 2`, `w_j = 2^{js}`, `s ≥ 0`, `1 < p⁻`.
    Cor66(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierReport {
    pub mode: MultiplierMode,
    pub threshold: f64,
    /// `M`, the multiplier norm.
    pub multiplier_norm: f64,
    /// `max lhs / (M rhs)` over the corpus at `N`; the one constant reported.
    pub constant: f64,
    /// The same maximum at `2N`.
    pub refined_constant: f64,
    /// Corpus functions at `2N` with `lhs > C e^{0.3} M rhs`.
    pub violations: usize,
    pub lhs_over_rhs: Vec<f64>,
}

impl MultiplierReport {
    pub fn passes(&self) -> bool {
        self.violations == 0 && self.constant.is_finite() && (self.refined_constant / self.constant).ln().abs() < DRIFT_TOLERANCE
    }
}

fn cor66_preconditions(spec: &SpaceSpec) -> Result<()> {
    let q = spec.q();
    let w = spec.weights();
    let classical = w.alpha() == 0.0 && w.alpha1() == w.alpha2() && w.alpha1() >= 0.0;
    if spec.scale() != Scale::F || !(q.is_constant() && q.value(0) == 2.0) || !classical {
        return Err(Error::Precondition("Cor. 6.6 needs the F scale, q ≡ 2 and w_j = 2^{js} with s ≥ 0".into()));
    }
    let p = spec.p();
    if !(p.p_minus() > 1.0 && p.is_bounded()) {
        return Err(Error::Precondition("Cor. 6.6 needs 1 < p- <= p+ < ∞".into()));
    }
    Ok(())
}

/// `‖(m f̂)^∨‖ ≤ C M ‖f‖` over the corpus, `M` per `mode`.
pub fn multiplier_bound_checks(
    corpus: &Corpus,
    grid: Grid,
    recipe: &SpaceRecipe,
    symbol: &dyn Symbol,
    mode: MultiplierMode,
) -> Result<MultiplierReport> {
    let spec = recipe.build(grid)?;
    let t = Thresholds::of(&spec, None);
    let n = grid.dim() as f64;
    let (threshold, value, parameter) = match mode {
        MultiplierMode::Norm2l(l) => (t.multiplier_2l, 2.0 * l as f64, "2l"),
        MultiplierMode::H2Kappa(kappa) => {
            if !(spec.p().is_bounded() && spec.q().is_bounded()) {
                return Err(Error::Precondition("h₂^κ multipliers need p+, q+ < ∞".into()));
            }
            (t.multiplier_kappa, kappa, "κ")
        }
        MultiplierMode::Cor66(kappa) => {
            cor66_preconditions(&spec)?;
            (n / t.p_minus.min(2.0) + n / 2.0, kappa, "κ")
        }
    };
    if !(value > threshold) {
        return Err(Error::Threshold {
            parameter,
            value,
            threshold,
        });
    }
    let multiplier_norm = match mode {
        MultiplierMode::Norm2l(l) => multiplier_norm_2l(symbol, &grid, l)?.value,
        MultiplierMode::H2Kappa(kappa) | MultiplierMode::Cor66(kappa) => {
            h2_kappa_norm(symbol, grid.dim(), kappa, spec.levels())?.value
        }
    };
    if !multiplier_norm.is_finite() {
        return Err(Error::Symbol("multiplier norm is unbounded".into()));
    }
    let run = |g: Grid| -> Result<Vec<f64>> {
        let spec = recipe.build(g)?;
        let mask = symbol_mask(symbol, g);
        corpus
            .sample(g)
            .par_iter()
            .map(|f| {
                let lhs = quasi_norm(&apply_multiplier(f, &mask)?, &spec)?;
                quotient(lhs, quasi_norm(f, &spec)?)
            })
            .collect()
    };
    let coarse = run(grid)?;
    let fine = run(grid.refined())?;
    let constant = coarse.iter().fold(0.0f64, |m, r| m.max(r / multiplier_norm));
    let refined_constant = fine.iter().fold(0.0f64, |m, r| m.max(r / multiplier_norm));
    let allowance = constant * DRIFT_TOLERANCE.exp() * multiplier_norm;
    let violations = fine.iter().filter(|&&r| r > allowance).count();
    Ok(MultiplierReport {
        mode,
        threshold,
        multiplier_norm,
        constant,
        refined_constant,
        violations,
        lhs_over_rhs: coarse,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredConstant {
    /// `max target / source` at `N`.
    pub constant: f64,
    pub refined_constant: f64,
}

impl MeasuredConstant {
    fn from_runs(coarse: &[f64], fine: &[f64]) -> Self {
        let max = |r: &[f64]| r.iter().copied().fold(0.0, f64::max);
        Self {
            constant: max(coarse),
            refined_constant: max(fine),
        }
    }

    pub fn drift(&self) -> f64 {
        (self.refined_constant / self.constant).ln().abs()
    }
}

fn measured_ratio<P, R>(corpus: &Corpus, grid: Grid, prepare: P) -> Result<MeasuredConstant>
where
    P: Fn(Grid) -> Result<R>,
    R: Fn(&GridFunction) -> Result<f64> + Sync,
{
    let run = |g: Grid| -> Result<Vec<f64>> {
        let ratio = prepare(g)?;
        corpus.sample(g).par_iter().map(&ratio).collect()
    };
    Ok(MeasuredConstant::from_runs(&run(grid)?, &run(grid.refined())?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceEmbeddingReport {
    pub name: String,
    /// `‖f‖_target ≤ C ‖f‖_source`; `None` when skipped.
    pub constant: Option<MeasuredConstant>,
    /// `‖(v_j / w_j)_j‖` in `ℓ_{q*}(L_∞)` (B) or `L_∞(ℓ_{q*})` (F), with
    /// `1/q* = (1/q₁ − 1/q₀⁺)₊`.
    pub condition: Option<f64>,
    pub skipped: Option<String>,
}

/// The weight-ratio condition of Prop. 5.2 on the source grid.
pub fn embedding_condition(source: &SpaceSpec, target: &SpaceSpec) -> f64 {
    let q0_plus = source.q().p_plus();
    let levels = source.levels().min(target.levels());
    let grid = *source.grid();
    let q_star: Vec<f64> = target
        .q()
        .values()
        .iter()
        .map(|&q1| {
            let inv = (1.0 / q1 - 1.0 / q0_plus).max(0.0);
            if inv == 0.0 {
                f64::INFINITY
            } else {
                1.0 / inv
            }
        })
        .collect();
    let ratio = |j: usize, i: usize| target.weights().entry(j)[i] / source.weights().entry(j)[i];
    match source.scale() {
        Scale::B => {
            // ‖(sup_x v_j/w_j)_j‖_{ℓ_{q*}} with q* at its least favourable value
            let q = q_star.iter().copied().fold(f64::INFINITY, f64::min);
            let sups = (0..=levels).map(|j| (0..grid.len()).map(|i| ratio(j, i)).fold(0.0, f64::max));
            lq_of(sups.collect::<Vec<_>>().into_iter(), q)
        }
        Scale::F => (0..grid.len())
            .map(|i| lq_of((0..=levels).map(|j| ratio(j, i)).collect::<Vec<_>>().into_iter(), q_star[i]))
            .fold(0.0, f64::max),
    }
}

/// `A_source ↪ A_target`, measured over the corpus. The two spaces must
/// share `p` and the analysis system.
pub fn embedding_check(
    corpus: &Corpus,
    grid: Grid,
    name: &str,
    source: &SpaceRecipe,
    target: &SpaceRecipe,
) -> Result<SpaceEmbeddingReport> {
    let (s, t) = (source.build(grid)?, target.build(grid)?);
    if s.p() != t.p() || s.system() != t.system() {
        return Ok(SpaceEmbeddingReport {
            name: name.to_string(),
            constant: None,
            condition: None,
            skipped: Some("source and target differ in p or in the analysis system".into()),
        });
    }
    let condition = embedding_condition(&s, &t);
    let constant = measured_ratio(corpus, grid, |g| {
        let (s, t) = (source.build(g)?, target.build(g)?);
        Ok(move |f: &GridFunction| quotient(quasi_norm(f, &t)?, quasi_norm(f, &s)?))
    })?;
    Ok(SpaceEmbeddingReport {
        name: name.to_string(),
        constant: Some(constant),
        condition: Some(condition),
        skipped: None,
    })
}

/// Cor. 5.1 (i) for `q₀ ≤ q₁` and the sandwich
/// `B_{p,min(p,q)} ↪ F_{p,q} ↪ B_{p,max(p,q)}` (constant `p`, `q`).
pub fn embedding_checks(corpus: &Corpus, grid: Grid, p: f64, q0: f64, q1: f64, s: f64) -> Result<Vec<SpaceEmbeddingReport>> {
    let mut out = Vec::new();
    for scale in [Scale::B, Scale::F] {
        let name = format!("{scale}: q0 = {q0} into q1 = {q1}");
        let source = SpaceRecipe::classical(scale, p, q0, s);
        let target = SpaceRecipe::classical(scale, p, q1, s);
        if q0 > q1 {
            out.push(SpaceEmbeddingReport {
                name,
                constant: None,
                condition: None,
                skipped: Some(format!("q0 = {q0} exceeds q1 = {q1}")),
            });
            continue;
        }
        out.push(embedding_check(corpus, grid, &name, &source, &target)?);
    }
    let f = SpaceRecipe::classical(Scale::F, p, q0, s);
    out.push(embedding_check(
        corpus,
        grid,
        "B_{min(p,q)} into F",
        &SpaceRecipe::classical(Scale::B, p, p.min(q0), s),
        &f,
    )?);
    out.push(embedding_check(
        corpus,
        grid,
        "F into B_{max(p,q)}",
        &f,
        &SpaceRecipe::classical(Scale::B, p, p.max(q0), s),
    )?);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzReport {
    pub order: u32,
    pub threshold: f64,
    /// `sup_j ‖w_j (φ_j * f)‖_p ≤ C p_N(f)`.
    pub seminorm_bound: MeasuredConstant,
    /// `|⟨f, ψ⟩| ≤ C' ‖f‖_{B^w_{p,∞}}`.
    pub pairing_bound: MeasuredConstant,
}

/// Both halves of `𝒮 ↪ A ↪ 𝒮'` for a fixed smooth test function `ψ`.
pub fn schwartz_embedding_checks(
    corpus: &Corpus,
    grid: Grid,
    recipe: &SpaceRecipe,
    order: u32,
    psi: &(dyn Fn(crate::grid::Point) -> f64 + Sync),
) -> Result<SchwartzReport> {
    let spec = recipe.build(grid)?;
    let n = grid.dim() as f64;
    let threshold = spec.weights().alpha() + n / spec.p().p_minus();
    if !(order as f64 > threshold) {
        return Err(Error::Threshold {
            parameter: "N",
            value: order as f64,
            threshold,
        });
    }
    let seminorm_bound = measured_ratio(corpus, grid, |g| {
        let spec = recipe.build(g)?;
        Ok(move |f: &GridFunction| {
            let blocks = littlewood_paley(f, spec.system())?;
            let cell = g.cell_volume();
            let sup = spec
                .weighted_magnitudes(&blocks, 0)
                .iter()
                .map(|level| luxemburg_norm(level, spec.p().values(), cell, BisectionOptions::default()))
                .fold(0.0, f64::max);
            quotient(sup, p_n_seminorm(f, order))
        })
    })?;
    let b_infinity = SpaceRecipe {
        scale: Scale::B,
        q: super::spec::ExponentRecipe::Constant(f64::INFINITY),
        ..recipe.clone()
    };
    let pairing_bound = measured_ratio(corpus, grid, |g| {
        let spec = b_infinity.build(g)?;
        let test = GridFunction::from_real_fn(g, |x| psi(x));
        Ok(move |f: &GridFunction| {
            let pairing = f.mul(&test.map(|z| z.conj()))?.quadrature().norm();
            quotient(pairing, quasi_norm(f, &spec)?)
        })
    })?;
    Ok(SchwartzReport {
        order,
        threshold,
        seminorm_bound,
        pairing_bound,
    })
}

/// Remark 6.3: `Σ_{|γ| ≤ κ} ‖D^γ f‖_{(−κ)w} ≤ C ‖f‖_w`.
pub fn remark63_sum_check(corpus: &Corpus, grid: Grid, recipe: &SpaceRecipe, kappa: u32) -> Result<MeasuredConstant> {
    measured_ratio(corpus, grid, |g| {
        let spec = recipe.build(g)?;
        let shifted = spec.shifted(kappa as f64)?;
        Ok(move |f: &GridFunction| {
            let mut total = 0.0;
            for gamma in multi_indices(g.dim(), kappa) {
                total += quasi_norm(&f.spectral_derivative(gamma), &shifted)?;
            }
            quotient(total, quasi_norm(f, &spec)?)
        })
    })
}

/// `‖f + g‖ / (‖f‖ + ‖g‖)`: a measured quasi-triangle constant.
pub fn quasi_triangle_ratio(f: &GridFunction, g: &GridFunction, spec: &SpaceSpec) -> Result<f64> {
    let sum = quasi_norm(&f.add(g)?, spec)?;
    let parts = quasi_norm(f, spec)? + quasi_norm(g, spec)?;
    if parts == 0.0 {
        return Ok(0.0);
    }
    Ok(sum / parts)
}

/// `max{1, 2^{1/min(p⁻, q⁻, 1) − 1}}`.
pub fn quasi_triangle_bound(p: &VariableExponent, q: &VariableExponent) -> f64 {
    let r = p.p_minus().min(q.p_minus()).min(1.0);
    2f64.powf(1.0 / r - 1.0).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::symbol::{BesselSymbol, ConstantSymbol, DerivativeSymbol};
    use crate::analysis::system::Profile;
    use crate::spaces::spec::SystemRecipe;

    fn small_corpus() -> Corpus {
        let c = Corpus::standard(1);
        let picks = [0, 7, 15, 22, 30, 35, 40, 45];
        Corpus::from_functions(1, picks.iter().map(|&i| c.functions()[i].clone()).collect())
    }

    fn grid() -> Grid {
        Grid::one_d(128).unwrap()
    }

    #[test]
    fn identical_pairs_give_unit_ratios() {
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.5).with_levels(7);
        let rep = pair_independence_check(&small_corpus(), grid(), &r, &r).unwrap();
        assert!(rep.ratios.iter().chain(&rep.refined_ratios).all(|&v| v == 1.0));
        assert_eq!(rep.refinement_drift, 0.0);
    }

    #[test]
    fn distinct_profiles_give_a_bounded_band() {
        let a = SpaceRecipe::classical(Scale::F, 1.5, 2.0, 0.5).with_levels(7);
        let b = a.clone().with_system(SystemRecipe::Admissible(Profile::Narrow));
        let rep = pair_independence_check(&small_corpus(), grid(), &a, &b).unwrap();
        assert!(rep.passes(DRIFT_TOLERANCE), "{rep:?}");
        assert!(rep.spread() > 0.0);
    }

    #[test]
    fn lifting_by_zero_is_the_identity() {
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 1.0).with_levels(7);
        let rep = lifting_check(&small_corpus(), grid(), &r, 0.0).unwrap();
        assert!(rep.ratios.ratios.iter().all(|&v| v == 1.0));
        assert_eq!(rep.round_trip_error, 0.0);
        assert!(rep.shift_admissible);
    }

    #[test]
    fn lifting_single_mode_band() {
        // σ = 1, p = q = 2, w_j = 2^{js}: the ratio of a mode on annulus j0 is
        // (1+|ξ0|²)^{1/2} / 2^{j0} ∈ [1/2, √(4^{-j0} + 4)]
        let g = Grid::one_d(256).unwrap();
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.3).with_levels(7);
        let spec = r.build(g).unwrap();
        let shifted = spec.shifted(1.0).unwrap();
        for k in [3i64, 5, 10, 20] {
            let f = GridFunction::mode(g, [k, 0]);
            let ratio = quasi_norm(&lift(&f, 1.0), &shifted).unwrap() / quasi_norm(&f, &spec).unwrap();
            let xi = 2.0 * std::f64::consts::PI * k as f64;
            let j0 = xi.log2().round();
            assert!(ratio >= 0.5 && ratio <= (4f64.powf(-j0) + 4.0).sqrt(), "{k} {ratio}");
        }
    }

    #[test]
    fn unit_multiplier_is_tight() {
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.0).with_levels(7);
        let rep = multiplier_bound_checks(&small_corpus(), grid(), &r, &ConstantSymbol(1.0), MultiplierMode::Norm2l(1)).unwrap();
        assert_eq!(rep.multiplier_norm, 1.0);
        assert!(rep.lhs_over_rhs.iter().all(|&v| (v - 1.0).abs() < 1e-12), "{:?}", rep.lhs_over_rhs);
        assert!(rep.passes());
    }

    #[test]
    fn multiplier_thresholds_are_enforced() {
        let r = SpaceRecipe::classical(Scale::B, 1.0, 2.0, 1.0).with_levels(7);
        let e = multiplier_bound_checks(&small_corpus(), grid(), &r, &ConstantSymbol(1.0), MultiplierMode::Norm2l(1));
        assert!(matches!(e, Err(Error::Threshold { parameter: "2l", .. })));
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.0).with_levels(7);
        let e = multiplier_bound_checks(&small_corpus(), grid(), &r, &BesselSymbol { sigma: 1.0 }, MultiplierMode::Norm2l(2));
        assert!(matches!(e, Err(Error::Symbol(_))));
        let e = multiplier_bound_checks(&small_corpus(), grid(), &r, &ConstantSymbol(1.0), MultiplierMode::Cor66(2.0));
        assert!(matches!(e, Err(Error::Precondition(_))));
    }

    #[test]
    fn derivative_symbol_bound() {
        let r = SpaceRecipe::classical(Scale::F, 2.0, 2.0, 0.5).with_levels(7);
        let rep =
            multiplier_bound_checks(&small_corpus(), grid(), &r, &DerivativeSymbol::balanced([1, 0]), MultiplierMode::Cor66(1.6))
                .unwrap();
        assert!(rep.passes(), "{rep:?}");
    }

    #[test]
    fn equal_spaces_embed_with_unit_constant() {
        let r = SpaceRecipe::classical(Scale::B, 2.0, 1.5, 0.5).with_levels(7);
        let rep = embedding_check(&small_corpus(), grid(), "same", &r, &r).unwrap();
        let c = rep.constant.unwrap();
        assert_eq!(c.constant, 1.0);
        assert_eq!(rep.condition.unwrap(), 1.0);
    }

    #[test]
    fn q_monotonicity_and_sandwich() {
        let reps = embedding_checks(&small_corpus(), grid(), 1.5, 1.0, 3.0, 0.5).unwrap();
        assert_eq!(reps.len(), 4);
        for r in &reps[..2] {
            assert!(r.constant.as_ref().unwrap().constant <= 1.0 + 1e-9, "{r:?}");
        }
        for r in &reps[2..] {
            let c = r.constant.as_ref().unwrap();
            assert!(c.constant.is_finite() && c.drift() < DRIFT_TOLERANCE, "{r:?}");
        }
        let skipped = embedding_checks(&small_corpus(), grid(), 2.0, 3.0, 1.0, 0.0).unwrap();
        assert!(skipped[0].skipped.is_some());
    }

    #[test]
    fn remark63_zero_order_is_identity() {
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.5).with_levels(7);
        let c = remark63_sum_check(&small_corpus(), grid(), &r, 0).unwrap();
        assert!((c.constant - 1.0).abs() < 1e-12);
        let c1 = remark63_sum_check(&small_corpus(), grid(), &r, 1).unwrap();
        assert!(c1.constant.is_finite() && c1.constant > 1.0);
    }

    #[test]
    fn schwartz_checks_on_bumps() {
        let corpus = Corpus::gaussian_bumps(1, 6, 3);
        let r = SpaceRecipe::classical(Scale::B, 2.0, 2.0, 0.0).with_levels(7);
        let psi = |x: crate::grid::Point| (-(x[0] - 0.5).powi(2) / 0.01).exp();
        let rep = schwartz_embedding_checks(&corpus, grid(), &r, 1, &psi).unwrap();
        assert!(rep.seminorm_bound.constant > 0.0 && rep.seminorm_bound.drift() < DRIFT_TOLERANCE);
        assert!(rep.pairing_bound.constant > 0.0 && rep.pairing_bound.drift() < DRIFT_TOLERANCE);
        assert!(schwartz_embedding_checks(&corpus, grid(), &r, 0, &psi).is_err());
    }

    #[test]
    fn quasi_triangle_is_measured() {
        let g = grid();
        let spec = SpaceRecipe::classical(Scale::F, 0.6, 0.8, 0.0).with_levels(7).build(g).unwrap();
        let fs = small_corpus().sample(g);
        let k = quasi_triangle_ratio(&fs[0], &fs[1], &spec).unwrap();
        assert!(k > 0.0 && k <= quasi_triangle_bound(spec.p(), spec.q()) * (1.0 + 1e-9));
    }
}
