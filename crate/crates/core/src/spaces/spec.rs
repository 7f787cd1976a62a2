//! Space descriptions and the quasi-norms of `B^w_{p(·),q(·)}` and
//! `F^w_{p(·),q(·)}` in their plain, Peetre-maximal and local-means forms.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::analysis::local_means::{local_means, LocalMeansKernels};
use crate::analysis::operators::{littlewood_paley, peetre_maximal};
use crate::analysis::system::{default_levels, AnalysisSystem, Profile};
use crate::error::{Error, Result};
use crate::exponents::VariableExponent;
use crate::grid::{ensure_same_grid, FunctionSequence, Grid, GridFunction, Point};
use crate::lebesgue::luxemburg_norm;
use crate::mixed::{lp_lq_norm_of, lq_lp_norm_of, lq_of};
use crate::solve::BisectionOptions;
use crate::weights::{make_2microlocal, make_generalized, make_variable_smoothness, make_weighted, WeightSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scale {
    B,
    F,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::B => "B",
            Scale::F => "F",
        })
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "B" | "b" => Ok(Scale::B),
            "F" | "f" => Ok(Scale::F),
            other => Err(Error::Spec(format!("unknown scale `{other}` (expected B or F)"))),
        }
    }
}

/// A concrete space on one grid.
#[derive(Debug, Clone)]
pub struct SpaceSpec {
    scale: Scale,
    p: VariableExponent,
    q: VariableExponent,
    w: WeightSequence,
    system: AnalysisSystem,
    levels: usize,
}

impl SpaceSpec {
    pub fn new(
        scale: Scale,
        p: VariableExponent,
        q: VariableExponent,
        w: WeightSequence,
        system: AnalysisSystem,
        levels: usize,
    ) -> Result<Self> {
        let grid = *system.grid();
        ensure_same_grid(&grid, p.grid())?;
        ensure_same_grid(&grid, q.grid())?;
        ensure_same_grid(&grid, w.grid())?;
        if scale == Scale::F && !(p.is_bounded() && q.is_bounded()) {
            return Err(Error::Spec("the F scale needs p+ < ∞ and q+ < ∞".into()));
        }
        if system.levels() < levels {
            return Err(Error::Spec(format!(
                "system has {} levels, J = {levels} requested",
                system.levels()
            )));
        }
        if w.levels() < levels {
            return Err(Error::Spec(format!("weights have {} levels, J = {levels} requested", w.levels())));
        }
        Ok(Self {
            scale,
            p,
            q,
            w,
            system,
            levels,
        })
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn p(&self) -> &VariableExponent {
        &self.p
    }

    pub fn q(&self) -> &VariableExponent {
        &self.q
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.w
    }

    pub fn system(&self) -> &AnalysisSystem {
        &self.system
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn grid(&self) -> &Grid {
        self.system.grid()
    }

    pub fn with_scale(&self, scale: Scale) -> Result<Self> {
        Self::new(scale, self.p.clone(), self.q.clone(), self.w.clone(), self.system.clone(), self.levels)
    }

    pub fn with_q(&self, q: VariableExponent) -> Result<Self> {
        Self::new(self.scale, self.p.clone(), q, self.w.clone(), self.system.clone(), self.levels)
    }

    pub fn with_weights(&self, w: WeightSequence) -> Result<Self> {
        Self::new(self.scale, self.p.clone(), self.q.clone(), w, self.system.clone(), self.levels)
    }

    pub fn with_system(&self, system: AnalysisSystem) -> Result<Self> {
        Self::new(self.scale, self.p.clone(), self.q.clone(), self.w.clone(), system, self.levels)
    }

    pub fn with_levels(&self, levels: usize) -> Result<Self> {
        Self::new(self.scale, self.p.clone(), self.q.clone(), self.w.clone(), self.system.clone(), levels)
    }

    /// The `(−σ)w` space: weights `2^{-jσ} w_j`.
    pub fn shifted(&self, sigma: f64) -> Result<Self> {
        self.with_weights(self.w.shifted(sigma))
    }

    /// `‖(g_j)_{j ≤ J}‖` in `ℓ_q(L_p)` (B) or `L_p(ℓ_q)` (F), for magnitudes `g_j`.
    pub fn sequence_norm(&self, mags: &[Vec<f64>]) -> f64 {
        let cell = self.grid().cell_volume();
        match self.scale {
            Scale::F => lp_lq_norm_of(mags, self.p.values(), self.q.values(), cell),
            Scale::B if self.q.is_constant() => {
                // ℓ_q(L_p) with constant q is the ℓ_q norm of the level norms
                let q = self.q.value(0);
                let norms = mags
                    .iter()
                    .map(|level| luxemburg_norm(level, self.p.values(), cell, BisectionOptions::default()));
                lq_of(norms.collect::<Vec<_>>().into_iter(), q)
            }
            Scale::B => lq_lp_norm_of(mags, self.p.values(), self.q.values(), cell),
        }
    }

    /// `|w_j · g_j|` for `j ≤ J`.
    pub fn weighted_magnitudes(&self, seq: &FunctionSequence, first: usize) -> Vec<Vec<f64>> {
        (first..=self.levels)
            .map(|j| {
                seq.entry(j)
                    .samples()
                    .iter()
                    .zip(self.w.entry(j))
                    .map(|(z, w)| z.norm() * w)
                    .collect()
            })
            .collect()
    }
}

/// `‖(w_j (φ_j * f))_{j ≤ J}‖`.
pub fn quasi_norm(f: &GridFunction, spec: &SpaceSpec) -> Result<f64> {
    ensure_same_grid(f.grid(), spec.grid())?;
    let blocks = littlewood_paley(f, spec.system())?;
    Ok(spec.sequence_norm(&spec.weighted_magnitudes(&blocks, 0)))
}

/// Smoothness thresholds of the characterization and multiplier theorems,
/// evaluated on the class parameters of a spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub dim: usize,
    pub alpha: f64,
    pub alpha2: f64,
    pub p_minus: f64,
    pub q_minus: f64,
    /// The value of `c_log(1/q)` used below.
    pub c_log_q: f64,
    /// Grid estimate of `c_log(1/q)`.
    pub c_log_q_estimate: f64,
    /// Lower bound for `a` in the Peetre characterization.
    pub maximal_a: f64,
    /// Lower bound for `2l` with `‖m‖_{2l}`.
    pub multiplier_2l: f64,
    /// Lower bound for `κ` with `‖m | h₂^κ‖`.
    pub multiplier_kappa: f64,
}

impl Thresholds {
    /// `α` is the weights' declared class parameter; `c_log(1/q)` is the grid
    /// estimate unless overridden.
    pub fn of(spec: &SpaceSpec, c_log_override: Option<f64>) -> Self {
        let n = spec.grid().dim() as f64;
        let alpha = spec.weights().alpha();
        let p_minus = spec.p().p_minus();
        let q_minus = spec.q().p_minus();
        let estimate = spec.q().c_log_reciprocal();
        let c_log_q = c_log_override.unwrap_or(estimate);
        let (maximal_a, multiplier_2l, multiplier_kappa) = match spec.scale() {
            Scale::B => {
                let a = alpha + n / p_minus + c_log_q;
                (a, a + n, a + n / 2.0)
            }
            Scale::F => {
                let a = alpha + n / p_minus.min(q_minus);
                (a, a + n, a + n / 2.0)
            }
        };
        Self {
            dim: spec.grid().dim(),
            alpha,
            alpha2: spec.weights().alpha2(),
            p_minus,
            q_minus,
            c_log_q,
            c_log_q_estimate: estimate,
            maximal_a,
            multiplier_2l,
            multiplier_kappa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalNorms {
    pub plain: f64,
    pub maximal: f64,
    pub threshold: f64,
    /// Whether `(ψ*_j f)_a ≥ |ψ_j * f|` held at every point and level.
    pub dominates: bool,
}

/// Plain and Peetre-maximal quasi-norms with the spec's system as `(ψ_j)`.
pub fn quasi_norm_maximal(f: &GridFunction, spec: &SpaceSpec, a: f64) -> Result<MaximalNorms> {
    quasi_norm_maximal_with(f, spec, a, &Thresholds::of(spec, None))
}

pub fn quasi_norm_maximal_with(f: &GridFunction, spec: &SpaceSpec, a: f64, thresholds: &Thresholds) -> Result<MaximalNorms> {
    ensure_same_grid(f.grid(), spec.grid())?;
    if !(a > thresholds.maximal_a) {
        return Err(Error::Threshold {
            parameter: "a",
            value: a,
            threshold: thresholds.maximal_a,
        });
    }
    let blocks = littlewood_paley(f, spec.system())?;
    let peetre = peetre_maximal(&blocks, a)?;
    let dominates = blocks
        .entries()
        .iter()
        .zip(peetre.entries())
        .all(|(b, m)| b.samples().iter().zip(m.samples()).all(|(u, v)| v.re >= u.norm()));
    Ok(MaximalNorms {
        plain: spec.sequence_norm(&spec.weighted_magnitudes(&blocks, 0)),
        maximal: spec.sequence_norm(&spec.weighted_magnitudes(&peetre, 0)),
        threshold: thresholds.maximal_a,
        dominates,
    })
}

/// `‖w_0 k_0(1, f)‖_{p} + ‖(w_j k^N(2^{-j}, f))_{1 ≤ j ≤ J}‖`.
pub fn quasi_norm_local_means(f: &GridFunction, spec: &SpaceSpec, kernels: &LocalMeansKernels, n_laplace: u32) -> Result<f64> {
    ensure_same_grid(f.grid(), spec.grid())?;
    let alpha2 = spec.weights().alpha2();
    if !(2.0 * n_laplace as f64 > alpha2) {
        return Err(Error::Precondition(format!("2N = {} must exceed α2 = {alpha2}", 2 * n_laplace)));
    }
    let means = local_means(f, kernels, n_laplace, spec.levels())?;
    let mags = spec.weighted_magnitudes(&means, 0);
    let cell = spec.grid().cell_volume();
    let low = luxemburg_norm(&mags[0], spec.p().values(), cell, BisectionOptions::default());
    let high = if mags.len() > 1 { spec.sequence_norm(&mags[1..]) } else { 0.0 };
    Ok(low + high)
}

/// A function of the torus point, shared across grids.
pub type PointFn = Arc<dyn Fn(Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ExponentRecipe {
    Constant(f64),
    Function(PointFn),
}

impl ExponentRecipe {
    pub fn build(&self, grid: Grid) -> Result<VariableExponent> {
        match self {
            ExponentRecipe::Constant(p) => VariableExponent::constant(grid, *p),
            ExponentRecipe::Function(f) => VariableExponent::from_fn(grid, |x| f(x)),
        }
    }
}

impl fmt::Debug for ExponentRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentRecipe::Constant(p) => write!(f, "Constant({p})"),
            ExponentRecipe::Function(_) => write!(f, "Function(..)"),
        }
    }
}

#[derive(Clone)]
pub enum WeightRecipe {
    /// `w_j = 2^{js}`.
    Classical { s: f64 },
    /// `w_j = 2^{j s(x)}`.
    VariableSmoothness(PointFn),
    /// `w_j = 2^{js} (1 + 2^j d(x, U))^{s'}`.
    TwoMicrolocal { s: f64, s_prime: f64, set: Vec<Point> },
    /// `w_j = 2^{js} ρ(x)`.
    Weighted { rho: PointFn, s: f64, beta: f64, bound: Option<f64> },
    /// `w_j ≡ σ_j`; needs at least `J + 1` entries.
    Generalized(Vec<f64>),
}

impl WeightRecipe {
    pub fn build(&self, grid: Grid, levels: usize) -> Result<WeightSequence> {
        match self {
            WeightRecipe::Classical { s } => make_variable_smoothness(grid, &vec![*s; grid.len()], levels),
            WeightRecipe::VariableSmoothness(s) => {
                let values: Vec<f64> = grid.points().map(|x| s(x)).collect();
                make_variable_smoothness(grid, &values, levels)
            }
            WeightRecipe::TwoMicrolocal { s, s_prime, set } => make_2microlocal(grid, *s, *s_prime, set, levels),
            WeightRecipe::Weighted { rho, s, beta, bound } => {
                let values: Vec<f64> = grid.points().map(|x| rho(x)).collect();
                make_weighted(grid, &values, *s, *beta, levels, *bound)
            }
            WeightRecipe::Generalized(sigma) => {
                if sigma.len() < levels + 1 {
                    return Err(Error::Spec(format!(
                        "generalized weights have {} entries, J + 1 = {} needed",
                        sigma.len(),
                        levels + 1
                    )));
                }
                make_generalized(grid, &sigma[..=levels])
            }
        }
    }
}

impl fmt::Debug for WeightRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightRecipe::Classical { s } => write!(f, "Classical {{ s: {s} }}"),
            WeightRecipe::VariableSmoothness(_) => write!(f, "VariableSmoothness(..)"),
            WeightRecipe::TwoMicrolocal { s, s_prime, set } => {
                write!(f, "TwoMicrolocal {{ s: {s}, s_prime: {s_prime}, set: {set:?} }}")
            }
            WeightRecipe::Weighted { s, beta, bound, .. } => {
                write!(f, "Weighted {{ s: {s}, beta: {beta}, bound: {bound:?} }}")
            }
            WeightRecipe::Generalized(sigma) => write!(f, "Generalized({sigma:?})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemRecipe {
    Admissible(Profile),
    General { epsilon: f64, k: f64, moments: u32 },
}

impl SystemRecipe {
    pub fn build(&self, grid: Grid, levels: usize) -> Result<AnalysisSystem> {
        match *self {
            SystemRecipe::Admissible(profile) => AnalysisSystem::admissible(profile, grid, levels),
            SystemRecipe::General { epsilon, k, moments } => AnalysisSystem::general(epsilon, k, moments, grid, levels),
        }
    }
}

/// A grid-independent description of a space, so the same space can be
/// instantiated at `N` and `2N`.
#[derive(Debug, Clone)]
pub struct SpaceRecipe {
    pub scale: Scale,
    pub p: ExponentRecipe,
    pub q: ExponentRecipe,
    pub weight: WeightRecipe,
    pub system: SystemRecipe,
    /// `J`; defaults to the grid maximum.
    pub levels: Option<usize>,
}

impl SpaceRecipe {
    /// `p`, `q` constant, `w_j = 2^{js}`, classic admissible pair.
    pub fn classical(scale: Scale, p: f64, q: f64, s: f64) -> Self {
        Self {
            scale,
            p: ExponentRecipe::Constant(p),
            q: ExponentRecipe::Constant(q),
            weight: WeightRecipe::Classical { s },
            system: SystemRecipe::Admissible(Profile::Classic),
            levels: None,
        }
    }

    pub fn with_levels(mut self, levels: usize) -> Self {
        self.levels = Some(levels);
        self
    }

    pub fn with_system(mut self, system: SystemRecipe) -> Self {
        self.system = system;
        self
    }

    pub fn with_scale(mut self, scale: Scale) -> Self {
        self.scale = scale;
        self
    }

    pub fn build(&self, grid: Grid) -> Result<SpaceSpec> {
        let levels = self.levels.unwrap_or_else(|| default_levels(&grid));
        SpaceSpec::new(
            self.scale,
            self.p.build(grid)?,
            self.q.build(grid)?,
            self.weight.build(grid, levels)?,
            self.system.build(grid, levels)?,
            levels,
        )
    }
}
