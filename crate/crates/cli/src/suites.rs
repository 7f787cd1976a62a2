//! The invariant suites behind `verify`.

use microlocal_core::analysis::{
    audit_admissible, default_levels, lift, local_means, multiplier_norm_2l, ConstantSymbol, LocalMeansKernels,
    Symbol,
};
use microlocal_core::lebesgue::{holder_pairing, modular, norm};
use microlocal_core::mixed::{
    convolution_inequality_checks_with, embedding_check_lemma21, eta_kernels, iterated_norm, lq_lp_norm,
};
use microlocal_core::spaces::{
    classical_check, lifting_check, local_means_check, maximal_check, multiplier_bound_checks,
    pair_independence_check, Corpus, MultiplierMode, SystemRecipe, Thresholds,
};
use microlocal_core::weights::verify_admissible;
use microlocal_core::{GridFunction, Scale, SpaceRecipe, SpaceSpec, VariableExponent};
use num_complex::Complex64;
use rand::Rng;

use crate::config::{MultiplierChoice, RunConfig};
use crate::error::CliError;
use crate::random;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub bound: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(suite: &'static str, name: impl Into<String>, value: f64, relation: &'static str, bound: f64) -> Self {
        let passed = match relation {
            "<=" => value <= bound,
            "<" => value < bound,
            ">=" => value >= bound,
            ">" => value > bound,
            _ => value == bound,
        };
        Self {
            suite,
            name: name.into(),
            value,
            relation,
            bound,
            passed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOutput {
    pub checks: Vec<CheckResult>,
    /// Measured constants and thresholds, echoed verbatim into the report.
    pub notes: Vec<String>,
}

impl SuiteOutput {
    fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    fn flag(&mut self, suite: &'static str, name: impl Into<String>, ok: bool) {
        self.push(CheckResult::new(suite, name, if ok { 1.0 } else { 0.0 }, "==", 1.0));
    }
}

pub fn run_suite(name: &str, config: &RunConfig) -> Result<SuiteOutput, CliError> {
    match name {
        "lebesgue" => lebesgue(config),
        "mixed" => mixed(config),
        "weights" => weights(config),
        "analysis" => analysis(config),
        "spaces" => spaces(config),
        "multipliers" => multipliers(config),
        other => Err(CliError::Usage(format!("unknown suite `{other}`"))),
    }
}

fn suite_seed(config: &RunConfig, salt: u64) -> u64 {
    config.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt)
}

fn levels(config: &RunConfig) -> Result<usize, CliError> {
    Ok(config.levels.unwrap_or(default_levels(&config.grid()?)))
}

fn lebesgue(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "lebesgue";
    let grid = config.grid()?;
    let mut rng = random::rng(suite_seed(config, 1));
    let mut out = SuiteOutput::default();
    let (mut lo, mut hi, mut sandwich) = (f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..config.samples {
        let f = random::function(&mut rng, grid);
        let p = random::exponent(&mut rng, grid, 0.5, 8.0);
        let n = norm(&f, &p)?;
        let m = modular(&f.scale_real(1.0 / n), &p)?.value;
        lo = lo.min(m);
        hi = hi.max(m);
        let rho = modular(&f, &p)?.value;
        let (a, b) = (rho.powf(1.0 / p.p_minus()), rho.powf(1.0 / p.p_plus()));
        let excess = ((a.min(b) - n) / n).max((n - a.max(b)) / n).max(0.0);
        sandwich = sandwich.max(excess);
    }
    out.push(CheckResult::new(S, "modular on the unit sphere, minimum", lo, ">=", 1.0 - 1e-8));
    out.push(CheckResult::new(S, "modular on the unit sphere, maximum", hi, "<=", 1.0));
    out.push(CheckResult::new(S, "norm/modular sandwich, relative excess", sandwich, "<=", 1e-9));
    let mut violations = 0.0;
    let mut worst = 0.0f64;
    for _ in 0..config.samples {
        let f = random::function(&mut rng, grid);
        let g = random::function(&mut rng, grid);
        let p = random::exponent(&mut rng, grid, 1.0, 8.0);
        let h = holder_pairing(&f, &g, &p)?;
        worst = worst.max(h.lhs / h.rhs);
        if !h.holds(1e-12) {
            violations += 1.0;
        }
    }
    out.push(CheckResult::new(S, "Hoelder with constant 2, violations", violations, "==", 0.0));
    out.notes.push(format!("largest lhs / (2 |f|_p |g|_p') = {worst:.12e}"));
    Ok(out)
}

fn mixed(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "mixed";
    let grid = config.grid()?;
    let levels = levels(config)?;
    let mut rng = random::rng(suite_seed(config, 2));
    let mut out = SuiteOutput::default();

    let mut gap = 0.0f64;
    for i in 0..config.samples {
        let f = random::sequence(&mut rng, grid, levels);
        let p = random::exponent(&mut rng, grid, 0.5, 8.0);
        let q0 = [1.0, 2.0, f64::INFINITY][i % 3];
        let v = lq_lp_norm(&f, &p, &VariableExponent::constant(grid, q0)?)?;
        let it = iterated_norm(&f, &p, q0)?;
        if it > 0.0 {
            gap = gap.max((v - it).abs() / it);
        }
    }
    out.push(CheckResult::new(S, "constant-q iterated identity, relative gap", gap, "<=", 1e-8));

    let (mut minkowski, mut b_case) = (0.0, 0.0);
    let rounds = (config.samples / 4).max(3);
    let kernels = eta_kernels(grid, levels, grid.dim() as f64 + 1.5)?;
    for i in 0..rounds {
        let delta = [0.5, 1.0, 2.0][i % 3];
        let g = random::sequence(&mut rng, grid, levels).map_entries(|_, e| e.abs())?;
        let p = random::exponent(&mut rng, grid, 1.0, 6.0);
        let q_const = VariableExponent::constant(grid, rng.gen_range(1.0..4.0))?;
        if !convolution_inequality_checks_with(&g, &p, &q_const, delta, &kernels)?.minkowski_holds() {
            minkowski += 1.0;
        }
        let q = random::exponent(&mut rng, grid, 1.0, 6.0);
        if !convolution_inequality_checks_with(&g, &p, &q, delta, &kernels)?.b_case_holds() {
            b_case += 1.0;
        }
    }
    out.push(CheckResult::new(S, "smoothing bound 2/(1-2^-delta), violations", minkowski, "==", 0.0));
    out.push(CheckResult::new(S, "B-case modular bound with c(delta)^2, violations", b_case, "==", 0.0));

    let (mut mono, mut sandwich_finite) = (0.0f64, true);
    for _ in 0..config.samples {
        let f = random::sequence(&mut rng, grid, levels);
        let p = random::exponent(&mut rng, grid, 0.5, 8.0);
        let q0 = random::exponent(&mut rng, grid, 0.5, 4.0);
        let shift = rng.gen_range(0.0..3.0);
        let q1 = VariableExponent::new(grid, q0.values().iter().map(|v| v + shift).collect())?;
        let r = embedding_check_lemma21(&f, &p, &q0, &q1)?;
        mono = mono.max(r.lp_lq_constant).max(r.lq_lp_constant);
        for c in [r.sandwich_lower, r.sandwich_upper].into_iter().flatten() {
            sandwich_finite &= c.is_finite();
        }
    }
    out.push(CheckResult::new(S, "q-monotonicity constant", mono, "<=", 1.0 + 1e-9));
    out.flag(S, "min/max sandwich constants finite", sandwich_finite);
    Ok(out)
}

fn weights(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "weights";
    let spec = config.recipe()?.build(config.grid()?)?;
    let w = spec.weights();
    let mut out = SuiteOutput::default();
    let audit = verify_admissible(w);
    out.notes.push(format!(
        "declared (alpha, alpha1, alpha2) = ({}, {}, {}); measured = ({:.6}, {:.6}, {:.6}); exhaustive = {}",
        w.alpha(),
        w.alpha1(),
        w.alpha2(),
        audit.measured_alpha,
        audit.measured_alpha1,
        audit.measured_alpha2,
        audit.exhaustive
    ));
    out.flag(S, format!("{} admissible", config.weight), audit.passes);
    for &sigma in &config.sigma {
        let shifted = w.shifted(sigma);
        let a = verify_admissible(&shifted);
        out.flag(S, format!("shift by sigma = {sigma} admissible"), a.passes);
        let exact = shifted.alpha1() == w.alpha1() - sigma && shifted.alpha2() == w.alpha2() - sigma;
        out.flag(S, format!("shift by sigma = {sigma} moves (alpha1, alpha2) exactly"), exact);
    }
    Ok(out)
}

fn n_laplace(config: &RunConfig, spec: &SpaceSpec) -> u32 {
    // least N with 2N > alpha2 + 1
    config
        .n_laplace
        .unwrap_or_else(|| ((spec.weights().alpha2() + 1.0) / 2.0).floor().max(0.0) as u32 + 1)
}

fn analysis(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "analysis";
    let grid = config.grid()?;
    let levels = levels(config)?;
    let mut out = SuiteOutput::default();
    for text in [&config.system, &config.system2] {
        if let SystemRecipe::Admissible(_) = RunConfig::system_recipe(text)? {
            let sys = RunConfig::system_recipe(text)?.build(grid, levels)?;
            let audit = audit_admissible(&sys);
            out.notes.push(format!(
                "system {text}: lower bound {:.6e}, support leak {:.6e}",
                audit.lower_bound, audit.support_leak
            ));
            out.flag(S, format!("system {text} is an admissible pair"), audit.passes);
        }
    }
    let corpus = Corpus::standard(config.dim).sample(grid);
    for &sigma in &config.sigma {
        let err = corpus
            .iter()
            .map(|f| lift(&lift(f, sigma), -sigma).sub(f).map(|d| d.max_abs() / f.max_abs()))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(CheckResult::new(S, format!("lift round trip, sigma = {sigma}"), err, "<=", 1e-9));
    }
    let unit = multiplier_norm_2l(&ConstantSymbol(1.0), &grid, 1)?.value;
    out.push(CheckResult::new(S, "|1|_2l deviation from 1", (unit - 1.0).abs(), "<=", 1e-12));
    let spec = config.recipe()?.build(grid)?;
    let nl = n_laplace(config, &spec);
    let c = 1.7;
    let means = local_means(&GridFunction::constant(grid, Complex64::new(c, 0.0)), &LocalMeansKernels::standard(config.dim), nl, levels)?;
    let residue = means.entries()[1..].iter().map(GridFunction::max_abs).fold(0.0, f64::max) / c;
    out.push(CheckResult::new(S, "local means of a constant, levels j >= 1", residue, "<=", 1e-10));
    Ok(out)
}

fn threshold_notes(spec: &SpaceSpec, label: &str) -> Vec<String> {
    let t = Thresholds::of(spec, None);
    vec![
        format!(
            "{label}: alpha = {}, alpha2 = {}, p- = {}, q- = {}, c_log(1/q) = {:.6e}",
            t.alpha, t.alpha2, t.p_minus, t.q_minus, t.c_log_q
        ),
        format!(
            "{label}: thresholds a > {:.6}, 2l > {:.6}, kappa > {:.6}",
            t.maximal_a, t.multiplier_2l, t.multiplier_kappa
        ),
    ]
}

fn spaces(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "spaces";
    let grid = config.grid()?;
    let tol = config.drift_tolerance;
    let corpus = Corpus::standard(config.dim);
    let recipe = config.recipe()?;
    let mut out = SuiteOutput::default();

    let pair = pair_independence_check(&corpus, grid, &recipe, &config.second_recipe()?)?;
    out.notes.push(format!(
        "pair ({}, {}): ratios in [{:.6}, {:.6}], drift {:.3e}",
        config.system, config.system2, pair.ratio_min, pair.ratio_max, pair.refinement_drift
    ));
    out.push(CheckResult::new(S, "pair independence, refinement drift", pair.refinement_drift, "<", tol));
    out.flag(S, "pair independence, ratios bounded", pair.is_bounded());

    for scale in [Scale::B, Scale::F] {
        let r = SpaceRecipe { scale, ..recipe.clone() };
        let Ok(spec) = r.build(grid) else {
            out.notes.push(format!("{scale} scale skipped: not defined for this p, q"));
            continue;
        };
        out.notes.extend(threshold_notes(&spec, &scale.to_string()));
        let m = maximal_check(&corpus, grid, &r, config.a_margin)?;
        out.notes.push(format!(
            "{scale}: a = {:.6}, maximal/plain in [{:.6}, {:.6}]",
            m.a, m.maximal_to_plain.ratio_min, m.maximal_to_plain.ratio_max
        ));
        out.flag(S, format!("{scale}: maximal dominates plain pointwise"), m.dominates);
        out.push(CheckResult::new(
            S,
            format!("{scale}: maximal/plain refinement drift"),
            m.maximal_to_plain.refinement_drift,
            "<",
            tol,
        ));
    }

    for &sigma in &config.sigma {
        let l = lifting_check(&corpus, grid, &recipe, sigma)?;
        out.notes.push(format!(
            "lift sigma = {sigma}: ratios in [{:.6}, {:.6}], round trip {:.3e}",
            l.ratios.ratio_min, l.ratios.ratio_max, l.round_trip_error
        ));
        out.push(CheckResult::new(S, format!("lift sigma = {sigma}, drift"), l.ratios.refinement_drift, "<", tol));
        out.push(CheckResult::new(S, format!("lift sigma = {sigma}, round trip"), l.round_trip_error, "<=", 1e-9));
        out.flag(S, format!("lift sigma = {sigma}, shifted class admissible"), l.shift_admissible);
    }

    for s in [0.0, 1.0] {
        let c = classical_check(&corpus, grid, s)?;
        out.push(CheckResult::new(S, format!("classical s = {s}, Parseval gap"), c.parseval_error, "<=", 1e-10));
        out.push(CheckResult::new(
            S,
            format!("classical s = {s}, Sobolev ratio drift"),
            c.sobolev_ratios.refinement_drift,
            "<",
            0.1,
        ));
    }

    let spec = recipe.build(grid)?;
    let nl = n_laplace(config, &spec);
    let lm = local_means_check(&corpus, grid, &recipe, &LocalMeansKernels::standard(config.dim), nl)?;
    out.notes.push(format!(
        "local means N = {nl}: ratios in [{:.6}, {:.6}]",
        lm.ratio_min, lm.ratio_max
    ));
    out.push(CheckResult::new(S, "local means ratio drift", lm.refinement_drift, "<", tol));
    Ok(out)
}

/// Resolves `auto` choices to the least admissible parameter.
pub fn multiplier_mode(config: &RunConfig, spec: &SpaceSpec) -> MultiplierMode {
    let t = Thresholds::of(spec, None);
    let n = spec.grid().dim() as f64;
    match config.multiplier {
        MultiplierChoice::Norm2l(l) => MultiplierMode::Norm2l(l.unwrap_or((t.multiplier_2l / 2.0).floor() as u32 + 1)),
        MultiplierChoice::H2(k) => MultiplierMode::H2Kappa(k.unwrap_or(t.multiplier_kappa + 0.5)),
        MultiplierChoice::Cor66(k) => MultiplierMode::Cor66(k.unwrap_or(n / t.p_minus.min(2.0) + n / 2.0 + 0.5)),
    }
}

fn multipliers(config: &RunConfig) -> Result<SuiteOutput, CliError> {
    const S: &str = "multipliers";
    let grid = config.grid()?;
    let corpus = Corpus::standard(config.dim);
    let recipe = config.recipe()?;
    let spec = recipe.build(grid)?;
    let mode = multiplier_mode(config, &spec);
    let mut out = SuiteOutput::default();
    out.notes.extend(threshold_notes(&spec, "space"));
    let symbol = config.symbol()?;
    let cases: [(&str, &dyn Symbol); 2] = [("m = 1", &ConstantSymbol(1.0)), (config.symbol.as_str(), &symbol)];
    for (i, (label, m)) in cases.into_iter().enumerate() {
        let r = multiplier_bound_checks(&corpus, grid, &recipe, m, mode)?;
        out.notes.push(format!(
            "{label}: {mode:?}, threshold {:.6}, M = {:.6e}, C = {:.6e}, C at 2N = {:.6e}",
            r.threshold, r.multiplier_norm, r.constant, r.refined_constant
        ));
        out.push(CheckResult::new(S, format!("{label}: violations at 2N"), r.violations as f64, "==", 0.0));
        out.flag(S, format!("{label}: constant refinement-stable"), r.passes());
        if i == 0 {
            let gap = r.lhs_over_rhs.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
            out.push(CheckResult::new(S, "m = 1: |lhs/rhs - 1|", gap, "<=", 1e-12));
        }
    }
    Ok(out)
}
