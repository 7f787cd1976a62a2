use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use microlocal_core::analysis::littlewood_paley;
use microlocal_core::lebesgue::luxemburg_norm;
use microlocal_core::spaces::{
    lifting_check, multiplier_bound_checks, pair_independence_check, Corpus, EquivalenceReport, Thresholds,
};
use microlocal_core::{quasi_norm, BisectionOptions, SpaceSpec};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::signal::load_signal;
use crate::suites::{multiplier_mode, run_suite};

#[derive(Debug, Parser)]
#[command(name = "microlocal", version, about = "Norms and checks for 2-microlocal Besov and Triebel-Lizorkin spaces with variable exponents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the quasi-norm of a signal.
    Norm(Common),
    /// Per-level weighted block norms of a signal, as CSV.
    Analyze(Common),
    /// Run invariant suites; exit 0 iff every check passes.
    Verify(Common),
    /// Ratios of quasi-norms computed with two admissible systems.
    ComparePairs(Common),
    /// Ratios for the lifting operator I_sigma.
    LiftCheck(Common),
    /// Bound checks for a Fourier multiplier.
    MultiplierCheck(Common),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub grid_n: Option<String>,
    #[arg(long)]
    pub dim: Option<String>,
    /// `J`, or `auto`.
    #[arg(long)]
    pub levels: Option<String>,
    /// `B` or `F`.
    #[arg(long)]
    pub scale: Option<String>,
    /// Expression in x1, x2, or `@table.csv`.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// Variable smoothness s(x); shorthand for `--weight varsmooth:<s>`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// `family:params`, e.g. `varsmooth:0`, `2micro:1,-0.5,0.5`.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// `classic`, `narrow`, `custom:a,b` or `general:eps,k,moments`.
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub system2: Option<String>,
    /// Comma-separated suite names, or `all`.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub samples: Option<String>,
    /// Comma-separated lifting orders.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Symbol m(xi) in x1, x2.
    #[arg(long, allow_hyphen_values = true)]
    pub symbol: Option<String>,
    /// `norm2l:<l>`, `h2:<kappa>`, `cor66:<kappa>`, each also `:auto`.
    #[arg(long)]
    pub multiplier: Option<String>,
    #[arg(long)]
    pub a_margin: Option<String>,
    #[arg(long)]
    pub n_laplace: Option<String>,
    #[arg(long)]
    pub signal: Option<PathBuf>,
    /// Directory for CSV and report files.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let overrides = [
            ("n", &self.grid_n),
            ("dim", &self.dim),
            ("levels", &self.levels),
            ("scale", &self.scale),
            ("p", &self.p),
            ("q", &self.q),
            ("s", &self.s),
            ("weight", &self.weight),
            ("system", &self.system),
            ("system2", &self.system2),
            ("suite", &self.suite),
            ("seed", &self.seed),
            ("samples", &self.samples),
            ("sigma", &self.sigma),
            ("symbol", &self.symbol),
            ("multiplier", &self.multiplier),
            ("a_margin", &self.a_margin),
            ("n_laplace", &self.n_laplace),
        ];
        for (key, value) in overrides {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if let Some(s) = &self.signal {
            config.signal = Some(s.clone());
        }
        if let Some(o) = &self.out {
            config.out = Some(o.clone());
        }
        // surface malformed entries before any work starts
        config.recipe()?.build(config.grid()?)?;
        config.second_recipe()?;
        config.symbol()?;
        Ok(config)
    }
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub report: String,
    /// `(file name, contents)`.
    pub csv: Option<(String, String)>,
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn header(command: &str, config: &RunConfig) -> String {
    format!("microlocal {command}\n{}\n\n", config.describe())
}

fn thresholds_block(spec: &SpaceSpec) -> String {
    let t = Thresholds::of(spec, None);
    format!(
        "alpha = {}\nalpha2 = {}\np_minus = {}\nq_minus = {}\nc_log(1/q) = {}\nthreshold a > {}\nthreshold 2l > {}\nthreshold kappa > {}\n",
        t.alpha,
        t.alpha2,
        t.p_minus,
        t.q_minus,
        num(t.c_log_q),
        num(t.maximal_a),
        num(t.multiplier_2l),
        num(t.multiplier_kappa)
    )
}

fn signal(config: &RunConfig) -> Result<microlocal_core::GridFunction, CliError> {
    let path = config
        .signal
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs --signal <path>".into()))?;
    load_signal(path, &config.grid()?)
}

pub fn norm(config: &RunConfig) -> Result<Outcome, CliError> {
    let spec = config.recipe()?.build(config.grid()?)?;
    let f = signal(config)?;
    let value = quasi_norm(&f, &spec)?;
    let mut report = header("norm", config);
    report += &thresholds_block(&spec);
    let _ = writeln!(report, "quasi_norm = {}", num(value));
    Ok(Outcome {
        passed: true,
        report,
        csv: None,
    })
}

pub fn analyze(config: &RunConfig) -> Result<Outcome, CliError> {
    let grid = config.grid()?;
    let spec = config.recipe()?.build(grid)?;
    let f = signal(config)?;
    let blocks = littlewood_paley(&f, spec.system())?;
    let mut csv = String::from("j,level_norm\n");
    for (j, level) in spec.weighted_magnitudes(&blocks, 0).iter().enumerate() {
        let v = luxemburg_norm(level, spec.p().values(), grid.cell_volume(), BisectionOptions::default());
        let _ = writeln!(csv, "{j},{}", num(v));
    }
    let mut report = header("analyze", config);
    report += &thresholds_block(&spec);
    let _ = writeln!(report, "quasi_norm = {}", num(quasi_norm(&f, &spec)?));
    Ok(Outcome {
        passed: true,
        report,
        csv: Some(("analyze.csv".into(), csv)),
    })
}

pub fn verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let mut report = header("verify", config);
    let mut csv = String::from("suite,check,value,relation,bound,result\n");
    let (mut passed, mut failed) = (0, 0);
    for suite in &config.suites {
        let out = run_suite(suite, config)?;
        let _ = writeln!(report, "[{suite}]");
        for note in &out.notes {
            let _ = writeln!(report, "  {note}");
        }
        for c in &out.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(report, "{verdict} {}: {} {} {}", c.name, num(c.value), c.relation, num(c.bound));
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{verdict}",
                c.suite,
                c.name.replace(',', ";"),
                num(c.value),
                c.relation,
                num(c.bound)
            );
            if c.passed {
                passed += 1;
            } else {
                failed += 1;
            }
        }
        report.push('\n');
    }
    let _ = writeln!(report, "summary: {passed} passed, {failed} failed");
    Ok(Outcome {
        passed: failed == 0,
        report,
        csv: Some(("verify.csv".into(), csv)),
    })
}

fn equivalence_csv(corpus: &Corpus, rep: &EquivalenceReport, prefix: &str, csv: &mut String) {
    for ((f, a), b) in corpus.functions().iter().zip(&rep.ratios).zip(&rep.refined_ratios) {
        let _ = writeln!(csv, "{prefix}{},{},{}", f.name, num(*a), num(*b));
    }
}

fn equivalence_summary(rep: &EquivalenceReport, report: &mut String) {
    let _ = writeln!(report, "ratio_min = {}", num(rep.ratio_min));
    let _ = writeln!(report, "ratio_max = {}", num(rep.ratio_max));
    let _ = writeln!(report, "log spread = {}", num(rep.spread()));
    let _ = writeln!(report, "refinement drift = {}", num(rep.refinement_drift));
}

pub fn compare_pairs(config: &RunConfig) -> Result<Outcome, CliError> {
    let grid = config.grid()?;
    let corpus = Corpus::standard(config.dim);
    let rep = pair_independence_check(&corpus, grid, &config.recipe()?, &config.second_recipe()?)?;
    let mut csv = String::from("function,ratio_n,ratio_2n\n");
    equivalence_csv(&corpus, &rep, "", &mut csv);
    let mut report = header("compare-pairs", config);
    report += &thresholds_block(&config.recipe()?.build(grid)?);
    equivalence_summary(&rep, &mut report);
    let passed = rep.passes(config.drift_tolerance);
    let _ = writeln!(report, "result = {}", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome {
        passed,
        report,
        csv: Some(("compare-pairs.csv".into(), csv)),
    })
}

pub fn lift_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let grid = config.grid()?;
    let corpus = Corpus::standard(config.dim);
    let recipe = config.recipe()?;
    let mut csv = String::from("sigma,function,ratio_n,ratio_2n\n");
    let mut report = header("lift-check", config);
    report += &thresholds_block(&recipe.build(grid)?);
    let mut passed = true;
    for &sigma in &config.sigma {
        let rep = lifting_check(&corpus, grid, &recipe, sigma)?;
        equivalence_csv(&corpus, &rep.ratios, &format!("{sigma},"), &mut csv);
        let _ = writeln!(report, "\nsigma = {sigma}");
        equivalence_summary(&rep.ratios, &mut report);
        let _ = writeln!(report, "round trip error = {}", num(rep.round_trip_error));
        let _ = writeln!(
            report,
            "shifted (alpha1, alpha2) = ({}, {}), measured ({}, {}), admissible = {}",
            rep.shifted_alpha1,
            rep.shifted_alpha2,
            num(rep.measured_alpha1),
            num(rep.measured_alpha2),
            rep.shift_admissible
        );
        let ok = rep.ratios.passes(config.drift_tolerance) && rep.round_trip_error <= 1e-9 && rep.shift_admissible;
        let _ = writeln!(report, "result = {}", if ok { "PASS" } else { "FAIL" });
        passed &= ok;
    }
    Ok(Outcome {
        passed,
        report,
        csv: Some(("lift-check.csv".into(), csv)),
    })
}

pub fn multiplier_check(config: &RunConfig) -> Result<Outcome, CliError> {
    let grid = config.grid()?;
    let corpus = Corpus::standard(config.dim);
    let recipe = config.recipe()?;
    let spec = recipe.build(grid)?;
    let mode = multiplier_mode(config, &spec);
    let symbol = config.symbol()?;
    let rep = multiplier_bound_checks(&corpus, grid, &recipe, &symbol, mode)?;
    let mut csv = String::from("function,lhs_over_rhs\n");
    for (f, v) in corpus.functions().iter().zip(&rep.lhs_over_rhs) {
        let _ = writeln!(csv, "{},{}", f.name, num(*v));
    }
    let mut report = header("multiplier-check", config);
    report += &thresholds_block(&spec);
    let _ = writeln!(report, "mode = {mode:?}");
    let _ = writeln!(report, "mode threshold = {}", num(rep.threshold));
    let _ = writeln!(report, "multiplier norm M = {}", num(rep.multiplier_norm));
    let _ = writeln!(report, "constant C = {}", num(rep.constant));
    let _ = writeln!(report, "constant C at 2N = {}", num(rep.refined_constant));
    let _ = writeln!(report, "violations at 2N = {}", rep.violations);
    let passed = rep.passes();
    let _ = writeln!(report, "result = {}", if passed { "PASS" } else { "FAIL" });
    Ok(Outcome {
        passed,
        report,
        csv: Some(("multiplier-check.csv".into(), csv)),
    })
}

pub fn execute(command: &Command) -> Result<(RunConfig, Outcome), CliError> {
    let (common, run): (&Common, fn(&RunConfig) -> Result<Outcome, CliError>) = match command {
        Command::Norm(c) => (c, norm),
        Command::Analyze(c) => (c, analyze),
        Command::Verify(c) => (c, verify),
        Command::ComparePairs(c) => (c, compare_pairs),
        Command::LiftCheck(c) => (c, lift_check),
        Command::MultiplierCheck(c) => (c, multiplier_check),
    };
    let config = common.resolve()?;
    let outcome = run(&config)?;
    Ok((config, outcome))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

/// With `--out`, the CSV and `report.txt` go to files and the report is
/// echoed on stdout. Without it, the CSV goes to stdout and the report to
/// stderr.
pub fn emit(config: &RunConfig, outcome: &Outcome, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let console = |e: std::io::Error| CliError::Usage(format!("cannot write output: {e}"));
    match &config.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            if let Some((name, csv)) = &outcome.csv {
                write_file(&dir.join(name), csv)?;
            }
            write_file(&dir.join("report.txt"), &outcome.report)?;
            stdout.write_all(outcome.report.as_bytes()).map_err(console)?;
        }
        None => match &outcome.csv {
            Some((_, csv)) => {
                stdout.write_all(csv.as_bytes()).map_err(console)?;
                stderr.write_all(outcome.report.as_bytes()).map_err(console)?;
            }
            None => stdout.write_all(outcome.report.as_bytes()).map_err(console)?,
        },
    }
    Ok(())
}

/// Exit codes: 0 pass, 1 failed check, 2 usage, config or IO error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return 2;
            }
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
    };
    let result = execute(&cli.command).and_then(|(config, outcome)| {
        emit(&config, &outcome, stdout, stderr)?;
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
