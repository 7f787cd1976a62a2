//! `key = value` run configuration and its translation into space recipes.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use microlocal_core::analysis::Profile;
use microlocal_core::spaces::{ExponentRecipe, PointFn, SystemRecipe, WeightRecipe};
use microlocal_core::{Grid, Scale, SpaceRecipe};

use crate::error::CliError;
use crate::expr::{parse_expression, Expr, ExprSymbol};

pub const SUITES: [&str; 6] = ["lebesgue", "mixed", "weights", "analysis", "spaces", "multipliers"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierChoice {
    /// `‖m‖_{2l}`; `None` picks the least `l` above the threshold.
    Norm2l(Option<u32>),
    /// `‖m | h₂^κ‖`; `None` picks threshold + 1/2.
    H2(Option<f64>),
    Cor66(Option<f64>),
}

impl FromStr for MultiplierChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (kind, value) = s.split_once(':').unwrap_or((s, "auto"));
        let bad = || CliError::Usage(format!("bad multiplier mode `{s}` (norm2l:<l>, h2:<κ>, cor66:<κ>, or :auto)"));
        let float = |v: &str| -> Result<Option<f64>, CliError> {
            if v == "auto" {
                Ok(None)
            } else {
                v.parse().map(Some).map_err(|_| bad())
            }
        };
        match kind {
            "norm2l" => Ok(MultiplierChoice::Norm2l(if value == "auto" {
                None
            } else {
                Some(value.parse().map_err(|_| bad())?)
            })),
            "h2" => Ok(MultiplierChoice::H2(float(value)?)),
            "cor66" => Ok(MultiplierChoice::Cor66(float(value)?)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub n: usize,
    pub levels: Option<usize>,
    pub scale: Scale,
    pub p: String,
    pub q: String,
    /// `family:params`; see [`RunConfig::weight_recipe`].
    pub weight: String,
    pub system: String,
    /// The second system of `compare-pairs`.
    pub system2: String,
    pub suites: Vec<String>,
    pub seed: u64,
    /// Random instances per randomized suite check.
    pub samples: usize,
    pub drift_tolerance: f64,
    pub a_margin: f64,
    pub sigma: Vec<f64>,
    pub symbol: String,
    pub multiplier: MultiplierChoice,
    pub n_laplace: Option<u32>,
    pub signal: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 1,
            n: 256,
            levels: None,
            scale: Scale::B,
            p: "2".into(),
            q: "2".into(),
            weight: "varsmooth:0".into(),
            system: "classic".into(),
            system2: "narrow".into(),
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            seed: 7,
            samples: 40,
            drift_tolerance: 0.3,
            a_margin: 1.0,
            sigma: vec![-2.0, 1.0],
            symbol: "x1*(1 + x1^2 + x2^2)^(-1/2)".into(),
            multiplier: MultiplierChoice::Norm2l(None),
            n_laplace: None,
            signal: None,
            out: None,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Parse(format!("bad value for `{key}`: `{value}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, CliError> {
    value.split(',').map(|v| parse_value(key, v.trim())).collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "dim" => self.dim = parse_value(key, value)?,
            "n" | "grid-n" | "grid_n" => self.n = parse_value(key, value)?,
            "levels" => {
                self.levels = if value == "auto" {
                    None
                } else {
                    Some(parse_value(key, value)?)
                }
            }
            "scale" => self.scale = value.parse().map_err(|_| CliError::Parse(format!("bad scale `{value}`")))?,
            "p" => self.p = value.into(),
            "q" => self.q = value.into(),
            "s" => self.weight = format!("varsmooth:{value}"),
            "weight" => self.weight = value.into(),
            "system" => self.system = value.into(),
            "system2" => self.system2 = value.into(),
            "suite" | "suites" => {
                self.suites = if value == "all" {
                    SUITES.iter().map(|s| s.to_string()).collect()
                } else {
                    value.split(',').map(|s| s.trim().to_string()).collect()
                };
                for s in &self.suites {
                    if !SUITES.contains(&s.as_str()) {
                        return Err(CliError::Parse(format!("unknown suite `{s}` (known: {})", SUITES.join(", "))));
                    }
                }
            }
            "seed" => self.seed = parse_value(key, value)?,
            "samples" => self.samples = parse_value(key, value)?,
            "drift_tolerance" => self.drift_tolerance = parse_value(key, value)?,
            "a_margin" => self.a_margin = parse_value(key, value)?,
            "sigma" => self.sigma = parse_list(key, value)?,
            "symbol" => self.symbol = value.into(),
            "multiplier" => self.multiplier = value.parse()?,
            "n_laplace" => {
                self.n_laplace = if value == "auto" {
                    None
                } else {
                    Some(parse_value(key, value)?)
                }
            }
            "signal" => self.signal = Some(value.into()),
            "out" => self.out = Some(value.into()),
            _ => return Err(CliError::Parse(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Parse(format!("line {}: expected `key = value`", i + 1)))?;
            config
                .set(key.trim(), value)
                .map_err(|e| CliError::Parse(format!("line {}: {e}", i + 1)))?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Ok(Grid::new(self.dim, self.n)?)
    }

    pub fn exponent_recipe(&self, text: &str) -> Result<ExponentRecipe, CliError> {
        Ok(match point_fn(text, self.dim)? {
            Source::Constant(v) => ExponentRecipe::Constant(v),
            Source::Function(f) => ExponentRecipe::Function(f),
        })
    }

    /// Weight families:
    /// `classical:<s>`, `varsmooth:<expr>`, `2micro:<s>,<s'>,<x1>[,<x2>]`,
    /// `weighted:<s>,<β>,<ρ expr>`, `generalized:<σ0>,<σ1>,...`.
    pub fn weight_recipe(&self) -> Result<WeightRecipe, CliError> {
        let (family, params) = self
            .weight
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("weight `{}` must be `family:params`", self.weight)))?;
        let numbers = |v: &str| parse_list("weight", v);
        Ok(match family {
            "classical" => WeightRecipe::Classical {
                s: parse_value("weight", params.trim())?,
            },
            "varsmooth" => match point_fn(params, self.dim)? {
                Source::Constant(s) => WeightRecipe::Classical { s },
                Source::Function(f) => WeightRecipe::VariableSmoothness(f),
            },
            "2micro" => {
                let v = numbers(params)?;
                if v.len() != 2 + self.dim {
                    return Err(CliError::Usage(format!(
                        "2micro needs s, s' and a {}D point",
                        self.dim
                    )));
                }
                WeightRecipe::TwoMicrolocal {
                    s: v[0],
                    s_prime: v[1],
                    set: vec![[v[2], v.get(3).copied().unwrap_or(0.0)]],
                }
            }
            "weighted" => {
                let parts: Vec<&str> = params.splitn(3, ',').collect();
                if parts.len() != 3 {
                    return Err(CliError::Usage("weighted needs `s,beta,rho`".into()));
                }
                let rho = match point_fn(parts[2], self.dim)? {
                    Source::Constant(c) => Arc::new(move |_: [f64; 2]| c) as PointFn,
                    Source::Function(f) => f,
                };
                WeightRecipe::Weighted {
                    rho,
                    s: parse_value("weight", parts[0].trim())?,
                    beta: parse_value("weight", parts[1].trim())?,
                    bound: None,
                }
            }
            "generalized" => WeightRecipe::Generalized(numbers(params)?),
            other => return Err(CliError::Usage(format!("unknown weight family `{other}`"))),
        })
    }

    pub fn system_recipe(text: &str) -> Result<SystemRecipe, CliError> {
        if let Some(params) = text.strip_prefix("general:") {
            let v = parse_list("system", params)?;
            if v.len() != 3 || v[2] < 0.0 || v[2].fract() != 0.0 {
                return Err(CliError::Usage("general system needs `epsilon,k,moments`".into()));
            }
            return Ok(SystemRecipe::General {
                epsilon: v[0],
                k: v[1],
                moments: v[2] as u32,
            });
        }
        Ok(SystemRecipe::Admissible(Profile::from_str(text)?))
    }

    pub fn recipe(&self) -> Result<SpaceRecipe, CliError> {
        Ok(SpaceRecipe {
            scale: self.scale,
            p: self.exponent_recipe(&self.p)?,
            q: self.exponent_recipe(&self.q)?,
            weight: self.weight_recipe()?,
            system: Self::system_recipe(&self.system)?,
            levels: self.levels,
        })
    }

    pub fn second_recipe(&self) -> Result<SpaceRecipe, CliError> {
        Ok(SpaceRecipe {
            system: Self::system_recipe(&self.system2)?,
            ..self.recipe()?
        })
    }

    pub fn symbol(&self) -> Result<ExprSymbol, CliError> {
        Ok(ExprSymbol(expression(&self.symbol)?))
    }

    /// Echo of every setting, one `key = value` per line.
    pub fn describe(&self) -> String {
        let levels = self.levels.map_or("auto".into(), |l| l.to_string());
        let n_laplace = self.n_laplace.map_or("auto".into(), |l| l.to_string());
        let sigma: Vec<String> = self.sigma.iter().map(|s| s.to_string()).collect();
        [
            format!("dim = {}", self.dim),
            format!("n = {}", self.n),
            format!("levels = {levels}"),
            format!("scale = {}", self.scale),
            format!("p = {}", self.p),
            format!("q = {}", self.q),
            format!("weight = {}", self.weight),
            format!("system = {}", self.system),
            format!("system2 = {}", self.system2),
            format!("seed = {}", self.seed),
            format!("samples = {}", self.samples),
            format!("drift_tolerance = {}", self.drift_tolerance),
            format!("a_margin = {}", self.a_margin),
            format!("sigma = {}", sigma.join(",")),
            format!("symbol = {}", self.symbol),
            format!("multiplier = {:?}", self.multiplier),
            format!("n_laplace = {n_laplace}"),
        ]
        .join("\n")
    }
}

pub fn expression(text: &str) -> Result<Expr, CliError> {
    parse_expression(text).map_err(|source| CliError::Expr {
        text: text.to_string(),
        source,
    })
}

enum Source {
    Constant(f64),
    Function(PointFn),
}

/// An expression, or `@path` to a table of values on a uniform grid of the
/// torus, read as a piecewise-constant function.
fn point_fn(text: &str, dim: usize) -> Result<Source, CliError> {
    let text = text.trim();
    if let Some(path) = text.strip_prefix('@') {
        let table = Table::load(Path::new(path), dim)?;
        return Ok(Source::Function(Arc::new(move |x| table.value(x))));
    }
    let e = expression(text)?;
    if e.is_constant() {
        let v = e.eval([0.0, 0.0]);
        if !v.is_finite() {
            return Err(CliError::Usage(format!("`{text}` does not evaluate to a finite number")));
        }
        return Ok(Source::Constant(v));
    }
    Ok(Source::Function(Arc::new(move |x| e.eval(x))))
}

/// Values `t[i]` on cells `[i/M, (i+1)/M)` (per axis in 2D).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    dim: usize,
    m: usize,
    values: Vec<f64>,
}

impl Table {
    pub fn parse(text: &str, dim: usize) -> Result<Self, CliError> {
        let mut values = Vec::new();
        let mut rows = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            rows += 1;
            for token in line.split(',') {
                let v: f64 = token
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Parse(format!("line {}: not a number: `{}`", i + 1, token.trim())))?;
                values.push(v);
            }
        }
        let m = if dim == 1 { values.len() } else { rows };
        if m == 0 || values.len() != m.pow(dim as u32) {
            return Err(CliError::Parse(format!(
                "table has {} values in {rows} rows; expected M values (1D) or M rows of M (2D)",
                values.len()
            )));
        }
        Ok(Self { dim, m, values })
    }

    pub fn load(path: &Path, dim: usize) -> Result<Self, CliError> {
        Self::parse(&fs::read_to_string(path).map_err(|e| CliError::io(path, e))?, dim)
    }

    pub fn value(&self, x: [f64; 2]) -> f64 {
        let cell = |t: f64| ((t.rem_euclid(1.0) * self.m as f64) as usize).min(self.m - 1);
        if self.dim == 1 {
            self.values[cell(x[0])]
        } else {
            self.values[cell(x[0]) * self.m + cell(x[1])]
        }
    }
}
