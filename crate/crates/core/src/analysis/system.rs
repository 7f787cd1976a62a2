//! Fourier-side resolution systems. Every mask is a radial profile evaluated
//! on the grid's frequency set; the spatial kernels are never formed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::jet::smoothstep;
use crate::error::{Error, Result};
use crate::grid::{FrequencyMask, Grid};

/// Shape of `Φ̂`: `1` on `|ξ| ≤ a`, decaying smoothly to `0` at `|ξ| = b`.
/// The level masks are `φ̂(ξ) = Φ̂(ξ) - Φ̂(2ξ)` dilated by `2^j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    /// `(a, b) = (1, 2)`.
    Classic,
    /// `(a, b) = (1.1, 1.8)`.
    Narrow,
    /// Any `(a, b)` with `1 ≤ a < 6/5`, `5/3 < b ≤ 2`.
    Custom { a: f64, b: f64 },
}

impl Profile {
    pub fn plateau(&self) -> (f64, f64) {
        match *self {
            Profile::Classic => (1.0, 2.0),
            Profile::Narrow => (1.1, 1.8),
            Profile::Custom { a, b } => (a, b),
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = self.plateau();
        // supp φ̂ ⊂ [a/2, b] ⊂ [1/2, 2]; positivity on [3/5, 5/3] needs 2·(3/5) > a and 5/3 < b
        if !(a >= 1.0 && a < 1.2 && b > 5.0 / 3.0 && b <= 2.0) {
            return Err(Error::Precondition(format!(
                "profile plateau ({a}, {b}) does not give an admissible pair"
            )));
        }
        Ok(())
    }

    /// `Φ̂(r)`.
    pub fn outer(&self, r: f64) -> f64 {
        let (a, b) = self.plateau();
        1.0 - smoothstep((r - a) / (b - a))
    }

    /// `φ̂(r) = Φ̂(r) - Φ̂(2r)`.
    pub fn annulus(&self, r: f64) -> f64 {
        self.outer(r) - self.outer(2.0 * r)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Classic => write!(f, "classic"),
            Profile::Narrow => write!(f, "narrow"),
            Profile::Custom { a, b } => write!(f, "custom:{a},{b}"),
        }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classic" => Ok(Profile::Classic),
            "narrow" => Ok(Profile::Narrow),
            other => {
                let params = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::Spec(format!("unknown profile `{other}`")))?;
                let (a, b) = params
                    .split_once(',')
                    .ok_or_else(|| Error::Spec(format!("custom profile needs `a,b`, got `{params}`")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Spec(format!("bad profile parameter `{v}`")))
                };
                let p = Profile::Custom { a: parse(a)?, b: parse(b)? };
                p.validate()?;
                Ok(p)
            }
        }
    }
}

/// `B(t) = exp(4 - 1/(t(1-t)))` on `(0, 1)`, zero outside, peak value one.
fn bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (4.0 - 1.0 / (t * (1.0 - t))).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemKind {
    AdmissiblePair(Profile),
    /// `Ψ̂ > 0` on `|ξ| ≤ kε`; `ψ̂ > 0` on `(ε/4, 2kε)` and `≡ 0` on `|ξ| ≤ ε/4`.
    GeneralPair { epsilon: f64, k: f64, moments: u32 },
    /// `Θ_0` is the classic `Φ̂`; masks telescope to one on the whole frequency set.
    ThetaPartition,
    /// `λ_0 = 1` on `|ξ| ≤ 2`, `0` on `|ξ| ≥ 4`; `λ_j = λ(2^{-j}·)`, `λ = λ_0 - λ_0(8·)`.
    LambdaCover,
}

/// A family of real radial masks `mask_j(ξ) = g_j(|ξ|)`, `j = 0..=J`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisSystem {
    kind: SystemKind,
    grid: Grid,
    masks: Vec<FrequencyMask>,
}

/// Largest `J` for which the top annulus `|ξ| ≤ 2^{J+1}` still sits inside
/// the frequency ball of radius `πN`.
pub fn max_levels(grid: &Grid) -> usize {
    (grid.nyquist_radius().log2().floor() as usize).saturating_sub(1)
}

/// Default truncation, `floor(log₂(πN)) - 1`.
pub fn default_levels(grid: &Grid) -> usize {
    max_levels(grid)
}

/// Levels needed for `2^J ≥ max |ξ|` so a telescoping system sums to one.
pub fn covering_levels(grid: &Grid) -> usize {
    grid.max_frequency_norm().log2().ceil() as usize
}

impl SystemKind {
    /// `mask_j` as a function of `r = |ξ|`.
    pub fn radial(&self, j: usize, r: f64) -> f64 {
        let scale = 2f64.powi(-(j as i32));
        match *self {
            SystemKind::AdmissiblePair(p) => {
                if j == 0 {
                    p.outer(r)
                } else {
                    p.annulus(scale * r)
                }
            }
            SystemKind::ThetaPartition => {
                let p = Profile::Classic;
                if j == 0 {
                    p.outer(r)
                } else {
                    p.annulus(scale * r)
                }
            }
            SystemKind::GeneralPair { epsilon, k, .. } => {
                if j == 0 {
                    1.0 - smoothstep((r - k * epsilon) / (k * epsilon))
                } else {
                    let lo = epsilon / 4.0;
                    bump((scale * r - lo) / (2.0 * k * epsilon - lo))
                }
            }
            SystemKind::LambdaCover => {
                let lambda0 = |r: f64| 1.0 - smoothstep((r - 2.0) / 2.0);
                if j == 0 {
                    lambda0(r)
                } else {
                    let t = scale * r;
                    lambda0(t) - lambda0(8.0 * t)
                }
            }
        }
    }
}

impl AnalysisSystem {
    fn build(kind: SystemKind, grid: Grid, levels: usize) -> Self {
        let masks = (0..=levels)
            .map(|j| {
                let values = (0..grid.len())
                    .map(|idx| Complex64::new(kind.radial(j, grid.frequency_norm(idx)), 0.0))
                    .collect();
                FrequencyMask::new(grid, values).expect("mask length matches grid")
            })
            .collect();
        Self { kind, grid, masks }
    }

    pub fn admissible(profile: Profile, grid: Grid, levels: usize) -> Result<Self> {
        profile.validate()?;
        let maximum = max_levels(&grid);
        if levels > maximum {
            return Err(Error::LevelsTooLarge {
                requested: levels,
                maximum,
            });
        }
        Ok(Self::build(SystemKind::AdmissiblePair(profile), grid, levels))
    }

    /// A general `(Ψ, ψ)` pair with parameters `ε > 0`, `k ∈ (1, 2]`. `moments`
    /// is only a label: `ψ̂` vanishes identically near the origin.
    pub fn general(epsilon: f64, k: f64, moments: u32, grid: Grid, levels: usize) -> Result<Self> {
        if !(epsilon > 0.0 && k > 1.0 && k <= 2.0) {
            return Err(Error::Precondition(format!("need ε > 0 and k ∈ (1, 2], got ε = {epsilon}, k = {k}")));
        }
        let maximum = max_levels(&grid);
        if levels > maximum {
            return Err(Error::LevelsTooLarge {
                requested: levels,
                maximum,
            });
        }
        Ok(Self::build(SystemKind::GeneralPair { epsilon, k, moments }, grid, levels))
    }

    /// `Θ_0, …, Θ_J` with `J` from [`covering_levels`].
    pub fn theta_partition(grid: Grid) -> Self {
        Self::build(SystemKind::ThetaPartition, grid, covering_levels(&grid))
    }

    pub fn lambda_cover(grid: Grid, levels: usize) -> Self {
        Self::build(SystemKind::LambdaCover, grid, levels)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn levels(&self) -> usize {
        self.masks.len() - 1
    }

    pub fn mask(&self, j: usize) -> &FrequencyMask {
        &self.masks[j]
    }

    pub fn masks(&self) -> &[FrequencyMask] {
        &self.masks
    }

    pub fn radial(&self, j: usize, r: f64) -> f64 {
        self.kind.radial(j, r)
    }

    /// Same kind on another grid, with the same number of levels.
    pub fn on_grid(&self, grid: Grid) -> Result<Self> {
        self.on_grid_with_levels(grid, self.levels())
    }

    pub fn on_grid_with_levels(&self, grid: Grid, levels: usize) -> Result<Self> {
        match self.kind {
            SystemKind::AdmissiblePair(p) => Self::admissible(p, grid, levels),
            SystemKind::GeneralPair { epsilon, k, moments } => Self::general(epsilon, k, moments, grid, levels),
            SystemKind::ThetaPartition => Ok(Self::theta_partition(grid)),
            SystemKind::LambdaCover => Ok(Self::lambda_cover(grid, levels)),
        }
    }
}

/// Result of scanning the admissible-pair support and lower-bound conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmissibilityAudit {
    pub passes: bool,
    /// Smallest `|mask_j|` on the required region over all levels.
    pub lower_bound: f64,
    /// Largest `|mask_j|` outside the allowed support.
    pub support_leak: f64,
}

/// Exhaustive scan of the grid's frequency set for an admissible system.
pub fn audit_admissible(sys: &AnalysisSystem) -> AdmissibilityAudit {
    let grid = sys.grid();
    let mut lower = f64::INFINITY;
    let mut leak: f64 = 0.0;
    for j in 0..=sys.levels() {
        let s = 2f64.powi(j as i32);
        let mask = sys.mask(j).values();
        for (idx, m) in mask.iter().enumerate() {
            let r = grid.frequency_norm(idx);
            let v = m.norm();
            let (inside, required) = if j == 0 {
                (r <= 2.0, r <= 5.0 / 3.0)
            } else {
                (r >= s / 2.0 && r <= 2.0 * s, r >= 0.6 * s && r <= s * 5.0 / 3.0)
            };
            if !inside {
                leak = leak.max(v);
            }
            if required {
                lower = lower.min(v);
            }
        }
    }
    AdmissibilityAudit {
        passes: leak == 0.0 && lower > 0.0,
        lower_bound: lower,
        support_leak: leak,
    }
}

/// Checks the general-pair conditions for `(ε, k)` on the continuous radial
/// profiles: `mask_0 > 0` on `[0, kε]`, `mask_1(2·) > 0` on `[ε/2, kε]` and
/// `mask_j ≡ 0` on `|ξ| < 2^j ε/4` for `j ≥ 1`.
pub fn satisfies_general_conditions(kind: &SystemKind, epsilon: f64, k: f64) -> bool {
    const SAMPLES: usize = 20_000;
    let top = k * epsilon;
    let at = |i: usize, lo: f64, hi: f64| lo + (hi - lo) * i as f64 / SAMPLES as f64;
    let outer = (0..=SAMPLES).all(|i| kind.radial(0, at(i, 0.0, top)) > 0.0);
    // ψ̂(ξ) = mask_1(2ξ)
    let inner = (0..=SAMPLES).all(|i| kind.radial(1, 2.0 * at(i, epsilon / 2.0, top)) > 0.0);
    let moments = (0..SAMPLES).all(|i| kind.radial(1, 2.0 * at(i, 0.0, epsilon / 4.0)) == 0.0);
    outer && inner && moments
}
