//! Admissible weight sequences `w = (w_j)_{j ≤ J}` of class `W^α_{α₁,α₂}`:
//!
//! * `w_j(x) ≤ c · w_j(y) (1 + 2^j d(x, y))^α`,
//! * `2^{α₁} w_j(x) ≤ w_{j+1}(x) ≤ 2^{α₂} w_j(x)`,
//!
//! with `d` the torus distance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exponents::log_holder_estimate;
use crate::grid::{Grid, Point};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    grid: Grid,
    entries: Vec<Vec<f64>>,
    alpha: f64,
    alpha1: f64,
    alpha2: f64,
    c: f64,
}

impl WeightSequence {
    /// Wraps raw weights with a declared class. Only positivity and the shape
    /// of the class parameters are checked here; see [`verify_admissible`].
    pub fn new(grid: Grid, entries: Vec<Vec<f64>>, alpha: f64, alpha1: f64, alpha2: f64, c: f64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidWeight("at least one level is required".into()));
        }
        for (j, level) in entries.iter().enumerate() {
            if level.len() != grid.len() {
                return Err(Error::SampleCount {
                    expected: grid.len(),
                    found: level.len(),
                });
            }
            if let Some(i) = level.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
                return Err(Error::InvalidWeight(format!(
                    "w_{j} is not positive and finite at index {i}: {}",
                    level[i]
                )));
            }
        }
        if !(alpha >= 0.0) || !(alpha1 <= alpha2) || !(c >= 1.0) {
            return Err(Error::InvalidWeight(format!(
                "class parameters need α >= 0, α1 <= α2, c >= 1; got ({alpha}, {alpha1}, {alpha2}), c = {c}"
            )));
        }
        Ok(Self {
            grid,
            entries,
            alpha,
            alpha1,
            alpha2,
            c,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn levels(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, j: usize) -> &[f64] {
        &self.entries[j]
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn declared_c(&self) -> f64 {
        self.c
    }

    /// `(2^{-jσ} w_j)_j`, of class `W^α_{α₁-σ, α₂-σ}` with the same `c`.
    pub fn shifted(&self, sigma: f64) -> Self {
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(j, level)| {
                let f = 2f64.powf(-(j as f64) * sigma);
                level.iter().map(|v| v * f).collect()
            })
            .collect();
        Self {
            grid: self.grid,
            entries,
            alpha: self.alpha,
            alpha1: self.alpha1 - sigma,
            alpha2: self.alpha2 - sigma,
            c: self.c,
        }
    }

    /// The first `levels + 1` entries.
    pub fn truncated(&self, levels: usize) -> Result<Self> {
        if levels > self.levels() {
            return Err(Error::Precondition(format!(
                "weight sequence has {} levels, {levels} requested",
                self.levels()
            )));
        }
        let mut w = self.clone();
        w.entries.truncate(levels + 1);
        Ok(w)
    }
}

fn distance_to_set(grid: &Grid, x: Point, set: &[Point]) -> f64 {
    set.iter().map(|&u| grid.torus_distance(x, u)).fold(f64::INFINITY, f64::min)
}

/// `w_j(x) = 2^{js} (1 + 2^j d(x, U))^{s'}`, class `(|s'|, s + min(0, s'), s + max(0, s'))`.
pub fn make_2microlocal(grid: Grid, s: f64, s_prime: f64, set: &[Point], levels: usize) -> Result<WeightSequence> {
    if set.is_empty() {
        return Err(Error::InvalidWeight("the set U must be nonempty".into()));
    }
    let dist: Vec<f64> = grid.points().map(|x| distance_to_set(&grid, x, set)).collect();
    let entries = (0..=levels)
        .map(|j| {
            let scale = 2f64.powi(j as i32);
            dist.iter()
                .map(|d| scale.powf(s) * (1.0 + scale * d).powf(s_prime))
                .collect()
        })
        .collect();
    WeightSequence::new(
        grid,
        entries,
        s_prime.abs(),
        s + s_prime.min(0.0),
        s + s_prime.max(0.0),
        1.0,
    )
}

/// `w_j(x) = 2^{j s(x)}`, class `(c_log(s), s⁻, s⁺)` with `c = e^{c_log(s)}`.
pub fn make_variable_smoothness(grid: Grid, s: &[f64], levels: usize) -> Result<WeightSequence> {
    if s.len() != grid.len() {
        return Err(Error::SampleCount {
            expected: grid.len(),
            found: s.len(),
        });
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidWeight("smoothness must be finite".into()));
    }
    let c_log = log_holder_estimate(&grid, s).c_log_local;
    let s_minus = s.iter().copied().fold(f64::INFINITY, f64::min);
    let s_plus = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let entries = (0..=levels)
        .map(|j| s.iter().map(|v| 2f64.powf(j as f64 * v)).collect())
        .collect();
    WeightSequence::new(grid, entries, c_log, s_minus, s_plus, c_log.exp())
}

/// `w_j ≡ σ_j`, class `(0, log₂ d₁, log₂ d₂)` with `d₁, d₂` the extreme ratios `σ_{j+1}/σ_j`.
pub fn make_generalized(grid: Grid, sigma: &[f64]) -> Result<WeightSequence> {
    if sigma.is_empty() {
        return Err(Error::InvalidWeight("σ needs at least one level".into()));
    }
    if let Some(j) = sigma.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidWeight(format!("σ_{j} = {} is not positive", sigma[j])));
    }
    let (d1, d2) = sigma
        .windows(2)
        .map(|w| w[1] / w[0])
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    let (a1, a2) = if sigma.len() == 1 { (0.0, 0.0) } else { (d1.log2(), d2.log2()) };
    let entries = sigma.iter().map(|&v| vec![v; grid.len()]).collect();
    WeightSequence::new(grid, entries, 0.0, a1, a2, 1.0)
}

/// A witnessing pair for a failed admissibility or weight-function check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub level: usize,
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

/// `max_{x,y} ρ(x) / (ρ(y) (1 + d(x,y)²)^{β/2})`, with the maximizing pair.
pub fn weight_function_constant(grid: &Grid, rho: &[f64], beta: f64) -> Witness {
    let points: Vec<Point> = grid.points().collect();
    (0..rho.len())
        .into_par_iter()
        .map(|x| {
            let mut best = Witness { level: 0, x, y: x, value: 1.0 };
            for y in 0..rho.len() {
                let d = grid.torus_distance(points[x], points[y]);
                let v = rho[x] / (rho[y] * (1.0 + d * d).powf(beta / 2.0));
                if v > best.value {
                    best = Witness { level: 0, x, y, value: v };
                }
            }
            best
        })
        .reduce(
            || Witness { level: 0, x: 0, y: 0, value: 0.0 },
            |a, b| if b.value > a.value || (b.value == a.value && (b.x, b.y) < (a.x, a.y)) { b } else { a },
        )
}

/// `w_j(x) = 2^{js} ρ(x)`, class `(β, s, s)`.
///
/// With `bound = Some(C)` the weight-function condition
/// `ρ(x) ≤ C ρ(y) (1 + d(x,y)²)^{β/2}` is enforced and a violation is reported
/// with its witnessing pair. Without a bound the smallest valid `C` is
/// measured and used as the declared constant.
pub fn make_weighted(
    grid: Grid,
    rho: &[f64],
    s: f64,
    beta: f64,
    levels: usize,
    bound: Option<f64>,
) -> Result<WeightSequence> {
    if rho.len() != grid.len() {
        return Err(Error::SampleCount {
            expected: grid.len(),
            found: rho.len(),
        });
    }
    if let Some(i) = rho.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidWeight(format!("ρ is not positive at index {i}: {}", rho[i])));
    }
    if !(beta >= 0.0) {
        return Err(Error::InvalidWeight(format!("β must be nonnegative, got {beta}")));
    }
    let worst = weight_function_constant(&grid, rho, beta);
    let c = match bound {
        Some(c) if worst.value > c * (1.0 + 1e-12) => {
            return Err(Error::InvalidWeight(format!(
                "ρ({}) > {c} ρ({}) (1 + d²)^(β/2): ratio {}",
                worst.x, worst.y, worst.value
            )))
        }
        Some(c) => c,
        None => worst.value,
    };
    let entries = (0..=levels)
        .map(|j| {
            let f = 2f64.powf(j as f64 * s);
            rho.iter().map(|r| f * r).collect()
        })
        .collect();
    WeightSequence::new(grid, entries, beta, s, s, c.max(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `w_j(x) > c w_j(y) (1 + 2^j d)^α` at the witness.
    Localization(Witness),
    /// `w_{j+1}(x) < 2^{α₁} w_j(x)` at the witness (`y = x`).
    GrowthBelow(Witness),
    /// `w_{j+1}(x) > 2^{α₂} w_j(x)` at the witness (`y = x`).
    GrowthAbove(Witness),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub passes: bool,
    /// Smallest `α` for which the declared `c` works on the scanned pairs.
    pub measured_alpha: f64,
    pub measured_alpha1: f64,
    pub measured_alpha2: f64,
    /// Smallest `c` that works with the declared `α`.
    pub measured_c: f64,
    /// Whether every pair was scanned (otherwise a seeded sample).
    pub exhaustive: bool,
    pub violations: Vec<Violation>,
}

const EXHAUSTIVE_LIMIT: usize = 128;
const SAMPLED_PAIRS: usize = 1_000_000;
const SAMPLE_SEED: u64 = 0x5eed_2003;
const SLACK: f64 = 1e-9;

#[derive(Clone, Copy)]
struct PairScan {
    c: Witness,
    alpha: f64,
}

fn scan_pairs(w: &WeightSequence, j: usize, ys_for: impl Fn(usize) -> Vec<usize> + Sync) -> PairScan {
    let grid = w.grid;
    let level = &w.entries[j];
    let scale = 2f64.powi(j as i32);
    let points: Vec<Point> = grid.points().collect();
    let empty = PairScan {
        c: Witness { level: j, x: 0, y: 0, value: 0.0 },
        alpha: 0.0,
    };
    (0..level.len())
        .into_par_iter()
        .map(|x| {
            let mut best = empty;
            for y in ys_for(x) {
                let r = level[x] / level[y];
                let stretch = 1.0 + scale * grid.torus_distance(points[x], points[y]);
                let v = r / stretch.powf(w.alpha);
                if v > best.c.value || best.c.value == 0.0 {
                    best.c = Witness { level: j, x, y, value: v };
                }
                if stretch > 1.0 {
                    best.alpha = best.alpha.max((r / w.c).ln() / stretch.ln());
                }
            }
            best
        })
        .reduce(
            || empty,
            |a, b| PairScan {
                c: if b.c.value > a.c.value || (b.c.value == a.c.value && (b.c.x, b.c.y) < (a.c.x, a.c.y)) {
                    b.c
                } else {
                    a.c
                },
                alpha: a.alpha.max(b.alpha),
            },
        )
}

/// Scans Def. 2.3 (i) over pairs and (ii) over every point and level.
pub fn verify_admissible(w: &WeightSequence) -> AdmissibilityReport {
    let grid = w.grid;
    let len = grid.len();
    let exhaustive = grid.points_per_axis() <= EXHAUSTIVE_LIMIT;
    let per_point = SAMPLED_PAIRS.div_ceil(len).max(1);
    let mut violations = Vec::new();

    let mut measured_c: f64 = 0.0;
    let mut measured_alpha: f64 = 0.0;
    for j in 0..=w.levels() {
        let scan = if exhaustive {
            scan_pairs(w, j, |_| (0..len).collect())
        } else {
            scan_pairs(w, j, |x| {
                let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ ((j as u64) << 40) ^ x as u64);
                // stratified: one draw from each of `per_point` equal slices of the lattice
                let mut ys: Vec<usize> = (0..per_point)
                    .map(|k| {
                        let lo = k * len / per_point;
                        let hi = ((k + 1) * len / per_point).max(lo + 1);
                        rng.gen_range(lo..hi)
                    })
                    .collect();
                ys.push(x);
                ys
            })
        };
        measured_c = measured_c.max(scan.c.value);
        measured_alpha = measured_alpha.max(scan.alpha);
        if scan.c.value > w.c * (1.0 + SLACK) {
            violations.push(Violation::Localization(scan.c));
        }
    }

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut lo_w, mut hi_w) = (None, None);
    for j in 0..w.levels() {
        for x in 0..len {
            let r = (w.entries[j + 1][x] / w.entries[j][x]).log2();
            let wit = Witness { level: j, x, y: x, value: r };
            if r < lo {
                lo = r;
                lo_w = Some(wit);
            }
            if r > hi {
                hi = r;
                hi_w = Some(wit);
            }
        }
    }
    if w.levels() == 0 {
        lo = w.alpha1;
        hi = w.alpha2;
    }
    if lo < w.alpha1 - SLACK {
        violations.push(Violation::GrowthBelow(lo_w.expect("levels > 0")));
    }
    if hi > w.alpha2 + SLACK {
        violations.push(Violation::GrowthAbove(hi_w.expect("levels > 0")));
    }

    AdmissibilityReport {
        passes: violations.is_empty(),
        measured_alpha,
        measured_alpha1: lo,
        measured_alpha2: hi,
        measured_c,
        exhaustive,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid {
        Grid::one_d(64).unwrap()
    }

    #[test]
    fn two_microlocal_class_and_values() {
        let w = make_2microlocal(grid(), 0.0, -1.5, &[[0.25, 0.0]], 5).unwrap();
        assert_eq!((w.alpha(), w.alpha1(), w.alpha2()), (1.5, -1.5, 0.0));
        let w = make_2microlocal(grid(), 1.0, 2.0, &[[0.25, 0.0]], 5).unwrap();
        assert_eq!((w.alpha(), w.alpha1(), w.alpha2()), (2.0, 1.0, 3.0));
        // x = x0 is lattice point 16
        for j in 0..=5 {
            assert_eq!(w.entry(j)[16], 2f64.powi(j as i32));
        }
        let flat = make_2microlocal(grid(), 0.5, 0.0, &[[0.0, 0.0]], 4).unwrap();
        for j in 0..=4 {
            assert!(flat.entry(j).iter().all(|&v| v == 2f64.powf(0.5 * j as f64)));
        }
        assert!(make_2microlocal(grid(), 0.0, 1.0, &[], 3).is_err());
    }

    #[test]
    fn constructors_pass_verification() {
        let g = grid();
        let s: Vec<f64> = g.points().map(|x| 1.0 + 0.5 * (2.0 * PI * x[0]).sin()).collect();
        let rho: Vec<f64> = g.points().map(|x| (1.0 + g.norm_from_origin(x).powi(2)).powf(0.75)).collect();
        let sigma: Vec<f64> = (0..6).map(|j| 2f64.powf(0.7 * j as f64) * (1.0 + j as f64).powf(-2.0)).collect();
        let all = [
            make_2microlocal(g, 0.5, -1.0, &[[0.3, 0.0]], 5).unwrap(),
            make_2microlocal(g, -0.5, 2.0, &[[0.3, 0.0], [0.8, 0.0]], 5).unwrap(),
            make_variable_smoothness(g, &s, 5).unwrap(),
            make_generalized(g, &sigma).unwrap(),
            make_weighted(g, &rho, 0.5, 1.5, 5, None).unwrap(),
            make_weighted(g, &vec![1.0; 64], 1.0, 0.0, 5, None).unwrap(),
        ];
        for w in &all {
            let r = verify_admissible(w);
            assert!(r.passes, "{r:?}");
            assert!(r.exhaustive);
        }
    }

    #[test]
    fn variable_smoothness_reductions() {
        let g = grid();
        let constant = make_variable_smoothness(g, &vec![0.75; 64], 4).unwrap();
        let reference = make_2microlocal(g, 0.75, 0.0, &[[0.0, 0.0]], 4).unwrap();
        assert_eq!(constant.entries(), reference.entries());
        assert_eq!((constant.alpha(), constant.alpha1(), constant.alpha2()), (0.0, 0.75, 0.75));
        let step: Vec<f64> = g.points().map(|x| if x[0] < 0.5 { 0.0 } else { 1.0 }).collect();
        let w = make_variable_smoothness(g, &step, 5).unwrap();
        assert!(w.entry(0).iter().all(|&v| v == 1.0));
        let r = verify_admissible(&w);
        assert!(r.passes);
        // step of height one: c_log is the jump times log(e + N), the largest log factor on the grid
        let expected = (std::f64::consts::E + 64.0).ln();
        assert!((w.alpha() - expected).abs() < 1e-12);
        assert!(r.measured_alpha.is_finite() && r.measured_alpha <= w.alpha() + 1e-9);
    }

    #[test]
    fn generalized_class() {
        let g = grid();
        let w = make_generalized(g, &(0..5).map(|j| 2f64.powf(1.25 * j as f64)).collect::<Vec<_>>()).unwrap();
        assert!((w.alpha1() - 1.25).abs() < 1e-12 && (w.alpha2() - 1.25).abs() < 1e-12);
        let sigma: Vec<f64> = (0..6).map(|j| 2f64.powf(0.5 * j as f64) * (1.0 + j as f64).powi(2)).collect();
        let w = make_generalized(g, &sigma).unwrap();
        let ratios: Vec<f64> = (0..5).map(|j| sigma[j + 1] / sigma[j]).collect();
        let d1 = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let d2 = ratios.iter().copied().fold(0.0, f64::max);
        assert!((w.alpha1() - d1.log2()).abs() < 1e-12 && (w.alpha2() - d2.log2()).abs() < 1e-12);
        let w = make_generalized(g, &[1.0; 4]).unwrap();
        assert_eq!((w.alpha(), w.alpha1(), w.alpha2()), (0.0, 0.0, 0.0));
        assert!(make_generalized(g, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn weighted_examples() {
        let g = grid();
        let rho: Vec<f64> = g.points().map(|x| (1.0 + g.norm_from_origin(x).powi(2)).powf(0.5)).collect();
        // Peetre's inequality gives the bound with constant 2^{β/2}
        let w = make_weighted(g, &rho, 0.3, 1.0, 4, Some(2f64.sqrt())).unwrap();
        assert_eq!((w.alpha(), w.alpha1(), w.alpha2()), (1.0, 0.3, 0.3));
        let bumpy: Vec<f64> = g.points().map(|x| if x[0] < 0.5 { 1.0 } else { 50.0 }).collect();
        let err = make_weighted(g, &bumpy, 0.0, 1.0, 3, Some(2.0)).unwrap_err();
        assert!(matches!(err, Error::InvalidWeight(ref m) if m.contains("ratio")));
        assert!(make_weighted(g, &vec![0.0; 64], 0.0, 1.0, 3, None).is_err());
    }

    #[test]
    fn flipped_entry_fails_with_witness() {
        let g = grid();
        let w = make_2microlocal(g, 1.0, 0.0, &[[0.0, 0.0]], 4).unwrap();
        let mut entries = w.entries().to_vec();
        entries[1] = entries[1].iter().map(|v| 1.0 / v).collect();
        let bad = WeightSequence::new(g, entries, 0.0, 1.0, 1.0, 1.0).unwrap();
        let r = verify_admissible(&bad);
        assert!(!r.passes);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::GrowthBelow(w) if w.level == 0)));
        assert!(r.violations.iter().any(|v| matches!(v, Violation::GrowthAbove(w) if w.level == 1)));
    }

    #[test]
    fn pure_power_growth() {
        let w = make_2microlocal(grid(), 0.8, 0.0, &[[0.0, 0.0]], 6).unwrap();
        let r = verify_admissible(&w);
        assert!((r.measured_alpha1 - 0.8).abs() < 1e-12 && (r.measured_alpha2 - 0.8).abs() < 1e-12);
        assert_eq!(r.measured_c, 1.0);
    }

    #[test]
    fn shift_moves_growth_exactly() {
        let w = make_2microlocal(grid(), 0.5, -1.0, &[[0.5, 0.0]], 5).unwrap();
        for sigma in [-2.0, 1.0] {
            let r0 = verify_admissible(&w);
            let shifted = w.shifted(sigma);
            let r = verify_admissible(&shifted);
            assert!(r.passes);
            assert_eq!((shifted.alpha1(), shifted.alpha2()), (w.alpha1() - sigma, w.alpha2() - sigma));
            assert!((r.measured_alpha1 - (r0.measured_alpha1 - sigma)).abs() < 1e-12);
            assert!((r.measured_alpha2 - (r0.measured_alpha2 - sigma)).abs() < 1e-12);
            assert_eq!(r.measured_c, r0.measured_c);
        }
    }

    #[test]
    fn sampled_scan_above_exhaustive_limit() {
        let g = Grid::one_d(256).unwrap();
        let w = make_2microlocal(g, 0.0, 1.0, &[[0.5, 0.0]], 3).unwrap();
        let r = verify_admissible(&w);
        assert!(!r.exhaustive && r.passes);
        assert_eq!(verify_admissible(&w), r);
    }
}
