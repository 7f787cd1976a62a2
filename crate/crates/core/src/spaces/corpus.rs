//! The seeded test corpus: smooth periodic functions defined on the continuum
//! torus, so the same function can be sampled at `N` and `2N`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grid::{Grid, GridFunction, Point};

pub const CORPUS_SEED: u64 = 20_130_917;
pub const CORPUS_SIZE: usize = 50;
/// Largest wavenumber (per axis) any corpus function carries appreciably.
pub const CORPUS_BANDWIDTH: i64 = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum CorpusKind {
    /// `Σ a_k cos(2π k·x + φ_k)`.
    RandomPhase { terms: Vec<([i64; 2], f64, f64)> },
    /// Periodized `A exp(-|x - c|² / (2 w²))`.
    Gaussian { center: Point, width: f64, amplitude: f64 },
    /// `e^{2πi k·x}`.
    Mode { k: [i64; 2] },
    /// `sin(2π (k·x) + β sin(2π m (e·x)))` with `e` the unit diagonal direction in 2D.
    Chirp { carrier: [i64; 2], depth: f64, rate: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFunction {
    pub name: String,
    pub kind: CorpusKind,
}

fn dot(k: [i64; 2], x: Point) -> f64 {
    k[0] as f64 * x[0] + k[1] as f64 * x[1]
}

impl CorpusFunction {
    pub fn value(&self, dim: usize, x: Point) -> Complex64 {
        match &self.kind {
            CorpusKind::RandomPhase { terms } => {
                let v: f64 = terms.iter().map(|(k, a, phi)| a * (2.0 * PI * dot(*k, x) + phi).cos()).sum();
                Complex64::new(v, 0.0)
            }
            CorpusKind::Gaussian { center, width, amplitude } => {
                let images = -2..=2i32;
                let mut v = 0.0;
                for a in images.clone() {
                    let axis1 = if dim == 1 { 0..=0 } else { -2..=2i32 };
                    for b in axis1 {
                        let d0 = x[0] - center[0] + a as f64;
                        let d1 = if dim == 1 { 0.0 } else { x[1] - center[1] + b as f64 };
                        v += (-(d0 * d0 + d1 * d1) / (2.0 * width * width)).exp();
                    }
                }
                Complex64::new(amplitude * v, 0.0)
            }
            CorpusKind::Mode { k } => Complex64::from_polar(1.0, 2.0 * PI * dot(*k, x)),
            CorpusKind::Chirp { carrier, depth, rate } => {
                let along = if dim == 1 { x[0] } else { x[0] + x[1] };
                let phase = 2.0 * PI * dot(*carrier, x) + depth * (2.0 * PI * *rate as f64 * along).sin();
                Complex64::new(phase.sin(), 0.0)
            }
        }
    }

    pub fn sample(&self, grid: Grid) -> GridFunction {
        let dim = grid.dim();
        GridFunction::from_fn(grid, |x| self.value(dim, x))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    dim: usize,
    functions: Vec<CorpusFunction>,
}

fn wavevector(rng: &mut ChaCha8Rng, dim: usize, max: i64) -> [i64; 2] {
    loop {
        let k = [rng.gen_range(-max..=max), if dim == 1 { 0 } else { rng.gen_range(-max..=max) }];
        if k != [0, 0] {
            return if dim == 1 { [k[0].abs(), 0] } else { k };
        }
    }
}

impl Corpus {
    /// 15 random-phase sums, 15 Gaussian bumps, 10 single modes and 10 chirps,
    /// all with spectra essentially inside `|k| ≤ 32`.
    pub fn standard(dim: usize) -> Self {
        Self::seeded(dim, CORPUS_SEED)
    }

    pub fn seeded(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut functions = Vec::with_capacity(CORPUS_SIZE);
        for i in 0..15 {
            let count = rng.gen_range(3..=8);
            let terms = (0..count)
                .map(|_| {
                    let k = wavevector(&mut rng, dim, CORPUS_BANDWIDTH);
                    (k, rng.gen_range(0.1..1.0), rng.gen_range(0.0..2.0 * PI))
                })
                .collect();
            functions.push(CorpusFunction {
                name: format!("phase-{i:02}"),
                kind: CorpusKind::RandomPhase { terms },
            });
        }
        for i in 0..15 {
            let center = [rng.gen_range(0.0..1.0), if dim == 1 { 0.0 } else { rng.gen_range(0.0..1.0) }];
            functions.push(CorpusFunction {
                name: format!("gauss-{i:02}"),
                kind: CorpusKind::Gaussian {
                    center,
                    width: rng.gen_range(0.03..0.12),
                    amplitude: rng.gen_range(0.5..2.0),
                },
            });
        }
        for i in 0..10 {
            functions.push(CorpusFunction {
                name: format!("mode-{i:02}"),
                kind: CorpusKind::Mode {
                    k: wavevector(&mut rng, dim, CORPUS_BANDWIDTH - 4),
                },
            });
        }
        for i in 0..10 {
            let carrier = wavevector(&mut rng, dim, 16);
            functions.push(CorpusFunction {
                name: format!("chirp-{i:02}"),
                kind: CorpusKind::Chirp {
                    carrier,
                    depth: rng.gen_range(0.5..2.0),
                    rate: rng.gen_range(1..=3),
                },
            });
        }
        Self { dim, functions }
    }

    /// Gaussian bumps only, for the Schwartz-embedding checks.
    pub fn gaussian_bumps(dim: usize, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let functions = (0..count)
            .map(|i| CorpusFunction {
                name: format!("bump-{i:02}"),
                kind: CorpusKind::Gaussian {
                    center: [rng.gen_range(0.3..0.7), if dim == 1 { 0.0 } else { rng.gen_range(0.3..0.7) }],
                    width: rng.gen_range(0.04..0.1),
                    amplitude: rng.gen_range(0.5..2.0),
                },
            })
            .collect();
        Self { dim, functions }
    }

    pub fn from_functions(dim: usize, functions: Vec<CorpusFunction>) -> Self {
        Self { dim, functions }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn functions(&self) -> &[CorpusFunction] {
        &self.functions
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn sample(&self, grid: Grid) -> Vec<GridFunction> {
        self.functions.iter().map(|f| f.sample(grid)).collect()
    }
}
