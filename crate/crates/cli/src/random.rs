//! Seeded random inputs for the randomized checks.

use std::f64::consts::PI;

use microlocal_core::{FunctionSequence, Grid, GridFunction, VariableExponent};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A smooth exponent `c + a·sin(2π m x₁ + φ)·cos(2π m' x₂)` inside `[lo, hi]`.
pub fn exponent(rng: &mut ChaCha8Rng, grid: Grid, lo: f64, hi: f64) -> VariableExponent {
    let c = rng.gen_range(lo..=hi);
    let amp = rng.gen_range(0.0..=1.0) * (c - lo).min(hi - c);
    let m = rng.gen_range(1..=3) as f64;
    let m2 = rng.gen_range(0..=2) as f64;
    let phi = rng.gen_range(0.0..2.0 * PI);
    VariableExponent::from_fn(grid, |x| {
        (c + amp * (2.0 * PI * m * x[0] + phi).sin() * (2.0 * PI * m2 * x[1]).cos()).clamp(lo, hi)
    })
    .expect("exponent within bounds")
}

/// Complex samples, about a quarter of them zero, magnitudes spread over
/// several orders.
pub fn function(rng: &mut ChaCha8Rng, grid: Grid) -> GridFunction {
    let scale = 10f64.powf(rng.gen_range(-2.0..2.0));
    let samples = (0..grid.len())
        .map(|_| {
            if rng.gen_bool(0.25) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::from_polar(scale * rng.gen_range(0.0..3.0f64), rng.gen_range(0.0..2.0 * PI))
            }
        })
        .collect();
    let f = GridFunction::new(grid, samples).expect("sample count matches");
    if f.is_zero() {
        GridFunction::constant(grid, Complex64::new(scale, 0.0))
    } else {
        f
    }
}

pub fn nonnegative(rng: &mut ChaCha8Rng, grid: Grid) -> GridFunction {
    function(rng, grid).abs()
}

/// `levels + 1` random entries; some whole levels vanish.
pub fn sequence(rng: &mut ChaCha8Rng, grid: Grid, levels: usize) -> FunctionSequence {
    let entries = (0..=levels)
        .map(|_| {
            if rng.gen_bool(0.15) {
                GridFunction::zeros(grid)
            } else {
                function(rng, grid)
            }
        })
        .collect();
    FunctionSequence::new(entries).expect("entries share a grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_in_range() {
        let g = Grid::one_d(64).unwrap();
        let (mut a, mut b) = (rng(3), rng(3));
        for _ in 0..20 {
            let p = exponent(&mut a, g, 0.5, 8.0);
            assert!(p.p_minus() >= 0.5 && p.p_plus() <= 8.0);
            assert_eq!(p, exponent(&mut b, g, 0.5, 8.0));
            assert_eq!(function(&mut a, g), function(&mut b, g));
        }
        let s = sequence(&mut a, g, 4);
        assert_eq!(s.levels(), 4);
    }
}
