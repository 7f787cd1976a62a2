//! Infimum of a monotone predicate on `(0, ∞)` by geometric bisection.

/// Bisection controls shared by every norm computed as an infimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectionOptions {
    /// Stop once `hi / lo - 1` falls below this.
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for BisectionOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-13,
            max_iter: 200,
        }
    }
}

const TINY: f64 = 1e-300;
const HUGE: f64 = 1e300;

/// `inf{λ > 0 : accept(λ)}` for a predicate that is monotone (false below the
/// infimum, true above). `lo` and `hi` are guesses; they are widened until
/// they bracket. Returns `0` if `accept` holds down to `1e-300` and `∞` if it
/// fails up to `1e300`. The returned value always satisfies `accept` when finite
/// and positive.
pub fn monotone_infimum(accept: impl Fn(f64) -> bool, lo: f64, hi: f64, opts: BisectionOptions) -> f64 {
    let mut lo = if lo > 0.0 && lo.is_finite() { lo } else { 1.0 };
    let mut hi = if hi > 0.0 && hi.is_finite() { hi.max(lo) } else { lo.max(1.0) };

    let mut factor = 2.0f64;
    while !accept(hi) {
        lo = hi;
        if hi >= HUGE {
            return f64::INFINITY;
        }
        hi = (hi * factor).min(HUGE);
        factor = (factor * factor).min(1e16);
    }
    let mut factor = 2.0f64;
    while accept(lo) {
        hi = lo;
        if lo <= TINY {
            return 0.0;
        }
        lo = (lo / factor).max(TINY);
        factor = (factor * factor).min(1e16);
    }

    for _ in 0..opts.max_iter {
        if hi / lo - 1.0 <= opts.rel_tol {
            break;
        }
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if accept(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
