//! Truncated Taylor expansions in two variables.
//!
//! A [`Jet`] of order `n` at a point `ξ₀` stores the coefficients `c_{ab}` of
//! `Σ_{a+b ≤ n} c_{ab} (ξ₁ - ξ₀₁)^a (ξ₂ - ξ₀₂)^b`. Arithmetic and elementary
//! functions act on jets exactly up to the truncation order, so
//! `D^γ m(ξ₀) = γ! c_γ` for any symbol built from them.

use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: Vec<f64>,
}

fn index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

fn count(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; count(order)];
        coeffs[0] = value;
        Self { order, coeffs }
    }

    /// The coordinate function `ξ_axis` expanded at `value`.
    pub fn variable(axis: usize, value: f64, order: usize) -> Self {
        let mut j = Self::constant(value, order);
        if order >= 1 {
            let slot = if axis == 0 { index(1, 0) } else { index(0, 1) };
            j.coeffs[slot] = 1.0;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn coeff(&self, a: usize, b: usize) -> f64 {
        if a + b > self.order {
            0.0
        } else {
            self.coeffs[index(a, b)]
        }
    }

    /// `∂^a_1 ∂^b_2` at the expansion point.
    pub fn derivative(&self, a: usize, b: usize) -> f64 {
        factorial(a) * factorial(b) * self.coeff(a, b)
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let order = self.order.min(other.order);
        let coeffs = (0..count(order)).map(|i| f(self.coeffs[i], other.coeffs[i])).collect();
        Self { order, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add_scalar(&self, c: f64) -> Self {
        let mut j = self.clone();
        j.coeffs[0] += c;
        j
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut coeffs = vec![0.0; count(order)];
        for d1 in 0..=order {
            for b1 in 0..=d1 {
                let x = self.coeffs[index(d1 - b1, b1)];
                if x == 0.0 {
                    continue;
                }
                for d2 in 0..=(order - d1) {
                    for b2 in 0..=d2 {
                        coeffs[index(d1 - b1 + d2 - b2, b1 + b2)] += x * other.coeffs[index(d2 - b2, b2)];
                    }
                }
            }
        }
        Self { order, coeffs }
    }

    /// `Σ_k t_k (self - self₀)^k`, where `t_k = f^{(k)}(self₀) / k!`.
    pub fn compose(&self, taylor: &[f64]) -> Self {
        let mut h = self.clone();
        h.coeffs[0] = 0.0;
        let n = self.order.min(taylor.len().saturating_sub(1));
        let mut out = Self::constant(taylor[n], self.order);
        for k in (0..n).rev() {
            out = out.mul(&h).add_scalar(taylor[k]);
        }
        out
    }

    pub fn recip(&self) -> Self {
        let g0 = self.value();
        let taylor: Vec<f64> = (0..=self.order).map(|k| (-1f64).powi(k as i32) / g0.powi(k as i32 + 1)).collect();
        self.compose(&taylor)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    pub fn powi(&self, n: i32) -> Self {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut out = Self::constant(1.0, self.order);
        let mut base = self.clone();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// `self^α`. Integer exponents work for any base; otherwise the value
    /// must be positive.
    pub fn powf(&self, alpha: f64) -> Self {
        if alpha.fract() == 0.0 && alpha.abs() <= 64.0 {
            return self.powi(alpha as i32);
        }
        let g0 = self.value();
        let mut taylor = Vec::with_capacity(self.order + 1);
        let mut binom = 1.0;
        for k in 0..=self.order {
            taylor.push(binom * g0.powf(alpha - k as f64));
            binom *= (alpha - k as f64) / (k as f64 + 1.0);
        }
        self.compose(&taylor)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        let taylor: Vec<f64> = (0..=self.order).map(|k| e / factorial(k)).collect();
        self.compose(&taylor)
    }

    pub fn ln(&self) -> Self {
        let g0 = self.value();
        let taylor: Vec<f64> = (0..=self.order)
            .map(|k| {
                if k == 0 {
                    g0.ln()
                } else {
                    (-1f64).powi(k as i32 + 1) / (k as f64 * g0.powi(k as i32))
                }
            })
            .collect();
        self.compose(&taylor)
    }

    pub fn sin(&self) -> Self {
        let g0 = self.value();
        let taylor: Vec<f64> = (0..=self.order).map(|k| (g0 + k as f64 * PI / 2.0).sin() / factorial(k)).collect();
        self.compose(&taylor)
    }

    pub fn cos(&self) -> Self {
        let g0 = self.value();
        let taylor: Vec<f64> = (0..=self.order).map(|k| (g0 + k as f64 * PI / 2.0).cos() / factorial(k)).collect();
        self.compose(&taylor)
    }

    /// `|self|`, differentiated on the side of the current sign.
    pub fn abs(&self) -> Self {
        if self.value() < 0.0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, other: &Self) -> Self {
        if other.value() < self.value() {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if other.value() > self.value() {
            other.clone()
        } else {
            self.clone()
        }
    }
}

/// `S(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)})`: `0` for `t ≤ 0`, `1` for
/// `t ≥ 1`, `C^∞` and increasing in between.
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// [`smoothstep`] on jets. Outside `(0, 1)` every derivative vanishes.
pub fn smoothstep_jet(t: &Jet) -> Jet {
    let v = t.value();
    if v <= 0.0 {
        return Jet::constant(0.0, t.order());
    }
    if v >= 1.0 {
        return Jet::constant(1.0, t.order());
    }
    let a = t.recip().neg().exp();
    let b = t.neg().add_scalar(1.0).recip().neg().exp();
    a.div(&a.add(&b))
}
