//! Spin-weighted Jacobi basis on the two stereographic charts.
//!
//! Component `ε` with angular index `μ` and radial index `n` is, in the `ζ` chart,
//! `ζ^μ (1+|ζ|²)^{-γ} P_n^{(α,β)}(x)` (`ζ̄^{|μ|}` for negative `μ`), with
//! `α = |μ|`, `β = |μ+ε|`, `γ = (α+β)/2` and `x = (1−|ζ|²)/(1+|ζ|²)`.
//! In the `w = 1/ζ` chart the same section reads
//! `i^ε w^{μ_w} (1+|w|²)^{-γ} P_n^{(α,β)}(x)` with `μ_w = −(μ+ε)`.

use crate::scalar::{Complex, Real};

use super::geometry::{Chart, ComponentJet};

/// Value with first and second derivative in one real variable.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet<T> {
    pub v: T,
    pub d1: T,
    pub d2: T,
}

impl<T: Real> Jet<T> {
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + T::lit(2.0) * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

/// `P_n^{(α,β)}(x)` by the three-term recurrence.
pub fn jacobi<T: Real>(n: usize, alpha: T, beta: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    if n == 0 {
        return one;
    }
    let mut p0 = one;
    let mut p1 = (alpha + one) + (alpha + beta + two) * (x - one) / two;
    for k in 2..=n {
        let k = T::of_usize(k);
        let s = two * k + alpha + beta;
        let a = two * k * (k + alpha + beta) * (s - two);
        let b = (s - one) * (s * (s - two) * x + alpha * alpha - beta * beta);
        let c = two * (k + alpha - one) * (k + beta - one) * s;
        let p2 = (b * p1 - c * p0) / a;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `P_n^{(α,β)}` with its first two derivatives at `x`.
pub(crate) fn jacobi_jet<T: Real>(n: usize, alpha: T, beta: T, x: T) -> Jet<T> {
    let two = T::lit(2.0);
    let nf = T::of_usize(n);
    let v = jacobi(n, alpha, beta, x);
    let d1 = if n >= 1 {
        (nf + alpha + beta + T::one()) / two * jacobi(n - 1, alpha + T::one(), beta + T::one(), x)
    } else {
        T::zero()
    };
    let d2 = if n >= 2 {
        (nf + alpha + beta + T::one()) * (nf + alpha + beta + two) / T::lit(4.0)
            * jacobi(n - 2, alpha + two, beta + two, x)
    } else {
        T::zero()
    };
    Jet { v, d1, d2 }
}

/// One basis section, supported in a single spinor component.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFunction<T> {
    /// `+1` (component `u₊`, in `S₀`) or `-1` (`u₋`, in `S₁`).
    pub epsilon: i8,
    pub mu: i64,
    pub n: usize,
    pub alpha: usize,
    pub beta: usize,
    /// Half the level `n + (α+β)/2`, doubled to stay integral.
    pub level2: usize,
    pub(crate) scale: T,
}

impl<T: Real> BasisFunction<T> {
    /// Spinor component index in the standard basis (`0` for `u₊`).
    pub fn component(&self) -> usize {
        if self.epsilon > 0 {
            0
        } else {
            1
        }
    }

    fn gamma(&self) -> T {
        T::of_usize(self.alpha + self.beta) / T::lit(2.0)
    }

    /// Value and complex derivatives at chart coordinate `z`.
    pub(crate) fn jet(&self, chart: Chart, z: Complex<T>) -> ComponentJet<T> {
        let (coeff, power) = match chart {
            Chart::Zeta => (Complex::new(T::one(), T::zero()), self.mu),
            Chart::W => {
                let c = if self.epsilon > 0 { Complex::new(T::zero(), T::one()) } else { Complex::new(T::zero(), -T::one()) };
                (c, -(self.mu + i64::from(self.epsilon)))
            }
        };
        let sign = match chart {
            Chart::Zeta => T::one(),
            Chart::W => -T::one(),
        };
        let t = z.norm_sqr();
        let s = T::one() + t;
        let g = self.gamma();
        let radial_power = Jet { v: s.powf(-g), d1: -g * s.powf(-g - T::one()), d2: g * (g + T::one()) * s.powf(-g - T::lit(2.0)) };
        // x = sign·(1−t)/(1+t) = sign·(2/(1+t) − 1)
        let two = T::lit(2.0);
        let x = Jet { v: sign * (two / s - T::one()), d1: -sign * two / (s * s), d2: sign * T::lit(4.0) / (s * s * s) };
        let p = jacobi_jet(self.n, T::of_usize(self.alpha), T::of_usize(self.beta), x.v);
        let pc = Jet { v: p.v, d1: p.d1 * x.d1, d2: p.d2 * x.d1 * x.d1 + p.d1 * x.d2 };
        let radial = radial_power.mul(pc);

        let k = power.unsigned_abs() as usize;
        let zero = Complex::new(T::zero(), T::zero());
        let base = if power >= 0 { z } else { z.conj() };
        let powi = |e: usize| -> Complex<T> {
            (0..e).fold(Complex::new(T::one(), T::zero()), |acc, _| acc * base)
        };
        let kf = T::of_usize(k);
        let m0 = powi(k);
        let m1 = if k >= 1 { powi(k - 1) * kf } else { zero };
        let m2 = if k >= 2 { powi(k - 2) * (kf * (kf - T::one())) } else { zero };
        // holomorphic monomial: derivatives along ∂; antiholomorphic: along ∂̄
        let (dm, dbm, ddm, dbdbm) = if power >= 0 { (m1, zero, m2, zero) } else { (zero, m1, zero, m2) };

        let gv = Complex::new(radial.v, T::zero());
        let g1 = Complex::new(radial.d1, T::zero());
        let g2 = Complex::new(radial.d2, T::zero());
        let zb = z.conj();
        let c = coeff * Complex::new(self.scale, T::zero());
        ComponentJet {
            v: c * m0 * gv,
            d: c * (dm * gv + m0 * g1 * zb),
            db: c * (dbm * gv + m0 * g1 * z),
            dd: c * (ddm * gv + dm * g1 * zb * Complex::new(two, T::zero()) + m0 * g2 * zb * zb),
            dbdb: c * (dbdbm * gv + dbm * g1 * z * Complex::new(two, T::zero()) + m0 * g2 * z * z),
            ddb: c * (dm * g1 * z + dbm * g1 * zb + m0 * (g2 * Complex::new(t, T::zero()) + g1)),
        }
    }
}

/// All basis functions with level `n + (α+β)/2 ≤ K + 1/2`.
pub(crate) fn enumerate<T: Real>(k: usize) -> Vec<BasisFunction<T>> {
    let mut out = Vec::new();
    let top = 2 * k + 1;
    for epsilon in [1i8, -1] {
        let lo = -(k as i64) - 1;
        for mu in lo..=(k as i64) + 1 {
            let alpha = mu.unsigned_abs() as usize;
            let beta = (mu + i64::from(epsilon)).unsigned_abs() as usize;
            if alpha + beta > top {
                continue;
            }
            for n in 0..=(top - alpha - beta) / 2 {
                out.push(BasisFunction { epsilon, mu, n, alpha, beta, level2: 2 * n + alpha + beta, scale: T::one() });
            }
        }
    }
    out
}
