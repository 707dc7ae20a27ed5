//! Pointwise spin geometry of the round unit sphere in a stereographic chart.
//!
//! Both charts carry the metric `λ²|dz|²`, `λ = 2/(1+|z|²)`, `u = ln λ`, and the
//! frame `X₂ = λ⁻¹∂_a`, `X₁ = λ⁻¹∂_b` (`z = a + ib`), so `J X₂ = X₁`. On spinor
//! components `ψ_ε` the connection is
//! `∇_∂ ψ_ε = ∂ψ_ε − (ε/2) ∂u ψ_ε`, `∇_∂̄ ψ_ε = ∂̄ψ_ε + (ε/2) ∂̄u ψ_ε`.

use crate::scalar::{Complex, Real};
use crate::spin_module::{ComplexVector, SpinModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `ζ = tan(θ/2) e^{iφ}`, regular away from `θ = π`.
    Zeta,
    /// `w = 1/ζ`, regular away from `θ = 0`.
    W,
}

/// Value and complex derivatives of one scalar component.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentJet<T> {
    pub v: Complex<T>,
    pub d: Complex<T>,
    pub db: Complex<T>,
    pub dd: Complex<T>,
    pub ddb: Complex<T>,
    pub dbdb: Complex<T>,
}

impl<T: Real> ComponentJet<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { v: z, d: z, db: z, dd: z, ddb: z, dbdb: z }
    }
}

/// Two-component spinor jet; index 0 is `ε = +1`.
pub type SpinorJet<T> = [ComponentJet<T>; 2];

/// Two-component spinor value.
pub type SpinorValue<T> = [Complex<T>; 2];

/// Metric data at a chart point.
#[derive(Clone, Copy, Debug)]
pub struct NodeGeom<T> {
    pub chart: Chart,
    pub z: Complex<T>,
    pub lambda: T,
    pub du: Complex<T>,
    pub dbu: Complex<T>,
    pub ddu: Complex<T>,
    pub dbdbu: Complex<T>,
    pub ddbu: Complex<T>,
}

/// Vector in coordinate form `a ∂ + b ∂̄`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Coord<T> {
    pub a: Complex<T>,
    pub b: Complex<T>,
}

fn eps<T: Real>(i: usize) -> T {
    if i == 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> NodeGeom<T> {
    pub fn new(chart: Chart, z: Complex<T>) -> Self {
        let t = z.norm_sqr();
        let s = T::one() + t;
        let zb = z.conj();
        Self {
            chart,
            z,
            lambda: T::lit(2.0) / s,
            du: -zb / s,
            dbu: -z / s,
            ddu: zb * zb / (s * s),
            dbdbu: z * z / (s * s),
            ddbu: re(-T::one() / (s * s)),
        }
    }

    /// Frame coefficients `(v₁, v₂)` of `v₁X₁ + v₂X₂` in coordinate form.
    pub(crate) fn coord(&self, v: &ComplexVector<T>) -> Coord<T> {
        let i = Complex::new(T::zero(), T::one());
        let inv = re(T::one() / self.lambda);
        let (v1, v2) = (v.coeff(0), v.coeff(1));
        Coord { a: inv * (v2 + i * v1), b: inv * (v2 - i * v1) }
    }

    /// Derivative of `λ⁻¹` along `c`.
    fn d_inv_lambda(&self, c: Coord<T>) -> Complex<T> {
        -re(T::one() / self.lambda) * (c.a * self.du + c.b * self.dbu)
    }

    pub fn nabla_d(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| j[i].d - re(eps::<T>(i) / T::lit(2.0)) * self.du * j[i].v)
    }

    pub fn nabla_db(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| j[i].db + re(eps::<T>(i) / T::lit(2.0)) * self.dbu * j[i].v)
    }

    /// `∇_∂∇_∂ψ`.
    fn nabla_dd(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| {
            let h = re(eps::<T>(i) / T::lit(2.0));
            let phi = j[i].d - h * self.du * j[i].v;
            let dphi = j[i].dd - h * (self.ddu * j[i].v + self.du * j[i].d);
            dphi - h * self.du * phi
        })
    }

    /// `∇_∂̄∇_∂ψ`.
    fn nabla_db_d(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| {
            let h = re(eps::<T>(i) / T::lit(2.0));
            let phi = j[i].d - h * self.du * j[i].v;
            let dbphi = j[i].ddb - h * (self.ddbu * j[i].v + self.du * j[i].db);
            dbphi + h * self.dbu * phi
        })
    }

    /// `∇_∂∇_∂̄ψ`.
    fn nabla_d_db(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| {
            let h = re(eps::<T>(i) / T::lit(2.0));
            let phi = j[i].db + h * self.dbu * j[i].v;
            let dphi = j[i].ddb + h * (self.ddbu * j[i].v + self.dbu * j[i].d);
            dphi - h * self.du * phi
        })
    }

    /// `∇_∂̄∇_∂̄ψ`.
    fn nabla_dbdb(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        std::array::from_fn(|i| {
            let h = re(eps::<T>(i) / T::lit(2.0));
            let phi = j[i].db + h * self.dbu * j[i].v;
            let dbphi = j[i].dbdb + h * (self.dbdbu * j[i].v + self.dbu * j[i].db);
            dbphi + h * self.dbu * phi
        })
    }

    pub(crate) fn nabla_coord(&self, c: Coord<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        let (a, b) = (self.nabla_d(j), self.nabla_db(j));
        std::array::from_fn(|i| c.a * a[i] + c.b * b[i])
    }

    /// `∇_V ψ` for `V` given by constant frame coefficients.
    pub fn nabla(&self, v: &ComplexVector<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        self.nabla_coord(self.coord(v), j)
    }

    /// `∇_V ∇_W ψ` for constant frame coefficients, including the derivative
    /// of the frame coefficients `λ⁻¹`.
    pub fn nabla_nabla(&self, v: &ComplexVector<T>, w: &ComplexVector<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        let cv = self.coord(v);
        let cw = self.coord(w);
        let lam = re(self.lambda);
        // coordinate coefficients of W are λ⁻¹ times constants
        let (alpha, beta) = (cw.a * lam, cw.b * lam);
        let dl = self.d_inv_lambda(cv);
        let (nd, ndb) = (self.nabla_d(j), self.nabla_db(j));
        let (dd, dbd, ddb, dbdb) = (self.nabla_dd(j), self.nabla_db_d(j), self.nabla_d_db(j), self.nabla_dbdb(j));
        std::array::from_fn(|i| {
            let v_nd = cv.a * dd[i] + cv.b * dbd[i];
            let v_ndb = cv.a * ddb[i] + cv.b * dbdb[i];
            dl * (alpha * nd[i] + beta * ndb[i]) + cw.a * v_nd + cw.b * v_ndb
        })
    }

    /// Lie bracket `[V, W]` of constant-frame-coefficient fields.
    pub(crate) fn bracket(&self, v: &ComplexVector<T>, w: &ComplexVector<T>) -> Coord<T> {
        let cv = self.coord(v);
        let cw = self.coord(w);
        let lam = re(self.lambda);
        let dv = self.d_inv_lambda(cv);
        let dw = self.d_inv_lambda(cw);
        Coord {
            a: dv * cw.a * lam - dw * cv.a * lam,
            b: dv * cw.b * lam - dw * cv.b * lam,
        }
    }

    /// Levi-Civita derivative `∇_V W` of constant-frame-coefficient fields.
    pub(crate) fn nabla_vector(&self, v: &ComplexVector<T>, w: &ComplexVector<T>) -> Coord<T> {
        let cv = self.coord(v);
        let cw = self.coord(w);
        let lam = re(self.lambda);
        let dv = self.d_inv_lambda(cv);
        let two = re(T::lit(2.0));
        // ∇_∂∂ = 2∂u ∂, ∇_∂̄∂̄ = 2∂̄u ∂̄, mixed terms vanish
        Coord {
            a: dv * cw.a * lam + cw.a * cv.a * two * self.du,
            b: dv * cw.b * lam + cw.b * cv.b * two * self.dbu,
        }
    }

    /// Spin curvature `C(V, W)ψ = ∇_V∇_Wψ − ∇_W∇_Vψ − ∇_{[V,W]}ψ`.
    pub fn curvature(&self, v: &ComplexVector<T>, w: &ComplexVector<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        let a = self.nabla_nabla(v, w, j);
        let b = self.nabla_nabla(w, v, j);
        let c = self.nabla_coord(self.bracket(v, w), j);
        std::array::from_fn(|i| a[i] - b[i] - c[i])
    }

    /// `∇*∇ψ = −Σ_k (∇_{X_k}∇_{X_k} − ∇_{∇_{X_k}X_k})ψ`.
    pub fn bochner_frame(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        let mut out = [Complex::new(T::zero(), T::zero()); 2];
        for k in 1..=2 {
            let x = ComplexVector::frame(1, k).expect("frame index");
            let a = self.nabla_nabla(&x, &x, j);
            let b = self.nabla_coord(self.nabla_vector(&x, &x), j);
            for i in 0..2 {
                out[i] -= a[i] - b[i];
            }
        }
        out
    }

    /// `∇^{1,0*}∇^{1,0}ψ = −2λ⁻² ∇²_{∂̄,∂}ψ`.
    pub fn nabla10_laplacian(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        let f = re(-T::lit(2.0) / (self.lambda * self.lambda));
        let x = self.nabla_db_d(j);
        [f * x[0], f * x[1]]
    }

    /// `∇^{0,1*}∇^{0,1}ψ = −2λ⁻² ∇²_{∂,∂̄}ψ`.
    pub fn nabla01_laplacian(&self, j: &SpinorJet<T>) -> SpinorValue<T> {
        let f = re(-T::lit(2.0) / (self.lambda * self.lambda));
        let x = self.nabla_d_db(j);
        [f * x[0], f * x[1]]
    }
}

/// Clifford multiplication on two-component values through the `m = 1` module.
#[derive(Clone, Debug)]
pub struct Clifford2<T: Real> {
    sm: SpinModule<T>,
}

impl<T: Real> Clifford2<T> {
    pub fn new() -> Self {
        Self { sm: SpinModule::new(1).expect("m = 1") }
    }

    pub fn module(&self) -> &SpinModule<T> {
        &self.sm
    }

    pub fn mul(&self, v: &ComplexVector<T>, s: &SpinorValue<T>) -> SpinorValue<T> {
        let mut out = [Complex::new(T::zero(), T::zero()); 2];
        for (k, e) in self.sm.generators().iter().enumerate() {
            for (i, c) in s.iter().enumerate() {
                let (t, p) = e.image(i);
                out[t] += v.coeff(k) * p * c;
            }
        }
        out
    }

    /// `Σ_k V(X_k) · ∇_{W(X_k)} ψ` for frame maps `V`, `W`.
    pub fn contract(
        &self,
        geom: &NodeGeom<T>,
        j: &SpinorJet<T>,
        left: impl Fn(&ComplexVector<T>) -> ComplexVector<T>,
        right: impl Fn(&ComplexVector<T>) -> ComplexVector<T>,
    ) -> SpinorValue<T> {
        let mut out = [Complex::new(T::zero(), T::zero()); 2];
        for k in 1..=2 {
            let x = ComplexVector::frame(1, k).expect("frame index");
            let d = geom.nabla(&right(&x), j);
            let c = self.mul(&left(&x), &d);
            out[0] += c[0];
            out[1] += c[1];
        }
        out
    }

    /// `D = X_k · ∇_{X_k}`.
    pub fn dirac(&self, geom: &NodeGeom<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        self.contract(geom, j, |x| x.clone(), |x| x.clone())
    }

    /// `D̃ = J(X_k) · ∇_{X_k}`.
    pub fn dirac_tilde(&self, geom: &NodeGeom<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        self.contract(geom, j, |x| x.j(), |x| x.clone())
    }

    /// `D₊ = X_k · ∇_{p̄(X_k)}`.
    pub fn d_plus_frame(&self, geom: &NodeGeom<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        self.contract(geom, j, |x| x.clone(), |x| x.p_bar())
    }

    /// `D₋ = X_k · ∇_{p(X_k)}`.
    pub fn d_minus_frame(&self, geom: &NodeGeom<T>, j: &SpinorJet<T>) -> SpinorValue<T> {
        self.contract(geom, j, |x| x.clone(), |x| x.p())
    }
}

impl<T: Real> Default for Clifford2<T> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_metric_curvature() {
        // ∂∂̄u = −λ²/4 gives Gauss curvature 1
        let g = NodeGeom::<f64>::new(Chart::Zeta, Complex::new(0.3, 0.7));
        assert!((g.ddbu.re + g.lambda * g.lambda / 4.0).abs() < 1e-15);
    }

    #[test]
    fn frame_is_orthonormal_in_coordinates() {
        // |a ∂ + b ∂̄|² = λ²|a|²/2 + λ²|b|²/2 for real vectors (b = ā)
        let g = NodeGeom::<f64>::new(Chart::W, Complex::new(-0.2, 0.5));
        for k in 1..=2 {
            let c = g.coord(&ComplexVector::frame(1, k).unwrap());
            assert!((c.b - c.a.conj()).norm() < 1e-15);
            assert!((g.lambda * g.lambda * c.a.norm_sqr() * 2.0 / 2.0 - 1.0).abs() < 1e-14);
        }
    }
}
