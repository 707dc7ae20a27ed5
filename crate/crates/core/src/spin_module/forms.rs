//! Exterior forms acting on spinors by Clifford multiplication.
//!
//! Basis monomials are stored as bitmasks: bit `k` set means the `(k+1)`-th
//! one-form of the chosen family appears in the wedge product, taken in
//! ascending order.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use super::{ComplexVector, SpinModule, Spinor};
use crate::error::{Error, Result};
use crate::scalar::{real, Complex, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Forms over the real coframe `ξ^1, …, ξ^{2m}`; `ξ^k` acts as `e_k`.
    Real,
    /// Elements of `Λ^{0,r}` over the unit `(0,1)`-coframe `ξ̄^1, …, ξ̄^m`.
    ///
    /// The metric dual of `ξ̄^k` is the `(1,0)` vector `√2 p(X_{2k})`, so
    /// these forms raise the `S_r` grading.
    AntiHolomorphic,
}

/// Homogeneous form of fixed degree, stored in its antisymmetric basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FormElement<T: Real> {
    m: usize,
    kind: FormKind,
    degree: usize,
    terms: BTreeMap<u32, Complex<T>>,
}

/// Sign of the permutation sorting `indices`; `None` on repeated entries.
fn sort_sign(indices: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let inversions = (0..indices.len())
        .flat_map(|i| (i + 1..indices.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| indices[i] > indices[j])
        .count();
    Some((sorted, if inversions % 2 == 0 { 1 } else { -1 }))
}

impl<T: Real> FormElement<T> {
    fn generator_count(m: usize, kind: FormKind) -> usize {
        match kind {
            FormKind::Real => 2 * m,
            FormKind::AntiHolomorphic => m,
        }
    }

    pub fn zero(m: usize, kind: FormKind, degree: usize) -> Self {
        Self { m, kind, degree, terms: BTreeMap::new() }
    }

    pub fn scalar(m: usize, kind: FormKind, c: Complex<T>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(0, c);
        Self { m, kind, degree: 0, terms }
    }

    /// The wedge monomial of the 1-based generator `indices`, in the given order.
    pub fn monomial(m: usize, kind: FormKind, indices: &[usize]) -> Result<Self> {
        let n = Self::generator_count(m, kind);
        if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k > n) {
            return Err(Error::Index { index: bad as i64, min: 1, max: n as i64 });
        }
        let mut form = Self::zero(m, kind, indices.len());
        if let Some((sorted, sign)) = sort_sign(indices) {
            let mask = sorted.iter().fold(0u32, |acc, &k| acc | 1 << (k - 1));
            form.terms.insert(mask, real(T::lit(sign as f64)));
        }
        Ok(form)
    }

    /// Real 2-form `Σ_{k<l} a_{kl} ξ^k ∧ ξ^l` from an antisymmetric `2m × 2m` table.
    pub fn real_two_form(m: usize, table: &DMatrix<T>) -> Result<Self> {
        let n = 2 * m;
        if table.nrows() != n || table.ncols() != n {
            return Err(Error::Shape { expected: n, got: table.nrows() });
        }
        let tol = T::lit(1e-12) * (T::one() + table.amax());
        let mut form = Self::zero(m, FormKind::Real, 2);
        for k in 0..n {
            for l in k..n {
                if (table[(k, l)] + table[(l, k)]).abs() > tol {
                    return Err(Error::Input(format!("2-form table not antisymmetric at ({}, {})", k + 1, l + 1)));
                }
                if l > k && table[(k, l)] != T::zero() {
                    form.terms.insert(1 << k | 1 << l, real(table[(k, l)]));
                }
            }
        }
        Ok(form)
    }

    /// The Kähler form `Σ_k ξ^{2k-1} ∧ ξ^{2k}`.
    pub fn kahler(m: usize) -> Self {
        Self::diagonal_two_form(m, &vec![T::one(); m])
    }

    /// `Σ_k w_k ξ^{2k-1} ∧ ξ^{2k}`.
    pub fn diagonal_two_form(m: usize, weights: &[T]) -> Self {
        let mut form = Self::zero(m, FormKind::Real, 2);
        for (k, &w) in weights.iter().enumerate().take(m) {
            form.terms.insert(0b11 << (2 * k), real(w));
        }
        form
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Nonzero coefficients keyed by ascending-index bitmask.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex<T>)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    /// Antisymmetric coefficient for an arbitrary ordering of 1-based indices.
    pub fn coefficient(&self, indices: &[usize]) -> Complex<T> {
        match sort_sign(indices) {
            Some((sorted, sign)) if sorted.len() == self.degree => {
                let mask = sorted.iter().fold(0u32, |acc, &k| acc | 1 << (k - 1));
                self.terms
                    .get(&mask)
                    .map(|&c| c * real(T::lit(sign as f64)))
                    .unwrap_or_else(|| real(T::zero()))
            }
            _ => real(T::zero()),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.kind != other.kind {
            return Err(Error::Input("forms over different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Shape { expected: self.degree, got: other.degree });
        }
        let mut out = self.clone();
        for (&mask, &c) in &other.terms {
            *out.terms.entry(mask).or_insert_with(|| real(T::zero())) += c;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|v| *v *= c);
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.m, self.kind, self.degree + other.degree);
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                if a & b != 0 {
                    continue;
                }
                // sign of moving each generator of b past the higher generators of a
                let swaps: u32 = (0..32).filter(|k| b >> k & 1 == 1).map(|k| (a >> k).count_ones()).sum();
                let sign = if swaps % 2 == 0 { T::one() } else { -T::one() };
                *out.terms.entry(a | b).or_insert_with(|| real(T::zero())) += ca * cb * real(sign);
            }
        }
        Ok(out)
    }
}

impl<T: Real> SpinModule<T> {
    /// Vector acting for the `k`-th (0-based) generator of the form family.
    fn form_generator(&self, kind: FormKind, k: usize) -> ComplexVector<T> {
        let frame = |j| ComplexVector::frame(self.m, j).expect("frame index in range");
        match kind {
            FormKind::Real => frame(k + 1),
            FormKind::AntiHolomorphic => frame(2 * k + 2).p().scale(real(T::lit(2.0).sqrt())),
        }
    }

    /// Clifford action `ω · ψ`; monomials act by the ordered product of their factors.
    pub fn form_mul(&self, omega: &FormElement<T>, psi: &Spinor<T>) -> Result<Spinor<T>> {
        if omega.m != self.m {
            return Err(Error::Shape { expected: self.m, got: omega.m });
        }
        let max_degree = FormElement::<T>::generator_count(self.m, omega.kind);
        let max_degree = match omega.kind {
            FormKind::Real => max_degree,
            FormKind::AntiHolomorphic => max_degree.min(self.m),
        };
        if omega.degree > max_degree {
            return Err(Error::Shape { expected: max_degree, got: omega.degree });
        }
        self.check_spinor(psi)?;
        let mut acc = Spinor::zeros(self.dim);
        for (&mask, &c) in &omega.terms {
            let mut img = psi.clone();
            // rightmost factor acts first
            for k in (0..32usize).rev().filter(|k| mask >> k & 1 == 1) {
                img = self.clifford_mul(&self.form_generator(omega.kind, k), &img)?;
            }
            acc = &acc + &img.scale(c);
        }
        Ok(acc)
    }

    /// `α_r(ω ⊗ ψ_0) = 2^{-r/2} ω · ψ_0` for `ω ∈ Λ^{0,r}` and `ψ_0 ∈ S_0`.
    pub fn alpha(&self, omega: &FormElement<T>, psi0: &Spinor<T>) -> Result<Spinor<T>> {
        if omega.kind != FormKind::AntiHolomorphic {
            return Err(Error::Input("α_r takes a (0,r)-form".into()));
        }
        self.check_spinor(psi0)?;
        let off = psi0 - &self.project_sr(psi0, 0)?;
        if off.max_abs() > T::lit(1e-12) * (T::one() + psi0.max_abs()) {
            return Err(Error::Contract("α_r expects a spinor in S_0".into()));
        }
        let scale = T::lit(2.0).powf(-T::of_usize(omega.degree) / T::lit(2.0));
        Ok(self.form_mul(omega, psi0)?.scale(real(scale)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn kahler_form_acts_by_grading() {
        let sm = SpinModule::<f64>::new(3).unwrap();
        let omega = FormElement::kahler(3);
        for idx in 0..sm.dim() {
            let r = SpinModule::<f64>::degree_of(idx) as f64;
            let u = sm.basis_spinor(idx);
            let img = sm.form_mul(&omega, &u).unwrap();
            assert!((&img - &u.scale(cplx(0.0, 3.0 - 2.0 * r))).max_abs() < 1e-14);
        }
    }

    #[test]
    fn degree_zero_is_identity() {
        let sm = SpinModule::<f64>::new(2).unwrap();
        let one = FormElement::scalar(2, FormKind::AntiHolomorphic, cplx(1.0, 0.0));
        let psi = Spinor::from_slice(&[cplx(1.0, 2.0), cplx(0.0, -1.0), cplx(3.0, 0.0), cplx(0.5, 0.5)]);
        assert_eq!(sm.form_mul(&one, &psi).unwrap(), psi);
    }

    #[test]
    fn top_antiholomorphic_form_maps_s0_onto_sm() {
        let sm = SpinModule::<f64>::new(2).unwrap();
        let w = FormElement::monomial(2, FormKind::AntiHolomorphic, &[1, 2]).unwrap();
        let img = sm.form_mul(&w, &sm.basis_spinor(0)).unwrap();
        let in_s2 = sm.project_sr(&img, 2).unwrap();
        assert!((&img - &in_s2).max_abs() < 1e-15);
        assert!(img.norm() > 1.0);
    }

    #[test]
    fn monomial_antisymmetry() {
        let a = FormElement::<f64>::monomial(3, FormKind::Real, &[4, 1]).unwrap();
        let b = FormElement::<f64>::monomial(3, FormKind::Real, &[1, 4]).unwrap();
        assert_eq!(a.add(&b).unwrap().terms().map(|(_, c)| c.norm()).sum::<f64>(), 0.0);
        assert_eq!(a.coefficient(&[1, 4]), cplx(-1.0, 0.0));
        assert_eq!(a.coefficient(&[4, 1]), cplx(1.0, 0.0));
        let rep = FormElement::<f64>::monomial(3, FormKind::Real, &[2, 2]).unwrap();
        assert_eq!(rep.terms().count(), 0);
    }

    #[test]
    fn wedge_matches_monomial() {
        let x = FormElement::<f64>::monomial(3, FormKind::Real, &[3]).unwrap();
        let y = FormElement::<f64>::monomial(3, FormKind::Real, &[1, 5]).unwrap();
        let w = x.wedge(&y).unwrap();
        assert_eq!(w, FormElement::monomial(3, FormKind::Real, &[3, 1, 5]).unwrap());
    }

    #[test]
    fn two_form_table_requires_antisymmetry() {
        let mut t = DMatrix::<f64>::zeros(4, 4);
        t[(0, 1)] = 1.0;
        assert!(FormElement::real_two_form(2, &t).is_err());
        t[(1, 0)] = -1.0;
        let f = FormElement::real_two_form(2, &t).unwrap();
        assert_eq!(f.coefficient(&[2, 1]), cplx(-1.0, 0.0));
    }

    #[test]
    fn degree_checks() {
        let sm = SpinModule::<f64>::new(2).unwrap();
        let f = FormElement::<f64>::monomial(2, FormKind::AntiHolomorphic, &[3]);
        assert!(f.is_err());
        let big = FormElement::<f64>::zero(2, FormKind::AntiHolomorphic, 3);
        assert!(matches!(sm.form_mul(&big, &sm.basis_spinor(0)), Err(Error::Shape { .. })));
        let w = FormElement::monomial(2, FormKind::AntiHolomorphic, &[1]).unwrap();
        assert!(matches!(sm.alpha(&w, &sm.basis_spinor(1)), Err(Error::Contract(_))));
    }
}
