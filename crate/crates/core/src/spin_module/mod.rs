//! The complex spin module of `Cl(2m)` in the Kähler-adapted standard basis.
//!
//! Basis spinors `u_ε` are indexed by sign vectors `ε ∈ {±1}^m`. Coordinate
//! index `i` encodes `ε` bitwise: bit `k-1` of `i` is set iff `ε_k = -1`, so
//! the number of set bits is the grading degree `r` of the `S_r` component.
//!
//! Clifford convention: `e_k e_l + e_l e_k = -2 δ_kl`, with generators chosen
//! so that `e_{2k-1} e_{2k} u_ε = i ε_k u_ε`.

mod forms;
mod j_structure;

use nalgebra::{ComplexField, DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{check_index, Error, Result};
use crate::scalar::{imag_unit, real, Complex, Real};

pub use forms::{FormElement, FormKind};

/// Largest supported complex dimension.
pub const MAX_COMPLEX_DIM: usize = 12;

/// A spinor: coefficient vector over the standard basis `u_ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spinor<T: Real> {
    coeffs: DVector<Complex<T>>,
}

impl<T: Real> Spinor<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { coeffs: DVector::zeros(dim) }
    }

    pub fn from_vector(coeffs: DVector<Complex<T>>) -> Self {
        Self { coeffs }
    }

    pub fn from_slice(coeffs: &[Complex<T>]) -> Self {
        Self { coeffs: DVector::from_column_slice(coeffs) }
    }

    /// The basis spinor with a one in coordinate `index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut s = Self::zeros(dim);
        s.coeffs[index] = Complex::new(T::one(), T::zero());
        s
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn as_vector(&self) -> &DVector<Complex<T>> {
        &self.coeffs
    }

    pub fn into_vector(self) -> DVector<Complex<T>> {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> Complex<T> {
        self.coeffs[index]
    }

    /// Hermitian inner product, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.coeffs.dotc(&other.coeffs)
    }

    pub fn norm(&self) -> T {
        self.coeffs.norm()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc.max(c.modulus()))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { coeffs: self.coeffs.map(|x| x * c) }
    }

    pub fn conjugate(&self) -> Self {
        Self { coeffs: self.coeffs.map(|x| x.conj()) }
    }

    /// Random spinor with independent standard normal-ish real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        let coeffs = DVector::from_fn(dim, |_, _| {
            Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
        });
        Self { coeffs }
    }
}

impl<T: Real> Add for &Spinor<T> {
    type Output = Spinor<T>;
    fn add(self, rhs: Self) -> Spinor<T> {
        Spinor { coeffs: &self.coeffs + &rhs.coeffs }
    }
}

impl<T: Real> Sub for &Spinor<T> {
    type Output = Spinor<T>;
    fn sub(self, rhs: Self) -> Spinor<T> {
        Spinor { coeffs: &self.coeffs - &rhs.coeffs }
    }
}

impl<T: Real> Neg for &Spinor<T> {
    type Output = Spinor<T>;
    fn neg(self) -> Spinor<T> {
        Spinor { coeffs: -&self.coeffs }
    }
}

/// Dense complex square matrix acting on a spin module.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism<T: Real> {
    matrix: DMatrix<Complex<T>>,
}

/// JSON layout of an [`Endomorphism`]: row-major real and imaginary parts.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl<T: Real> Endomorphism<T> {
    pub fn from_matrix(matrix: DMatrix<Complex<T>>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Shape { expected: matrix.nrows(), got: matrix.ncols() });
        }
        Ok(Self { matrix })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    pub fn diagonal(diag: &[Complex<T>]) -> Self {
        Self { matrix: DMatrix::from_diagonal(&DVector::from_column_slice(diag)) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex<T>> {
        self.matrix
    }

    pub fn apply(&self, psi: &Spinor<T>) -> Result<Spinor<T>> {
        if psi.dim() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), got: psi.dim() });
        }
        Ok(Spinor::from_vector(&self.matrix * psi.as_vector()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    pub fn adjoint(&self) -> Self {
        Self { matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { matrix: self.matrix.map(|x| x * c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix - &other.matrix }
    }

    /// Largest entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (&self.matrix - &other.matrix)
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.modulus()))
    }

    pub fn to_json(&self) -> MatrixJson {
        let (rows, cols) = self.matrix.shape();
        let mut re = Vec::with_capacity(rows * cols);
        let mut im = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let c = self.matrix[(i, j)];
                re.push(c.re.to_f64_lossy());
                im.push(c.im.to_f64_lossy());
            }
        }
        MatrixJson { rows, cols, re, im }
    }

    pub fn from_json(json: &MatrixJson) -> Result<Self> {
        let n = json.rows * json.cols;
        if json.re.len() != n || json.im.len() != n {
            return Err(Error::Input(format!(
                "matrix json expects {n} entries, got re={} im={}",
                json.re.len(),
                json.im.len()
            )));
        }
        let matrix = DMatrix::from_fn(json.rows, json.cols, |i, j| {
            let k = i * json.cols + j;
            Complex::new(T::lit(json.re[k]), T::lit(json.im[k]))
        });
        Self::from_matrix(matrix)
    }
}

/// Operator with exactly one nonzero entry per column: `u_i ↦ phase[i] u_{target[i]}`.
///
/// Products of Clifford generators stay in this class, which keeps the
/// generators usable up to `m = 12` without dense `4096 × 4096` storage.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialOp<T: Real> {
    target: Vec<usize>,
    phase: Vec<Complex<T>>,
}

impl<T: Real> MonomialOp<T> {
    pub fn identity(dim: usize) -> Self {
        Self {
            target: (0..dim).collect(),
            phase: vec![Complex::new(T::one(), T::zero()); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Image of basis vector `i` as `(target index, phase)`.
    pub fn image(&self, i: usize) -> (usize, Complex<T>) {
        (self.target[i], self.phase[i])
    }

    pub fn apply(&self, psi: &Spinor<T>) -> Spinor<T> {
        let mut out = DVector::zeros(self.dim());
        for (i, c) in psi.as_vector().iter().enumerate() {
            out[self.target[i]] += self.phase[i] * c;
        }
        Spinor::from_vector(out)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let (target, phase) = (0..other.dim())
            .map(|i| {
                let mid = other.target[i];
                (self.target[mid], other.phase[i] * self.phase[mid])
            })
            .unzip();
        Self { target, phase }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self {
            target: self.target.clone(),
            phase: self.phase.iter().map(|p| p * c).collect(),
        }
    }

    /// Entry-wise complex conjugate in the standard basis.
    pub fn conjugate(&self) -> Self {
        Self {
            target: self.target.clone(),
            phase: self.phase.iter().map(|p| p.conj()).collect(),
        }
    }

    pub fn to_dense(&self) -> Endomorphism<T> {
        let n = self.dim();
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            matrix[(self.target[i], i)] = self.phase[i];
        }
        Endomorphism { matrix }
    }
}

/// Complexified tangent vector in the fixed orthonormal frame `X_1, …, X_2m`.
///
/// The complex structure is fixed by `J X_{2k} = X_{2k-1}`, `J X_{2k-1} = -X_{2k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector<T: Real> {
    coeffs: DVector<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    pub fn from_slice(coeffs: &[Complex<T>]) -> Result<Self> {
        if coeffs.len() % 2 != 0 || coeffs.is_empty() {
            return Err(Error::Shape { expected: coeffs.len() + coeffs.len() % 2, got: coeffs.len() });
        }
        Ok(Self { coeffs: DVector::from_column_slice(coeffs) })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        let c: Vec<_> = coeffs.iter().map(|&x| real(x)).collect();
        Self::from_slice(&c)
    }

    pub fn zeros(m: usize) -> Self {
        Self { coeffs: DVector::zeros(2 * m) }
    }

    /// Frame vector `X_k`, `k` in `1..=2m`.
    pub fn frame(m: usize, k: usize) -> Result<Self> {
        check_index(k, 1, 2 * m)?;
        let mut v = Self::zeros(m);
        v.coeffs[k - 1] = Complex::new(T::one(), T::zero());
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Complex dimension `m` of the underlying Kähler space.
    pub fn complex_dim(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeff(&self, k: usize) -> Complex<T> {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &DVector<Complex<T>> {
        &self.coeffs
    }

    pub fn j(&self) -> Self {
        let mut out = DVector::zeros(self.len());
        for k in 0..self.complex_dim() {
            // J(a X_{2k-1} + b X_{2k}) = b X_{2k-1} - a X_{2k}
            out[2 * k] = self.coeffs[2 * k + 1];
            out[2 * k + 1] = -self.coeffs[2 * k];
        }
        Self { coeffs: out }
    }

    /// `p(X) = (X - iJX) / 2`, the `(1,0)` part.
    pub fn p(&self) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        let jx = self.j();
        Self { coeffs: (&self.coeffs - jx.coeffs * imag_unit::<T>()) * half }
    }

    /// `p̄(X) = (X + iJX) / 2`, the `(0,1)` part.
    pub fn p_bar(&self) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        let jx = self.j();
        Self { coeffs: (&self.coeffs + jx.coeffs * imag_unit::<T>()) * half }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { coeffs: &self.coeffs * c }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coeffs: &self.coeffs + &other.coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { coeffs: &self.coeffs - &other.coeffs }
    }

    /// Complex-bilinear pairing `Σ a_k b_k`.
    pub fn bilinear(&self, other: &Self) -> Complex<T> {
        self.coeffs.dot(&other.coeffs)
    }
}

impl<T: Real> Mul<Complex<T>> for &ComplexVector<T> {
    type Output = ComplexVector<T>;
    fn mul(self, c: Complex<T>) -> ComplexVector<T> {
        self.scale(c)
    }
}

/// The `2^m`-dimensional spin module with its Clifford generators.
#[derive(Clone, Debug)]
pub struct SpinModule<T: Real> {
    m: usize,
    dim: usize,
    generators: Vec<MonomialOp<T>>,
}

impl<T: Real> SpinModule<T> {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_COMPLEX_DIM {
            return Err(Error::Size(format!(
                "complex dimension m = {m} outside 1..={MAX_COMPLEX_DIM}"
            )));
        }
        let dim = 1usize << m;
        let one = Complex::new(T::one(), T::zero());
        let i = imag_unit::<T>();
        let mut generators = Vec::with_capacity(2 * m);
        for k in 0..m {
            let bit = 1usize << k;
            let lower = bit - 1;
            let string_sign = |idx: usize| {
                if (idx & lower).count_ones() % 2 == 0 {
                    one
                } else {
                    -one
                }
            };
            // e_{2k-1} = Z ⊗ … ⊗ Z ⊗ iσ_y ⊗ 1 ⊗ …: u_+ ↦ -u_-, u_- ↦ u_+
            let (t_odd, p_odd): (Vec<_>, Vec<_>) = (0..dim)
                .map(|idx| {
                    let s = string_sign(idx);
                    let p = if idx & bit == 0 { -s } else { s };
                    (idx ^ bit, p)
                })
                .unzip();
            // e_{2k} = Z ⊗ … ⊗ Z ⊗ iσ_x ⊗ 1 ⊗ …: u_± ↦ i u_∓
            let (t_even, p_even): (Vec<_>, Vec<_>) =
                (0..dim).map(|idx| (idx ^ bit, string_sign(idx) * i)).unzip();
            generators.push(MonomialOp { target: t_odd, phase: p_odd });
            generators.push(MonomialOp { target: t_even, phase: p_even });
        }
        Ok(Self { m, dim, generators })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generator `e_k`, `k` in `1..=2m`.
    pub fn generator(&self, k: usize) -> Result<&MonomialOp<T>> {
        check_index(k, 1, 2 * self.m)?;
        Ok(&self.generators[k - 1])
    }

    pub fn generators(&self) -> &[MonomialOp<T>] {
        &self.generators
    }

    /// Ordered Clifford product `e_{k_1} ⋯ e_{k_r}` (1-based indices).
    pub fn clifford_product(&self, indices: &[usize]) -> Result<MonomialOp<T>> {
        let mut acc = MonomialOp::identity(self.dim);
        for &k in indices {
            acc = acc.compose(self.generator(k)?);
        }
        Ok(acc)
    }

    /// Sign vector `ε` of basis index `index`.
    pub fn sign_vector(&self, index: usize) -> Result<Vec<i8>> {
        check_index(index, 0, self.dim - 1)?;
        Ok((0..self.m)
            .map(|k| if index >> k & 1 == 0 { 1 } else { -1 })
            .collect())
    }

    /// Basis index of the sign vector `ε`.
    pub fn index_of(&self, signs: &[i8]) -> Result<usize> {
        if signs.len() != self.m {
            return Err(Error::Shape { expected: self.m, got: signs.len() });
        }
        signs.iter().enumerate().try_fold(0usize, |acc, (k, &s)| match s {
            1 => Ok(acc),
            -1 => Ok(acc | 1 << k),
            other => Err(Error::Input(format!("sign entry {other} is not ±1"))),
        })
    }

    /// Grading degree `r` (number of `-1` entries) of basis index `index`.
    pub fn degree_of(index: usize) -> usize {
        index.count_ones() as usize
    }

    /// Basis indices spanning `S_r`.
    pub fn sr_indices(&self, r: usize) -> Result<Vec<usize>> {
        check_index(r, 0, self.m)?;
        Ok((0..self.dim).filter(|&i| Self::degree_of(i) == r).collect())
    }

    pub fn basis_spinor(&self, index: usize) -> Spinor<T> {
        Spinor::basis(self.dim, index)
    }

    pub fn random_spinor<R: Rng + ?Sized>(&self, rng: &mut R) -> Spinor<T> {
        Spinor::random(self.dim, rng)
    }

    fn check_spinor(&self, psi: &Spinor<T>) -> Result<()> {
        if psi.dim() != self.dim {
            return Err(Error::Shape { expected: self.dim, got: psi.dim() });
        }
        Ok(())
    }

    /// Clifford multiplication `v · ψ = Σ v_k e_k ψ`.
    pub fn clifford_mul(&self, v: &ComplexVector<T>, psi: &Spinor<T>) -> Result<Spinor<T>> {
        if v.len() != 2 * self.m {
            return Err(Error::Shape { expected: 2 * self.m, got: v.len() });
        }
        self.check_spinor(psi)?;
        let mut out = DVector::zeros(self.dim);
        for (k, e) in self.generators.iter().enumerate() {
            let vk = v.coeff(k);
            if vk == Complex::new(T::zero(), T::zero()) {
                continue;
            }
            for (i, c) in psi.as_vector().iter().enumerate() {
                let (t, p) = e.image(i);
                out[t] += vk * p * c;
            }
        }
        Ok(Spinor::from_vector(out))
    }

    /// Clifford multiplication by `v` as a dense endomorphism.
    pub fn clifford_matrix(&self, v: &ComplexVector<T>) -> Result<Endomorphism<T>> {
        if v.len() != 2 * self.m {
            return Err(Error::Shape { expected: 2 * self.m, got: v.len() });
        }
        let mut acc = Endomorphism::zeros(self.dim);
        for (k, e) in self.generators.iter().enumerate() {
            acc = acc.add(&e.to_dense().scale(v.coeff(k)));
        }
        Ok(acc)
    }

    /// Kähler form `Ω = Σ_k e_{2k-1} e_{2k}` as an endomorphism.
    pub fn kahler_form(&self) -> Endomorphism<T> {
        let mut acc = Endomorphism::zeros(self.dim);
        for k in 0..self.m {
            let pair = self.generators[2 * k].compose(&self.generators[2 * k + 1]);
            acc = acc.add(&pair.to_dense());
        }
        acc
    }

    /// `Σ_k c_k e_{2k-1} e_{2k}` evaluated through its diagonal action
    /// `u_ε ↦ i (Σ ε_k c_k) u_ε`.
    pub fn diagonal_bivector(&self, weights: &[T]) -> Result<Endomorphism<T>> {
        if weights.len() != self.m {
            return Err(Error::Shape { expected: self.m, got: weights.len() });
        }
        let diag: Vec<_> = (0..self.dim)
            .map(|idx| {
                let s = (0..self.m).fold(T::zero(), |acc, k| {
                    if idx >> k & 1 == 0 {
                        acc + weights[k]
                    } else {
                        acc - weights[k]
                    }
                });
                Complex::new(T::zero(), s)
            })
            .collect();
        Ok(Endomorphism::diagonal(&diag))
    }

    /// Component of `ψ` in `S_r`, the `i(m-2r)`-eigenspace of `Ω`.
    pub fn project_sr(&self, psi: &Spinor<T>, r: usize) -> Result<Spinor<T>> {
        check_index(r, 0, self.m)?;
        self.check_spinor(psi)?;
        let mut out = psi.as_vector().clone();
        for (idx, c) in out.iter_mut().enumerate() {
            if Self::degree_of(idx) != r {
                *c = Complex::new(T::zero(), T::zero());
            }
        }
        Ok(Spinor::from_vector(out))
    }

    /// Orthogonal projector onto `S_r`.
    pub fn sr_projector(&self, r: usize) -> Result<Endomorphism<T>> {
        check_index(r, 0, self.m)?;
        let diag: Vec<_> = (0..self.dim)
            .map(|idx| {
                if Self::degree_of(idx) == r {
                    Complex::new(T::one(), T::zero())
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            })
            .collect();
        Ok(Endomorphism::diagonal(&diag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn anticommutator_residual(sm: &SpinModule<f64>) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let psi = sm.random_spinor(&mut rng);
        let mut worst = 0.0f64;
        for k in 0..2 * sm.m() {
            for l in 0..2 * sm.m() {
                let ek = &sm.generators()[k];
                let el = &sm.generators()[l];
                let lhs = &ek.apply(&el.apply(&psi)) + &el.apply(&ek.apply(&psi));
                let rhs = if k == l { psi.scale(cplx(-2.0, 0.0)) } else { Spinor::zeros(sm.dim()) };
                worst = worst.max((&lhs - &rhs).max_abs());
            }
        }
        worst
    }

    #[test]
    fn clifford_relations_hold() {
        for m in 1..=6 {
            let sm = SpinModule::<f64>::new(m).unwrap();
            assert!(anticommutator_residual(&sm) < 1e-13, "m = {m}");
        }
    }

    #[test]
    fn m1_generators_match_volume_convention() {
        let sm = SpinModule::<f64>::new(1).unwrap();
        assert_eq!(sm.dim(), 2);
        let e12 = sm.clifford_product(&[1, 2]).unwrap();
        let u = sm.basis_spinor(sm.index_of(&[1]).unwrap());
        let img = e12.apply(&u);
        assert!((&img - &u.scale(cplx(0.0, 1.0))).max_abs() < 1e-15);
        let e1 = sm.generator(1).unwrap().to_dense();
        let sq = e1.compose(&e1);
        assert!(sq.max_abs_diff(&Endomorphism::identity(2).scale(cplx(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn generators_are_skew_unitary() {
        let sm = SpinModule::<f64>::new(3).unwrap();
        let id = Endomorphism::identity(sm.dim());
        for e in sm.generators() {
            let d = e.to_dense();
            assert!(d.adjoint().compose(&d).max_abs_diff(&id) < 1e-15);
            assert!(d.adjoint().max_abs_diff(&d.scale(cplx(-1.0, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn size_errors() {
        assert!(matches!(SpinModule::<f64>::new(0), Err(Error::Size(_))));
        assert!(matches!(SpinModule::<f64>::new(13), Err(Error::Size(_))));
        let sm = SpinModule::<f64>::new(2).unwrap();
        assert!(matches!(sm.generator(5), Err(Error::Index { .. })));
        assert!(sm.project_sr(&sm.basis_spinor(0), 3).is_err());
        let bad = ComplexVector::<f64>::zeros(3);
        assert!(matches!(sm.clifford_mul(&bad, &sm.basis_spinor(0)), Err(Error::Shape { .. })));
    }

    #[test]
    fn sign_vector_bijection() {
        let sm = SpinModule::<f64>::new(4).unwrap();
        for idx in 0..sm.dim() {
            let s = sm.sign_vector(idx).unwrap();
            assert_eq!(sm.index_of(&s).unwrap(), idx);
            let r = s.iter().filter(|&&x| x == -1).count();
            assert_eq!(SpinModule::<f64>::degree_of(idx), r);
        }
        assert!(sm.index_of(&[1, 0, 1, 1]).is_err());
    }

    #[test]
    fn real_unit_vector_squares_to_minus_one() {
        let sm = SpinModule::<f64>::new(2).unwrap();
        let v = ComplexVector::from_real(&[0.6, 0.0, 0.0, 0.8]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = sm.random_spinor(&mut rng);
        let twice = sm.clifford_mul(&v, &sm.clifford_mul(&v, &psi).unwrap()).unwrap();
        assert!((&twice + &psi).max_abs() < 1e-14);
    }

    #[test]
    fn p_raises_and_p_bar_lowers_degree() {
        let sm = SpinModule::<f64>::new(3).unwrap();
        for k in 1..=6 {
            let x = ComplexVector::<f64>::frame(3, k).unwrap();
            for idx in 0..sm.dim() {
                let r = SpinModule::<f64>::degree_of(idx);
                let u = sm.basis_spinor(idx);
                let up = sm.clifford_mul(&x.p(), &u).unwrap();
                let down = sm.clifford_mul(&x.p_bar(), &u).unwrap();
                let up_ok = if r < 3 { sm.project_sr(&up, r + 1).unwrap() } else { Spinor::zeros(8) };
                let down_ok = if r > 0 { sm.project_sr(&down, r - 1).unwrap() } else { Spinor::zeros(8) };
                assert!((&up - &up_ok).max_abs() < 1e-14);
                assert!((&down - &down_ok).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn p_bar_annihilates_s0() {
        // brute force over all S_0 basis spinors (only one) and frame vectors
        for m in 1..=4 {
            let sm = SpinModule::<f64>::new(m).unwrap();
            let u0 = sm.basis_spinor(0);
            for k in 1..=2 * m {
                let x = ComplexVector::<f64>::frame(m, k).unwrap();
                assert!(sm.clifford_mul(&x.p_bar(), &u0).unwrap().max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn p_and_p_bar_decompose() {
        let x = ComplexVector::<f64>::from_slice(&[cplx(0.3, 1.0), cplx(-2.0, 0.5), cplx(0.0, 0.1), cplx(1.0, 0.0)]).unwrap();
        let sum = x.p().add(&x.p_bar());
        assert!((sum.coeffs() - x.coeffs()).norm() < 1e-15);
        let jp = x.p().j();
        let ip = x.p().scale(cplx(0.0, 1.0));
        assert!((jp.coeffs() - ip.coeffs()).norm() < 1e-15);
    }

    #[test]
    fn endomorphism_json_round_trip() {
        let sm = SpinModule::<f64>::new(2).unwrap();
        let omega = sm.kahler_form();
        let json = serde_json::to_string(&omega.to_json()).unwrap();
        let back: MatrixJson = serde_json::from_str(&json).unwrap();
        let restored = Endomorphism::<f64>::from_json(&back).unwrap();
        assert_eq!(restored, omega);
        let bad = MatrixJson { rows: 2, cols: 2, re: vec![0.0; 3], im: vec![0.0; 4] };
        assert!(Endomorphism::<f64>::from_json(&bad).is_err());
    }

    #[test]
    fn single_precision_module_works() {
        let sm = SpinModule::<f32>::new(3).unwrap();
        let omega = sm.kahler_form();
        let u = sm.basis_spinor(0b011);
        let img = omega.apply(&u).unwrap();
        // r = 2, m = 3: eigenvalue i(3 - 4) = -i
        assert!((img.coeff(0b011) - Complex::new(0.0f32, -1.0)).norm() < 1e-6);
    }
}
