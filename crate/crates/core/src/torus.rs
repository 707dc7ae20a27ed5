//! Flat torus `R^{2m} / 2πZ^{2m}` with the trivial spin structure, realized
//! exactly on Fourier modes `|ξ|_∞ ≤ N`.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{check_index, Error, Result};
use crate::numerics::{assemble, hermitian_eigen, kernel_basis, SpectrumReport, Symmetry};
use crate::scalar::{binomial, Complex, Real};
use crate::spin_module::{ComplexVector, SpinModule, Spinor};

/// Lattice vector in `Z^{2m}`.
pub type Mode = Vec<i64>;

/// Largest retained mode count; keeps `m = 2, N = 4` (6561 modes) comfortably inside.
pub const MAX_MODES: usize = 200_000;

#[derive(Clone, Debug)]
pub struct TorusModel<T: Real> {
    m: usize,
    cutoff: usize,
    sm: SpinModule<T>,
    modes: Vec<Mode>,
    index: HashMap<Mode, usize>,
}

/// Trigonometric-polynomial spinor field: mode ↦ spinor coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusField<T: Real> {
    coeffs: BTreeMap<Mode, Spinor<T>>,
}

impl<T: Real> TorusField<T> {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new() }
    }

    pub fn single(mode: Mode, coeff: Spinor<T>) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(mode, coeff);
        Self { coeffs }
    }

    pub fn constant(m: usize, coeff: Spinor<T>) -> Self {
        Self::single(vec![0; 2 * m], coeff)
    }

    pub fn insert(&mut self, mode: Mode, coeff: Spinor<T>) {
        self.coeffs.insert(mode, coeff);
    }

    pub fn get(&self, mode: &[i64]) -> Option<&Spinor<T>> {
        self.coeffs.get(mode)
    }

    pub fn modes(&self) -> impl Iterator<Item = (&Mode, &Spinor<T>)> {
        self.coeffs.iter()
    }

    /// `L²` norm through Parseval (normalized volume).
    pub fn norm(&self) -> T {
        self.coeffs.values().fold(T::zero(), |a, s| a + s.norm() * s.norm()).sqrt()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Spinor<T>, &Spinor<T>) -> Spinor<T>) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            let entry = coeffs.entry(k.clone()).or_insert_with(|| Spinor::zeros(v.dim()));
            *entry = f(entry, v);
        }
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect() }
    }

    /// Largest coefficient modulus over all modes.
    pub fn max_abs(&self) -> T {
        self.coeffs.values().fold(T::zero(), |a, s| a.max(s.max_abs()))
    }
}

impl<T: Real> TorusModel<T> {
    pub fn new(m: usize, cutoff: usize) -> Result<Self> {
        let sm = SpinModule::new(m)?;
        let side = 2 * cutoff + 1;
        let count = (0..2 * m).try_fold(1usize, |acc, _| acc.checked_mul(side));
        let count = match count {
            Some(c) if c <= MAX_MODES => c,
            _ => return Err(Error::Size(format!("m = {m}, N = {cutoff} exceeds {MAX_MODES} modes"))),
        };
        let n = cutoff as i64;
        let modes: Vec<Mode> = (0..count)
            .map(|mut c| {
                (0..2 * m)
                    .map(|_| {
                        let d = (c % side) as i64 - n;
                        c /= side;
                        d
                    })
                    .collect()
            })
            .collect();
        let index = modes.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(Self { m, cutoff, sm, modes, index })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn spin_module(&self) -> &SpinModule<T> {
        &self.sm
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    /// Dimension of the truncated field space.
    pub fn dim(&self) -> usize {
        self.modes.len() * self.sm.dim()
    }

    fn check(&self, f: &TorusField<T>) -> Result<()> {
        for (k, v) in &f.coeffs {
            if !self.index.contains_key(k) {
                return Err(Error::Input(format!("mode {k:?} outside the truncation")));
            }
            if v.dim() != self.sm.dim() {
                return Err(Error::Shape { expected: self.sm.dim(), got: v.dim() });
            }
        }
        Ok(())
    }

    fn map_modes(&self, f: &TorusField<T>, op: impl Fn(&Mode, &Spinor<T>) -> Result<Spinor<T>>) -> Result<TorusField<T>> {
        self.check(f)?;
        let coeffs = f
            .coeffs
            .iter()
            .map(|(k, v)| Ok((k.clone(), op(k, v)?)))
            .collect::<Result<_>>()?;
        Ok(TorusField { coeffs })
    }

    /// `ξ` as a real tangent vector.
    pub fn mode_vector(&self, mode: &[i64]) -> ComplexVector<T> {
        let re: Vec<T> = mode.iter().map(|&x| T::lit(x as f64)).collect();
        ComplexVector::from_real(&re).expect("even length")
    }

    fn i_times(c: Complex<T>) -> Complex<T> {
        Complex::new(-c.im, c.re)
    }

    /// `∇_X f`: mode `ξ` picks up `i⟨ξ, X⟩`.
    pub fn nabla(&self, x: &ComplexVector<T>, f: &TorusField<T>) -> Result<TorusField<T>> {
        if x.len() != 2 * self.m {
            return Err(Error::Shape { expected: 2 * self.m, got: x.len() });
        }
        self.map_modes(f, |k, v| Ok(v.scale(Self::i_times(self.mode_vector(k).bilinear(x)))))
    }

    /// `∇^{1,0}_X = ∇_{p(X)}`.
    pub fn nabla_10(&self, x: &ComplexVector<T>, f: &TorusField<T>) -> Result<TorusField<T>> {
        self.nabla(&x.p(), f)
    }

    /// `∇^{0,1}_X = ∇_{p̄(X)}`.
    pub fn nabla_01(&self, x: &ComplexVector<T>, f: &TorusField<T>) -> Result<TorusField<T>> {
        self.nabla(&x.p_bar(), f)
    }

    fn clifford_by(&self, v: &ComplexVector<T>, psi: &Spinor<T>) -> Result<Spinor<T>> {
        self.sm.clifford_mul(&v.scale(Complex::new(T::zero(), T::one())), psi)
    }

    /// `D = X^k · ∇_{X_k}`: Clifford multiplication by `iξ`.
    pub fn dirac(&self, f: &TorusField<T>) -> Result<TorusField<T>> {
        self.map_modes(f, |k, v| self.clifford_by(&self.mode_vector(k), v))
    }

    /// `D̃ = J(X^k) · ∇_{X_k}`: Clifford multiplication by `iJξ`.
    pub fn dirac_tilde(&self, f: &TorusField<T>) -> Result<TorusField<T>> {
        self.map_modes(f, |k, v| self.clifford_by(&self.mode_vector(k).j(), v))
    }

    /// `D₊ = ½(D − iD̃)`.
    pub fn d_plus(&self, f: &TorusField<T>) -> Result<TorusField<T>> {
        let d = self.dirac(f)?;
        let dt = self.dirac_tilde(f)?;
        Ok(d.sub(&dt.scale(Complex::new(T::zero(), T::one()))).scale(Complex::new(T::lit(0.5), T::zero())))
    }

    /// `D₋ = ½(D + iD̃)`.
    pub fn d_minus(&self, f: &TorusField<T>) -> Result<TorusField<T>> {
        let d = self.dirac(f)?;
        let dt = self.dirac_tilde(f)?;
        Ok(d.add(&dt.scale(Complex::new(T::zero(), T::one()))).scale(Complex::new(T::lit(0.5), T::zero())))
    }

    /// `∇*∇ = −Σ_k ∇_{X_k}∇_{X_k}` (flat frame).
    pub fn bochner(&self, f: &TorusField<T>) -> Result<TorusField<T>> {
        let mut acc = TorusField::zero();
        for k in 1..=2 * self.m {
            let x = ComplexVector::frame(self.m, k)?;
            acc = acc.sub(&self.nabla(&x, &self.nabla(&x, f)?)?);
        }
        Ok(acc)
    }

    /// Random field with every retained mode populated.
    pub fn random_field<R: Rng + ?Sized>(&self, rng: &mut R) -> TorusField<T> {
        let coeffs = self.modes.iter().map(|k| (k.clone(), self.sm.random_spinor(rng))).collect();
        TorusField { coeffs }
    }

    /// Random field on `count` randomly chosen modes.
    pub fn random_sparse_field<R: Rng + ?Sized>(&self, rng: &mut R, count: usize) -> TorusField<T> {
        let mut f = TorusField::zero();
        for _ in 0..count {
            let k = self.modes[rng.gen_range(0..self.modes.len())].clone();
            f.insert(k, self.sm.random_spinor(rng));
        }
        f
    }

    /// Coefficients stacked mode by mode in the model's mode order.
    pub fn flatten(&self, f: &TorusField<T>) -> Result<DVector<Complex<T>>> {
        self.check(f)?;
        let d = self.sm.dim();
        let mut out = DVector::zeros(self.dim());
        for (k, v) in &f.coeffs {
            let base = self.index[k] * d;
            out.rows_mut(base, d).copy_from(v.as_vector());
        }
        Ok(out)
    }

    pub fn unflatten(&self, v: &DVector<Complex<T>>) -> Result<TorusField<T>> {
        if v.len() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), got: v.len() });
        }
        let d = self.sm.dim();
        let coeffs = self
            .modes
            .iter()
            .enumerate()
            .map(|(i, k)| (k.clone(), Spinor::from_vector(v.rows(i * d, d).into_owned())))
            .collect();
        Ok(TorusField { coeffs })
    }

    /// Block of `op` on the single mode `ξ`, restricted to the basis indices `idx`.
    fn mode_block(
        &self,
        mode: &Mode,
        idx: &[usize],
        op: impl Fn(&TorusField<T>) -> Result<TorusField<T>>,
        symmetry: Symmetry,
    ) -> Result<DMatrix<Complex<T>>> {
        let d = self.sm.dim();
        let action = |v: &DVector<Complex<T>>| {
            let mut full = DVector::zeros(d);
            for (a, &i) in idx.iter().enumerate() {
                full[i] = v[a];
            }
            let out = op(&TorusField::single(mode.clone(), Spinor::from_vector(full))).expect("mode in truncation");
            let zero = Spinor::zeros(d);
            let s = out.get(mode).unwrap_or(&zero);
            DVector::from_iterator(idx.len(), idx.iter().map(|&i| s.coeff(i)))
        };
        Ok(assemble(action, idx.len(), symmetry, "torus mode block")?.to_dense())
    }

    /// Basis of `ker ∇^{0,1}` among `S_r`-valued fields in the truncation.
    pub fn holomorphic_kernel(&self, r: usize) -> Result<Vec<TorusField<T>>> {
        check_index(r, 0, self.m)?;
        let idx = self.sm.sr_indices(r)?;
        let frames: Vec<ComplexVector<T>> = (1..=2 * self.m).map(|k| ComplexVector::frame(self.m, k)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for mode in &self.modes {
            // ∇^{0,1*}∇^{0,1} = Σ_k A_k^H A_k with A_k = ∇_{p̄ X_k} on this mode
            let mut gram = DMatrix::zeros(idx.len(), idx.len());
            for x in &frames {
                let a = self.mode_block(mode, &idx, |f| self.nabla_01(x, f), Symmetry::General)?;
                gram += a.adjoint() * &a;
            }
            let op = crate::numerics::OperatorMatrix::dense(gram, Symmetry::Hermitian, "torus ∇^{0,1*}∇^{0,1}")?;
            let kernel = kernel_basis(&op, T::lit(1e-10))?;
            for v in kernel.vectors {
                let mut full = DVector::zeros(self.sm.dim());
                for (a, &i) in idx.iter().enumerate() {
                    full[i] = v[a];
                }
                out.push(TorusField::single(mode.clone(), Spinor::from_vector(full)));
            }
        }
        debug_assert!(out.len() >= binomial(self.m, r));
        Ok(out)
    }

    /// Lowest `k` eigenvalues of `D²` on the truncation, with the lattice
    /// oracle `|ξ|²` (multiplicity `2^m` per mode) attached.
    pub fn spectrum(&self, k: usize) -> Result<SpectrumReport<T>> {
        self.spectrum_on(None, k)
    }

    /// As [`Self::spectrum`], restricted to `S_r` when `r` is given.
    pub fn spectrum_on(&self, r: Option<usize>, k: usize) -> Result<SpectrumReport<T>> {
        let idx = match r {
            Some(r) => self.sm.sr_indices(r)?,
            None => (0..self.sm.dim()).collect(),
        };
        let total = self.modes.len() * idx.len();
        if k == 0 || k > total {
            return Err(Error::Size(format!("requested {k} eigenvalues of a {total}-dimensional truncation")));
        }
        let d = self.sm.dim();
        let mut pairs: Vec<(T, usize, DVector<Complex<T>>)> = Vec::with_capacity(total);
        let mut oracle: Vec<T> = Vec::with_capacity(total);
        for (mi, mode) in self.modes.iter().enumerate() {
            let block = self.mode_block(mode, &idx, |f| self.dirac(&self.dirac(f)?), Symmetry::Hermitian)?;
            let (vals, vecs) = hermitian_eigen(&block);
            for (lambda, v) in vals.into_iter().zip(vecs) {
                pairs.push((lambda, mi, v));
            }
            let norm2 = mode.iter().map(|x| x * x).sum::<i64>();
            oracle.extend(std::iter::repeat_n(T::lit(norm2 as f64), idx.len()));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite").then(a.1.cmp(&b.1)));
        oracle.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pairs.truncate(k);
        oracle.truncate(k);

        let mut values = Vec::with_capacity(k);
        let mut vectors = Vec::with_capacity(k);
        let mut residuals = Vec::with_capacity(k);
        for (lambda, mi, v) in pairs {
            let mut full = DVector::zeros(self.dim());
            for (a, &i) in idx.iter().enumerate() {
                full[mi * d + i] = v[a];
            }
            let field = self.unflatten(&full)?;
            let applied = self.flatten(&self.dirac(&self.dirac(&field)?)?)?;
            residuals.push((applied - &full * Complex::new(lambda, T::zero())).norm());
            values.push(lambda);
            vectors.push(full);
        }
        let norm = T::lit((2 * self.m) as f64 * (self.cutoff * self.cutoff) as f64);
        let label = match r {
            Some(r) => format!("torus D^2 on S_{r} (m={}, N={})", self.m, self.cutoff),
            None => format!("torus D^2 (m={}, N={})", self.m, self.cutoff),
        };
        Ok(SpectrumReport::new(&label, values, vectors, residuals, norm).with_oracle(oracle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn mode_count_and_symmetry() {
        let t = TorusModel::<f64>::new(1, 2).unwrap();
        assert_eq!(t.modes().len(), 25);
        for k in t.modes() {
            let neg: Mode = k.iter().map(|x| -x).collect();
            assert!(t.index.contains_key(&neg));
        }
        assert!(TorusModel::<f64>::new(4, 10).is_err());
    }

    #[test]
    fn nabla_on_first_axis() {
        let t = TorusModel::<f64>::new(1, 1).unwrap();
        let psi = t.spin_module().basis_spinor(0);
        let f = TorusField::single(vec![1, 0], psi.clone());
        let x1 = ComplexVector::frame(1, 1).unwrap();
        let g = t.nabla(&x1, &f).unwrap();
        assert_eq!(g.get(&[1, 0]).unwrap(), &psi.scale(cplx(0.0, 1.0)));
        let c = TorusField::constant(1, psi);
        assert_eq!(t.nabla(&x1, &c).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn outside_support_is_rejected() {
        let t = TorusModel::<f64>::new(1, 1).unwrap();
        let f = TorusField::single(vec![2, 0], t.spin_module().basis_spinor(0));
        assert!(t.dirac(&f).is_err());
    }

    #[test]
    fn flatten_round_trip() {
        let t = TorusModel::<f64>::new(1, 1).unwrap();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let f = t.random_field(&mut rng);
        assert_eq!(t.unflatten(&t.flatten(&f).unwrap()).unwrap(), f);
    }
}
