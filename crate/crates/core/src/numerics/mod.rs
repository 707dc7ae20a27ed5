//! Shared numerical kernel: operator matrices, Hermitian eigensolves,
//! kernel extraction and spectrum reports.

mod lanczos;
mod report;

use nalgebra::{ComplexField, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

pub use report::{Cluster, SpectrumReport};

/// Dimension from which [`eigensolve`] switches to the Lanczos iteration.
pub const DENSE_LIMIT: usize = 4096;

/// Default absolute gap used to group eigenvalues into clusters.
pub const EXACT_CLUSTER_GAP: f64 = 1e-6;

const SEED: u64 = 0x5eed_cafe;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    SkewHermitian,
    General,
}

/// Compressed-row complex sparse matrix.
#[derive(Clone, Debug)]
pub struct SparseMatrix<T: Real> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex<T>>,
}

impl<T: Real> SparseMatrix<T> {
    /// Builds an `n × n` matrix from `(row, col, value)` triplets; duplicates add up.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, Complex<T>)]) -> Result<Self> {
        let mut sorted = triplets.to_vec();
        if let Some(&(r, c, _)) = sorted.iter().find(|(r, c, _)| *r >= n || *c >= n) {
            return Err(Error::Shape { expected: n, got: r.max(c) + 1 });
        }
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(sorted.len());
        let mut vals: Vec<Complex<T>> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in sorted {
            if last == Some((r, c)) {
                *vals.last_mut().expect("previous entry") += v;
                continue;
            }
            cols.push(c);
            vals.push(v);
            row_ptr[r + 1] += 1;
            last = Some((r, c));
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self { n, row_ptr, cols, vals })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn apply(&self, x: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        DVector::from_fn(self.n, |i, _| {
            (self.row_ptr[i]..self.row_ptr[i + 1])
                .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + self.vals[p] * x[self.cols[p]])
        })
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.cols[p])] += self.vals[p];
            }
        }
        m
    }

    fn entry(&self, i: usize, j: usize) -> Complex<T> {
        (self.row_ptr[i]..self.row_ptr[i + 1])
            .filter(|&p| self.cols[p] == j)
            .fold(Complex::new(T::zero(), T::zero()), |acc, p| acc + self.vals[p])
    }
}

#[derive(Clone, Debug)]
pub enum Storage<T: Real> {
    Dense(DMatrix<Complex<T>>),
    Sparse(SparseMatrix<T>),
}

/// Square complex matrix realizing a linear operator, with a verified symmetry flag.
#[derive(Clone, Debug)]
pub struct OperatorMatrix<T: Real> {
    storage: Storage<T>,
    symmetry: Symmetry,
    label: String,
}

/// Relative tolerance adapted to the scalar precision.
pub(crate) fn precision_tol<T: Real>(base: f64) -> T {
    T::lit(base).max(T::machine_epsilon() * T::lit(1e3))
}

impl<T: Real> OperatorMatrix<T> {
    pub fn dense(matrix: DMatrix<Complex<T>>, symmetry: Symmetry, label: impl Into<String>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::Shape { expected: matrix.nrows(), got: matrix.ncols() });
        }
        let op = Self { storage: Storage::Dense(matrix), symmetry, label: label.into() };
        op.verify_symmetry()?;
        Ok(op)
    }

    pub fn sparse(matrix: SparseMatrix<T>, symmetry: Symmetry, label: impl Into<String>) -> Result<Self> {
        let op = Self { storage: Storage::Sparse(matrix), symmetry, label: label.into() };
        op.verify_symmetry()?;
        Ok(op)
    }

    fn verify_symmetry(&self) -> Result<()> {
        let sign = match self.symmetry {
            Symmetry::General => return Ok(()),
            Symmetry::Hermitian => T::one(),
            Symmetry::SkewHermitian => -T::one(),
        };
        let (defect, scale) = match &self.storage {
            Storage::Dense(m) => {
                let d = (m - m.adjoint() * Complex::new(sign, T::zero())).iter().fold(T::zero(), |a, c| a.max(c.modulus()));
                (d, m.iter().fold(T::zero(), |a, c| a.max(c.modulus())))
            }
            Storage::Sparse(s) => {
                let mut d = T::zero();
                let mut scale = T::zero();
                for i in 0..s.n {
                    for p in s.row_ptr[i]..s.row_ptr[i + 1] {
                        let j = s.cols[p];
                        let a = s.entry(i, j);
                        let b = s.entry(j, i).conj() * Complex::new(sign, T::zero());
                        d = d.max((a - b).modulus());
                        scale = scale.max(a.modulus());
                    }
                }
                (d, scale)
            }
        };
        if defect > precision_tol::<T>(1e-10) * scale.max(T::one()) {
            return Err(Error::Contract(format!(
                "{} declared {:?} but defect is {:e}",
                self.label,
                self.symmetry,
                defect.to_f64_lossy()
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(s) => s.n,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn storage(&self) -> &Storage<T> {
        &self.storage
    }

    pub fn apply(&self, x: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        match &self.storage {
            Storage::Dense(m) => m * x,
            Storage::Sparse(s) => s.apply(x),
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex<T>> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(s) => s.to_dense(),
        }
    }
}

/// Column-by-column matrix of a linear `action` on `C^dim`.
///
/// Linearity is spot-checked on random vectors; a failing check is a
/// contract violation.
pub fn assemble<T, F>(action: F, dim: usize, symmetry: Symmetry, label: &str) -> Result<OperatorMatrix<T>>
where
    T: Real,
    F: Fn(&DVector<Complex<T>>) -> DVector<Complex<T>>,
{
    let mut matrix = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut e = DVector::zeros(dim);
        e[j] = Complex::new(T::one(), T::zero());
        let col = action(&e);
        if col.len() != dim {
            return Err(Error::Shape { expected: dim, got: col.len() });
        }
        matrix.set_column(j, &col);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let random = |rng: &mut ChaCha8Rng| {
        DVector::from_fn(dim, |_, _| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))))
    };
    let x = random(&mut rng);
    let y = random(&mut rng);
    let a = Complex::new(T::lit(0.7), T::lit(-1.3));
    let b = Complex::new(T::lit(-0.4), T::lit(0.9));
    let combined = action(&(&x * a + &y * b));
    let separate = action(&x) * a + action(&y) * b;
    let defect = (&combined - &separate).norm();
    let scale = T::one() + combined.norm() + separate.norm();
    if defect > precision_tol::<T>(1e-12) * scale {
        return Err(Error::Contract(format!(
            "{label}: action is not linear (defect {:e})",
            defect.to_f64_lossy()
        )));
    }
    // columns must reproduce the action on a generic vector too
    let via_matrix = &matrix * &x;
    let direct = action(&x);
    if (&via_matrix - &direct).norm() > precision_tol::<T>(1e-12) * (T::one() + direct.norm()) {
        return Err(Error::Contract(format!("{label}: action is not linear on generic vectors")));
    }
    OperatorMatrix::dense(matrix, symmetry, label)
}

fn require_hermitian<T: Real>(a: &OperatorMatrix<T>) -> Result<()> {
    if a.symmetry != Symmetry::Hermitian {
        return Err(Error::Contract(format!("{} is not flagged Hermitian", a.label)));
    }
    Ok(())
}

/// Full ascending eigendecomposition of a dense Hermitian matrix.
pub(crate) fn hermitian_eigen<T: Real>(m: &DMatrix<Complex<T>>) -> (Vec<T>, Vec<DVector<Complex<T>>>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i]
            .partial_cmp(&eig.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (values, vectors)
}

/// The `k` smallest eigenvalues of a Hermitian operator, ascending, with
/// orthonormal eigenvectors and residual norms.
pub fn eigensolve<T: Real>(a: &OperatorMatrix<T>, k: usize) -> Result<SpectrumReport<T>> {
    require_hermitian(a)?;
    let n = a.dim();
    if k == 0 || k > n {
        return Err(Error::Size(format!("requested {k} eigenvalues of a {n}-dimensional operator")));
    }
    let (values, vectors, norm) = if n < DENSE_LIMIT {
        let (values, vectors) = hermitian_eigen(&a.to_dense());
        let norm = values.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        (values[..k].to_vec(), vectors[..k].to_vec(), norm)
    } else {
        let out = lanczos::smallest(a, k, SEED)?;
        (out.values, out.vectors, out.norm_estimate)
    };
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&lambda, v)| (a.apply(v) - v * Complex::new(lambda, T::zero())).norm())
        .collect();
    Ok(SpectrumReport::new(a.label(), values, vectors, residuals, norm))
}

/// Orthonormal basis of the eigenspaces of a positive semi-definite Hermitian
/// operator with eigenvalue below `tol`.
#[derive(Clone, Debug)]
pub struct KernelBasis<T: Real> {
    pub vectors: Vec<DVector<Complex<T>>>,
    /// Largest eigenvalue accepted into the kernel.
    pub largest_accepted: Option<T>,
    /// Smallest eigenvalue rejected from the kernel.
    pub smallest_rejected: Option<T>,
    /// Set when an eigenvalue sits within a factor of ten of `tol`.
    pub warning: Option<String>,
}

impl<T: Real> KernelBasis<T> {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

pub fn kernel_basis<T: Real>(a: &OperatorMatrix<T>, tol: T) -> Result<KernelBasis<T>> {
    require_hermitian(a)?;
    if a.dim() >= DENSE_LIMIT {
        return Err(Error::Size(format!("kernel extraction is dense-only (dimension {})", a.dim())));
    }
    let (values, vectors) = hermitian_eigen(&a.to_dense());
    let mut out = KernelBasis { vectors: Vec::new(), largest_accepted: None, smallest_rejected: None, warning: None };
    let ten = T::lit(10.0);
    let mut ambiguous = Vec::new();
    for (lambda, v) in values.into_iter().zip(vectors) {
        if lambda > tol / ten && lambda < tol * ten {
            ambiguous.push(lambda);
        }
        if lambda < tol {
            out.largest_accepted = Some(lambda);
            out.vectors.push(v);
        } else if out.smallest_rejected.is_none() {
            out.smallest_rejected = Some(lambda);
        }
    }
    if !ambiguous.is_empty() {
        out.warning = Some(format!(
            "{}: eigenvalues {:?} lie within a decade of the kernel tolerance {:e}",
            a.label(),
            ambiguous.iter().map(|x| x.to_f64_lossy()).collect::<Vec<_>>(),
            tol.to_f64_lossy()
        ));
    }
    Ok(out)
}
