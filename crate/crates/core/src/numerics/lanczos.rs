//! Lanczos iteration with full reorthogonalization for the low end of a
//! Hermitian spectrum.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{precision_tol, OperatorMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

pub(crate) struct LanczosOutput<T: Real> {
    pub values: Vec<T>,
    pub vectors: Vec<DVector<Complex<T>>>,
    pub norm_estimate: T,
}

fn random_unit<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> DVector<Complex<T>> {
    let v = DVector::from_fn(n, |_, _| Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0))));
    let norm = v.norm();
    v / Complex::new(norm, T::zero())
}

/// Twice-iterated classical Gram-Schmidt against `basis`.
fn orthogonalize<T: Real>(w: &mut DVector<Complex<T>>, basis: &[DVector<Complex<T>>]) {
    for _ in 0..2 {
        for q in basis {
            let c = q.dotc(w);
            w.axpy(-c, q, Complex::new(T::one(), T::zero()));
        }
    }
}

fn tridiagonal_eigen<T: Real>(alpha: &[T], beta: &[T]) -> (Vec<T>, DMatrix<T>) {
    let j = alpha.len();
    let mut t = DMatrix::zeros(j, j);
    for i in 0..j {
        t[(i, i)] = alpha[i];
        if i + 1 < j {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..j).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(j, j, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub(crate) fn smallest<T: Real>(a: &OperatorMatrix<T>, k: usize, seed: u64) -> Result<LanczosOutput<T>> {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_iter = n.min(40 * k + 1200);
    let check_every = 10usize;
    let tol = precision_tol::<T>(1e-10);

    let mut basis: Vec<DVector<Complex<T>>> = Vec::new();
    let mut alpha: Vec<T> = Vec::new();
    let mut beta: Vec<T> = Vec::new();
    let mut q = random_unit::<T>(n, &mut rng);
    let mut worst = f64::INFINITY;

    for step in 0..max_iter {
        let mut w = a.apply(&q);
        let a_j = q.dotc(&w).re;
        basis.push(q.clone());
        alpha.push(a_j);
        orthogonalize(&mut w, &basis);
        let mut b_j = w.norm();
        let scale = alpha.iter().chain(beta.iter()).fold(T::one(), |acc, x| acc.max(x.abs()));
        if b_j <= tol * scale {
            // invariant subspace reached: continue from a fresh orthogonal direction
            let mut fresh = random_unit::<T>(n, &mut rng);
            orthogonalize(&mut fresh, &basis);
            let norm = fresh.norm();
            if norm <= tol {
                b_j = T::zero();
                beta.push(b_j);
                break;
            }
            q = fresh / Complex::new(norm, T::zero());
            b_j = T::zero();
        } else {
            q = w / Complex::new(b_j, T::zero());
        }
        beta.push(b_j);

        let j = alpha.len();
        if j >= k && ((step + 1) % check_every == 0 || j == max_iter || basis.len() == n) {
            let (theta, s) = tridiagonal_eigen(&alpha, &beta[..j - 1]);
            let norm = theta.iter().fold(T::zero(), |acc, x| acc.max(x.abs())).max(T::one());
            let estimates: Vec<T> = (0..k).map(|i| (b_j * s[(j - 1, i)]).abs()).collect();
            worst = estimates.iter().fold(0.0f64, |acc, e| acc.max(e.to_f64_lossy() / norm.to_f64_lossy()));
            if estimates.iter().all(|&e| e <= tol * norm) || basis.len() == n {
                return Ok(finish(&basis, &theta, &s, k, norm));
            }
        }
    }

    let j = alpha.len();
    if j >= k {
        let (theta, s) = tridiagonal_eigen(&alpha, &beta[..j - 1]);
        let norm = theta.iter().fold(T::zero(), |acc, x| acc.max(x.abs())).max(T::one());
        if basis.len() == n || beta.last().is_some_and(|b| *b == T::zero()) {
            return Ok(finish(&basis, &theta, &s, k, norm));
        }
    }
    Err(Error::Convergence { iterations: alpha.len(), residual: worst })
}

fn finish<T: Real>(
    basis: &[DVector<Complex<T>>],
    theta: &[T],
    s: &DMatrix<T>,
    k: usize,
    norm: T,
) -> LanczosOutput<T> {
    let n = basis[0].len();
    let vectors = (0..k)
        .map(|i| {
            let mut y = DVector::zeros(n);
            for (row, qv) in basis.iter().enumerate().take(s.nrows()) {
                y.axpy(Complex::new(s[(row, i)], T::zero()), qv, Complex::new(T::one(), T::zero()));
            }
            let nrm = y.norm();
            y / Complex::new(nrm, T::zero())
        })
        .collect();
    LanczosOutput { values: theta[..k].to_vec(), vectors, norm_estimate: norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{eigensolve, SparseMatrix, Symmetry};

    fn laplacian_1d(n: usize) -> OperatorMatrix<f64> {
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, Complex::new(2.0, 0.0)));
            if i + 1 < n {
                trip.push((i, i + 1, Complex::new(-1.0, 0.0)));
                trip.push((i + 1, i, Complex::new(-1.0, 0.0)));
            }
        }
        OperatorMatrix::sparse(SparseMatrix::from_triplets(n, &trip).unwrap(), Symmetry::Hermitian, "lap1d").unwrap()
    }

    #[test]
    fn lanczos_matches_closed_form_on_small_problem() {
        let n = 40;
        let op = laplacian_1d(n);
        let out = smallest(&op, 3, 1).unwrap();
        for (i, v) in out.values.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((i + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-10, "{v} vs {exact}");
        }
    }

    #[test]
    fn large_sparse_problem_uses_lanczos_path() {
        // well separated low end: diagonal shift makes the lowest modes distinct
        let n = 4200;
        let mut trip = Vec::new();
        for i in 0..n {
            trip.push((i, i, Complex::new(1.0 + i as f64, 0.0)));
            if i + 1 < n {
                trip.push((i, i + 1, Complex::new(0.0, 0.25)));
                trip.push((i + 1, i, Complex::new(0.0, -0.25)));
            }
        }
        let op = OperatorMatrix::sparse(SparseMatrix::from_triplets(n, &trip).unwrap(), Symmetry::Hermitian, "band").unwrap();
        let rep = eigensolve(&op, 2).unwrap();
        assert!(rep.passed(), "residuals {:?}", rep.residuals);
        // Gershgorin: the lowest eigenvalue lies in [1 - 0.25, 1 + 0.25]
        assert!(rep.eigenvalues[0] > 0.7 && rep.eigenvalues[0] < 1.0);
        assert!(rep.eigenvalues[1] > rep.eigenvalues[0] + 0.5);
    }
}
