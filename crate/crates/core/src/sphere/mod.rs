//! Round unit `S² = CP¹` (`m = 1`, `R = 2`): spinor calculus on two
//! stereographic charts and Galerkin operator matrices over a spin-weighted
//! Jacobi basis.
//!
//! Fields are coefficient vectors over the basis; the basis at resolution `L`
//! holds every section of level `≤ L − 1/2`, which is exactly the span of the
//! Dirac eigenspinors with `|λ| ≤ L`. Quadrature is Gauss–Legendre in
//! `x = cos θ` times a uniform rule in `φ`; nodes with `x ≥ 0` are evaluated in
//! the `ζ` chart and the rest in the `w` chart.

mod basis;
mod geometry;
mod quadrature;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{check_index, Error, Result};
use crate::numerics::{eigensolve, kernel_basis, precision_tol, KernelBasis, OperatorMatrix, SpectrumReport, Symmetry};
use crate::scalar::{Complex, Real};
use crate::spin_module::ComplexVector;

pub use basis::{jacobi, BasisFunction};
pub use geometry::{Chart, Clifford2, ComponentJet, NodeGeom, SpinorJet, SpinorValue};

/// Smallest accepted resolution.
pub const MIN_RESOLUTION: usize = 4;
/// Largest chart modulus accepted by [`SphereModel::evaluate`].
pub const CHART_LIMIT: f64 = 2.0;
/// Scalar curvature of the unit sphere.
pub const SCALAR_CURVATURE: f64 = 2.0;
/// Floor applied to `tolerance(L)`.
pub const TOLERANCE_FLOOR: f64 = 1e-10;

/// Spinor field as coefficients over the model basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereField<T: Real> {
    pub coeffs: DVector<Complex<T>>,
}

/// Spinor values at the quadrature nodes, each in its node's chart frame.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalField<T: Real> {
    pub values: Vec<SpinorValue<T>>,
}

impl<T: Real> NodalField<T> {
    pub fn sup_norm(&self) -> T {
        self.values.iter().fold(T::zero(), |a, v| a.max(v[0].norm_sqr().max(v[1].norm_sqr()).sqrt()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| [a[0] - b[0], a[1] - b[1]]).collect() }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { values: self.values.iter().map(|a| [a[0] * c, a[1] * c]).collect() }
    }
}

/// Sup-norm residuals of the holomorphic-spinor identities, relative to the field.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphicResiduals<T> {
    /// `‖∇^{0,1}ψ‖`.
    pub nabla01: T,
    /// `D₊ψ = 0`.
    pub d_plus: T,
    /// `∇_{p̄(X)} D₋ψ + ½ p̄(Ric X)·ψ = 0`, worst frame vector.
    pub ricci_contraction: T,
    /// `D₊D₋ψ = (R/4)ψ + (i/2)ρψ`.
    pub d_plus_d_minus: T,
    /// `D²ψ = (R/4)ψ + (i/2)ρψ`.
    pub dirac_squared: T,
    /// `∇*∇ψ = (i/2)ρψ`.
    pub bochner: T,
    /// `D²ψ = (rR/2m)ψ` with `r = m = 1`.
    pub einstein_eigenvalue: T,
}

impl<T: Real> HolomorphicResiduals<T> {
    pub fn worst(&self) -> T {
        [self.nabla01, self.d_plus, self.ricci_contraction, self.d_plus_d_minus, self.dirac_squared, self.bochner, self.einstein_eigenvalue]
            .into_iter()
            .fold(T::zero(), |a, b| a.max(b))
    }
}

#[derive(Clone, Debug)]
pub struct SphereModel<T: Real> {
    resolution: usize,
    basis: Vec<BasisFunction<T>>,
    nodes: Vec<NodeGeom<T>>,
    weights: Vec<T>,
    /// Per basis function, jets at every node (`nodes × basis`, row = node).
    jets: Vec<Vec<SpinorJet<T>>>,
    /// `B`: nodal values, row `2·node + component`.
    values: DMatrix<Complex<T>>,
    cl: Clifford2<T>,
    dirac: DMatrix<Complex<T>>,
    dirac_tilde: DMatrix<Complex<T>>,
    bochner: DMatrix<Complex<T>>,
    nabla10: DMatrix<Complex<T>>,
    nabla01: DMatrix<Complex<T>>,
    rho: DMatrix<Complex<T>>,
    tolerance: T,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

impl<T: Real> SphereModel<T> {
    /// Builds the model at resolution `L ≥ 4` and assembles all operator matrices.
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::Domain(format!(
                "sphere resolution L = {resolution} is below the minimum {MIN_RESOLUTION}"
            )));
        }
        let k = resolution - 1;
        let mut basis = basis::enumerate::<T>(k);

        let (xs, wx) = quadrature::gauss_legendre(k + 3);
        let n_phi = 2 * k + 6;
        let two_pi = std::f64::consts::TAU;
        let mut nodes = Vec::with_capacity(xs.len() * n_phi);
        let mut weights = Vec::with_capacity(xs.len() * n_phi);
        for (&x, &w) in xs.iter().zip(&wx) {
            for j in 0..n_phi {
                let phi = two_pi * (j as f64 + 0.5) / n_phi as f64;
                let (chart, r, ang) = if x >= 0.0 {
                    (Chart::Zeta, ((1.0 - x) / (1.0 + x)).sqrt(), phi)
                } else {
                    (Chart::W, ((1.0 + x) / (1.0 - x)).sqrt(), -phi)
                };
                let z = Complex::new(T::lit(r * ang.cos()), T::lit(r * ang.sin()));
                nodes.push(NodeGeom::new(chart, z));
                weights.push(T::lit(w * two_pi / n_phi as f64));
            }
        }

        // normalize each basis function under the quadrature inner product
        for f in basis.iter_mut() {
            let c = f.component();
            let norm2 = nodes
                .iter()
                .zip(&weights)
                .fold(T::zero(), |a, (g, &w)| a + w * f.jet(g.chart, g.z).v.norm_sqr());
            f.scale = T::one() / norm2.sqrt();
            debug_assert!(c < 2);
        }

        let jets: Vec<Vec<SpinorJet<T>>> = basis
            .iter()
            .map(|f| {
                nodes
                    .iter()
                    .map(|g| {
                        let mut j = [ComponentJet::zero(); 2];
                        j[f.component()] = f.jet(g.chart, g.z);
                        j
                    })
                    .collect()
            })
            .collect();

        let nb = basis.len();
        let nn = nodes.len();
        let mut values = DMatrix::zeros(2 * nn, nb);
        for (b, col) in jets.iter().enumerate() {
            for (n, j) in col.iter().enumerate() {
                values[(2 * n, b)] = j[0].v;
                values[(2 * n + 1, b)] = j[1].v;
            }
        }

        let mut model = Self {
            resolution,
            basis,
            nodes,
            weights,
            jets,
            values,
            cl: Clifford2::new(),
            dirac: DMatrix::zeros(0, 0),
            dirac_tilde: DMatrix::zeros(0, 0),
            bochner: DMatrix::zeros(0, 0),
            nabla10: DMatrix::zeros(0, 0),
            nabla01: DMatrix::zeros(0, 0),
            rho: DMatrix::zeros(0, 0),
            tolerance: T::zero(),
        };

        let gram = model.galerkin_of(&model.values.clone());
        let defect = (&gram - DMatrix::identity(nb, nb)).iter().fold(T::zero(), |a, c| a.max(c.norm_sqr().sqrt()));
        if defect > precision_tol::<T>(1e-10) {
            return Err(Error::Convergence { iterations: 0, residual: defect.to_f64_lossy() });
        }

        let cl = model.cl.clone();
        model.dirac = model.assemble_pointwise(|g, j| cl.dirac(g, j));
        model.dirac_tilde = model.assemble_pointwise(|g, j| cl.dirac_tilde(g, j));
        model.bochner = model.assemble_pointwise(|g, j| g.bochner_frame(j));
        model.nabla10 = model.assemble_pointwise(|g, j| g.nabla10_laplacian(j));
        model.nabla01 = model.assemble_pointwise(|g, j| g.nabla01_laplacian(j));
        let omega = cl.module().kahler_form();
        let rho_scale = re(T::lit(SCALAR_CURVATURE / 2.0));
        model.rho = model.assemble_pointwise(|_, j| {
            let m = omega.matrix();
            [
                rho_scale * (m[(0, 0)] * j[0].v + m[(0, 1)] * j[1].v),
                rho_scale * (m[(1, 0)] * j[0].v + m[(1, 1)] * j[1].v),
            ]
        });
        model.tolerance = model.calibrate_tolerance()?;
        Ok(model)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisFunction<T>] {
        &self.basis
    }

    pub fn nodes(&self) -> &[NodeGeom<T>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn clifford(&self) -> &Clifford2<T> {
        &self.cl
    }

    /// `tolerance(L)`: ten times the worst Killing-spinor residual of the first
    /// eigenspinors, floored at [`TOLERANCE_FLOOR`].
    pub fn tolerance(&self) -> T {
        self.tolerance
    }

    /// `B^H W F` for nodal columns `F`.
    fn galerkin_of(&self, nodal: &DMatrix<Complex<T>>) -> DMatrix<Complex<T>> {
        let mut weighted = nodal.clone();
        for (n, &w) in self.weights.iter().enumerate() {
            weighted.row_mut(2 * n).scale_mut(w);
            weighted.row_mut(2 * n + 1).scale_mut(w);
        }
        self.values.adjoint() * weighted
    }

    fn assemble_pointwise(&self, op: impl Fn(&NodeGeom<T>, &SpinorJet<T>) -> SpinorValue<T>) -> DMatrix<Complex<T>> {
        let mut nodal = DMatrix::zeros(2 * self.nodes.len(), self.basis.len());
        for (b, col) in self.jets.iter().enumerate() {
            for (n, (g, j)) in self.nodes.iter().zip(col).enumerate() {
                let v = op(g, j);
                nodal[(2 * n, b)] = v[0];
                nodal[(2 * n + 1, b)] = v[1];
            }
        }
        self.galerkin_of(&nodal)
    }

    fn field_jets(&self, f: &SphereField<T>) -> Result<Vec<SpinorJet<T>>> {
        self.check(f)?;
        let mut out = vec![[ComponentJet::zero(); 2]; self.nodes.len()];
        for (b, col) in self.jets.iter().enumerate() {
            let c = f.coeffs[b];
            if c == zero() {
                continue;
            }
            let comp = self.basis[b].component();
            for (acc, j) in out.iter_mut().zip(col) {
                let (a, s) = (&mut acc[comp], &j[comp]);
                a.v += c * s.v;
                a.d += c * s.d;
                a.db += c * s.db;
                a.dd += c * s.dd;
                a.ddb += c * s.ddb;
                a.dbdb += c * s.dbdb;
            }
        }
        Ok(out)
    }

    fn check(&self, f: &SphereField<T>) -> Result<()> {
        if f.coeffs.len() != self.dim() {
            return Err(Error::Shape { expected: self.dim(), got: f.coeffs.len() });
        }
        Ok(())
    }

    fn pointwise(&self, f: &SphereField<T>, op: impl Fn(&NodeGeom<T>, &SpinorJet<T>) -> SpinorValue<T>) -> Result<NodalField<T>> {
        let jets = self.field_jets(f)?;
        Ok(NodalField { values: self.nodes.iter().zip(&jets).map(|(g, j)| op(g, j)).collect() })
    }

    pub fn zero_field(&self) -> SphereField<T> {
        SphereField { coeffs: DVector::zeros(self.dim()) }
    }

    pub fn field(&self, coeffs: DVector<Complex<T>>) -> Result<SphereField<T>> {
        let f = SphereField { coeffs };
        self.check(&f)?;
        Ok(f)
    }

    pub fn random_field<R: Rng + ?Sized>(&self, rng: &mut R) -> SphereField<T> {
        SphereField {
            coeffs: DVector::from_fn(self.dim(), |_, _| {
                Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
            }),
        }
    }

    /// `L²` inner product (basis is orthonormal).
    pub fn inner(&self, f: &SphereField<T>, g: &SphereField<T>) -> Complex<T> {
        f.coeffs.dotc(&g.coeffs)
    }

    pub fn norm(&self, f: &SphereField<T>) -> T {
        f.coeffs.norm()
    }

    /// Quadrature `L²` norm of nodal values.
    pub fn nodal_norm(&self, f: &NodalField<T>) -> T {
        f.values
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |a, (v, &w)| a + w * (v[0].norm_sqr() + v[1].norm_sqr()))
            .sqrt()
    }

    pub fn apply(&self, m: &DMatrix<Complex<T>>, f: &SphereField<T>) -> SphereField<T> {
        SphereField { coeffs: m * &f.coeffs }
    }

    pub fn nodal_values(&self, f: &SphereField<T>) -> Result<NodalField<T>> {
        self.pointwise(f, |_, j| [j[0].v, j[1].v])
    }

    /// Value of `f` at chart coordinate `z`, in that chart's frame.
    pub fn evaluate(&self, f: &SphereField<T>, chart: Chart, z: Complex<T>) -> Result<SpinorValue<T>> {
        self.check(f)?;
        let modulus = z.norm_sqr().sqrt();
        if !(modulus <= T::lit(CHART_LIMIT)) {
            return Err(Error::ChartDomain { modulus: modulus.to_f64_lossy(), limit: CHART_LIMIT });
        }
        let mut out = [zero(); 2];
        for (b, basis) in self.basis.iter().enumerate() {
            out[basis.component()] += f.coeffs[b] * basis.jet(chart, z).v;
        }
        Ok(out)
    }

    /// Projection of nodal values onto the basis.
    pub fn project(&self, f: &NodalField<T>) -> SphereField<T> {
        let mut nodal = DVector::zeros(2 * self.nodes.len());
        for (n, v) in f.values.iter().enumerate() {
            nodal[2 * n] = v[0] * re(self.weights[n]);
            nodal[2 * n + 1] = v[1] * re(self.weights[n]);
        }
        SphereField { coeffs: self.values.adjoint() * nodal }
    }

    pub fn dirac_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.dirac
    }

    pub fn dirac_tilde_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.dirac_tilde
    }

    /// `D₊ = ½(D − iD̃)`.
    pub fn d_plus_matrix(&self) -> DMatrix<Complex<T>> {
        (&self.dirac - &self.dirac_tilde * Complex::new(T::zero(), T::one())) * re(T::lit(0.5))
    }

    /// `D₋ = ½(D + iD̃)`.
    pub fn d_minus_matrix(&self) -> DMatrix<Complex<T>> {
        (&self.dirac + &self.dirac_tilde * Complex::new(T::zero(), T::one())) * re(T::lit(0.5))
    }

    pub fn dirac_squared_matrix(&self) -> DMatrix<Complex<T>> {
        &self.dirac * &self.dirac
    }

    /// `∇*∇` assembled from the frame formula with Levi-Civita corrections.
    pub fn bochner_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.bochner
    }

    pub fn nabla10_laplacian_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.nabla10
    }

    pub fn nabla01_laplacian_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.nabla01
    }

    /// Ricci form `ρ = (R/2)Ω` acting fibrewise.
    pub fn rho_matrix(&self) -> &DMatrix<Complex<T>> {
        &self.rho
    }

    /// Orthogonal projector onto `S_r`-valued fields, `r ∈ {0, 1}`.
    pub fn projector(&self, r: usize) -> Result<DMatrix<Complex<T>>> {
        check_index(r, 0, 1)?;
        Ok(DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.basis.iter().map(|b| if b.component() == r { re(T::one()) } else { zero() }),
        )))
    }

    /// Basis indices of `S_r`-valued basis functions.
    pub fn sr_indices(&self, r: usize) -> Result<Vec<usize>> {
        check_index(r, 0, 1)?;
        Ok((0..self.dim()).filter(|&b| self.basis[b].component() == r).collect())
    }

    /// Compression of `m` to the `S_r` block.
    pub fn restrict(&self, m: &DMatrix<Complex<T>>, r: usize) -> Result<DMatrix<Complex<T>>> {
        let idx = self.sr_indices(r)?;
        Ok(DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])]))
    }

    /// `∇_X f` at the nodes, `X` given by constant coefficients in each node's chart frame.
    pub fn covariant_derivative(&self, x: &ComplexVector<T>, f: &SphereField<T>) -> Result<NodalField<T>> {
        if x.len() != 2 {
            return Err(Error::Shape { expected: 2, got: x.len() });
        }
        self.pointwise(f, |g, j| g.nabla(x, j))
    }

    /// `C(X_k, X_l) f` at the nodes, `k, l ∈ {1, 2}`.
    pub fn spin_curvature(&self, k: usize, l: usize, f: &SphereField<T>) -> Result<NodalField<T>> {
        let xk = ComplexVector::frame(1, k)?;
        let xl = ComplexVector::frame(1, l)?;
        self.curvature(&xk, &xl, f)
    }

    /// `C(V, W) f` for complex constant-frame-coefficient vectors.
    pub fn curvature(&self, v: &ComplexVector<T>, w: &ComplexVector<T>, f: &SphereField<T>) -> Result<NodalField<T>> {
        for x in [v, w] {
            if x.len() != 2 {
                return Err(Error::Shape { expected: 2, got: x.len() });
            }
        }
        self.pointwise(f, |g, j| g.curvature(v, w, j))
    }

    /// Clifford multiplication of nodal values by a constant-frame-coefficient vector.
    pub fn clifford_nodal(&self, v: &ComplexVector<T>, f: &NodalField<T>) -> NodalField<T> {
        NodalField { values: f.values.iter().map(|s| self.cl.mul(v, s)).collect() }
    }

    /// Pointwise `D₊ = X_k · ∇_{p̄(X_k)}` at the nodes.
    pub fn d_plus_nodal(&self, f: &SphereField<T>) -> Result<NodalField<T>> {
        self.pointwise(f, |g, j| self.cl.d_plus_frame(g, j))
    }

    /// Pointwise `D₋ = X_k · ∇_{p(X_k)}` at the nodes.
    pub fn d_minus_nodal(&self, f: &SphereField<T>) -> Result<NodalField<T>> {
        self.pointwise(f, |g, j| self.cl.d_minus_frame(g, j))
    }

    /// Pointwise `D` at the nodes.
    pub fn dirac_nodal(&self, f: &SphereField<T>) -> Result<NodalField<T>> {
        self.pointwise(f, |g, j| self.cl.dirac(g, j))
    }

    /// `X⟨f, g⟩ − ⟨∇_X f, g⟩ − ⟨f, ∇_X g⟩`, worst node, for a real frame vector `X`.
    pub fn metric_compatibility_residual(&self, x: &ComplexVector<T>, f: &SphereField<T>, g: &SphereField<T>) -> Result<T> {
        let jf = self.field_jets(f)?;
        let jg = self.field_jets(g)?;
        let mut worst = T::zero();
        for ((geom, a), b) in self.nodes.iter().zip(&jf).zip(&jg) {
            let c = geom.coord(x);
            // ∂⟨f,g⟩ = ⟨∂̄f, g⟩ + ⟨f, ∂g⟩ componentwise
            let mut lhs = zero::<T>();
            for i in 0..2 {
                let d = a[i].db.conj() * b[i].v + a[i].v.conj() * b[i].d;
                let db = a[i].d.conj() * b[i].v + a[i].v.conj() * b[i].db;
                lhs += c.a * d + c.b * db;
            }
            let nf = geom.nabla(x, a);
            let ng = geom.nabla(x, b);
            let rhs = (0..2).fold(zero::<T>(), |acc, i| acc + nf[i].conj() * b[i].v + a[i].v.conj() * ng[i]);
            let diff: Complex<T> = lhs - rhs;
            worst = worst.max(diff.norm_sqr().sqrt());
        }
        Ok(worst)
    }

    /// `‖∇f‖² = Σ_k ‖∇_{X_k} f‖²` by quadrature.
    pub fn gradient_norm_squared(&self, f: &SphereField<T>) -> Result<T> {
        let mut acc = T::zero();
        for k in 1..=2 {
            let x = ComplexVector::frame(1, k)?;
            let n = self.nodal_norm(&self.covariant_derivative(&x, f)?);
            acc += n * n;
        }
        Ok(acc)
    }

    /// The `S₁`-valued section determined by the holomorphic datum `a + bζ`:
    /// `ψ₋ = √2 (a + bζ)(1+|ζ|²)^{-1/2}` in the `ζ` chart.
    pub fn holomorphic_section(&self, a: Complex<T>, b: Complex<T>) -> SphereField<T> {
        let sqrt2 = re(T::lit(2.0).sqrt());
        let values = self
            .nodes
            .iter()
            .map(|g| {
                let s = (T::one() + g.z.norm_sqr()).sqrt();
                let v = match g.chart {
                    Chart::Zeta => sqrt2 * (a + b * g.z) / re(s),
                    // ψ^w_ε = (iζ/|ζ|)^ε ψ^ζ_ε with ζ = 1/w
                    Chart::W => -Complex::new(T::zero(), T::one()) * sqrt2 * (a * g.z + b) / re(s),
                };
                [zero(), v]
            })
            .collect();
        self.project(&NodalField { values })
    }

    /// Residuals of the holomorphic-spinor identities for `f`, relative to its size.
    pub fn verify_holomorphic(&self, f: &SphereField<T>) -> Result<HolomorphicResiduals<T>> {
        self.check(f)?;
        let scale = self.nodal_values(f)?.sup_norm();
        let coef_scale = self.norm(f);
        if scale == T::zero() {
            return Ok(HolomorphicResiduals {
                nabla01: T::zero(),
                d_plus: T::zero(),
                ricci_contraction: T::zero(),
                d_plus_d_minus: T::zero(),
                dirac_squared: T::zero(),
                bochner: T::zero(),
                einstein_eigenvalue: T::zero(),
            });
        }
        let quarter_r = re(T::lit(SCALAR_CURVATURE / 4.0));
        let half_i = Complex::new(T::zero(), T::lit(0.5));

        let mut nabla01 = T::zero();
        let mut ricci_contraction = T::zero();
        let d_minus = self.apply(&self.d_minus_matrix(), f);
        for k in 1..=2 {
            let x = ComplexVector::frame(1, k)?;
            nabla01 = nabla01.max(self.covariant_derivative(&x.p_bar(), f)?.sup_norm());
            // Ric(X) = X on the unit sphere
            let lhs = self.covariant_derivative(&x.p_bar(), &d_minus)?;
            let rhs = self.clifford_nodal(&x.p_bar(), &self.nodal_values(f)?).scale(re(T::lit(0.5)));
            let sum = NodalField { values: lhs.values.iter().zip(&rhs.values).map(|(a, b)| [a[0] + b[0], a[1] + b[1]]).collect() };
            ricci_contraction = ricci_contraction.max(sum.sup_norm());
        }
        let d_plus = self.d_plus_nodal(f)?.sup_norm();

        let rho_f = &self.rho * &f.coeffs;
        let target = &f.coeffs * quarter_r + &rho_f * half_i;
        let dpdm = self.d_plus_matrix() * &d_minus.coeffs;
        let d2 = &self.dirac * (&self.dirac * &f.coeffs);
        let bochner = &self.bochner * &f.coeffs - &rho_f * half_i;
        let einstein = &d2 - &f.coeffs;
        Ok(HolomorphicResiduals {
            nabla01: nabla01 / scale,
            d_plus: d_plus / scale,
            ricci_contraction: ricci_contraction / scale,
            d_plus_d_minus: (dpdm - &target).norm() / coef_scale,
            dirac_squared: (&d2 - &target).norm() / coef_scale,
            bochner: bochner.norm() / coef_scale,
            einstein_eigenvalue: einstein.norm() / coef_scale,
        })
    }

    fn hermitian(&self, m: DMatrix<Complex<T>>, label: &str) -> Result<OperatorMatrix<T>> {
        OperatorMatrix::dense(m, Symmetry::Hermitian, label)
    }

    /// Analytic `D²` spectrum: `n²` with multiplicity `4n`.
    fn dirac_squared_oracle(&self, k: usize, restrict: bool) -> Vec<T> {
        let per = if restrict { 2 } else { 4 };
        (1..).flat_map(|n: usize| std::iter::repeat_n(T::of_usize(n * n), per * n)).take(k).collect()
    }

    fn cluster_gap(&self) -> T {
        (self.tolerance * T::lit(100.0)).max(T::lit(1e-6))
    }

    /// Lowest `k` eigenvalues of `D²` with the analytic oracle attached.
    pub fn spectrum(&self, k: usize) -> Result<SpectrumReport<T>> {
        let op = self.hermitian(self.dirac_squared_matrix(), &format!("sphere D^2 (L={})", self.resolution))?;
        let rep = eigensolve(&op, k)?;
        Ok(rep.with_oracle(self.dirac_squared_oracle(k, false)).with_cluster_gap(self.cluster_gap()))
    }

    /// Lowest `k` eigenvalues of `D²` on `S_r`-valued fields.
    pub fn spectrum_on(&self, r: usize, k: usize) -> Result<SpectrumReport<T>> {
        let block = self.restrict(&self.dirac_squared_matrix(), r)?;
        let op = self.hermitian(block, &format!("sphere D^2 on S_{r} (L={})", self.resolution))?;
        let rep = eigensolve(&op, k)?;
        Ok(rep.with_oracle(self.dirac_squared_oracle(k, true)).with_cluster_gap(self.cluster_gap()))
    }

    /// Full `D` spectrum, ascending, with the analytic oracle `±n` (multiplicity `2n`).
    pub fn dirac_spectrum(&self) -> Result<SpectrumReport<T>> {
        let op = self.hermitian(self.dirac.clone(), &format!("sphere D (L={})", self.resolution))?;
        let rep = eigensolve(&op, self.dim())?;
        let l = self.resolution;
        let mut oracle: Vec<T> = (1..=l)
            .flat_map(|n| {
                let v = T::of_usize(n);
                std::iter::repeat_n(v, 2 * n).chain(std::iter::repeat_n(-v, 2 * n))
            })
            .collect();
        oracle.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        Ok(rep.with_oracle(oracle).with_cluster_gap(self.cluster_gap()))
    }

    /// `ker ∇^{0,1}` on `S_r`-valued fields, via `∇^{0,1*}∇^{0,1}`.
    pub fn holomorphic_kernel(&self, r: usize, tol: T) -> Result<KernelBasis<T>> {
        let block = self.restrict(&self.nabla01, r)?;
        let op = self.hermitian(block, "sphere nabla01 laplacian")?;
        kernel_basis(&op, tol)
    }

    /// Embeds `S_r`-block coefficients into a full field.
    pub fn embed(&self, r: usize, v: &DVector<Complex<T>>) -> Result<SphereField<T>> {
        let idx = self.sr_indices(r)?;
        if v.len() != idx.len() {
            return Err(Error::Shape { expected: idx.len(), got: v.len() });
        }
        let mut coeffs = DVector::zeros(self.dim());
        for (a, &i) in idx.iter().enumerate() {
            coeffs[i] = v[a];
        }
        Ok(SphereField { coeffs })
    }

    /// Worst `sup|∇_X ψ + (λ/2) X·ψ| / sup|ψ|` over the `λ = ±1` eigenspinors and frame vectors.
    pub fn killing_residual(&self) -> Result<T> {
        let op = self.hermitian(self.dirac.clone(), "sphere D")?;
        let rep = eigensolve(&op, self.dim())?;
        let mut worst = T::zero();
        for (lambda, v) in rep.eigenvalues.iter().zip(&rep.eigenvectors) {
            if (lambda.abs() - T::one()).abs() > T::lit(1e-6) {
                continue;
            }
            let f = SphereField { coeffs: v.clone() };
            let vals = self.nodal_values(&f)?;
            let scale = vals.sup_norm();
            for k in 1..=2 {
                let x = ComplexVector::frame(1, k)?;
                let nab = self.covariant_derivative(&x, &f)?;
                let cl = self.clifford_nodal(&x, &vals).scale(re(*lambda / T::lit(2.0)));
                let sum = NodalField { values: nab.values.iter().zip(&cl.values).map(|(a, b)| [a[0] + b[0], a[1] + b[1]]).collect() };
                worst = worst.max(sum.sup_norm() / scale);
            }
        }
        Ok(worst)
    }

    fn calibrate_tolerance(&self) -> Result<T> {
        Ok((self.killing_residual()? * T::lit(10.0)).max(T::lit(TOLERANCE_FLOOR)))
    }
}

/// Shorthand for [`SphereModel::new`].
pub fn make_sphere<T: Real>(resolution: usize) -> Result<SphereModel<T>> {
    SphereModel::new(resolution)
}
