//! Exact-algebra invariant suite over the spin module and pointwise Ricci data.
//!
//! Each check reports the largest absolute residual found; a check passes
//! when that residual stays below [`ALGEBRA_TOL`] (scaled up for `f32`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::kahler_point::{eta_endomorphism, ric_splitting, ricci_eigenvalue_set, ricci_endomorphism, splitting_scalar, RicciProfile};
use crate::numerics::{hermitian_eigen, precision_tol};
use crate::scalar::{binomial, imag_unit, real, Complex, Real};
use crate::spin_module::{ComplexVector, Endomorphism, FormElement, FormKind, SpinModule, Spinor};

/// Absolute tolerance for identities that hold exactly in the spin module.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for eigenvalue sets obtained by numerical diagonalization.
pub const EIGEN_TOL: f64 = 1e-10;
/// Random samples per randomized check.
pub const SAMPLES: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: &'static str,
    pub description: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_residual.is_finite() && self.max_residual < self.tolerance
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlgebraReport {
    pub m: usize,
    pub checks: Vec<Check>,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn get(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = format!("# verify-algebra m={} status={}\n", self.m, if self.passed() { "pass" } else { "fail" });
        out.push_str("check\tmax_residual\ttolerance\tstatus\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{}\t{:.1e}\t{:.0e}\t{}\n",
                c.label,
                c.max_residual,
                c.tolerance,
                if c.passed() { "pass" } else { "fail" }
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.m,
            "status": if self.passed() { "pass" } else { "fail" },
            "checks": self.checks.iter().map(|c| serde_json::json!({
                "check": c.label,
                "description": c.description,
                "max_residual": c.max_residual,
                "tolerance": c.tolerance,
                "status": if c.passed() { "pass" } else { "fail" },
            })).collect::<Vec<_>>(),
        })
    }
}

fn diff<T: Real>(a: &Endomorphism<T>, b: &Endomorphism<T>) -> f64 {
    a.max_abs_diff(b).to_f64_lossy()
}

fn spinor_diff<T: Real>(a: &Spinor<T>, b: &Spinor<T>) -> f64 {
    (a - b).max_abs().to_f64_lossy()
}

fn frame<T: Real>(m: usize, k: usize) -> ComplexVector<T> {
    ComplexVector::frame(m, k).expect("frame index in range")
}

fn random_profile<T: Real, R: Rng>(m: usize, rng: &mut R) -> Result<RicciProfile<T>> {
    let rho: Vec<T> = (0..m).map(|_| T::lit(rng.gen_range(-2.0..2.0))).collect();
    let r = rho.iter().fold(T::zero(), |a, &x| a + x) * T::lit(2.0);
    RicciProfile::new(rho, r)
}

/// `Ric(X_{2k-1}) = ρ_k X_{2k-1}`, `Ric(X_{2k}) = ρ_k X_{2k}`.
fn ricci_of<T: Real>(profile: &RicciProfile<T>, k: usize) -> ComplexVector<T> {
    frame(profile.m(), k).scale(real(profile.rho()[(k - 1) / 2]))
}

fn restricted_spectrum<T: Real>(e: &Endomorphism<T>, keep: &[usize]) -> Vec<f64> {
    let restricted = nalgebra::DMatrix::from_fn(keep.len(), keep.len(), |a, b| e.matrix()[(keep[a], keep[b])]);
    hermitian_eigen(&restricted).0.into_iter().map(|x| x.to_f64_lossy()).collect()
}

/// Runs every exact-algebra check at complex dimension `m`.
pub fn verify_algebra<T: Real>(m: usize, seed: u64) -> Result<AlgebraReport> {
    let sm = SpinModule::<T>::new(m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ m as u64);
    let tol = precision_tol::<T>(ALGEBRA_TOL).to_f64_lossy();
    let eig_tol = precision_tol::<T>(EIGEN_TOL).to_f64_lossy();
    let n = 2 * m;
    let dim = sm.dim();
    let id = Endomorphism::<T>::identity(dim);
    let gens: Vec<Endomorphism<T>> = sm.generators().iter().map(|g| g.to_dense()).collect();
    let mut checks = Vec::new();
    let mut push = |label, description, max_residual: f64, tolerance| {
        checks.push(Check { label, description, max_residual, tolerance })
    };

    let mut worst = 0f64;
    for k in 0..n {
        for l in 0..n {
            let anti = gens[k].compose(&gens[l]).add(&gens[l].compose(&gens[k]));
            let target = if k == l { id.scale(real(T::lit(-2.0))) } else { Endomorphism::zeros(dim) };
            worst = worst.max(diff(&anti, &target));
        }
    }
    push("clifford_relation", "e_k e_l + e_l e_k = -2 delta_kl", worst, tol);

    let mut worst = 0f64;
    for g in &gens {
        worst = worst.max(diff(&g.adjoint().compose(g), &id));
        worst = worst.max(diff(&g.adjoint(), &g.scale(real(-T::one()))));
    }
    push("generator_unitary", "e_k^H e_k = Id and e_k^H = -e_k", worst, tol);

    let mut worst = 0f64;
    for idx in 0..dim {
        let u = sm.basis_spinor(idx);
        let signs = sm.sign_vector(idx)?;
        for k in 0..m {
            let lhs = gens[2 * k].apply(&gens[2 * k + 1].apply(&u)?)?;
            let rhs = u.scale(Complex::new(T::zero(), T::lit(signs[k] as f64)));
            worst = worst.max(spinor_diff(&lhs, &rhs));
        }
    }
    push("bivector_on_basis", "e_{2k-1} e_{2k} u_eps = i eps_k u_eps", worst, tol);

    let omega = sm.kahler_form();
    let mut sum = Endomorphism::zeros(dim);
    for k in 1..=n {
        let x = frame::<T>(m, k);
        sum = sum.add(&sm.clifford_matrix(&x.j())?.compose(&sm.clifford_matrix(&x)?));
    }
    let mut worst = diff(&sum.scale(real(T::lit(0.5))), &omega);
    let mut bivectors = Endomorphism::zeros(dim);
    for k in 0..m {
        bivectors = bivectors.add(&gens[2 * k].compose(&gens[2 * k + 1]));
    }
    worst = worst.max(diff(&bivectors, &omega));
    push("kahler_form", "Omega = sum e_{2k-1} e_{2k} = 1/2 sum J(X_k) X_k", worst, tol);

    let minus_i_omega = omega.scale(-imag_unit::<T>());
    let computed = restricted_spectrum(&minus_i_omega, &(0..dim).collect::<Vec<_>>());
    let mut expected: Vec<f64> = (0..=m)
        .flat_map(|r| std::iter::repeat_n(m as f64 - 2.0 * r as f64, binomial(m, r)))
        .collect();
    expected.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let worst = computed.iter().zip(&expected).fold(0f64, |a, (x, y)| a.max((x - y).abs()));
    push("kahler_grading", "Omega has eigenvalues i(m-2r) with multiplicity C(m,r)", worst, tol);

    let mut worst = 0f64;
    for r in 0..=m {
        let p = sm.sr_projector(r)?;
        worst = worst.max(diff(&p.compose(&p), &p)).max(diff(&p.adjoint(), &p));
        let grading = omega.compose(&p).sub(&p.scale(Complex::new(T::zero(), T::of_usize(m) - T::of_usize(2 * r))));
        worst = worst.max(grading.matrix().iter().fold(0f64, |a, c| a.max(c.norm_sqr().sqrt().to_f64_lossy())));
        for _ in 0..SAMPLES {
            let psi = sm.project_sr(&sm.random_spinor(&mut rng), r)?;
            for k in 1..=n {
                let x = frame::<T>(m, k);
                let up = sm.clifford_mul(&x.p(), &psi)?;
                let down = sm.clifford_mul(&x.p_bar(), &psi)?;
                let up_off = if r < m { &up - &sm.project_sr(&up, r + 1)? } else { up };
                let down_off = if r > 0 { &down - &sm.project_sr(&down, r - 1)? } else { down };
                worst = worst.max(up_off.max_abs().to_f64_lossy()).max(down_off.max_abs().to_f64_lossy());
            }
        }
    }
    push("grading_shift", "S_r projectors; p(X) raises and pbar(X) lowers r", worst, tol);

    let mut worst = 0f64;
    let s0 = sm.basis_spinor(0);
    for r in 0..=m {
        let images: Vec<Spinor<T>> = (0usize..1 << m)
            .filter(|mask| mask.count_ones() as usize == r)
            .map(|mask| {
                let idx: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect();
                let w = FormElement::monomial(m, FormKind::AntiHolomorphic, &idx)?;
                sm.alpha(&w, &s0)
            })
            .collect::<Result<_>>()?;
        for (a, u) in images.iter().enumerate() {
            let off = u - &sm.project_sr(u, r)?;
            worst = worst.max(off.max_abs().to_f64_lossy());
            for (b, v) in images.iter().enumerate() {
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((u.inner(v) - real(target)).norm_sqr().sqrt().to_f64_lossy());
            }
        }
    }
    push("alpha_isometry", "alpha_r maps an orthonormal basis of Lambda^{0,r} x S_0 onto one of S_r", worst, tol);

    let mut w_diag = 0f64;
    let mut w_contract = 0f64;
    let mut w_jform = 0f64;
    let mut w_einstein = 0f64;
    for _ in 0..SAMPLES {
        let profile = random_profile::<T, _>(m, &mut rng)?;
        let rho = ricci_endomorphism(&profile, &sm)?;
        let half_r = profile.scalar_curvature() / T::lit(2.0);
        for idx in 0..dim {
            let signs = sm.sign_vector(idx)?;
            let s = (0..m).fold(T::zero(), |a, k| a + T::lit(signs[k] as f64) * profile.rho()[k]);
            let u = sm.basis_spinor(idx);
            w_diag = w_diag.max(spinor_diff(&rho.apply(&u)?, &u.scale(Complex::new(T::zero(), s))));
        }
        let mut explicit = Endomorphism::zeros(dim);
        for k in 0..m {
            explicit = explicit.add(&gens[2 * k].compose(&gens[2 * k + 1]).scale(real(profile.rho()[k])));
        }
        w_diag = w_diag.max(diff(&explicit, &rho));

        let mut lower = Endomorphism::zeros(dim);
        let mut upper = Endomorphism::zeros(dim);
        let mut jform = Endomorphism::zeros(dim);
        for k in 1..=n {
            let xk = sm.clifford_matrix(&frame(m, k))?;
            let ric = ricci_of(&profile, k);
            lower = lower.add(&xk.compose(&sm.clifford_matrix(&ric.p_bar())?));
            upper = upper.add(&xk.compose(&sm.clifford_matrix(&ric.p())?));
            jform = jform.add(&sm.clifford_matrix(&frame::<T>(m, k).j())?.compose(&sm.clifford_matrix(&ric)?));
        }
        let scalar = id.scale(real(-half_r));
        let i_rho = rho.scale(imag_unit::<T>());
        w_contract = w_contract.max(diff(&lower, &scalar.sub(&i_rho))).max(diff(&upper, &scalar.add(&i_rho)));
        w_jform = w_jform.max(diff(&jform.scale(real(T::lit(0.5))), &rho));

        let big_r = T::lit(rng.gen_range(-5.0..5.0));
        let einstein = ricci_endomorphism(&RicciProfile::einstein(m, big_r)?, &sm)?;
        w_einstein = w_einstein.max(diff(&einstein, &omega.scale(real(big_r / T::of_usize(2 * m)))));
    }
    push("ricci_on_basis", "rho = sum rho_k e_{2k-1} e_{2k} acts by i(sum eps_k rho_k)", w_diag, tol);
    push("ricci_contraction", "X^k pbar(Ric X_k) = -R/2 - i rho and X^k p(Ric X_k) = -R/2 + i rho", w_contract, tol);
    push("ricci_form_via_j", "rho = 1/2 J(X^k) Ric(X_k)", w_jform, tol);
    push("einstein_ricci_form", "Einstein profile gives rho = (R/2m) Omega", w_einstein, tol);

    let mut worst = 0f64;
    for _ in 0..SAMPLES {
        let profile = random_profile::<T, _>(m, &mut rng)?;
        let minus_i_rho = ricci_endomorphism(&profile, &sm)?.scale(-imag_unit::<T>());
        for r in 0..=m {
            let computed = restricted_spectrum(&minus_i_rho, &sm.sr_indices(r)?);
            let expected: Vec<f64> = ricci_eigenvalue_set(&profile, r)?
                .into_iter()
                .flat_map(|(v, k)| std::iter::repeat_n(v.to_f64_lossy(), k))
                .collect();
            if computed.len() != expected.len() {
                worst = f64::INFINITY;
                continue;
            }
            worst = computed.iter().zip(&expected).fold(worst, |a, (x, y)| a.max((x - y).abs()));
        }
    }
    push("ricci_eigenvalue_set", "spectrum of -i rho on S_r is {R/2 - 2 sum of r of the rho_k}", worst, eig_tol);

    if m >= 2 {
        let big_r = T::lit(rng.gen_range(0.5..6.0));
        let rho = ricci_endomorphism(&RicciProfile::condition_ric(m, big_r)?, &sm)?;
        let minus_i_rho = rho.scale(-imag_unit::<T>());
        let eta = eta_endomorphism(m, big_r, &sm)?;
        let mut w_split = 0f64;
        let mut w_eta = 0f64;
        for r in 1..m {
            let (b0, b1) = ric_splitting(m, big_r, r, &sm)?;
            if b0.dim() != binomial(m - 1, r) || b1.dim() != binomial(m - 1, r - 1) {
                w_split = f64::INFINITY;
            }
            w_split = w_split.max(b0.gram_defect().to_f64_lossy()).max(b1.gram_defect().to_f64_lossy());
            for (basis, eps) in [(&b0, 0usize), (&b1, 1usize)] {
                let c = splitting_scalar(m, big_r, r, eps);
                let eta_val = if eps == 0 { imag_unit::<T>() } else { -imag_unit::<T>() };
                for v in &basis.vectors {
                    w_split = w_split.max(spinor_diff(&minus_i_rho.apply(v)?, &v.scale(real(c))));
                    w_eta = w_eta.max(spinor_diff(&eta.apply(v)?, &v.scale(eta_val)));
                }
            }
        }
        let last_pair = gens[n - 2].compose(&gens[n - 1]);
        w_eta = w_eta.max(diff(&eta, &last_pair)).max(diff(&eta.compose(&eta), &id.scale(real(-T::one()))));
        let rebuilt = omega.sub(&eta).scale(real(big_r / T::of_usize(2 * m - 2)));
        w_eta = w_eta.max(diff(&rebuilt, &rho));
        push("ric_splitting", "-i rho acts on S_{r,eps} by R/(2m-2) (m-1-2(r-eps))", w_split, tol);
        push("eta_form", "eta = X_{n-1} X_n is +-i on S_{r,0}/S_{r,1}; rho = R/(2m-2) (Omega - eta)", w_eta, tol);
    }

    let mut worst = 0f64;
    let sign = real(T::lit(sm.j_squared_sign() as f64));
    for idx in 0..dim {
        let u = sm.basis_spinor(idx);
        let r = SpinModule::<T>::degree_of(idx);
        let ju = sm.j_apply(&u);
        worst = worst.max(spinor_diff(&ju, &sm.project_sr(&ju, m - r)?));
        worst = worst.max(spinor_diff(&sm.j_apply(&ju), &u.scale(sign)));
    }
    for _ in 0..SAMPLES {
        let psi = sm.random_spinor(&mut rng);
        let c = Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)));
        worst = worst.max(spinor_diff(&sm.j_apply(&psi.scale(c)), &sm.j_apply(&psi).scale(c.conj())));
        worst = worst.max((sm.j_apply(&psi).norm() - psi.norm()).abs().to_f64_lossy());
        worst = worst.max(spinor_diff(&sm.j_apply(&sm.j_apply(&psi)), &psi.scale(sign)));
        let coeffs: Vec<T> = (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
        let x = ComplexVector::from_real(&coeffs)?;
        worst = worst.max(spinor_diff(&sm.j_apply(&sm.clifford_mul(&x, &psi)?), &sm.clifford_mul(&x, &sm.j_apply(&psi))?));
    }
    push("j_structure", "j antilinear, isometric, commutes with real X, j S_r = S_{m-r}, j^2 = (-1)^{m(m+1)/2}", worst, tol);

    Ok(AlgebraReport { m, checks })
}
