//! Acceptance run: one `criterion N: PASS|FAIL` line per criterion.

use std::time::Instant;

use kahler_spin::kahler_point::{
    condition_holds, eta_endomorphism, even_ric_threshold, ric_splitting, ricci_endomorphism, ricci_eigenvalue_set,
    ric_threshold, vanishing_check, Direction, Verdict,
};
use kahler_spin::verify::verify_algebra;
use kahler_spin::{Complex64, RicciProfile64, SphereModel64, SpinModule64, TorusField64, TorusModel64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn restrict(m: &DMatrix<Complex64>, idx: &[usize]) -> DMatrix<Complex64> {
    DMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
}

fn herm_eigs(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn op_norm(m: &DMatrix<Complex64>) -> f64 {
    m.clone().singular_values().iter().fold(0f64, |a, &s| a.max(s))
}

fn random_profile(rng: &mut ChaCha8Rng, m: usize) -> RicciProfile64 {
    let rho: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..3.0)).collect();
    let r = 2.0 * rho.iter().sum::<f64>();
    RicciProfile64::new(rho, r).unwrap()
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn algebra_suite() -> Outcome {
    let start = Instant::now();
    let mut worst = 0f64;
    let mut bad = Vec::new();
    for m in 1..=6 {
        let rep = verify_algebra::<f64>(m, 7).unwrap();
        for ch in &rep.checks {
            worst = worst.max(ch.max_residual);
            if !(ch.max_residual < 1e-12) {
                bad.push(format!("m={m}:{}", ch.label));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: bad.is_empty() && secs < 30.0,
        detail: format!("max_residual={worst:.2e} tol=1e-12 runtime={secs:.2}s limit=30s failing=[{}]", bad.join(",")),
    }
}

fn ricci_combinatorics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut eig_worst = 0f64;
    let mut mult_ok = true;
    let mut eta_worst = 0f64;
    let mut reassembly = 0f64;
    for m in 2..=6 {
        let sm = SpinModule64::new(m).unwrap();
        // generic profiles against the subset-sum formula
        for _ in 0..3 {
            let p = random_profile(&mut rng, m);
            let minus_i_rho = ricci_endomorphism(&p, &sm).unwrap().matrix() * c(0.0, -1.0);
            for r in 0..=m {
                let brute = herm_eigs(&restrict(&minus_i_rho, &sm.sr_indices(r).unwrap()));
                let set: Vec<f64> = ricci_eigenvalue_set(&p, r).unwrap().into_iter().flat_map(|(v, k)| std::iter::repeat_n(v, k)).collect();
                mult_ok &= set.len() == brute.len();
                for (a, b) in brute.iter().zip(&set) {
                    eig_worst = eig_worst.max((a - b).abs());
                }
            }
        }
        // condition (Ric): two eigenvalues on S_r with multiplicities C(m-1, r-ε)
        let big_r = 1.0 + m as f64;
        let ric = RicciProfile64::condition_ric(m, big_r).unwrap();
        let rho = ricci_endomorphism(&ric, &sm).unwrap();
        let minus_i_rho = rho.matrix() * c(0.0, -1.0);
        let eta = eta_endomorphism(m, big_r, &sm).unwrap();
        for r in 1..m {
            let brute = herm_eigs(&restrict(&minus_i_rho, &sm.sr_indices(r).unwrap()));
            for eps in 0..=1usize {
                let expected = big_r / (2.0 * m as f64 - 2.0) * (m as f64 - 1.0 - 2.0 * (r as f64 - eps as f64));
                let count = brute.iter().filter(|v| (*v - expected).abs() < 1e-10).count();
                mult_ok &= count == binom(m - 1, r - eps);
            }
            let (b0, b1) = ric_splitting(m, big_r, r, &sm).unwrap();
            for (basis, sign) in [(&b0, 1.0), (&b1, -1.0)] {
                for v in &basis.vectors {
                    let img = eta.apply(v).unwrap();
                    eta_worst = eta_worst.max((&img - &v.scale(c(0.0, sign))).max_abs());
                }
            }
        }
        let omega = sm.kahler_form();
        let rebuilt = (omega.matrix() - eta.matrix()) * c(big_r / (2.0 * m as f64 - 2.0), 0.0);
        reassembly = reassembly.max((rebuilt - rho.matrix()).iter().fold(0f64, |a, z| a.max(z.norm())));
    }
    Outcome {
        passed: eig_worst < 1e-10 && mult_ok && eta_worst < 1e-12 && reassembly < 1e-12,
        detail: format!(
            "eigen_residual={eig_worst:.2e} tol=1e-10 multiplicities={} eta_residual={eta_worst:.2e} reassembly={reassembly:.2e} tol=1e-12",
            if mult_ok { "match" } else { "mismatch" }
        ),
    }
}

/// Sorted `|ξ|²` over the box `|ξ_i| ≤ n`, each repeated `2^m` times.
fn lattice_oracle(m: usize, n: i64) -> Vec<f64> {
    let side = (2 * n + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(2 * m as u32) {
        let mut rest = code;
        let mut norm2 = 0i64;
        for _ in 0..2 * m {
            let x = (rest % side) as i64 - n;
            rest /= side;
            norm2 += x * x;
        }
        out.extend(std::iter::repeat_n(norm2 as f64, 1 << m));
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn torus_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut identity = 0f64;
    let mut spectral = 0f64;
    let mut kernels_ok = true;
    for (m, n) in [(1usize, 4usize), (2, 2)] {
        let t = TorusModel64::new(m, n).unwrap();
        for _ in 0..100 {
            let f = t.random_field(&mut rng);
            let d = t.dirac(&f).unwrap();
            let dp = t.d_plus(&f).unwrap();
            let dm = t.d_minus(&f).unwrap();
            let d2 = t.dirac(&d).unwrap();
            let residuals = [
                d.sub(&dp.add(&dm)).max_abs(),
                t.d_plus(&dp).unwrap().max_abs(),
                t.d_minus(&dm).unwrap().max_abs(),
                d2.sub(&t.d_plus(&dm).unwrap().add(&t.d_minus(&dp).unwrap())).max_abs(),
                t.bochner(&f).unwrap().sub(&d2).max_abs(),
            ];
            identity = residuals.iter().fold(identity, |a, &b| a.max(b));
        }
        let rep = t.spectrum(t.dim()).unwrap();
        let oracle = lattice_oracle(m, n as i64);
        kernels_ok &= rep.eigenvalues.len() == oracle.len();
        for (a, b) in rep.eigenvalues.iter().zip(&oracle) {
            spectral = spectral.max((a - b).abs());
        }
    }
    for (m, n) in [(1usize, 4usize), (2, 2)] {
        let t = TorusModel64::new(m, n).unwrap();
        for r in 0..=m {
            let ker: Vec<TorusField64> = t.holomorphic_kernel(r).unwrap();
            kernels_ok &= ker.len() == binom(m, r);
            kernels_ok &= ker.iter().all(|f| f.modes().all(|(k, v)| k.iter().all(|&x| x == 0) || v.max_abs() == 0.0));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: identity < 1e-12 && spectral < 1e-12 && kernels_ok && secs < 60.0,
        detail: format!(
            "identity_residual={identity:.2e} tol=1e-12 lattice_error={spectral:.2e} kernels={} runtime={secs:.2}s limit=60s",
            if kernels_ok { "constant,dim=C(m,r)" } else { "mismatch" }
        ),
    }
}

fn sphere_spectral() -> Outcome {
    let start = Instant::now();
    let s = SphereModel64::new(16).unwrap();
    let d = s.dirac_spectrum().unwrap();
    let mut level_err = 0f64;
    let mut counts_ok = true;
    for n in 1..=5usize {
        for sign in [1.0, -1.0] {
            let target = sign * n as f64;
            let near: Vec<f64> = d.eigenvalues.iter().copied().filter(|v| (v - target).abs() < 0.5).collect();
            counts_ok &= near.len() == 2 * n;
            level_err = near.iter().fold(level_err, |a, v| a.max((v - target).abs()));
        }
    }
    let d2 = s.spectrum(4).unwrap();
    let lambda1 = d2.eigenvalues[0];
    // (m+1)R/(4m) with m = 1, R = 2
    let bound = 2.0 * 2.0 / 4.0;
    let s0_min = s.spectrum_on(0, 1).unwrap().eigenvalues[0];
    let ker = s.holomorphic_kernel(1, 1e-8).unwrap().dim();
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        passed: level_err < 1e-3 && counts_ok && (lambda1 - 1.0).abs() < 1e-3 && (lambda1 - bound).abs() < 1e-3 && s0_min >= 0.99 && ker == 2 && secs < 300.0,
        detail: format!(
            "dirac_level_error={level_err:.2e} tol=1e-3 multiplicities={} lambda1_sq={lambda1:.12} bound={bound} min_S0={s0_min:.6} ker_dim={ker} runtime={secs:.1}s limit=300s",
            if counts_ok { "2n" } else { "mismatch" }
        ),
    }
}

fn sphere_holomorphic() -> Outcome {
    let s = SphereModel64::new(12).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut worst = 0f64;
    let mut family = vec![(c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0))];
    for _ in 0..6 {
        family.push((c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    }
    for (a, b) in family {
        let r = s.verify_holomorphic(&s.holomorphic_section(a, b)).unwrap();
        worst = worst.max(r.worst());
    }
    let d2 = s.dirac_squared_matrix();
    let id: DMatrix<Complex64> = DMatrix::identity(s.dim(), s.dim());
    let half_i_rho = s.rho_matrix() * c(0.0, 0.5);
    let quarter_r = &id * c(0.5, 0.0);
    let r10 = s.nabla10_laplacian_matrix() * c(2.0, 0.0) - (&d2 - &quarter_r + &half_i_rho);
    let r01 = s.nabla01_laplacian_matrix() * c(2.0, 0.0) - (&d2 - &quarter_r - &half_i_rho);
    let opn = op_norm(&r10).max(op_norm(&r01));
    Outcome {
        passed: worst < 1e-5 && opn < 1e-4,
        detail: format!("sections=8 max_relative_residual={worst:.2e} tol=1e-5 operator_norm_residual={opn:.2e} tol=1e-4"),
    }
}

fn vanishing_checker() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut disagreements = 0;
    for _ in 0..1000 {
        let m = rng.gen_range(1..=8);
        let p = random_profile(&mut rng, m);
        let r = rng.gen_range(0..=m);
        let direction = if rng.gen_bool(0.5) { Direction::Holomorphic } else { Direction::Antiholomorphic };
        let sm = SpinModule64::new(m).unwrap();
        let minus_i_rho = ricci_endomorphism(&p, &sm).unwrap().matrix() * c(0.0, -1.0);
        let eig = herm_eigs(&restrict(&minus_i_rho, &sm.sr_indices(r).unwrap()));
        let slack = 1e-9 * p.scalar_curvature().abs().max(1.0);
        let oracle = match direction {
            Direction::Holomorphic => eig[0] >= -slack,
            Direction::Antiholomorphic => *eig.last().unwrap() <= slack,
        };
        if condition_holds(&p, r, direction).unwrap().0 != oracle {
            disagreements += 1;
        }
    }
    let mut threshold_bad = Vec::new();
    for m in 3..=8usize {
        for big_r in [0.5, 2.0, 9.0] {
            let ric = RicciProfile64::condition_ric(m, big_r).unwrap();
            for r in 0..=m {
                for direction in [Direction::Holomorphic, Direction::Antiholomorphic] {
                    let expect = match direction {
                        Direction::Holomorphic => 2 * r < m,
                        Direction::Antiholomorphic => 2 * r > m,
                    };
                    let got = vanishing_check(std::slice::from_ref(&ric), r, direction).unwrap().verdict == Verdict::Vanishes;
                    if got != expect || ric_threshold(m, direction).contains(&r) != expect {
                        threshold_bad.push(format!("m={m},r={r},{direction:?}"));
                    }
                }
                if m % 2 == 0 && m >= 4 && even_ric_threshold(m).unwrap().contains(&r) != (2 * r + 2 <= m) {
                    threshold_bad.push(format!("even m={m},r={r}"));
                }
            }
        }
    }
    threshold_bad.dedup();
    Outcome {
        passed: disagreements == 0 && threshold_bad.is_empty(),
        detail: format!("profiles=1000 disagreements={disagreements} threshold_mismatches=[{}]", threshold_bad.join(",")),
    }
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 6] = [
        (1, algebra_suite),
        (2, ricci_combinatorics),
        (3, torus_suite),
        (4, sphere_spectral),
        (5, sphere_holomorphic),
        (6, vanishing_checker),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        let out = run();
        println!("criterion {n}: {} {}", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        if !out.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 6 passed", 6 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
