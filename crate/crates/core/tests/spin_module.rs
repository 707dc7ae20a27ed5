use kahler_spin::spin_module::{ComplexVector, FormElement, FormKind, SpinModule, Spinor};
use kahler_spin::{Complex64, Error, SpinModule64};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
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

#[test]
fn m1_generators_anticommute_and_square_to_minus_one() {
    let sm = SpinModule64::new(1).unwrap();
    assert_eq!(sm.dim(), 2);
    let e1 = sm.generator(1).unwrap().to_dense();
    let e2 = sm.generator(2).unwrap().to_dense();
    let id = DMatrix::<Complex64>::identity(2, 2);
    assert_eq!(e1.matrix() * e1.matrix(), -&id);
    assert_eq!(e1.matrix() * e2.matrix() + e2.matrix() * e1.matrix(), DMatrix::zeros(2, 2));
    let plus = sm.basis_spinor(sm.index_of(&[1]).unwrap());
    let img = e1.apply(&e2.apply(&plus).unwrap()).unwrap();
    assert_eq!(img, plus.scale(c(0.0, 1.0)));
}

#[test]
fn m3_kahler_form_spectrum_by_brute_force() {
    let sm = SpinModule64::new(3).unwrap();
    let omega = sm.kahler_form();
    let herm = omega.matrix() * c(0.0, -1.0);
    let eig = herm.symmetric_eigen();
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let expected = [3.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -3.0];
    for (v, e) in values.iter().zip(expected) {
        assert!((v - e).abs() < 1e-12);
    }
}

#[test]
fn make_spin_module_rejects_out_of_range() {
    assert!(matches!(SpinModule64::new(0), Err(Error::Size(_))));
    assert!(matches!(SpinModule64::new(13), Err(Error::Size(_))));
    assert_eq!(SpinModule64::new(12).unwrap().dim(), 4096);
}

#[test]
fn clifford_mul_twice_by_unit_vector() {
    let sm = SpinModule64::new(2).unwrap();
    let x1 = ComplexVector::frame(2, 1).unwrap();
    for i in 0..4 {
        let u = sm.basis_spinor(i);
        let twice = sm.clifford_mul(&x1, &sm.clifford_mul(&x1, &u).unwrap()).unwrap();
        assert_eq!(twice, -&u);
    }
}

#[test]
fn p_raises_and_p_bar_annihilates_s0() {
    for m in 1..=4 {
        let sm = SpinModule64::new(m).unwrap();
        let s0 = sm.sr_indices(0).unwrap();
        for k in 1..=2 * m {
            let x = ComplexVector::frame(m, k).unwrap();
            for i in 0..sm.dim() {
                let u = sm.basis_spinor(i);
                let r = sm.sign_vector(i).unwrap().iter().filter(|&&e| e == -1).count();
                let up = sm.clifford_mul(&x.p(), &u).unwrap();
                if r < m {
                    assert!((&up - &sm.project_sr(&up, r + 1).unwrap()).max_abs() < 1e-14);
                } else {
                    assert!(up.max_abs() < 1e-14);
                }
            }
            for &i in &s0 {
                let down = sm.clifford_mul(&x.p_bar(), &sm.basis_spinor(i)).unwrap();
                assert!(down.max_abs() < 1e-14);
            }
        }
    }
}

#[test]
fn clifford_mul_shape_mismatch() {
    let sm = SpinModule64::new(2).unwrap();
    let x = ComplexVector::frame(3, 1).unwrap();
    assert!(matches!(sm.clifford_mul(&x, &sm.basis_spinor(0)), Err(Error::Shape { .. })));
    let x = ComplexVector::frame(2, 1).unwrap();
    assert!(matches!(sm.clifford_mul(&x, &Spinor::zeros(8)), Err(Error::Shape { .. })));
}

#[test]
fn kahler_two_form_acts_by_grading() {
    let m = 3;
    let sm = SpinModule64::new(m).unwrap();
    let omega = FormElement::kahler(m);
    for i in 0..sm.dim() {
        let r = sm.sign_vector(i).unwrap().iter().filter(|&&e| e == -1).count();
        let u = sm.basis_spinor(i);
        let img = sm.form_mul(&omega, &u).unwrap();
        assert!((&img - &u.scale(c(0.0, m as f64 - 2.0 * r as f64))).max_abs() < 1e-14);
    }
}

#[test]
fn degree_zero_form_is_identity() {
    let sm = SpinModule64::new(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let psi = sm.random_spinor(&mut rng);
    let one = FormElement::scalar(2, FormKind::Real, c(1.0, 0.0));
    assert_eq!(sm.form_mul(&one, &psi).unwrap(), psi);
}

#[test]
fn top_antiholomorphic_form_maps_s0_onto_s2() {
    let sm = SpinModule64::new(2).unwrap();
    let w = FormElement::monomial(2, FormKind::AntiHolomorphic, &[1, 2]).unwrap();
    let s0 = sm.basis_spinor(sm.sr_indices(0).unwrap()[0]);
    let img = sm.form_mul(&w, &s0).unwrap();
    assert!(img.norm() > 0.5);
    assert!((&img - &sm.project_sr(&img, 2).unwrap()).max_abs() < 1e-14);
}

#[test]
fn form_degree_above_limit_is_rejected() {
    let sm = SpinModule64::new(2).unwrap();
    let w = FormElement::monomial(2, FormKind::Real, &[1, 2, 3]).unwrap();
    assert!(sm.form_mul(&w, &sm.basis_spinor(0)).is_ok());
    assert!(FormElement::<f64>::monomial(2, FormKind::AntiHolomorphic, &[1, 2, 3]).is_err());
}

#[test]
fn projections_parseval_and_exactness() {
    let sm = SpinModule64::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi = sm.random_spinor(&mut rng);
    let total: f64 = (0..=4).map(|r| sm.project_sr(&psi, r).unwrap().norm().powi(2)).sum();
    assert!((total - psi.norm().powi(2)).abs() < 1e-12);
    for r in 0..=4 {
        assert_eq!(sm.sr_indices(r).unwrap().len(), binom(4, r));
        for &i in &sm.sr_indices(r).unwrap() {
            let u = sm.basis_spinor(i);
            assert_eq!(sm.project_sr(&u, r).unwrap(), u);
            if r < 4 {
                assert!(sm.project_sr(&u, r + 1).unwrap().max_abs() < 1e-15);
            }
        }
    }
    assert!(matches!(sm.project_sr(&psi, 5), Err(Error::Index { .. })));
}

#[test]
fn j_structure_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sm1 = SpinModule64::new(1).unwrap();
    let psi = sm1.random_spinor(&mut rng);
    assert!((&sm1.j_apply(&sm1.j_apply(&psi)) + &psi).max_abs() < 1e-15);
    let sm4 = SpinModule64::new(4).unwrap();
    let psi = sm4.random_spinor(&mut rng);
    assert!((&sm4.j_apply(&sm4.j_apply(&psi)) - &psi).max_abs() < 1e-15);
    let sm2 = SpinModule64::new(2).unwrap();
    let u = sm2.basis_spinor(sm2.sr_indices(0).unwrap()[0]);
    let ju = sm2.j_apply(&u);
    assert!((&ju - &sm2.project_sr(&ju, 2).unwrap()).max_abs() < 1e-15);
}

#[test]
fn endomorphism_json_round_trip() {
    let sm = SpinModule64::new(2).unwrap();
    let omega = sm.kahler_form();
    let json = serde_json::to_string(&omega.to_json()).unwrap();
    let back = kahler_spin::Endomorphism64::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
    assert_eq!(back, omega);
}

#[test]
fn single_precision_module_satisfies_clifford_relation() {
    let sm = SpinModule::<f32>::new(3).unwrap();
    let gens: Vec<_> = sm.generators().iter().map(|g| g.to_dense()).collect();
    for a in &gens {
        for b in &gens {
            let anti = a.compose(b).add(&b.compose(a));
            let off = anti.matrix().iter().filter(|z| z.norm() > 0.0).count();
            assert!(off == 0 || off == 8);
        }
    }
}

fn real_vector(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0f64..3.0, 2 * m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn real_vector_squares_to_minus_norm(m in 1usize..=4, seed in any::<u64>(), v in real_vector(4)) {
        let sm = SpinModule64::new(m).unwrap();
        let x = ComplexVector::from_real(&v[..2 * m]).unwrap();
        let norm2: f64 = v[..2 * m].iter().map(|a| a * a).sum();
        let psi = sm.random_spinor(&mut ChaCha8Rng::seed_from_u64(seed));
        let twice = sm.clifford_mul(&x, &sm.clifford_mul(&x, &psi).unwrap()).unwrap();
        prop_assert!((&twice + &psi.scale(c(norm2, 0.0))).max_abs() < 1e-12 * (1.0 + norm2));
    }

    #[test]
    fn clifford_mul_is_bilinear(m in 1usize..=3, seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let sm = SpinModule64::new(m).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = ComplexVector::frame(m, 1).unwrap().p();
        let y = ComplexVector::frame(m, 2 * m).unwrap();
        let psi = sm.random_spinor(&mut rng);
        let phi = sm.random_spinor(&mut rng);
        let s = c(a, b);
        let lhs = sm.clifford_mul(&x.add(&y.scale(s)), &(&psi + &phi.scale(s))).unwrap();
        let rhs = &(&sm.clifford_mul(&x, &psi).unwrap() + &sm.clifford_mul(&x, &phi).unwrap().scale(s))
            + &(&sm.clifford_mul(&y, &psi).unwrap().scale(s) + &sm.clifford_mul(&y, &phi).unwrap().scale(s * s));
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn monomial_forms_are_antisymmetric(i in 1usize..=6, j in 1usize..=6, seed in any::<u64>()) {
        prop_assume!(i != j);
        let sm = SpinModule64::new(3).unwrap();
        let psi = sm.random_spinor(&mut ChaCha8Rng::seed_from_u64(seed));
        let ij = FormElement::monomial(3, FormKind::Real, &[i, j]).unwrap();
        let ji = FormElement::monomial(3, FormKind::Real, &[j, i]).unwrap();
        let a = sm.form_mul(&ij, &psi).unwrap();
        let b = sm.form_mul(&ji, &psi).unwrap();
        prop_assert!((&a + &b).max_abs() < 1e-14);
    }

    #[test]
    fn p_and_p_bar_split_vectors(v in real_vector(3)) {
        let x = ComplexVector::from_real(&v).unwrap();
        let sum = x.p().add(&x.p_bar());
        prop_assert!((sum.coeffs() - x.coeffs()).norm() < 1e-14);
        let jp = x.p().j();
        prop_assert!((jp.coeffs() - x.p().scale(c(0.0, 1.0)).coeffs()).norm() < 1e-14);
    }
}
