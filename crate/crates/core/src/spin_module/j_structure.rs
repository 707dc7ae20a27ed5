//! The quaternionic/real structure `j`: an antilinear map commuting with
//! Clifford multiplication by real vectors.
//!
//! `j = C ∘ conj`, where `conj` conjugates coordinates in the standard basis.
//! Real-vector commutation needs `C ē_k C⁻¹ = e_k`. In the standard basis the
//! odd generators are real and the even ones purely imaginary, so `C` must
//! commute with every `e_{2k-1}` and anticommute with every `e_{2k}`; the
//! product of all odd generators does this for odd `m`, the product of all
//! even generators for even `m`.

use super::{MonomialOp, SpinModule, Spinor};
use crate::scalar::Real;

impl<T: Real> SpinModule<T> {
    /// The Clifford element `C` with `j = C ∘ conj`.
    pub fn j_element(&self) -> MonomialOp<T> {
        let start = if self.m % 2 == 1 { 1 } else { 2 };
        let indices: Vec<usize> = (0..self.m).map(|k| 2 * k + start).collect();
        self.clifford_product(&indices).expect("generator indices in range")
    }

    pub fn j_apply(&self, psi: &Spinor<T>) -> Spinor<T> {
        self.j_element().apply(&psi.conjugate())
    }

    /// Expected sign of `j²`, namely `(-1)^{m(m+1)/2}`.
    pub fn j_squared_sign(&self) -> i32 {
        if (self.m * (self.m + 1) / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }
}
