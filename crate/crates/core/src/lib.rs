//! Spinor algebra and Dirac operators on Kähler manifolds.
//!
//! Exact finite-dimensional algebra lives in [`spin_module`] and
//! [`kahler_point`]; [`torus`] and [`sphere`] realize the differential
//! operators on a flat torus and on the round 2-sphere. Everything is generic
//! over [`Real`]; the `*64` aliases fix `f64`.

pub mod error;
pub mod kahler_point;
pub mod numerics;
pub mod scalar;
pub mod sphere;
pub mod spin_module;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{Complex, Real};

pub type Complex64 = Complex<f64>;
pub type SpinModule64 = spin_module::SpinModule<f64>;
pub type Spinor64 = spin_module::Spinor<f64>;
pub type Endomorphism64 = spin_module::Endomorphism<f64>;
pub type ComplexVector64 = spin_module::ComplexVector<f64>;
pub type RicciProfile64 = kahler_point::RicciProfile<f64>;
pub type TorusModel64 = torus::TorusModel<f64>;
pub type TorusField64 = torus::TorusField<f64>;
pub type SphereModel64 = sphere::SphereModel<f64>;
pub type SphereField64 = sphere::SphereField<f64>;
pub type OperatorMatrix64 = numerics::OperatorMatrix<f64>;
pub type SpectrumReport64 = numerics::SpectrumReport<f64>;
pub type SpinModule32 = spin_module::SpinModule<f32>;
