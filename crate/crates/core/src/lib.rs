//! Maximum-entropy reconstruction of quantum states from partial measurements.
//!
//! The numerical core is generic over [`Real`] (implemented for `f32` and
//! `f64`); the aliases below fix the scalar to `f64`.

pub mod circuit;
pub mod error;
pub mod linalg;
pub mod maxent;
pub mod pauli;
pub mod sampler;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{NumericPolicy, Real};

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type DensityMatrix64 = maxent::DensityMatrix<f64>;
pub type LagrangeSet64 = maxent::LagrangeSet<f64>;
pub type MeasurementRecord64 = maxent::MeasurementRecord<f64>;
pub type Reconstruction64 = maxent::Reconstruction<f64>;
pub type Circuit64 = circuit::Circuit<f64>;
pub type StateVector64 = circuit::StateVector<f64>;
pub type Backend64 = sampler::Backend<f64>;
pub type ReadoutNoise64 = sampler::ReadoutNoise<f64>;
pub type CalibrationMatrix64 = sampler::CalibrationMatrix<f64>;
