//! Pauli-string expansions of coherence operators and the matching measurement settings.

mod decompose;
mod settings;
mod string;

pub use decompose::{decompose_ketbra, expectation_from_paulis, DyadicPhase, PauliDecomposition};
pub use settings::{measurement_settings, MeasurementSetting};
pub use string::{Pauli, PauliString};
