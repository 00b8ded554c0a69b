use super::{Pauli, PauliString};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Basis change that turns a Pauli string into a Z-parity measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSetting<T> {
    pub pauli: PauliString,
    /// Gates appended after the state preparation, in order.
    pub rotations: Vec<Gate<T>>,
    /// Bit `q` set when qubit `q` enters the parity.
    pub mask: usize,
}

impl<T: Real> MeasurementSetting<T> {
    /// `+1` or `-1` for a measured basis index.
    pub fn parity_sign(&self, outcome: usize) -> T {
        if (outcome & self.mask).count_ones().is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        }
    }

    /// `prep` followed by the pre-rotations.
    pub fn append_to(&self, prep: &Circuit<T>) -> Result<Circuit<T>> {
        let mut c = prep.clone();
        for g in &self.rotations {
            c.push(g.clone())?;
        }
        Ok(c)
    }
}

/// X is measured after `H`, Y after `S†` (as `RZ(-π/2)`) then `H`; Z and I need nothing.
pub fn measurement_settings<T: Real>(p: &PauliString) -> Result<MeasurementSetting<T>> {
    if p.is_identity() {
        return Err(Error::validation("the identity string has mean 1 and needs no measurement"));
    }
    let mut rotations = Vec::new();
    for (q, letter) in p.letters().iter().enumerate() {
        match letter {
            Pauli::X => rotations.push(Gate::h(q)),
            Pauli::Y => {
                rotations.push(Gate::rz(-T::FRAC_PI_2(), q));
                rotations.push(Gate::h(q));
            }
            Pauli::I | Pauli::Z => {}
        }
    }
    Ok(MeasurementSetting {
        pauli: p.clone(),
        rotations,
        mask: p.support_mask(),
    })
}
