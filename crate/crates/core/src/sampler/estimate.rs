use std::collections::HashMap;

use num_complex::Complex;

use super::{build_calibration, mitigate_frequencies, sample_counts, CalibrationMatrix, ReadoutNoise, StreamKey};
use crate::circuit::{simulate, Circuit, StateVector};
use crate::error::{Error, Result};
use crate::maxent::{MeasurementRecord, Target};
use crate::pauli::{decompose_ketbra, expectation_from_paulis, measurement_settings, PauliString};
use crate::scalar::Real;

/// Exact expectations, or a finite number of shots per measurement setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotMode {
    Exact,
    Finite(u64),
}

/// Measurement backend: shot mode, optional readout noise and optional mitigation.
#[derive(Debug, Clone, PartialEq)]
pub struct Backend<T> {
    pub shots: ShotMode,
    pub noise: Option<ReadoutNoise<T>>,
    pub calibration: Option<CalibrationMatrix<T>>,
}

impl<T: Real> Backend<T> {
    /// Noise-free infinite-shot backend (statevector expectations).
    pub fn exact() -> Self {
        Backend {
            shots: ShotMode::Exact,
            noise: None,
            calibration: None,
        }
    }

    pub fn with_shots(shots: u64) -> Self {
        Backend {
            shots: ShotMode::Finite(shots),
            ..Self::exact()
        }
    }

    pub fn noisy(mut self, noise: ReadoutNoise<T>) -> Self {
        self.noise = Some(noise);
        self
    }

    /// Mitigates with the calibration matching the configured noise model.
    pub fn mitigated(mut self) -> Self {
        self.calibration = self.noise.as_ref().map(build_calibration);
        self
    }

    pub fn with_calibration(mut self, cal: CalibrationMatrix<T>) -> Self {
        self.calibration = Some(cal);
        self
    }

    /// Outcome distribution of `sv` in the computational basis as this backend reports it.
    pub fn distribution(&self, sv: &StateVector<T>, key: StreamKey) -> Result<Vec<T>> {
        let raw = match self.shots {
            ShotMode::Exact => {
                let p = sv.populations();
                match &self.noise {
                    Some(noise) => {
                        noise.check_qubits(sv.num_qubits())?;
                        build_calibration(noise).apply(&p)
                    }
                    None => p,
                }
            }
            ShotMode::Finite(shots) => sample_counts(sv, shots, self.noise.as_ref(), key)?.frequencies(),
        };
        match &self.calibration {
            Some(cal) => mitigate_frequencies(&raw, cal),
            None => Ok(raw),
        }
    }

    pub fn populations(&self, c: &Circuit<T>, key: StreamKey) -> Result<Vec<T>> {
        self.distribution(&simulate(c), key)
    }

    pub fn pauli_mean(&self, c: &Circuit<T>, p: &PauliString, key: StreamKey) -> Result<T> {
        if p.num_qubits() != c.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: c.num_qubits(),
                actual: p.num_qubits(),
            });
        }
        let setting = measurement_settings(p)?;
        let rotated = setting.append_to(c)?;
        let dist = self.distribution(&simulate(&rotated), key)?;
        Ok(dist.iter().enumerate().map(|(b, &w)| setting.parity_sign(b) * w).sum())
    }

    /// `<psi| (|i><j|) |psi>` from Pauli means; string `s` of the expansion uses stream `key.child(s)`.
    pub fn coherence(&self, c: &Circuit<T>, i: usize, j: usize, key: StreamKey) -> Result<Complex<T>> {
        let d = decompose_ketbra(i, j, c.num_qubits())?;
        let mut means = HashMap::new();
        for (idx, p) in d.required_strings().enumerate() {
            means.insert(p.clone(), self.pauli_mean(c, p, key.child(idx as u64))?);
        }
        expectation_from_paulis(&d, &means)
    }

    /// Record for `target`: populations from a computational-basis run on
    /// `key.child(0)`, `x1K = <|K><1|>` from Pauli settings on later streams.
    pub fn record(&self, c: &Circuit<T>, target: Target, with_xkk: bool, key: StreamKey) -> Result<MeasurementRecord<T>> {
        let dim = 1usize << c.num_qubits();
        if target.dim_n() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: target.dim_n(),
            });
        }
        let k = target.index_k();
        let pops = self.populations(c, key.child(0))?;
        let x1k = self.coherence(c, k, 1, key.child(1))?;
        let clamp = |x: T| x.max(T::zero()).min(T::one());
        MeasurementRecord::from_estimates(target, clamp(pops[0]), x1k, with_xkk.then(|| clamp(pops[k - 1])))
    }
}

/// Mean of the parity of `p` after its basis change.
pub fn estimate_pauli<T: Real>(
    c: &Circuit<T>,
    p: &PauliString,
    shots: ShotMode,
    noise: Option<&ReadoutNoise<T>>,
    key: impl Into<StreamKey>,
) -> Result<T> {
    let backend = Backend {
        shots,
        noise: noise.cloned(),
        calibration: None,
    };
    backend.pauli_mean(c, p, key.into())
}

/// Coherence `<psi| (|i><j|) |psi>` estimated through its Pauli expansion.
pub fn estimate_coherence<T: Real>(
    c: &Circuit<T>,
    i: usize,
    j: usize,
    shots: ShotMode,
    noise: Option<&ReadoutNoise<T>>,
    key: impl Into<StreamKey>,
) -> Result<Complex<T>> {
    if i == j {
        return Err(Error::validation("a coherence needs two distinct basis indices"));
    }
    let backend = Backend {
        shots,
        noise: noise.cloned(),
        calibration: None,
    };
    backend.coherence(c, i, j, key.into())
}
