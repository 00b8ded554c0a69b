use std::collections::HashMap;
use std::fmt;

use num_complex::Complex;

use super::{Pauli, PauliString};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Exact coefficient `i^phase / 2^log2_denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DyadicPhase {
    phase: u8,
    log2_denominator: u32,
}

impl DyadicPhase {
    pub fn new(phase: u8, log2_denominator: u32) -> Self {
        DyadicPhase {
            phase: phase % 4,
            log2_denominator,
        }
    }

    /// Power of `i` in `0..4`.
    pub fn phase(self) -> u8 {
        self.phase
    }

    pub fn log2_denominator(self) -> u32 {
        self.log2_denominator
    }

    pub fn conj(self) -> Self {
        DyadicPhase::new((4 - self.phase) % 4, self.log2_denominator)
    }

    pub fn to_complex<T: Real>(self) -> Complex<T> {
        let mag = T::lit(0.5).powi(self.log2_denominator as i32);
        match self.phase {
            0 => Complex::new(mag, T::zero()),
            1 => Complex::new(T::zero(), mag),
            2 => Complex::new(-mag, T::zero()),
            _ => Complex::new(T::zero(), -mag),
        }
    }
}

impl fmt::Display for DyadicPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.phase >= 2 { "-" } else { "+" };
        let unit = if self.phase % 2 == 1 { "i" } else { "1" };
        write!(f, "{sign}{unit}/{}", 1u64 << self.log2_denominator)
    }
}

/// `|i><j|` written as a sum of Pauli strings with exact coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDecomposition {
    num_qubits: usize,
    terms: Vec<(PauliString, DyadicPhase)>,
}

impl PauliDecomposition {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Non-zero terms in lexicographic order of the strings.
    pub fn terms(&self) -> &[(PauliString, DyadicPhase)] {
        &self.terms
    }

    pub fn coefficient(&self, p: &PauliString) -> Option<DyadicPhase> {
        self.terms
            .binary_search_by(|(q, _)| q.cmp(p))
            .ok()
            .map(|idx| self.terms[idx].1)
    }

    /// Strings whose means must be measured (all but the identity).
    pub fn required_strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().map(|(p, _)| p).filter(|p| !p.is_identity())
    }

    /// `Σ c_P P` as a dense matrix.
    pub fn reassemble<T: Real>(&self) -> ComplexMatrix<T> {
        let dim = 1 << self.num_qubits;
        self.terms.iter().fold(ComplexMatrix::zeros(dim), |acc, (p, c)| {
            &acc + &p.matrix::<T>().scale(c.to_complex())
        })
    }
}

impl fmt::Display for PauliDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in &self.terms {
            writeln!(f, "{p} {c}")?;
        }
        Ok(())
    }
}

/// Decomposes `|i><j|` (1-based basis indices on `n` qubits) qubit by qubit:
/// equal bits give `(I ± Z)/2`, differing bits give `(X ± iY)/2`.
pub fn decompose_ketbra(i: usize, j: usize, n: usize) -> Result<PauliDecomposition> {
    if n == 0 || n > 16 {
        return Err(Error::validation(format!("qubit count {n} outside 1..=16")));
    }
    let dim = 1usize << n;
    for idx in [i, j] {
        if idx == 0 || idx > dim {
            return Err(Error::IndexOutOfRange { index: idx, dim });
        }
    }
    let (bi, bj) = (i - 1, j - 1);
    // Per qubit: two (letter, phase) options.
    let factors: Vec<[(Pauli, u8); 2]> = (0..n)
        .map(|q| match ((bi >> q) & 1, (bj >> q) & 1) {
            (0, 0) => [(Pauli::I, 0), (Pauli::Z, 0)],
            (1, 1) => [(Pauli::I, 0), (Pauli::Z, 2)],
            (0, 1) => [(Pauli::X, 0), (Pauli::Y, 1)],
            _ => [(Pauli::X, 0), (Pauli::Y, 3)],
        })
        .collect();

    let mut terms = Vec::with_capacity(dim);
    for choice in 0..dim {
        let mut letters = Vec::with_capacity(n);
        let mut phase = 0u8;
        for (q, f) in factors.iter().enumerate() {
            let (p, ph) = f[(choice >> q) & 1];
            letters.push(p);
            phase += ph;
        }
        terms.push((PauliString::new(letters)?, DyadicPhase::new(phase, n as u32)));
    }
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(PauliDecomposition { num_qubits: n, terms })
}

/// `Σ c_P <P>` from measured Pauli means; the identity mean is 1.
pub fn expectation_from_paulis<T: Real>(
    d: &PauliDecomposition,
    pauli_means: &HashMap<PauliString, T>,
) -> Result<Complex<T>> {
    let missing: Vec<String> = d
        .required_strings()
        .filter(|p| !pauli_means.contains_key(*p))
        .map(|p| p.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::IncompleteData(missing));
    }
    Ok(d.terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (p, c)| {
        let mean = if p.is_identity() { T::one() } else { pauli_means[p] };
        acc + c.to_complex::<T>() * mean
    }))
}
