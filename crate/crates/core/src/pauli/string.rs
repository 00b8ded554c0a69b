use std::fmt;
use std::str::FromStr;

use num_complex::Complex;

use crate::circuit::StateVector;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix<T: Real>(self) -> ComplexMatrix<T> {
        let o = re(T::zero());
        let l = re(T::one());
        let i = Complex::new(T::zero(), T::one());
        let rows = match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        };
        ComplexMatrix::from_row_major(rows.concat()).expect("2x2")
    }
}

/// Tensor product of single-qubit Paulis, stored qubit 0 first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::validation("a Pauli string needs at least one qubit"));
        }
        Ok(PauliString { letters })
    }

    pub fn identity(num_qubits: usize) -> Self {
        PauliString {
            letters: vec![Pauli::I; num_qubits.max(1)],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Bit `q` set when qubit `q` carries a non-identity letter.
    pub fn support_mask(&self) -> usize {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .fold(0, |m, (q, _)| m | (1 << q))
    }

    /// Dense `2^n × 2^n` matrix with qubit 0 as the least significant index bit.
    pub fn matrix<T: Real>(&self) -> ComplexMatrix<T> {
        self.letters
            .iter()
            .rev()
            .fold(ComplexMatrix::identity(1), |acc, p| acc.kron(&p.matrix()))
    }

    /// `<psi|P|psi>`, evaluated by applying the string to the amplitudes.
    pub fn expectation<T: Real>(&self, sv: &StateVector<T>) -> Result<T> {
        if sv.num_qubits() != self.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits(),
                actual: sv.num_qubits(),
            });
        }
        let amps = sv.amplitudes();
        let mut flip = 0usize;
        let mut z_mask = 0usize;
        let mut y_count = 0u32;
        for (q, p) in self.letters.iter().enumerate() {
            match p {
                Pauli::I => {}
                Pauli::X => flip |= 1 << q,
                Pauli::Y => {
                    flip |= 1 << q;
                    z_mask |= 1 << q;
                    y_count += 1;
                }
                Pauli::Z => z_mask |= 1 << q,
            }
        }
        // P|b> = i^{#Y} (-1)^{popcount(b & z_mask)} |b ^ flip>
        let phase = match y_count % 4 {
            0 => re(T::one()),
            1 => Complex::new(T::zero(), T::one()),
            2 => re(-T::one()),
            _ => Complex::new(T::zero(), -T::one()),
        };
        let mut acc = Complex::new(T::zero(), T::zero());
        for (b, a) in amps.iter().enumerate() {
            let sign = if (b & z_mask).count_ones().is_multiple_of(2) { T::one() } else { -T::one() };
            acc += amps[b ^ flip].conj() * *a * sign;
        }
        Ok((acc * phase).re)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .map(|c| Pauli::from_letter(c).ok_or_else(|| Error::validation(format!("`{c}` is not a Pauli letter"))))
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(letters)
    }
}
