use num_complex::Complex;

use super::{Circuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::maxent::{DensityMatrix, MeasurementRecord, Target};
use crate::scalar::{re, Real};

/// Normalised amplitudes; bit `q` of the index is the value of qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); 1 << num_qubits];
        amplitudes[0] = re(T::one());
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::validation(format!("state length {dim} is not a power of two")));
        }
        let norm: T = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - T::one()).abs() > T::lit(T::POLICY.psd_tol) {
            return Err(Error::validation(format!("state norm² {norm} differs from 1")));
        }
        Ok(StateVector {
            num_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate<T>) {
        let t = gate.targets();
        match gate.kind() {
            GateKind::Cx => {
                let (cbit, tbit) = (1 << t[0], 1 << t[1]);
                for i in 0..self.dim() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amplitudes.swap(i, i | tbit);
                    }
                }
            }
            GateKind::Cz => {
                let mask = (1 << t[0]) | (1 << t[1]);
                for (i, a) in self.amplitudes.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a = -*a;
                    }
                }
            }
            _ => self.apply_single(t[0], single_qubit_matrix(gate)),
        }
    }

    fn apply_single(&mut self, q: usize, m: [[Complex<T>; 2]; 2]) {
        let bit = 1 << q;
        for i in 0..self.dim() {
            if i & bit == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
                self.amplitudes[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amplitudes[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `|a_i|²` in basis order.
    pub fn populations(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<psi| (|i><j|) |psi> = conj(a_{i-1}) a_{j-1}` for 1-based basis indices.
    pub fn coherence(&self, i: usize, j: usize) -> Result<Complex<T>> {
        let dim = self.dim();
        for idx in [i, j] {
            if idx == 0 || idx > dim {
                return Err(Error::IndexOutOfRange { index: idx, dim });
            }
        }
        Ok(self.amplitudes[i - 1].conj() * self.amplitudes[j - 1])
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix::new_unchecked(ComplexMatrix::outer(&self.amplitudes))
    }

    /// Exact record for `target`: `x11`, `x1K = rho(1, K)` and optionally `xKK`.
    pub fn record(&self, target: Target, with_xkk: bool) -> Result<MeasurementRecord<T>> {
        if target.dim_n() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: target.dim_n(),
            });
        }
        let k = target.index_k();
        let pops = self.populations();
        let xkk = with_xkk.then(|| pops[k - 1]);
        MeasurementRecord::from_estimates(target, pops[0], self.coherence(k, 1)?, xkk)
    }
}

fn single_qubit_matrix<T: Real>(gate: &Gate<T>) -> [[Complex<T>; 2]; 2] {
    let zero = re(T::zero());
    let one = re(T::one());
    let half = T::lit(0.5);
    match gate.kind() {
        GateKind::H => {
            let s = re(T::FRAC_1_SQRT_2());
            [[s, s], [s, -s]]
        }
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Rx | GateKind::Ry | GateKind::Rz => {
            let a = gate.angle().unwrap_or(T::zero()) * half;
            let (s, c) = a.sin_cos();
            match gate.kind() {
                GateKind::Rx => {
                    let m = Complex::new(T::zero(), -s);
                    [[re(c), m], [m, re(c)]]
                }
                GateKind::Ry => [[re(c), re(-s)], [re(s), re(c)]],
                _ => [[Complex::new(c, -s), zero], [zero, Complex::new(c, s)]],
            }
        }
        GateKind::Cx | GateKind::Cz => unreachable!("two-qubit gate"),
    }
}

/// Runs `c` on `|0...0>`.
pub fn simulate<T: Real>(c: &Circuit<T>) -> StateVector<T> {
    let mut sv = StateVector::zero(c.num_qubits());
    for g in c.gates() {
        sv.apply(g);
    }
    sv
}

pub fn populations<T: Real>(sv: &StateVector<T>) -> Vec<T> {
    sv.populations()
}

pub fn coherence<T: Real>(sv: &StateVector<T>, i: usize, j: usize) -> Result<Complex<T>> {
    sv.coherence(i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn run(text: &str) -> StateVector<f64> {
        simulate(&parse_circuit(text, None).unwrap())
    }

    fn close(a: &[Complex<f64>], b: &[(f64, f64)]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - Complex::new(y.0, y.1)).norm() < 1e-15)
    }

    #[test]
    fn reference_states() {
        let s = FRAC_1_SQRT_2;
        assert!(close(run("qubits 1\nh 0").amplitudes(), &[(s, 0.0), (s, 0.0)]));
        assert!(close(
            run("qubits 2\nh 0\ncx 0 1").amplitudes(),
            &[(s, 0.0), (0.0, 0.0), (0.0, 0.0), (s, 0.0)]
        ));
        assert!(close(run("qubits 1\nrx(pi) 0").amplitudes(), &[(0.0, 0.0), (0.0, -1.0)]));
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        let sv = run("qubits 3\nx 1");
        assert_eq!(sv.populations()[2], 1.0);
        let sv = run("qubits 2\nx 0\ncx 0 1");
        assert_eq!(sv.populations()[3], 1.0);
    }

    #[test]
    fn ry_populations() {
        let p = run("qubits 1\nry(pi/3) 0").populations();
        assert!((p[0] - 0.75).abs() < 1e-15 && (p[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn bell_coherences() {
        let sv = run("qubits 2\nh 0\ncx 0 1");
        assert!((sv.coherence(1, 4).unwrap() - 0.5).norm() < 1e-15);
        assert_eq!(sv.coherence(1, 2).unwrap().norm(), 0.0);
        assert!(matches!(sv.coherence(0, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(sv.coherence(1, 5), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn rz_phases() {
        let sv = simulate(&Circuit::with_gates(1, [Gate::h(0), Gate::rz(PI / 2.0, 0)]).unwrap());
        // Relative phase e^{i pi/2} between |1> and |0>.
        let c = sv.coherence(1, 2).unwrap();
        assert!((c - Complex::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn record_uses_rho_1k() {
        let sv = run("qubits 2\nh 0\nrz(pi/2) 0");
        let r = sv.record(Target::new(4, 2).unwrap(), true).unwrap();
        let rho = sv.density();
        assert!((r.x1k - rho.matrix()[(0, 1)]).norm() < 1e-15);
        assert!((r.xkk.unwrap() - 0.5).abs() < 1e-15);
    }
}
