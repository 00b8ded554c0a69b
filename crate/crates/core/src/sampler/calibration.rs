use super::{sample_counts, CountsTable, StreamKey};
use crate::circuit::StateVector;
use crate::error::{Error, Result};
use crate::linalg::solve_real;
use crate::scalar::{re, Real};

/// Independent per-qubit readout flips: `p01 = P(read 1 | 0)`, `p10 = P(read 0 | 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReadoutNoise<T> {
    rates: Vec<(T, T)>,
}

impl<T: Real> ReadoutNoise<T> {
    pub fn uniform(num_qubits: usize, p01: T, p10: T) -> Result<Self> {
        Self::per_qubit(vec![(p01, p10); num_qubits])
    }

    pub fn per_qubit(rates: Vec<(T, T)>) -> Result<Self> {
        let half = T::lit(0.5);
        for (q, &(a, b)) in rates.iter().enumerate() {
            for p in [a, b] {
                if !(p >= T::zero() && p <= half) {
                    return Err(Error::validation(format!(
                        "flip probability {p} on qubit {q} outside [0, 0.5]"
                    )));
                }
            }
        }
        Ok(ReadoutNoise { rates })
    }

    pub fn num_qubits(&self) -> usize {
        self.rates.len()
    }

    pub fn rates(&self) -> &[(T, T)] {
        &self.rates
    }

    pub(crate) fn check_qubits(&self, n: usize) -> Result<()> {
        if self.rates.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.rates.len(),
            });
        }
        Ok(())
    }
}

/// Column-stochastic `M(r, t) = P(read r | prepared t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationMatrix<T> {
    dim: usize,
    entries: Vec<T>,
}

impl<T: Real> CalibrationMatrix<T> {
    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        let mut entries = vec![T::zero(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = T::one();
        }
        CalibrationMatrix { dim, entries }
    }

    /// Builds from columns (`columns[t][r]`), checking stochasticity.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let dim = columns.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::validation(format!("calibration size {dim} is not a power of two")));
        }
        let tol = T::lit(T::POLICY.hermitian_tol);
        let mut entries = vec![T::zero(); dim * dim];
        for (t, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: col.len(),
                });
            }
            if col.iter().any(|&x| !(x >= T::zero())) {
                return Err(Error::validation(format!("column {t} has a negative entry")));
            }
            let sum: T = col.iter().copied().sum();
            if (sum - T::one()).abs() > tol {
                return Err(Error::validation(format!("column {t} sums to {sum}")));
            }
            for (r, &x) in col.iter().enumerate() {
                entries[r * dim + t] = x;
            }
        }
        Ok(CalibrationMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, r: usize, t: usize) -> T {
        self.entries[r * self.dim + t]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// `M p`: the read-out distribution for true distribution `p`.
    pub fn apply(&self, p: &[T]) -> Vec<T> {
        self.entries
            .chunks(self.dim)
            .map(|row| row.iter().zip(p).map(|(&m, &x)| m * x).sum())
            .collect()
    }
}

/// Tensor product of the per-qubit matrices `[[1 - p01, p10], [p01, 1 - p10]]`.
pub fn build_calibration<T: Real>(noise: &ReadoutNoise<T>) -> CalibrationMatrix<T> {
    let n = noise.num_qubits();
    let dim = 1 << n;
    let mut entries = vec![T::one(); dim * dim];
    for r in 0..dim {
        for t in 0..dim {
            for (q, &(p01, p10)) in noise.rates().iter().enumerate() {
                let m = match ((r >> q) & 1, (t >> q) & 1) {
                    (0, 0) => T::one() - p01,
                    (1, 0) => p01,
                    (0, 1) => p10,
                    _ => T::one() - p10,
                };
                entries[r * dim + t] *= m;
            }
        }
    }
    CalibrationMatrix { dim, entries }
}

/// Estimates the calibration by preparing every basis state and sampling it.
pub fn build_calibration_empirical<T: Real>(
    noise: &ReadoutNoise<T>,
    shots: u64,
    key: impl Into<StreamKey>,
) -> Result<CalibrationMatrix<T>> {
    let key = key.into();
    let n = noise.num_qubits();
    let dim = 1 << n;
    let mut columns = Vec::with_capacity(dim);
    for t in 0..dim {
        let mut amps = vec![re(T::zero()); dim];
        amps[t] = re(T::one());
        let basis = StateVector::from_amplitudes(amps)?;
        let ct = sample_counts(&basis, shots, Some(noise), key.child(t as u64))?;
        columns.push(ct.frequencies());
    }
    CalibrationMatrix::from_columns(&columns)
}

/// Mitigated probabilities for a counts table.
pub fn mitigate<T: Real>(ct: &CountsTable, cal: &CalibrationMatrix<T>) -> Result<Vec<T>> {
    mitigate_frequencies(&ct.frequencies(), cal)
}

/// Solves `M p = f` over the probability simplex.
///
/// The unconstrained solution is returned when it is already a distribution;
/// otherwise the least-squares problem `min |M p - f|²` with `p >= 0`,
/// `Σ p = 1` is solved by accelerated projected gradient.
pub fn mitigate_frequencies<T: Real>(f: &[T], cal: &CalibrationMatrix<T>) -> Result<Vec<T>> {
    let dim = cal.dim();
    if f.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: f.len(),
        });
    }
    let rows = cal.rows();
    let pivot_tol = T::lit(1e-10).max(T::epsilon() * T::lit(1e3));
    let direct = solve_real(&rows, f, pivot_tol)?;
    let clip = T::lit(T::POLICY.hermitian_tol);
    if direct.iter().all(|&p| p >= -clip) {
        let clipped: Vec<T> = direct.iter().map(|&p| p.max(T::zero())).collect();
        let sum: T = clipped.iter().copied().sum();
        return Ok(clipped.into_iter().map(|p| p / sum).collect());
    }

    // Lipschitz bound |M|_2² <= |M|_1 |M|_inf.
    let norm1 = (0..dim)
        .map(|t| (0..dim).map(|r| cal.get(r, t).abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let norm_inf = rows
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<T>())
        .fold(T::zero(), T::max);
    let step = T::one() / (norm1 * norm_inf);

    let mut p = project_simplex(&direct);
    let mut y = p.clone();
    let mut t = T::one();
    let tol = T::epsilon() * T::lit(10.0);
    for _ in 0..20_000 {
        let residual: Vec<T> = cal.apply(&y).iter().zip(f).map(|(a, b)| *a - *b).collect();
        let grad: Vec<T> = (0..dim)
            .map(|c| (0..dim).map(|r| cal.get(r, c) * residual[r]).sum())
            .collect();
        let moved: Vec<T> = y.iter().zip(&grad).map(|(&v, &g)| v - step * g).collect();
        let next = project_simplex(&moved);
        let t_next = (T::one() + (T::one() + T::lit(4.0) * t * t).sqrt()) * T::lit(0.5);
        let momentum = (t - T::one()) / t_next;
        let change = next.iter().zip(&p).fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()));
        y = next.iter().zip(&p).map(|(&a, &b)| a + momentum * (a - b)).collect();
        p = next;
        t = t_next;
        if change <= tol {
            break;
        }
    }
    Ok(p)
}

/// Euclidean projection onto `{p >= 0, Σ p = 1}`.
fn project_simplex<T: Real>(v: &[T]) -> Vec<T> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumulative = T::zero();
    let mut shift = T::zero();
    for (i, &x) in sorted.iter().enumerate() {
        cumulative += x;
        let candidate = (cumulative - T::one()) / T::from_usize_lossy(i + 1);
        if x - candidate > T::zero() {
            shift = candidate;
        }
    }
    v.iter().map(|&x| (x - shift).max(T::zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5f64, 0.5]);
        assert_eq!(p, vec![0.5, 0.5]);
        let p = project_simplex(&[1.2f64, -0.2]);
        assert!((p[0] - 1.0).abs() < 1e-15 && p[1] == 0.0);
        let p = project_simplex(&[0.3f64, 0.3, 0.3]);
        assert!(p.iter().all(|x| (x - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn single_qubit_calibration() {
        let cal = build_calibration(&ReadoutNoise::uniform(1, 0.1f64, 0.1).unwrap());
        assert_eq!(cal.rows(), vec![vec![0.9, 0.1], vec![0.1, 0.9]]);
        let p = mitigate_frequencies(&[0.9, 0.1], &cal).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-14 && p[1].abs() < 1e-14);
    }

    #[test]
    fn constrained_solution_when_inverse_goes_negative() {
        let cal = build_calibration(&ReadoutNoise::uniform(1, 0.1f64, 0.1).unwrap());
        // Inverse would give (1.0625, -0.0625).
        let p = mitigate_frequencies(&[0.95, 0.05], &cal).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn singular_calibration_is_rejected() {
        let cal = build_calibration(&ReadoutNoise::uniform(1, 0.5f64, 0.5).unwrap());
        assert!(matches!(
            mitigate_frequencies(&[0.5, 0.5], &cal),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn noise_bounds() {
        assert!(ReadoutNoise::uniform(2, 0.6f64, 0.0).is_err());
        assert!(ReadoutNoise::uniform(2, -0.1f64, 0.0).is_err());
        assert!(ReadoutNoise::uniform(2, 0.5f64, 0.5).is_ok());
    }
}
