use num_complex::Complex;

use super::{spectrum, LagrangeSet};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, matrix_sqrt_psd, ComplexMatrix};
use crate::scalar::{re, Real};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity within the policy's PSD tolerance.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let tol = T::lit(T::POLICY.psd_tol);
        matrix.check_hermitian(tol)?;
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::validation(format!("trace {tr} differs from 1")));
        }
        let sys = hermitian_eig(&matrix)?;
        if sys.eigenvalues[0] < -tol {
            return Err(Error::NegativeEigenvalue {
                value: sys.eigenvalues[0].as_f64(),
            });
        }
        Ok(Self { matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    /// The projector `|psi><psi|` of a normalised state vector.
    pub fn pure(amplitudes: &[Complex<T>]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(amplitudes))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(T::one() / T::from_usize_lossy(dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Element `rho(i, j)` with one-based basis indices.
    pub fn element(&self, i: usize, j: usize) -> Result<Complex<T>> {
        let dim = self.dim();
        for index in [i, j] {
            if index == 0 || index > dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
        }
        Ok(self.matrix[(i - 1, j - 1)])
    }

    /// Diagonal entries in basis order.
    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.matrix[(i, i)].re).collect()
    }

    /// Von Neumann entropy `-Tr(rho ln rho)` in nats.
    pub fn entropy(&self) -> T {
        let sys = hermitian_eig(&self.matrix).expect("density matrix is Hermitian");
        sys.eigenvalues
            .iter()
            .filter(|&&p| p > T::zero())
            .map(|&p| -p * p.ln())
            .sum()
    }
}

/// Maximal-entropy state `exp(A)/Z` for the given multipliers, assembled from
/// the analytic spectrum.
pub fn density_from_lagrange<T: Real>(ls: &LagrangeSet<T>) -> DensityMatrix<T> {
    let sp = spectrum(ls);
    let n = ls.target.dim_n();
    let (one, k) = ls.target.block();
    let (x11, x1k, xkk) = sp.block_moments();
    let rest = re(sp.unconstrained_population());
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = rest;
    }
    m[(one, one)] = re(x11);
    m[(one, k)] = x1k;
    m[(k, one)] = x1k.conj();
    m[(k, k)] = re(xkk);
    DensityMatrix::new_unchecked(m)
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))²`, clamped to `[0, 1]`.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let root = matrix_sqrt_psd(rho.matrix())?;
    let inner = &(&root * sigma.matrix()) * &root;
    // Rounding can leave the product a hair off Hermitian; symmetrise before the eigensolve.
    let inner = (&inner + &inner.adjoint()).scale_real(T::lit(0.5));
    let sys = hermitian_eig(&inner)?;
    let trace_root: T = sys
        .eigenvalues
        .iter()
        .map(|&e| e.max(T::zero()).sqrt())
        .sum();
    Ok((trace_root * trace_root).min(T::one()).max(T::zero()))
}

/// Von Neumann entropy of a density matrix.
pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.entropy()
}
