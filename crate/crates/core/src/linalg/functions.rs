use super::{hermitian_eig, ComplexMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `exp(m)` for Hermitian `m`, evaluated as `V diag(e^eps) V†`.
pub fn matrix_exp_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(hermitian_eig(m)?.map_spectrum(T::exp))
}

/// Principal logarithm of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues below `floor` are raised to `floor` before the logarithm is
/// taken. Eigenvalues below `-psd_tol` are a domain error.
pub fn matrix_log_psd<T: Real>(m: &ComplexMatrix<T>, floor: T) -> Result<ComplexMatrix<T>> {
    if !(floor > T::zero()) {
        return Err(Error::validation("logarithm floor must be positive"));
    }
    let sys = hermitian_eig(m)?;
    check_psd(&sys.eigenvalues)?;
    Ok(sys.map_spectrum(|e| e.max(floor).ln()))
}

/// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues are clipped to zero.
pub fn matrix_sqrt_psd<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let sys = hermitian_eig(m)?;
    check_psd(&sys.eigenvalues)?;
    Ok(sys.map_spectrum(|e| e.max(T::zero()).sqrt()))
}

fn check_psd<T: Real>(eigenvalues: &[T]) -> Result<()> {
    let tol = T::lit(T::POLICY.psd_tol);
    match eigenvalues.first() {
        Some(&lowest) if lowest < -tol => Err(Error::NegativeEigenvalue {
            value: lowest.as_f64(),
        }),
        _ => Ok(()),
    }
}
