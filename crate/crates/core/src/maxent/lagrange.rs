use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{re, Real};

/// Hilbert dimension `N` together with the coupled basis index `K`.
///
/// Basis states are numbered `1..=N`; state `i` is the bitstring of `i - 1`
/// with qubit 0 as the least significant bit, so `|1> = |0...0>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Target {
    dim_n: usize,
    index_k: usize,
}

impl Target {
    pub const MAX_DIM: usize = 64;

    pub fn new(dim_n: usize, index_k: usize) -> Result<Self> {
        if !dim_n.is_power_of_two() || !(4..=Self::MAX_DIM).contains(&dim_n) {
            return Err(Error::validation(format!(
                "dimension {dim_n} must be a power of two in 4..={}",
                Self::MAX_DIM
            )));
        }
        if !(2..=dim_n).contains(&index_k) {
            return Err(Error::validation(format!(
                "coupled index {index_k} must lie in 2..={dim_n}"
            )));
        }
        Ok(Self { dim_n, index_k })
    }

    pub fn dim_n(self) -> usize {
        self.dim_n
    }

    pub fn index_k(self) -> usize {
        self.index_k
    }

    pub fn num_qubits(self) -> usize {
        self.dim_n.trailing_zeros() as usize
    }

    /// Only `N = 4` (two qubits) and `N = 8` (three qubits) are validated end to end.
    pub fn is_experimental(self) -> bool {
        !matches!(self.dim_n, 4 | 8)
    }

    /// Zero-based positions of the constrained block, `(0, K - 1)`.
    pub(crate) fn block(self) -> (usize, usize) {
        (0, self.index_k - 1)
    }
}

/// Lagrange multipliers of the three constrained observables
/// `|1><1|`, `|1><K|` (with its adjoint) and `|K><K|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeSet<T> {
    pub target: Target,
    pub lam_11: T,
    pub lam_1k: Complex<T>,
    pub lam_kk: T,
}

impl<T: Real> LagrangeSet<T> {
    pub fn new(target: Target, lam_11: T, lam_1k: Complex<T>, lam_kk: T) -> Result<Self> {
        if !(lam_11.is_finite() && lam_1k.re.is_finite() && lam_1k.im.is_finite() && lam_kk.is_finite()) {
            return Err(Error::validation("Lagrange multipliers must be finite"));
        }
        Ok(Self {
            target,
            lam_11,
            lam_1k,
            lam_kk,
        })
    }

    /// Convenience constructor for real multipliers.
    pub fn real(target: Target, lam_11: T, lam_1k: T, lam_kk: T) -> Result<Self> {
        Self::new(target, lam_11, re(lam_1k), lam_kk)
    }

    pub fn zero(target: Target) -> Self {
        Self {
            target,
            lam_11: T::zero(),
            lam_1k: Complex::zero(),
            lam_kk: T::zero(),
        }
    }

    /// The exponent `A = -(λ11|1><1| + λ1K|1><K| + λ1K*|K><1| + λKK|K><K|)`.
    pub fn build_exponent(&self) -> ComplexMatrix<T> {
        let (one, k) = self.target.block();
        let mut a = ComplexMatrix::zeros(self.target.dim_n());
        a[(one, one)] = re(-self.lam_11);
        a[(one, k)] = -self.lam_1k;
        a[(k, one)] = -self.lam_1k.conj();
        a[(k, k)] = re(-self.lam_kk);
        a
    }

    /// Largest component-wise difference to another set (complex part by modulus).
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.lam_11 - other.lam_11)
            .abs()
            .max((self.lam_1k - other.lam_1k).norm())
            .max((self.lam_kk - other.lam_kk).abs())
    }
}

/// Free-function form of [`LagrangeSet::build_exponent`].
pub fn build_exponent<T: Real>(ls: &LagrangeSet<T>) -> ComplexMatrix<T> {
    ls.build_exponent()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_validation() {
        assert!(Target::new(4, 2).is_ok());
        assert!(Target::new(8, 8).is_ok());
        assert!(Target::new(4, 1).is_err());
        assert!(Target::new(4, 5).is_err());
        assert!(Target::new(6, 2).is_err());
        assert!(Target::new(2, 2).is_err());
        assert!(Target::new(16, 3).unwrap().is_experimental());
        assert!(!Target::new(8, 3).unwrap().is_experimental());
        assert_eq!(Target::new(8, 3).unwrap().num_qubits(), 3);
    }

    #[test]
    fn zero_multipliers_give_zero_exponent() {
        let ls = LagrangeSet::<f64>::zero(Target::new(4, 2).unwrap());
        assert_eq!(ls.build_exponent(), ComplexMatrix::zeros(4));
    }

    #[test]
    fn exponent_block_layout() {
        let ls = LagrangeSet::real(Target::new(4, 2).unwrap(), 1.0, 0.5, 0.0).unwrap();
        let a = ls.build_exponent();
        let expect = ComplexMatrix::from_real_rows(&[
            vec![-1.0, -0.5, 0.0, 0.0],
            vec![-0.5, 0.0, 0.0, 0.0],
            vec![0.0; 4],
            vec![0.0; 4],
        ])
        .unwrap();
        assert_eq!(a, expect);
    }

    #[test]
    fn exponent_embeds_complex_coupling_hermitian() {
        let ls = LagrangeSet::new(Target::new(8, 3).unwrap(), 0.2, Complex::new(0.0, 0.1), 0.4).unwrap();
        let a = ls.build_exponent();
        assert_eq!(a, a.adjoint());
        assert_eq!(a[(2, 0)], Complex::new(0.0, 0.1));
        assert_eq!(a[(0, 2)], Complex::new(0.0, -0.1));
        let nonzero: Vec<(usize, usize)> = (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .filter(|&(i, j)| a[(i, j)] != Complex::zero())
            .collect();
        assert_eq!(nonzero, vec![(0, 0), (0, 2), (2, 0), (2, 2)]);
    }

    #[test]
    fn rejects_non_finite() {
        let t = Target::new(4, 2).unwrap();
        assert!(LagrangeSet::real(t, f64::NAN, 0.0, 0.0).is_err());
    }
}
