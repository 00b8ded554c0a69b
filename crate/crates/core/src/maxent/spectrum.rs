use num_complex::Complex;
use num_traits::Zero;

use super::{LagrangeSet, Target};
use crate::scalar::{re, Real};

/// One eigenpair of the 2×2 constrained block of the exponent.
///
/// The eigenvector is `(k, 1)` on the basis states `(1, K)`; `k = None`
/// stands for the limit `|k| → ∞`, i.e. the vector `|1>` itself. The
/// `weight_*` fields are the entries of the normalised projector on that
/// vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockMode<T> {
    pub eps: T,
    pub k: Option<Complex<T>>,
    pub weight_11: T,
    pub weight_1k: Complex<T>,
    pub weight_kk: T,
}

impl<T: Real> BlockMode<T> {
    fn from_k(eps: T, k: Complex<T>) -> Self {
        let one = T::one();
        let (weight_11, weight_1k, weight_kk) = if k.norm() <= one {
            let den = one + k.norm_sqr();
            (k.norm_sqr() / den, k / den, one / den)
        } else {
            let u = k.inv();
            let den = one + u.norm_sqr();
            (one / den, u.conj() / den, u.norm_sqr() / den)
        };
        Self {
            eps,
            k: Some(k),
            weight_11,
            weight_1k,
            weight_kk,
        }
    }

    fn basis_one(eps: T) -> Self {
        Self {
            eps,
            k: None,
            weight_11: T::one(),
            weight_1k: Complex::zero(),
            weight_kk: T::zero(),
        }
    }

    fn basis_k(eps: T) -> Self {
        Self {
            eps,
            k: Some(Complex::zero()),
            weight_11: T::zero(),
            weight_1k: Complex::zero(),
            weight_kk: T::one(),
        }
    }
}

/// Analytic spectrum of the exponent built from a [`LagrangeSet`].
///
/// Only the `(1, K)` block is non-trivial: it contributes `eps3 <= eps4`,
/// every other eigenvalue is exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentSpectrum<T> {
    pub target: Target,
    pub modes: [BlockMode<T>; 2],
    /// Partition function `Z = (N - 2) + e^eps3 + e^eps4`.
    pub z: T,
    // Everything below is scaled by e^-shift so large multipliers do not overflow.
    shift: T,
    z_scaled: T,
}

impl<T: Real> ExponentSpectrum<T> {
    pub fn eps3(&self) -> T {
        self.modes[0].eps
    }

    pub fn eps4(&self) -> T {
        self.modes[1].eps
    }

    pub fn k3(&self) -> Option<Complex<T>> {
        self.modes[0].k
    }

    pub fn k4(&self) -> Option<Complex<T>> {
        self.modes[1].k
    }

    /// `a = |k3|² e^eps3 / (1 + |k3|²)`.
    pub fn a(&self) -> T {
        self.modes[0].weight_11 * self.modes[0].eps.exp()
    }

    /// `b = |k4|² e^eps4 / (1 + |k4|²)`.
    pub fn b(&self) -> T {
        self.modes[1].weight_11 * self.modes[1].eps.exp()
    }

    /// All `N` eigenvalues: the `N - 2` zeros of the unconstrained states, then `eps3`, `eps4`.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut eps = vec![T::zero(); self.target.dim_n() - 2];
        eps.extend([self.eps3(), self.eps4()]);
        eps
    }

    /// Density-matrix entries `(rho_11, rho_1K, rho_KK)` of the constrained block.
    pub fn block_moments(&self) -> (T, Complex<T>, T) {
        let mut x11 = T::zero();
        let mut x1k = Complex::zero();
        let mut xkk = T::zero();
        for m in &self.modes {
            let w = (m.eps - self.shift).exp() / self.z_scaled;
            x11 += m.weight_11 * w;
            x1k += m.weight_1k * w;
            xkk += m.weight_kk * w;
        }
        (x11, x1k, xkk)
    }

    /// Population `1/Z` of every basis state outside `{1, K}`.
    pub fn unconstrained_population(&self) -> T {
        (-self.shift).exp() / self.z_scaled
    }

    /// `ln Z`, evaluated without overflow.
    pub fn log_z(&self) -> T {
        self.z_scaled.ln() + self.shift
    }
}

/// Eigenvalues, eigenvector coefficients and partition function of the exponent.
///
/// When `|λ1K|` is below the policy's coupling threshold the block is
/// treated as diagonal, which removes the `1/λ1K*` singularity of `k`.
pub fn spectrum<T: Real>(ls: &LagrangeSet<T>) -> ExponentSpectrum<T> {
    let half = T::lit(0.5);
    let l11 = ls.lam_11;
    let lkk = ls.lam_kk;
    let g = ls.lam_1k.norm();

    let modes = if g < T::lit(T::POLICY.coupling_zero) {
        let one = BlockMode::basis_one(-l11);
        let kk = BlockMode::basis_k(-lkk);
        if one.eps <= kk.eps {
            [one, kk]
        } else {
            [kk, one]
        }
    } else {
        let s = l11 + lkk;
        let delta = l11 - lkk;
        let r = delta.hypot(T::lit(2.0) * g);
        let det = l11 * lkk - g * g;
        let (eps3, eps4) = if s >= T::zero() {
            let e3 = -(s + r) * half;
            (e3, det / e3)
        } else {
            let e4 = (r - s) * half;
            (det / e4, e4)
        };
        let lam_conj = ls.lam_1k.conj();
        // k = -(eps + λKK)/λ1K* = -λ1K/(eps + λ11); use the form free of cancellation.
        let k3 = if delta >= T::zero() {
            re((delta + r) * half) / lam_conj
        } else {
            -ls.lam_1k / re((delta - r) * half)
        };
        let k4 = if delta <= T::zero() {
            -re((r - delta) * half) / lam_conj
        } else {
            -ls.lam_1k / re((delta + r) * half)
        };
        [BlockMode::from_k(eps3, k3), BlockMode::from_k(eps4, k4)]
    };

    let shift = T::zero().max(modes[1].eps).max(modes[0].eps);
    let rest = T::from_usize_lossy(ls.target.dim_n() - 2);
    let z_scaled = rest * (-shift).exp() + (modes[0].eps - shift).exp() + (modes[1].eps - shift).exp();
    let z = if shift.is_zero() {
        z_scaled
    } else {
        z_scaled * shift.exp()
    };

    ExponentSpectrum {
        target: ls.target,
        modes,
        z,
        shift,
        z_scaled,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, k: usize, l11: f64, l1k: Complex<f64>, lkk: f64) -> LagrangeSet<f64> {
        LagrangeSet::new(Target::new(n, k).unwrap(), l11, l1k, lkk).unwrap()
    }

    #[test]
    fn reference_spectrum() {
        let sp = spectrum(&set(4, 2, 1.0, re(0.5), 0.0));
        let s2 = 2f64.sqrt();
        assert!((sp.eps3() - (-1.0 - s2) / 2.0).abs() < 1e-15);
        assert!((sp.eps4() - (-1.0 + s2) / 2.0).abs() < 1e-15);
        let z: f64 = sp.eigenvalues().iter().map(|e| e.exp()).sum();
        assert!((sp.z - z).abs() < 1e-12 * z);
        assert!((sp.z - 3.5291751964673166).abs() < 1e-12);
        assert!((sp.eps3() + sp.eps4() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eight_dimensional_adds_four_unit_terms() {
        let s4 = spectrum(&set(4, 2, 1.0, re(0.5), 0.0));
        let s8 = spectrum(&set(8, 2, 1.0, re(0.5), 0.0));
        assert_eq!(s4.eps3(), s8.eps3());
        assert_eq!(s4.eps4(), s8.eps4());
        assert!((s8.z - s4.z - 4.0).abs() < 1e-12);
        assert_eq!(s8.eigenvalues().iter().filter(|e| **e == 0.0).count(), 6);
    }

    #[test]
    fn zero_multipliers_use_diagonal_branch() {
        let sp = spectrum(&set(4, 2, 0.0, re(0.0), 0.0));
        assert_eq!((sp.eps3(), sp.eps4()), (0.0, 0.0));
        assert_eq!(sp.z, 4.0);
        assert_eq!(sp.k3(), None);
        let (x11, x1k, xkk) = sp.block_moments();
        assert_eq!((x11, x1k, xkk), (0.25, Complex::zero(), 0.25));
    }

    #[test]
    fn k_matches_textbook_formula_for_generic_coupling() {
        let ls = set(4, 3, 0.7, Complex::new(-0.3, 0.4), -0.2);
        let sp = spectrum(&ls);
        for m in &sp.modes {
            let textbook = -(re(m.eps) + re(ls.lam_kk)) / ls.lam_1k.conj();
            assert!((m.k.unwrap() - textbook).norm() < 1e-12);
        }
        let direct_a = {
            let k = sp.k3().unwrap();
            k.norm_sqr() * sp.eps3().exp() / (1.0 + k.norm_sqr())
        };
        assert!((sp.a() - direct_a).abs() < 1e-14);
    }

    #[test]
    fn tiny_coupling_is_continuous_with_diagonal_branch() {
        let a = spectrum(&set(4, 2, 1.0, re(1e-13), 0.3)).block_moments();
        let b = spectrum(&set(4, 2, 1.0, re(0.0), 0.3)).block_moments();
        assert!((a.0 - b.0).abs() < 1e-12);
        assert!((a.2 - b.2).abs() < 1e-12);
        assert!(a.1.norm() < 1e-12);
    }

    #[test]
    fn large_multipliers_do_not_overflow() {
        let sp = spectrum(&set(4, 2, -800.0, re(1.0), -790.0));
        let (x11, _, xkk) = sp.block_moments();
        assert!(x11.is_finite() && xkk.is_finite());
        assert!((x11 + xkk + 2.0 * sp.unconstrained_population() - 1.0).abs() < 1e-12);
        assert!(sp.log_z().is_finite());
    }
}
