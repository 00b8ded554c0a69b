use num_complex::Complex;
use num_traits::{One, Zero};

use super::ComplexMatrix;
use crate::error::Result;
use crate::scalar::{re, Real};

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// Column `i` of `vectors` belongs to `eigenvalues[i]`. The first component of
/// each eigenvector whose modulus exceeds `sqrt(eps)` is real and positive.
#[derive(Debug, Clone)]
pub struct EigenSystem<T> {
    pub eigenvalues: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> EigenSystem<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex<T>> {
        self.vectors.column(i)
    }

    /// Assembles `V diag(f(eps)) V†`; the result is Hermitian by construction.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let weights: Vec<T> = self.eigenvalues.iter().map(|&e| f(e)).collect();
        let v = &self.vectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex::zero();
                for (k, &w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
                if i == j {
                    out[(i, i)] = re(acc.re);
                } else {
                    out[(i, j)] = acc;
                    out[(j, i)] = acc.conj();
                }
            }
        }
        out
    }

    /// `V diag(eps) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|e| e)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Dimensions up to two use the closed form; larger matrices use cyclic
/// complex Jacobi rotations.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<EigenSystem<T>> {
    m.check_hermitian(T::lit(T::POLICY.hermitian_tol))?;
    let mut sys = match m.dim() {
        1 => EigenSystem {
            eigenvalues: vec![m[(0, 0)].re],
            vectors: ComplexMatrix::identity(1),
        },
        2 => eig_2x2(m),
        _ => jacobi(m),
    };
    sort_ascending(&mut sys);
    fix_phases(&mut sys.vectors);
    Ok(sys)
}

fn eig_2x2<T: Real>(m: &ComplexMatrix<T>) -> EigenSystem<T> {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let two = T::lit(2.0);

    let scale = a.abs().max(d.abs()).max(b.norm());
    if b.norm() <= T::epsilon() * T::epsilon() * scale || b.is_zero() {
        return EigenSystem {
            eigenvalues: vec![a, d],
            vectors: ComplexMatrix::identity(2),
        };
    }

    let delta = a - d;
    let s = a + d;
    let r = delta.hypot(two * b.norm());
    let det = a * d - b.norm_sqr();
    // Evaluate the root without cancellation first, recover the other from the determinant.
    let (lo, hi) = if s >= T::zero() {
        let hi = (s + r) / two;
        (det / hi, hi)
    } else {
        let lo = (s - r) / two;
        (lo, det / lo)
    };

    let half = T::lit(0.5);
    let (v_lo, v_hi) = if delta >= T::zero() {
        (
            [b, re(-(r + delta) * half)],
            [re((r + delta) * half), b.conj()],
        )
    } else {
        (
            [re(-(r - delta) * half), b.conj()],
            [b, re((r - delta) * half)],
        )
    };
    let normalize = |v: [Complex<T>; 2]| {
        let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
        [v[0] / n, v[1] / n]
    };
    let v_lo = normalize(v_lo);
    let v_hi = normalize(v_hi);

    let mut vectors = ComplexMatrix::zeros(2);
    for i in 0..2 {
        vectors[(i, 0)] = v_lo[i];
        vectors[(i, 1)] = v_hi[i];
    }
    EigenSystem {
        eigenvalues: vec![lo, hi],
        vectors,
    }
}

fn off_diagonal_sq<T: Real>(a: &ComplexMatrix<T>) -> T {
    let n = a.dim();
    let mut acc = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            acc += a[(p, q)].norm_sqr();
        }
    }
    acc
}

fn jacobi<T: Real>(m: &ComplexMatrix<T>) -> EigenSystem<T> {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = re(a[(i, i)].re);
    }
    let mut v = ComplexMatrix::<T>::identity(n);
    let fro_sq = a.norm_fro().powi(2);
    let target = (T::epsilon() * T::epsilon()) * fro_sq;
    let one = T::one();
    let two = T::lit(2.0);

    for _ in 0..T::POLICY.jacobi_max_sweeps {
        if fro_sq.is_zero() || off_diagonal_sq(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn <= T::min_positive_value() {
                    continue;
                }
                let phase = b / bn;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (two * bn);
                let t = if theta.abs() > T::lit(1e150) {
                    one / (two * theta)
                } else {
                    let sgn = if theta >= T::zero() { one } else { -one };
                    sgn / (theta.abs() + (theta * theta + one).sqrt())
                };
                let c = one / (t * t + one).sqrt();
                let s = t * c;
                // G = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let g_pp = re(c);
                let g_pq = re(s);
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = re(a[(p, p)].re);
                a[(q, q)] = re(a[(q, q)].re);
            }
        }
    }

    EigenSystem {
        eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
        vectors: v,
    }
}

fn sort_ascending<T: Real>(sys: &mut EigenSystem<T>) {
    let n = sys.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        sys.eigenvalues[i]
            .partial_cmp(&sys.eigenvalues[j])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    if order.iter().enumerate().all(|(k, &i)| k == i) {
        return;
    }
    let values = order.iter().map(|&i| sys.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = sys.vectors[(row, src)];
        }
    }
    sys.eigenvalues = values;
    sys.vectors = vectors;
}

fn fix_phases<T: Real>(v: &mut ComplexMatrix<T>) {
    let n = v.dim();
    let threshold = T::epsilon().sqrt();
    for col in 0..n {
        let Some(lead) = (0..n).map(|row| v[(row, col)]).find(|z| z.norm() > threshold) else {
            continue;
        };
        let rot = lead.conj() / lead.norm();
        if rot == Complex::one() {
            continue;
        }
        for row in 0..n {
            v[(row, col)] *= rot;
        }
        // The leading entry is real by construction; drop rounding residue.
        if let Some(row) = (0..n).find(|&row| v[(row, col)].norm() > threshold) {
            v[(row, col)] = re(v[(row, col)].norm());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real2(a: f64, b: f64, d: f64) -> ComplexMatrix<f64> {
        ComplexMatrix::from_real_rows(&[vec![a, b], vec![b, d]]).unwrap()
    }

    #[test]
    fn zero_matrix_gives_standard_basis() {
        let sys = hermitian_eig(&ComplexMatrix::<f64>::zeros(2)).unwrap();
        assert_eq!(sys.eigenvalues, vec![0.0, 0.0]);
        assert_eq!(sys.vectors, ComplexMatrix::identity(2));
        let sys = hermitian_eig(&ComplexMatrix::<f64>::zeros(4)).unwrap();
        assert_eq!(sys.eigenvalues, vec![0.0; 4]);
        assert_eq!(sys.vectors, ComplexMatrix::identity(4));
    }

    #[test]
    fn two_by_two_closed_form() {
        let sys = hermitian_eig(&real2(-1.0, -0.5, 0.0)).unwrap();
        let s2 = 2f64.sqrt();
        assert!((sys.eigenvalues[0] - (-1.0 - s2) / 2.0).abs() < 1e-15);
        assert!((sys.eigenvalues[1] - (-1.0 + s2) / 2.0).abs() < 1e-15);
        assert!(sys.reconstruct().max_abs_diff(&real2(-1.0, -0.5, 0.0)) < 1e-15);
    }

    #[test]
    fn diagonal_input_sorted_with_basis_vectors() {
        let m = ComplexMatrix::<f64>::diagonal(&[3.0, -1.0, 2.0]);
        let sys = hermitian_eig(&m).unwrap();
        assert_eq!(sys.eigenvalues, vec![-1.0, 2.0, 3.0]);
        assert_eq!(sys.vector(0)[1], Complex::one());
        assert_eq!(sys.vector(2)[0], Complex::one());
    }

    #[test]
    fn phase_convention_leading_component_real_positive() {
        let m = ComplexMatrix::from_rows(&[
            vec![re(1.0), Complex::new(0.0, 2.0), re(0.0)],
            vec![Complex::new(0.0, -2.0), re(-1.0), Complex::new(0.3, 0.1)],
            vec![re(0.0), Complex::new(0.3, -0.1), re(0.5)],
        ])
        .unwrap();
        let sys = hermitian_eig(&m).unwrap();
        for i in 0..3 {
            let lead = sys.vector(i).into_iter().find(|z| z.norm() > 1e-8).unwrap();
            assert_eq!(lead.im, 0.0);
            assert!(lead.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::<f64>::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&m),
            Err(crate::Error::NotHermitian { row: 0, col: 1, .. })
        ));
    }
}
