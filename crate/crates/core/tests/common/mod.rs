//! Test-only oracles that share no code path with the library numerics.
#![allow(dead_code)]

use maxent_tomo::linalg::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Matrix exponential by scaling and squaring of a truncated Taylor series.
pub fn expm_taylor(m: &ComplexMatrix<f64>) -> ComplexMatrix<f64> {
    let n = m.dim();
    let norm = m.norm_inf();
    let mut squarings = 0;
    let mut scale = 1.0;
    while norm * scale > 0.25 {
        scale /= 2.0;
        squarings += 1;
    }
    let a = m.scale_real(scale);
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..30 {
        term = (&term * &a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Random Hermitian matrix with entries uniform in `[-range, range]`.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, range: f64) -> ComplexMatrix<f64> {
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-range..range), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.random_range(-range..range), rng.random_range(-range..range));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random density matrix `G G† / tr` plus `floor·I`, renormalised.
pub fn random_density(rng: &mut ChaCha8Rng, n: usize, floor: f64) -> ComplexMatrix<f64> {
    let g = random_hermitian(rng, n, 1.0);
    let mut p = &(&g * &g.adjoint()) + &ComplexMatrix::identity(n).scale_real(floor);
    let tr = p.trace().re;
    p = p.scale_real(1.0 / tr);
    p
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
