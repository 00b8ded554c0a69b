mod common;

use common::{expm_taylor, random_density, rng};
use maxent_tomo::linalg::ComplexMatrix;
use maxent_tomo::maxent::{
    build_exponent, density_from_lagrange, fidelity, forward_expectations, heatmap_scan, predict_population,
    reconstruct, solve_lagrange, spectrum, von_neumann_entropy, DensityMatrix, GridAxis, HeatmapGrid,
    LagrangeSet, MeasurementRecord, ReconstructOptions, SolveMethod, Target,
};
use maxent_tomo::Error;
use num_complex::{Complex, Complex64};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_set(r: &mut ChaCha8Rng, n: usize) -> LagrangeSet<f64> {
    let k = r.random_range(2..=n);
    LagrangeSet::new(
        Target::new(n, k).unwrap(),
        r.random_range(-3.0..3.0),
        Complex64::new(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0)),
        r.random_range(-3.0..3.0),
    )
    .unwrap()
}

/// Record read off a full density matrix.
fn record_of(rho: &ComplexMatrix<f64>, target: Target) -> MeasurementRecord<f64> {
    let kk = target.index_k() - 1;
    MeasurementRecord::new(target, rho[(0, 0)].re, rho[(0, kk)], Some(rho[(kk, kk)].re)).unwrap()
}

fn min_minor_eigenvalue(r: &MeasurementRecord<f64>) -> f64 {
    let (a, d) = (r.x11, r.xkk.unwrap());
    let mean = 0.5 * (a + d);
    mean - (0.25 * (a - d) * (a - d) + r.x1k.norm_sqr()).sqrt()
}

#[test]
fn density_agrees_with_taylor_exponential() {
    let mut r = rng(101);
    for i in 0..1000 {
        let n = if i % 2 == 0 { 4 } else { 8 };
        let ls = random_set(&mut r, n);
        let e = expm_taylor(&build_exponent(&ls));
        let oracle = e.scale_real(1.0 / e.trace().re);
        let rho = density_from_lagrange(&ls);
        assert!(rho.matrix().max_abs_diff(&oracle) < 1e-10, "set {ls:?}");
    }
}

#[test]
fn unconstrained_diagonal_is_uniform() {
    let mut r = rng(102);
    for _ in 0..200 {
        let ls = random_set(&mut r, 8);
        let sp = spectrum(&ls);
        let rho = density_from_lagrange(&ls);
        let kk = ls.target.index_k() - 1;
        for i in (0..8).filter(|&i| i != 0 && i != kk) {
            assert!((rho.matrix()[(i, i)].re - 1.0 / sp.z).abs() < 1e-10);
        }
        assert!(rho.matrix().is_hermitian(1e-12));
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}

#[test]
fn reference_forward_values() {
    let t = Target::new(4, 2).unwrap();
    let ls = LagrangeSet::real(t, 1.0f64, 0.5, 0.0).unwrap();
    let rec = forward_expectations(&ls);
    assert!((rec.x11 - 0.12337465742397342).abs() < 1e-12);
    assert!((rec.x1k.re + 0.09327301679718905).abs() < 1e-12);
    assert!((rec.xkk.unwrap() - 0.3099206910183515).abs() < 1e-12);
    assert!((spectrum(&ls).z - 3.5291751964673166).abs() < 1e-12);

    let zero = forward_expectations(&LagrangeSet::zero(t));
    assert_eq!((zero.x11, zero.xkk), (0.25, Some(0.25)));
}

#[test]
fn roundtrip_over_random_feasible_records() {
    let mut r = rng(103);
    let mut checked = 0;
    while checked < 300 {
        let n = if checked % 2 == 0 { 4 } else { 8 };
        let k = r.random_range(2..=n);
        let rho = random_density(&mut r, n, 0.05);
        let rec = record_of(&rho, Target::new(n, k).unwrap());
        if min_minor_eigenvalue(&rec) < 1e-6 {
            continue;
        }
        checked += 1;
        let cf = solve_lagrange(&rec, SolveMethod::ClosedForm).unwrap();
        assert!(forward_expectations(&cf.set).max_abs_diff(&rec) < 1e-8);
        if checked % 10 == 0 {
            let nt = solve_lagrange(&rec, SolveMethod::Newton).unwrap();
            assert!(forward_expectations(&nt.set).max_abs_diff(&rec) < 1e-8);
            assert!(nt.set.max_abs_diff(&cf.set) < 1e-6);
        }
    }
}

#[test]
fn grid_method_recovers_known_multipliers() {
    let t = Target::new(4, 3).unwrap();
    let truth = LagrangeSet::new(t, 0.7, Complex64::new(-1.1, 0.4), -0.3).unwrap();
    let rec = forward_expectations(&truth);
    let sol = solve_lagrange(&rec, SolveMethod::Grid).unwrap();
    assert!(sol.set.max_abs_diff(&truth) < 1e-8);
}

#[test]
fn pure_state_records_saturate_the_minor() {
    let mut r = rng(104);
    for _ in 0..500 {
        let n = 8;
        let k = r.random_range(2..=n);
        let amps: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
        let pure = DensityMatrix::pure(&amps).unwrap();
        let rec = record_of(pure.matrix(), Target::new(n, k).unwrap());
        let xkk = rec.xkk.unwrap();
        assert!((rec.x1k.norm_sqr() - rec.x11 * xkk).abs() < 1e-9);
        if rec.x11 > 1e-3 {
            let p = predict_population(rec.x11, rec.x1k).unwrap();
            assert!((p.value - xkk).abs() < 1e-9);
        }
    }
}

#[test]
fn maxent_state_has_largest_entropy_under_constraints() {
    let mut r = rng(105);
    for case in 0..100 {
        let n = if case % 2 == 0 { 4 } else { 8 };
        let k = r.random_range(2..=n);
        let t = Target::new(n, k).unwrap();
        let rec = record_of(&random_density(&mut r, n, 0.05), t);
        let sol = solve_lagrange(&rec, SolveMethod::ClosedForm).unwrap();
        let rho = density_from_lagrange(&sol.set);
        let s_max = von_neumann_entropy(&rho);
        let kk = k - 1;
        for _ in 0..50 {
            // Hermitian, traceless and zero on the constrained entries.
            let mut h = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    let constrained = (i == 0 && (j == 0 || j == kk)) || (i == kk && j == kk);
                    if constrained {
                        continue;
                    }
                    let z = if i == j {
                        Complex64::new(r.random_range(-1.0..1.0), 0.0)
                    } else {
                        Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
                    };
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
            let free: Vec<usize> = (0..n).filter(|&i| i != 0 && i != kk).collect();
            let shift = h.trace().re / free.len() as f64;
            for &i in &free {
                h[(i, i)] -= shift;
            }
            let mut eps = 0.2;
            let sigma = loop {
                let cand = rho.matrix() + &h.scale_real(eps);
                if let Ok(d) = DensityMatrix::new(cand) {
                    break d;
                }
                eps *= 0.5;
            };
            let back = record_of(sigma.matrix(), t);
            assert!(back.max_abs_diff(&rec) < 1e-12);
            assert!(von_neumann_entropy(&sigma) <= s_max + 1e-9);
        }
    }
}

#[test]
fn reconstruct_examples() {
    let bell = MeasurementRecord::new(Target::new(4, 4).unwrap(), 0.5, Complex64::new(0.5, 0.0), None).unwrap();
    let out = reconstruct(&bell, ReconstructOptions::default()).unwrap();
    let expected = DensityMatrix::pure(&[
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ])
    .unwrap();
    assert!(out.density.matrix().max_abs_diff(expected.matrix()) < 1e-10);
    assert!(out.near_singular);
    assert!(fidelity(&out.density, &expected).unwrap() > 1.0 - 1e-9);

    let partial = MeasurementRecord::new(Target::new(4, 2).unwrap(), 0.4, Complex64::new(0.2, 0.0), None).unwrap();
    let out = reconstruct(&partial, ReconstructOptions::default()).unwrap();
    assert!((out.record.xkk.unwrap() - 0.1).abs() < 1e-15);
    assert!(forward_expectations(&out.lagrange).max_abs_diff(&out.record) < 1e-8);
}

#[test]
fn infeasible_record_is_reported() {
    let t = Target::new(4, 2).unwrap();
    let too_coherent = MeasurementRecord::from_estimates(t, 0.3, Complex64::new(0.4, 0.0), Some(0.3)).unwrap();
    assert!(matches!(
        solve_lagrange(&too_coherent, SolveMethod::ClosedForm),
        Err(Error::Infeasible(_))
    ));
    assert!(MeasurementRecord::new(t, 1.2, Complex64::new(0.0, 0.0), None).is_err());
}

#[test]
fn fidelity_examples() {
    let mixed = DensityMatrix::<f64>::maximally_mixed(4);
    assert!((fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
    let mut ket = vec![Complex64::new(0.0, 0.0); 4];
    ket[0] = Complex64::new(1.0, 0.0);
    let zero = DensityMatrix::pure(&ket).unwrap();
    assert!((fidelity(&zero, &mixed).unwrap() - 0.25).abs() < 1e-12);
    assert!((fidelity(&mixed, &zero).unwrap() - 0.25).abs() < 1e-12);
    assert!(fidelity(&zero, &DensityMatrix::maximally_mixed(8)).is_err());
}

#[test]
fn fidelity_is_symmetric() {
    let mut r = rng(106);
    for _ in 0..50 {
        let a = DensityMatrix::new(random_density(&mut r, 4, 0.0)).unwrap();
        let b = DensityMatrix::new(random_density(&mut r, 4, 0.0)).unwrap();
        let (ab, ba) = (fidelity(&a, &b).unwrap(), fidelity(&b, &a).unwrap());
        assert!((ab - ba).abs() < 1e-9);
        assert!((0.0..=1.0).contains(&ab));
    }
}

#[test]
fn heatmap_coherence_is_odd_in_coupling() {
    let grid = HeatmapGrid {
        target: Target::new(4, 2).unwrap(),
        lam_11: GridAxis::new(-2.0f64, 2.0, 9).unwrap(),
        lam_1k_re: GridAxis::new(-2.0, 2.0, 9).unwrap(),
        lam_1k_im: 0.0,
        lam_kk: 0.0,
    };
    let rows = heatmap_scan(&grid).unwrap();
    assert_eq!(rows.len(), 81);
    for row in rows.chunks(9) {
        for j in 0..9 {
            let (a, b) = (row[j], row[8 - j]);
            assert!((a.x1k.re + b.x1k.re).abs() < 1e-14);
            assert!((a.x11 - b.x11).abs() < 1e-14);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let mut r = rng(107);
    for _ in 0..100 {
        let ls = random_set(&mut r, 4);
        let ls32 = LagrangeSet::new(
            ls.target,
            ls.lam_11 as f32,
            Complex::new(ls.lam_1k.re as f32, ls.lam_1k.im as f32),
            ls.lam_kk as f32,
        )
        .unwrap();
        let a = density_from_lagrange(&ls);
        let b = density_from_lagrange(&ls32).matrix().cast::<f64>();
        assert!(a.matrix().max_abs_diff(&b) < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn forward_then_inverse_recovers_multipliers(
        l11 in -3.0f64..3.0, re1k in -3.0f64..3.0, im1k in -3.0f64..3.0, lkk in -3.0f64..3.0, k in 2usize..=8
    ) {
        let truth = LagrangeSet::new(Target::new(8, k).unwrap(), l11, Complex64::new(re1k, im1k), lkk).unwrap();
        let rec = forward_expectations(&truth);
        prop_assume!(min_minor_eigenvalue(&rec) >= 1e-6);
        let sol = solve_lagrange(&rec, SolveMethod::ClosedForm).unwrap();
        prop_assert!(forward_expectations(&sol.set).max_abs_diff(&rec) < 1e-8);
        prop_assert!(sol.set.max_abs_diff(&truth) < 1e-6);
    }
}
