use num_complex::Complex;

use super::{density_from_lagrange, DensityMatrix, LagrangeSet, MeasurementRecord, Provenance, Target};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, solve_real, ComplexMatrix};
use crate::scalar::{re, Real};

/// Predicted population together with whether it had to be clamped into `[0, 1 - x11]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationPrediction<T> {
    pub value: T,
    pub clamped: bool,
}

/// Predicts the missing population `x_KK = |x_1K|² / x_11`.
///
/// The relation is exact for pure states. Results outside `[0, 1 - x11]`
/// (possible with noisy inputs) are clamped and flagged.
pub fn predict_population<T: Real>(x11: T, x1k: Complex<T>) -> Result<PopulationPrediction<T>> {
    if !(x11 > T::lit(T::POLICY.population_floor)) {
        return Err(Error::Degenerate(format!(
            "x11 = {x11} is below the prediction floor"
        )));
    }
    let raw = x1k.norm_sqr() / x11;
    let upper = (T::one() - x11).max(T::zero());
    let value = raw.min(upper).max(T::zero());
    Ok(PopulationPrediction {
        value,
        clamped: value != raw,
    })
}

/// How the multipliers are obtained from a complete record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMethod {
    /// Matrix logarithm of the normalised 2×2 block.
    #[default]
    ClosedForm,
    /// Damped Newton on the convex dual, started from zero multipliers.
    Newton,
    /// Coarse scan of the dual over a box of multipliers, refined by Newton.
    Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangeSolution<T> {
    pub set: LagrangeSet<T>,
    /// The 2×2 block of the record is (numerically) rank deficient, so the
    /// multipliers were computed with the eigenvalue floor.
    pub near_singular: bool,
    pub iterations: usize,
}

/// Inverts the forward map: finds multipliers whose maximal-entropy state
/// reproduces `x11`, `x1k` and `xkk`.
pub fn solve_lagrange<T: Real>(mr: &MeasurementRecord<T>, method: SolveMethod) -> Result<LagrangeSolution<T>> {
    let xkk = mr
        .xkk
        .ok_or_else(|| Error::validation("solving for multipliers needs xkk"))?;
    mr.check_consistency()?;
    let margin = T::lit(T::POLICY.infeasible_margin);
    if T::one() - mr.x11 - xkk < margin {
        return Err(Error::Infeasible(format!(
            "x11 + xkk = {} leaves no weight for the unconstrained states",
            mr.x11 + xkk
        )));
    }
    match method {
        SolveMethod::ClosedForm => closed_form(mr.target, mr.x11, mr.x1k, xkk),
        SolveMethod::Newton => {
            let targets = Moments::from_record(mr.x11, mr.x1k, xkk);
            newton(mr.target, &targets, [T::zero(); 4])
        }
        SolveMethod::Grid => {
            let targets = Moments::from_record(mr.x11, mr.x1k, xkk);
            let start = grid_scan(mr.target, &targets);
            let mut sol = newton(mr.target, &targets, start.0)?;
            sol.iterations += start.1;
            Ok(sol)
        }
    }
}

/// Newton refinement of the dual from an arbitrary starting set.
pub fn refine_lagrange<T: Real>(mr: &MeasurementRecord<T>, start: &LagrangeSet<T>) -> Result<LagrangeSolution<T>> {
    let xkk = mr
        .xkk
        .ok_or_else(|| Error::validation("solving for multipliers needs xkk"))?;
    let targets = Moments::from_record(mr.x11, mr.x1k, xkk);
    newton(
        mr.target,
        &targets,
        [start.lam_11, start.lam_1k.re, start.lam_1k.im, start.lam_kk],
    )
}

fn closed_form<T: Real>(target: Target, x11: T, x1k: Complex<T>, xkk: T) -> Result<LagrangeSolution<T>> {
    let rest = T::from_usize_lossy(target.dim_n() - 2);
    let z = rest / (T::one() - x11 - xkk);
    let block = ComplexMatrix::from_rows(&[vec![re(x11), x1k], vec![x1k.conj(), re(xkk)]])?;
    let sys = hermitian_eig(&block)?;
    let floor = T::lit(T::POLICY.log_floor);
    // log(Z·M) with the eigenvalue floor applied to Z·mu; mu is clipped at
    // zero first since the record check admits a slack on positivity.
    let log_block = sys.map_spectrum(|mu| (z * mu.max(T::zero())).max(floor).ln());
    let near_singular = sys.eigenvalues[0] <= T::lit(T::POLICY.record_slack);
    let set = LagrangeSet::new(
        target,
        -log_block[(0, 0)].re,
        -log_block[(0, 1)],
        -log_block[(1, 1)].re,
    )?;
    Ok(LagrangeSolution {
        set,
        near_singular,
        iterations: 0,
    })
}

/// Target moments `(x11, 2 Re x1K, 2 Im x1K, xKK)`, the means of the generators
/// conjugate to `(λ11, Re λ1K, Im λ1K, λKK)`.
struct Moments<T>([T; 4]);

impl<T: Real> Moments<T> {
    fn from_record(x11: T, x1k: Complex<T>, xkk: T) -> Self {
        let two = T::lit(2.0);
        Moments([x11, two * x1k.re, two * x1k.im, xkk])
    }

    fn from_block(m: &ComplexMatrix<T>) -> [T; 4] {
        let two = T::lit(2.0);
        [m[(0, 0)].re, two * m[(0, 1)].re, two * m[(0, 1)].im, m[(1, 1)].re]
    }
}

/// Log-partition function, generator means and their Hessian at `theta`.
struct DualModel<T> {
    log_z: T,
    means: [T; 4],
    hessian: Vec<Vec<T>>,
}

fn dual_model<T: Real>(rest: T, theta: [T; 4]) -> Result<DualModel<T>> {
    let [l11, u, v, lkk] = theta;
    let coupling = Complex::new(u, v);
    let block = ComplexMatrix::from_rows(&[
        vec![re(-l11), -coupling],
        vec![-coupling.conj(), re(-lkk)],
    ])?;
    let sys = hermitian_eig(&block)?;
    let mu = [sys.eigenvalues[0], sys.eigenvalues[1]];
    let shift = T::zero().max(mu[1]);
    let e = [(mu[0] - shift).exp(), (mu[1] - shift).exp()];
    let z_scaled = rest * (-shift).exp() + e[0] + e[1];
    let log_z = z_scaled.ln() + shift;

    let rho = sys.map_spectrum(|m| (m - shift).exp() / z_scaled);
    let means = Moments::from_block(&rho);

    // Divided differences of exp for the Fréchet derivative, scaled by e^-shift.
    let mut gamma = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let d = mu[i] - mu[j];
            gamma[i][j] = if d == T::zero() { e[j] } else { e[j] * d.exp_m1() / d };
        }
    }

    let zero = Complex::new(T::zero(), T::zero());
    let one = re(T::one());
    let i_unit = Complex::new(T::zero(), T::one());
    let directions = [
        [[-one, zero], [zero, zero]],
        [[zero, -one], [-one, zero]],
        [[zero, -i_unit], [i_unit, zero]],
        [[zero, zero], [zero, -one]],
    ];
    let vecs = &sys.vectors;
    let mut hessian = vec![vec![T::zero(); 4]; 4];
    for (l, dir) in directions.iter().enumerate() {
        // rotated = U† E U, weighted by gamma, rotated back.
        let mut rotated = [[zero; 2]; 2];
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = zero;
                for p in 0..2 {
                    for q in 0..2 {
                        acc += vecs[(p, a)].conj() * dir[p][q] * vecs[(q, b)];
                    }
                }
                rotated[a][b] = acc * gamma[a][b];
            }
        }
        let mut deriv = ComplexMatrix::zeros(2);
        for p in 0..2 {
            for q in 0..2 {
                let mut acc = zero;
                for a in 0..2 {
                    for b in 0..2 {
                        acc += vecs[(p, a)] * rotated[a][b] * vecs[(q, b)].conj();
                    }
                }
                deriv[(p, q)] = acc;
            }
        }
        let dmeans = Moments::from_block(&deriv);
        for k in 0..4 {
            hessian[k][l] = -(dmeans[k] / z_scaled + means[k] * means[l]);
        }
    }
    Ok(DualModel {
        log_z,
        means,
        hessian,
    })
}

fn dual_value<T: Real>(model: &DualModel<T>, theta: &[T; 4], targets: &Moments<T>) -> T {
    model.log_z + (0..4).map(|i| theta[i] * targets.0[i]).sum::<T>()
}

fn gradient<T: Real>(model: &DualModel<T>, targets: &Moments<T>) -> [T; 4] {
    let mut g = [T::zero(); 4];
    for i in 0..4 {
        g[i] = targets.0[i] - model.means[i];
    }
    g
}

fn max_norm<T: Real>(v: &[T; 4]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn newton<T: Real>(target: Target, targets: &Moments<T>, start: [T; 4]) -> Result<LagrangeSolution<T>> {
    let rest = T::from_usize_lossy(target.dim_n() - 2);
    let tol = T::lit(T::POLICY.newton_tol);
    let armijo = T::lit(1e-4);
    let half = T::lit(0.5);
    let mut theta = start;
    let mut model = dual_model(rest, theta)?;
    let mut grad = gradient(&model, targets);
    let mut iterations = 0;

    while iterations < T::POLICY.newton_max_iter && max_norm(&grad) > tol {
        iterations += 1;
        let neg_grad: Vec<T> = grad.iter().map(|&g| -g).collect();
        let mut step = solve_real(&model.hessian, &neg_grad, T::epsilon())
            .unwrap_or_else(|_| neg_grad.clone());
        let mut slope: T = (0..4).map(|i| grad[i] * step[i]).sum();
        if !(slope < T::zero()) {
            step = neg_grad;
            slope = (0..4).map(|i| grad[i] * step[i]).sum();
        }

        let f0 = dual_value(&model, &theta, targets);
        let mut alpha = T::one();
        let mut accepted = None;
        let resolution = T::lit(16.0) * T::epsilon() * T::one().max(f0.abs());
        for _ in 0..60 {
            if -(armijo * alpha * slope) < resolution {
                break;
            }
            let trial = std::array::from_fn(|i| theta[i] + alpha * step[i]);
            let trial_model = dual_model(rest, trial)?;
            if dual_value(&trial_model, &trial, targets) <= f0 + armijo * alpha * slope {
                accepted = Some((trial, trial_model));
                break;
            }
            alpha *= half;
        }
        // Close to the optimum the dual is flat to rounding; fall back to the
        // gradient norm to decide on the full step.
        let (trial, trial_model) = match accepted {
            Some(found) => found,
            None => {
                let trial = std::array::from_fn(|i| theta[i] + step[i]);
                let trial_model = dual_model(rest, trial)?;
                if max_norm(&gradient(&trial_model, targets)) < max_norm(&grad) {
                    (trial, trial_model)
                } else {
                    break;
                }
            }
        };
        theta = trial;
        model = trial_model;
        grad = gradient(&model, targets);
    }

    let residual = max_norm(&grad);
    if residual > T::lit(T::POLICY.record_slack) {
        return Err(Error::NoConvergence {
            method: "newton",
            iterations,
            residual: residual.as_f64(),
        });
    }
    Ok(LagrangeSolution {
        set: LagrangeSet::new(target, theta[0], Complex::new(theta[1], theta[2]), theta[3])?,
        near_singular: false,
        iterations,
    })
}

/// Coarse scan of the dual over `[-5, 5]^4`, then three zoom levels around the best point.
fn grid_scan<T: Real>(target: Target, targets: &Moments<T>) -> ([T; 4], usize) {
    let rest = T::from_usize_lossy(target.dim_n() - 2);
    let mut center = [T::zero(); 4];
    let mut half_width = T::lit(5.0);
    let mut evaluations = 0;
    for (level, points) in [9usize, 5, 5, 5].into_iter().enumerate() {
        let step = T::lit(2.0) * half_width / T::from_usize_lossy(points - 1);
        let mut best = (T::infinity(), center);
        let offsets: Vec<T> = (0..points)
            .map(|i| -half_width + step * T::from_usize_lossy(i))
            .collect();
        for &a in &offsets {
            for &b in &offsets {
                for &c in &offsets {
                    for &d in &offsets {
                        let theta = [center[0] + a, center[1] + b, center[2] + c, center[3] + d];
                        evaluations += 1;
                        if let Ok(model) = dual_model(rest, theta) {
                            let f = dual_value(&model, &theta, targets);
                            if f < best.0 {
                                best = (f, theta);
                            }
                        }
                    }
                }
            }
        }
        center = best.1;
        half_width = if level == 0 { step } else { step * T::lit(0.75) };
    }
    (center, evaluations)
}

/// How [`reconstruct`] treats records on or beyond the edge of the feasible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regularization {
    /// Accept records that satisfy the constraints up to the policy slack;
    /// records with no weight left outside `{1, K}` are shrunk by the floor.
    #[default]
    Boundary,
    /// Additionally project the 2×2 block onto the PSD cone; for noisy estimates.
    Project,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReconstructOptions {
    pub method: SolveMethod,
    pub regularization: Regularization,
}

/// Output of [`reconstruct`].
#[derive(Debug, Clone)]
pub struct Reconstruction<T> {
    pub density: DensityMatrix<T>,
    /// The input record with `xkk` filled in.
    pub record: MeasurementRecord<T>,
    pub lagrange: LagrangeSet<T>,
    pub near_singular: bool,
    pub prediction_clamped: bool,
    /// The record was moved (by at most the floor, or by PSD projection) before inversion.
    pub regularized: bool,
}

/// Completes the record (predicting `xkk` when missing), solves for the
/// multipliers and builds the maximal-entropy density matrix.
pub fn reconstruct<T: Real>(mr: &MeasurementRecord<T>, options: ReconstructOptions) -> Result<Reconstruction<T>> {
    let mut record = *mr;
    let mut prediction_clamped = false;
    if record.xkk.is_none() {
        let p = predict_population(mr.x11, mr.x1k)?;
        prediction_clamped = p.clamped;
        record = record.with_predicted(p.value);
    }
    let (regular, regularized) = regularize(&record, options.regularization)?;
    let sol = solve_lagrange(&regular, options.method)?;
    Ok(Reconstruction {
        density: density_from_lagrange(&sol.set),
        record,
        lagrange: sol.set,
        near_singular: sol.near_singular || regularized,
        prediction_clamped,
        regularized,
    })
}

fn regularize<T: Real>(mr: &MeasurementRecord<T>, mode: Regularization) -> Result<(MeasurementRecord<T>, bool)> {
    let mut x11 = mr.x11;
    let mut x1k = mr.x1k;
    let mut xkk = mr.xkk.expect("record completed before regularisation");
    let mut changed = false;

    match mode {
        Regularization::Boundary => mr.check_consistency()?,
        Regularization::Project => {
            let block = ComplexMatrix::from_rows(&[vec![re(x11), x1k], vec![x1k.conj(), re(xkk)]])?;
            let sys = hermitian_eig(&block)?;
            if sys.eigenvalues[0] < T::zero() {
                let clipped = sys.map_spectrum(|mu| mu.max(T::zero()));
                x11 = clipped[(0, 0)].re;
                x1k = clipped[(0, 1)];
                xkk = clipped[(1, 1)].re;
                changed = true;
            }
        }
    }

    let rest = T::from_usize_lossy(mr.target.dim_n() - 2);
    let cap = T::one() - rest * T::lit(T::POLICY.log_floor);
    let mass = x11 + xkk;
    if mass > cap {
        let s = cap / mass;
        x11 *= s;
        x1k *= s;
        xkk *= s;
        changed = true;
    }

    let out = MeasurementRecord {
        target: mr.target,
        x11,
        x1k,
        xkk: Some(xkk),
        source: if mr.source == Provenance::Predicted {
            Provenance::Predicted
        } else {
            Provenance::Measured
        },
    };
    Ok((out, changed))
}
