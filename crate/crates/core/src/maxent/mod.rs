//! Maximal-entropy density matrices constrained on a single two-level block.

mod density;
mod heatmap;
mod lagrange;
mod record;
mod solve;
mod spectrum;

pub use density::{density_from_lagrange, fidelity, von_neumann_entropy, DensityMatrix};
pub use heatmap::{heatmap_scan, GridAxis, HeatmapGrid, HeatmapRow};
pub use lagrange::{build_exponent, LagrangeSet, Target};
pub use record::{MeasurementRecord, Provenance};
pub use solve::{
    predict_population, reconstruct, refine_lagrange, solve_lagrange, LagrangeSolution, PopulationPrediction,
    ReconstructOptions, Reconstruction, Regularization, SolveMethod,
};
pub use spectrum::{spectrum, BlockMode, ExponentSpectrum};

use crate::scalar::Real;

/// Expectations `(x11, x1K, xKK)` of the maximal-entropy state for `ls`.
pub fn forward_expectations<T: Real>(ls: &LagrangeSet<T>) -> MeasurementRecord<T> {
    let (x11, x1k, xkk) = spectrum(ls).block_moments();
    MeasurementRecord {
        target: ls.target,
        x11,
        x1k,
        xkk: Some(xkk),
        source: Provenance::Predicted,
    }
}
