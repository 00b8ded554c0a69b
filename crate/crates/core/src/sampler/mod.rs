//! Shot sampling, readout noise and calibration-matrix mitigation.

mod calibration;
mod counts;
mod estimate;

pub use calibration::{
    build_calibration, build_calibration_empirical, mitigate, mitigate_frequencies, CalibrationMatrix, ReadoutNoise,
};
pub use counts::{estimate_populations, sample_counts, CountsTable, StreamKey};
pub use estimate::{estimate_coherence, estimate_pauli, Backend, ShotMode};
