use std::fmt::Write as _;

use num_complex::Complex;
use serde::Deserialize;

use super::Target;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Where the `x_KK` value of a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Measured,
    Predicted,
}

/// Mean values of the three constrained observables.
///
/// `x1k` is the `(1, K)` element of the density matrix, which is the mean
/// of the operator `|K><1|`. `xkk` may be missing, in which case it is
/// predicted during reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementRecord<T> {
    pub target: Target,
    pub x11: T,
    pub x1k: Complex<T>,
    pub xkk: Option<T>,
    pub source: Provenance,
}

impl<T: Real> MeasurementRecord<T> {
    /// A measured record; checks ranges and the positivity constraints.
    pub fn new(target: Target, x11: T, x1k: Complex<T>, xkk: Option<T>) -> Result<Self> {
        let r = Self::from_estimates(target, x11, x1k, xkk)?;
        r.check_consistency()?;
        Ok(r)
    }

    /// A record built from noisy estimates: only finiteness and the `[0, 1]`
    /// ranges of the populations are enforced. Use a projecting
    /// reconstruction for such data.
    pub fn from_estimates(target: Target, x11: T, x1k: Complex<T>, xkk: Option<T>) -> Result<Self> {
        let finite = x11.is_finite()
            && x1k.re.is_finite()
            && x1k.im.is_finite()
            && xkk.is_none_or(T::is_finite);
        if !finite {
            return Err(Error::validation("record values must be finite"));
        }
        let unit = |x: T| x >= T::zero() && x <= T::one();
        if !unit(x11) {
            return Err(Error::validation(format!("x11 = {x11} outside [0, 1]")));
        }
        if let Some(xkk) = xkk {
            if !unit(xkk) {
                return Err(Error::validation(format!("xkk = {xkk} outside [0, 1]")));
            }
        }
        Ok(Self {
            target,
            x11,
            x1k,
            xkk,
            source: Provenance::Measured,
        })
    }

    /// Checks `|x1k| <= 1`, `x11 + xkk <= 1` and `|x1k|² <= x11·xkk` up to the policy slack.
    pub fn check_consistency(&self) -> Result<()> {
        let slack = T::lit(T::POLICY.record_slack);
        if self.x1k.norm() > T::one() + slack {
            return Err(Error::Infeasible(format!("|x1k| = {} exceeds 1", self.x1k.norm())));
        }
        if let Some(xkk) = self.xkk {
            if self.x11 + xkk > T::one() + slack {
                return Err(Error::Infeasible(format!(
                    "x11 + xkk = {} exceeds 1",
                    self.x11 + xkk
                )));
            }
            if self.x1k.norm_sqr() > self.x11 * xkk + slack {
                return Err(Error::Infeasible(format!(
                    "|x1k|^2 = {} exceeds x11*xkk = {}",
                    self.x1k.norm_sqr(),
                    self.x11 * xkk
                )));
            }
        }
        Ok(())
    }

    pub fn with_predicted(mut self, xkk: T) -> Self {
        self.xkk = Some(xkk);
        self.source = Provenance::Predicted;
        self
    }

    pub fn with_measured(mut self, xkk: T) -> Self {
        self.xkk = Some(xkk);
        self.source = Provenance::Measured;
        self
    }

    /// Largest component difference; a missing `xkk` on either side counts as zero.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let kk = (self.xkk.unwrap_or(T::zero()) - other.xkk.unwrap_or(T::zero())).abs();
        (self.x11 - other.x11)
            .abs()
            .max((self.x1k.re - other.x1k.re).abs())
            .max((self.x1k.im - other.x1k.im).abs())
            .max(kk)
    }

    /// Flat `key = value` text form with keys `n, k, x11, re_x1k, im_x1k, xkk`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.target.dim_n());
        let _ = writeln!(out, "k = {}", self.target.index_k());
        let _ = writeln!(out, "x11 = {:?}", self.x11.as_f64());
        let _ = writeln!(out, "re_x1k = {:?}", self.x1k.re.as_f64());
        let _ = writeln!(out, "im_x1k = {:?}", self.x1k.im.as_f64());
        if let Some(xkk) = self.xkk {
            let _ = writeln!(out, "xkk = {:?}", xkk.as_f64());
        }
        out
    }

    /// Parses the text form. Range violations are validation errors; the
    /// positivity constraints are left to the caller (see [`Self::check_consistency`]).
    pub fn from_text(text: &str) -> Result<Self> {
        let file: RecordFile = toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0);
            Error::parse(line, e.message().to_string())
        })?;
        let target = Target::new(file.n, file.k)?;
        Self::from_estimates(
            target,
            T::lit(file.x11),
            Complex::new(T::lit(file.re_x1k), T::lit(file.im_x1k)),
            file.xkk.map(T::lit),
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordFile {
    n: usize,
    k: usize,
    x11: f64,
    re_x1k: f64,
    #[serde(default)]
    im_x1k: f64,
    xkk: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t4() -> Target {
        Target::new(4, 2).unwrap()
    }

    #[test]
    fn consistency_checks() {
        assert!(MeasurementRecord::new(t4(), 0.4, Complex::new(0.2, 0.0), Some(0.2)).is_ok());
        assert!(matches!(
            MeasurementRecord::new(t4(), 0.7, Complex::new(0.0, 0.0), Some(0.4)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            MeasurementRecord::new(t4(), 0.25, Complex::new(0.3, 0.0), Some(0.25)),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            MeasurementRecord::new(t4(), 1.2, Complex::new(0.0, 0.0), None),
            Err(Error::Validation(_))
        ));
        // Bell-state data sits exactly on both boundaries.
        assert!(MeasurementRecord::new(Target::new(4, 4).unwrap(), 0.5, Complex::new(0.5, 0.0), Some(0.5)).is_ok());
    }

    #[test]
    fn text_roundtrip_and_optional_xkk() {
        let r = MeasurementRecord::new(t4(), 0.4, Complex::new(0.2, -0.05), None).unwrap();
        let text = r.to_text();
        assert!(!text.contains("xkk"));
        let back = MeasurementRecord::<f64>::from_text(&text).unwrap();
        assert_eq!(back, r);
        let full = r.with_measured(0.2);
        let back = MeasurementRecord::<f64>::from_text(&full.to_text()).unwrap();
        assert_eq!(back.xkk, Some(0.2));
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            MeasurementRecord::<f64>::from_text("n = 4\nk = 2\nx11 = 0.5\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            MeasurementRecord::<f64>::from_text("n = 4\nk = 9\nx11 = 0.5\nre_x1k = 0.1\n"),
            Err(Error::Validation(_))
        ));
        assert!(MeasurementRecord::<f64>::from_text("n = 4\nk = 2\nx11 = 0.5\nre_x1k = 0.1\nbogus = 1.0\n").is_err());
    }
}
