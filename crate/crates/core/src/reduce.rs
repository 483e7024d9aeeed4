//! Reduction of measured force-displacement curves: plateau moments, pressure
//! scaling and moment-rotation law parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Module, Result};
use crate::units::de;

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.15;
pub const MIN_SAMPLES: usize = 10;
/// A plateau window steeper than this fraction of the whole curve's mean
/// absolute slope is flagged as low confidence.
pub const LOW_CONFIDENCE_SLOPE_RATIO: f64 = 0.1;

/// Force measured at a fixed distance from the clamp while the tip is
/// displaced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCurve")]
pub struct MeasuredCurve {
    /// `(displacement m, force N)` pairs.
    pub samples: Vec<[f64; 2]>,
    /// Distance from the clamp to the loading point (m).
    pub lever_arm: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    samples: Vec<[f64; 2]>,
    #[serde(deserialize_with = "de::length")]
    lever_arm: f64,
}

impl TryFrom<RawCurve> for MeasuredCurve {
    type Error = Error;
    fn try_from(raw: RawCurve) -> Result<Self> {
        Self::new(raw.samples, raw.lever_arm)
    }
}

impl MeasuredCurve {
    pub fn new(samples: Vec<[f64; 2]>, lever_arm: f64) -> Result<Self> {
        if !(lever_arm.is_finite() && lever_arm > 0.0) {
            return Err(Error::domain(Module::Reduce, "lever_arm", lever_arm, "(0, inf)"));
        }
        if samples.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid(Module::Reduce, "samples must be finite"));
        }
        if samples.windows(2).any(|w| w[1][0] <= w[0][0]) {
            return Err(Error::invalid(
                Module::Reduce,
                "displacements must be strictly increasing",
            ));
        }
        Ok(Self { samples, lever_arm })
    }

    /// `(displacement, moment)` with moment = force * lever arm.
    pub fn moments(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|&[d, f]| [d, f * self.lever_arm]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlateauEstimate {
    /// Mean moment over the flattest window (N*m).
    pub moment: f64,
    /// Index of the first sample in the window.
    pub start: usize,
    /// Samples in the window.
    pub len: usize,
    pub mean_abs_slope: f64,
    pub window_fraction: f64,
    pub low_confidence: bool,
}

fn window_len(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).round() as usize).clamp(2, n)
}

/// Mean moment of the sliding window with the smallest mean absolute slope.
/// The earliest such window wins.
pub fn extract_plateau(curve: &MeasuredCurve, window_fraction: f64) -> Result<PlateauEstimate> {
    let n = curve.samples.len();
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            got: n,
            need: MIN_SAMPLES,
        });
    }
    if !(window_fraction > 0.0 && window_fraction <= 0.5) {
        return Err(Error::domain(
            Module::Reduce,
            "window_fraction",
            window_fraction,
            "(0, 0.5]",
        ));
    }
    let pts = curve.moments();
    let slopes: Vec<f64> = pts
        .windows(2)
        .map(|w| ((w[1][1] - w[0][1]) / (w[1][0] - w[0][0])).abs())
        .collect();
    let len = window_len(n, window_fraction);
    let (start, mean_abs_slope) = (0..=n - len)
        .map(|s| (s, slopes[s..s + len - 1].iter().sum::<f64>() / (len - 1) as f64))
        .fold((0, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let moment = pts[start..start + len].iter().map(|p| p[1]).sum::<f64>() / len as f64;
    let global = slopes.iter().sum::<f64>() / slopes.len() as f64;
    Ok(PlateauEstimate {
        moment,
        start,
        len,
        mean_abs_slope,
        window_fraction,
        low_confidence: mean_abs_slope > LOW_CONFIDENCE_SLOPE_RATIO * global,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureFit {
    /// N*m per Pa.
    pub slope: f64,
    /// N*m.
    pub intercept: f64,
    /// `(pressure Pa, plateau moment N*m)` used in the fit.
    pub points: Vec<[f64; 2]>,
    pub window_fraction: f64,
}

/// Least-squares line through `(pressure, plateau moment)`.
pub fn fit_pressure_scaling(curves: &[(f64, MeasuredCurve)], window_fraction: f64) -> Result<PressureFit> {
    if let Some(&(p, _)) = curves.iter().find(|(p, _)| !(p.is_finite() && *p > 0.0)) {
        return Err(Error::domain(Module::Reduce, "pressure", p, "(0, inf)"));
    }
    let mut distinct: Vec<f64> = curves.iter().map(|c| c.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::InsufficientSpan(format!(
            "{} distinct pressures, need at least 3",
            distinct.len()
        )));
    }
    let span = distinct[distinct.len() - 1] / distinct[0];
    if span < 2.0 {
        return Err(Error::InsufficientSpan(format!("pressure ratio {span} is below 2")));
    }
    let points = curves
        .iter()
        .map(|(p, c)| Ok([*p, extract_plateau(c, window_fraction)?.moment]))
        .collect::<Result<Vec<_>>>()?;
    let (slope, intercept) = least_squares(&points);
    Ok(PressureFit {
        slope,
        intercept,
        points,
        window_fraction,
    })
}

fn least_squares(points: &[[f64; 2]]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p[0]).sum::<f64>() / n;
    let my = points.iter().map(|p| p[1]).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p[0] - mx) * (p[1] - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p[0] - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Moment-rotation law parameters read off a measured curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LawFit {
    /// N*m/rad.
    pub elastic_slope: f64,
    /// rad.
    pub plateau_onset_angle: f64,
    pub plateau: PlateauEstimate,
}

/// Rotation of the loading point about the clamp, `atan(displacement / lever)`.
pub fn rotation_angle(curve: &MeasuredCurve, displacement: f64) -> f64 {
    (displacement / curve.lever_arm).atan()
}

/// Fits the elastic slope through the origin over samples below half the
/// plateau moment, and takes the plateau onset angle at the start of the
/// plateau window.
pub fn fit_joint_law(curve: &MeasuredCurve, window_fraction: f64) -> Result<LawFit> {
    let plateau = extract_plateau(curve, window_fraction)?;
    let rising: Vec<[f64; 2]> = curve
        .moments()
        .into_iter()
        .map(|[d, m]| [rotation_angle(curve, d), m])
        .filter(|&[a, m]| a > 0.0 && m < 0.5 * plateau.moment)
        .collect();
    if rising.is_empty() {
        return Err(Error::InsufficientSpan(
            "no samples below half the plateau moment".into(),
        ));
    }
    let elastic_slope =
        rising.iter().map(|p| p[0] * p[1]).sum::<f64>() / rising.iter().map(|p| p[0] * p[0]).sum::<f64>();
    let plateau_onset_angle = rotation_angle(curve, curve.samples[plateau.start][0]);
    Ok(LawFit {
        elastic_slope,
        plateau_onset_angle,
        plateau,
    })
}
