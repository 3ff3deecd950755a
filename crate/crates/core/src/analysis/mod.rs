//! Scan-level metrics of the focused field.
//!
//! All scans move the focal point along the `x` axis. Every focal position
//! is evaluated independently (and in parallel); records always come back
//! in input order.

mod farfield;
mod gain;
mod sidelobe;
mod width;

use serde::{Deserialize, Serialize};

pub use farfield::{far_field_pattern, nf_ff_comparison, FarFieldPattern, NfFfRow};
pub use gain::{peak_gain_scan, GainScanRecord};
pub use sidelobe::{sidelobe_at, sidelobe_scan, SidelobeDomain, SidelobeRecord};
pub use width::{focal_width, width_scan, AxisWidth, WidthRecord};

use crate::error::{invalid, Result};
use crate::field::{Axis, FocusedArray};
use crate::geometry::Point2;
use crate::search::golden_max;

/// Conversion of a field magnitude (V/m) to decibels.
///
/// `Field10` (`10·log10`) is the default for gains. `Field20` (`20·log10`)
/// is the conventional amplitude ratio, used for sidelobe levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DbConvention {
    #[default]
    Field10,
    Field20,
}

impl DbConvention {
    pub fn to_db(self, ratio: f64) -> f64 {
        match self {
            DbConvention::Field10 => 10.0 * ratio.log10(),
            DbConvention::Field20 => 20.0 * ratio.log10(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            DbConvention::Field10 => "field10",
            DbConvention::Field20 => "field20",
        }
    }
}

/// Outcome flag shared by scan records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordStatus {
    Ok,
    /// The focal point lies in the masked region.
    FocalMasked,
    /// No valid observation point on the search line.
    NoValidPoints,
    /// No sidelobe inside the valid region.
    NoSidelobe,
}

/// Default coarse search step (`λ/50`).
pub fn default_search_step(wavelength_m: f64) -> f64 {
    wavelength_m / 50.0
}

pub(crate) fn check_search_step(step: f64, wavelength_m: f64) -> Result<()> {
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid(
            "search_step",
            format!("must be positive, got {step}"),
        ));
    }
    if step > wavelength_m / 50.0 * (1.0 + 1e-12) {
        return Err(invalid(
            "search_step",
            format!(
                "must not exceed λ/50 = {} m, got {step}",
                wavelength_m / 50.0
            ),
        ));
    }
    Ok(())
}

/// Tolerance of golden-section peak refinement, in wavelengths.
pub(crate) const PEAK_TOL_LAMBDA: f64 = 1e-7;

/// Magnitudes sampled along a line parallel to `axis` through `through`,
/// at coordinates `i·step` covering the aperture.
#[derive(Debug, Clone)]
pub(crate) struct LineProfile {
    pub axis: Axis,
    pub through: Point2,
    pub coords: Vec<f64>,
    pub mags: Vec<f64>,
    pub valid: Vec<bool>,
}

impl LineProfile {
    pub fn sample(
        focused: &FocusedArray<'_>,
        axis: Axis,
        through: Point2,
        step: f64,
    ) -> Result<Self> {
        let rc = focused.elements().radius_m();
        let m = (rc / step).ceil() as i64;
        let mut coords = Vec::with_capacity((2 * m + 1) as usize);
        let mut mags = Vec::with_capacity(coords.capacity());
        let mut valid = Vec::with_capacity(coords.capacity());
        for i in -m..=m {
            let t = i as f64 * step;
            let p = axis.point_on_line(through, t);
            let ok = focused.is_valid(p);
            coords.push(t);
            valid.push(ok);
            mags.push(if ok { focused.magnitude_at(p)? } else { 0.0 });
        }
        Ok(Self {
            axis,
            through,
            coords,
            mags,
            valid,
        })
    }

    pub fn point(&self, t: f64) -> Point2 {
        self.axis.point_on_line(self.through, t)
    }

    /// Index of the largest valid sample.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, (&m, &ok)) in self.mags.iter().zip(&self.valid).enumerate() {
            if ok && best.is_none_or(|b| m > self.mags[b]) {
                best = Some(i);
            }
        }
        best
    }

    /// Golden-section refinement of the sample at `i` between its valid
    /// neighbours. Returns `(coordinate, magnitude)`.
    pub fn refine(&self, focused: &FocusedArray<'_>, i: usize) -> Result<(f64, f64)> {
        let lo = if i > 0 && self.valid[i - 1] {
            self.coords[i - 1]
        } else {
            self.coords[i]
        };
        let hi = if i + 1 < self.coords.len() && self.valid[i + 1] {
            self.coords[i + 1]
        } else {
            self.coords[i]
        };
        if lo == hi {
            return Ok((self.coords[i], self.mags[i]));
        }
        let tol = PEAK_TOL_LAMBDA * focused.wavelength_m();
        let mut failure = None;
        let (t, v) = golden_max(
            |t| match focused.magnitude_at(self.point(t)) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            lo,
            hi,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        if v >= self.mags[i] {
            Ok((t, v))
        } else {
            Ok((self.coords[i], self.mags[i]))
        }
    }
}
