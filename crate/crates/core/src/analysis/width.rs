use std::f64::consts::FRAC_1_SQRT_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_search_step, PEAK_TOL_LAMBDA};
use crate::error::Result;
use crate::field::{Axis, FocalSpec, FocusedArray};
use crate::geometry::{ElementSet, Point2, ValidityRegion};
use crate::search::{bisect, golden_max};

/// Crossing refinement tolerance, in wavelengths.
const CROSSING_TOL_LAMBDA: f64 = 1e-7;

/// Half-width of the window searched for the focal peak, in wavelengths.
const PEAK_WINDOW_LAMBDA: f64 = 0.5;

/// 3 dB width along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisWidth {
    pub axis: Axis,
    pub peak: Point2,
    pub peak_field: f64,
    /// Half-power crossings on either side of the peak, when both exist.
    pub crossings: Option<(Point2, Point2)>,
    pub width_m: Option<f64>,
    /// Both crossings found and at least the margin away from the array.
    pub resolvable: bool,
}

impl AxisWidth {
    pub fn width_lambda(&self, wavelength_m: f64) -> Option<f64> {
        self.width_m.map(|w| w / wavelength_m)
    }
}

/// Half-power (`|E| = peak/√2`) width along `axis` through the focal point.
///
/// The peak is searched within `±0.5λ` of the focal point on the line,
/// then the field is walked outward at `search_step` until it drops below
/// the half-power level; each crossing is refined by bisection.
pub fn focal_width(focused: &FocusedArray<'_>, axis: Axis, search_step: f64) -> Result<AxisWidth> {
    let lambda = focused.wavelength_m();
    check_search_step(search_step, lambda)?;
    let focal = focused.focal().point;
    let c = axis.coord(focal);
    let at = |t: f64| axis.point_on_line(focal, t);

    // coarse peak search around the focal point
    let m = (PEAK_WINDOW_LAMBDA * lambda / search_step).ceil() as i64;
    let mut best: Option<(i64, f64)> = None;
    for i in -m..=m {
        let p = at(c + i as f64 * search_step);
        if focused.is_valid(p) {
            let v = focused.magnitude_at(p)?;
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }
    let Some((i, coarse)) = best else {
        return Ok(AxisWidth {
            axis,
            peak: focal,
            peak_field: 0.0,
            crossings: None,
            width_m: None,
            resolvable: false,
        });
    };
    let ti = c + i as f64 * search_step;
    let lo = if focused.is_valid(at(ti - search_step)) {
        ti - search_step
    } else {
        ti
    };
    let hi = if focused.is_valid(at(ti + search_step)) {
        ti + search_step
    } else {
        ti
    };
    let (t_peak, peak_field) = if lo < hi {
        let (t, v) = golden_max(
            |t| focused.magnitude_at(at(t)).unwrap_or(f64::NEG_INFINITY),
            lo,
            hi,
            PEAK_TOL_LAMBDA * lambda,
        );
        if v >= coarse {
            (t, v)
        } else {
            (ti, coarse)
        }
    } else {
        (ti, coarse)
    };

    let threshold = peak_field * FRAC_1_SQRT_2;
    let limit = 2.0 * focused.elements().radius_m();
    let walk = |dir: f64| -> Result<Option<f64>> {
        let mut prev = t_peak;
        let mut j = 1;
        loop {
            let t = t_peak + dir * j as f64 * search_step;
            if (t - t_peak).abs() > limit {
                return Ok(None);
            }
            let p = at(t);
            if !focused.is_valid(p) {
                return Ok(None);
            }
            if focused.magnitude_at(p)? < threshold {
                let root = bisect(
                    |s| focused.magnitude_at(at(s)).unwrap_or(0.0) - threshold,
                    prev,
                    t,
                    CROSSING_TOL_LAMBDA * lambda,
                );
                return Ok(root);
            }
            prev = t;
            j += 1;
        }
    };
    let left = walk(-1.0)?;
    let right = walk(1.0)?;
    let crossings = left.zip(right).map(|(l, r)| (at(l), at(r)));
    let resolvable = crossings.is_some_and(|(a, b)| focused.is_valid(a) && focused.is_valid(b));
    Ok(AxisWidth {
        axis,
        peak: at(t_peak),
        peak_field,
        crossings,
        width_m: left.zip(right).map(|(l, r)| r - l),
        resolvable,
    })
}

/// Focal widths along `x` and `y` for one focal position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WidthRecord {
    pub x_f_m: f64,
    pub x_f_lambda: f64,
    pub width_x_lambda: Option<f64>,
    pub width_y_lambda: Option<f64>,
    /// Both widths resolvable (neither 3 dB contour reaches the margin).
    pub resolvable: bool,
    pub focal_masked: bool,
    pub x: Option<AxisWidth>,
    pub y: Option<AxisWidth>,
}

pub fn width_scan(
    elements: &ElementSet,
    region: &ValidityRegion,
    focal_xs: &[f64],
    search_step: f64,
) -> Result<Vec<WidthRecord>> {
    let lambda = elements.wavelength_m();
    check_search_step(search_step, lambda)?;
    focal_xs
        .par_iter()
        .map(|&x_f| {
            let focused =
                FocusedArray::new(elements, FocalSpec::on_x_axis(x_f))?.with_region(*region);
            if !focused.is_valid(focused.focal().point) {
                return Ok(WidthRecord {
                    x_f_m: x_f,
                    x_f_lambda: x_f / lambda,
                    width_x_lambda: None,
                    width_y_lambda: None,
                    resolvable: false,
                    focal_masked: true,
                    x: None,
                    y: None,
                });
            }
            let wx = focal_width(&focused, Axis::X, search_step)?;
            let wy = focal_width(&focused, Axis::Y, search_step)?;
            Ok(WidthRecord {
                x_f_m: x_f,
                x_f_lambda: x_f / lambda,
                width_x_lambda: wx.width_lambda(lambda),
                width_y_lambda: wy.width_lambda(lambda),
                resolvable: wx.resolvable && wy.resolvable,
                focal_masked: false,
                x: Some(wx),
                y: Some(wy),
            })
        })
        .collect()
}
