use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_search_step, DbConvention, LineProfile, RecordStatus};
use crate::error::Result;
use crate::field::{Axis, FocalSpec, FocusedArray};
use crate::geometry::{ElementSet, Point2, ValidityRegion};

/// Peak field along the `x` axis for one focal position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainScanRecord {
    pub x_f_m: f64,
    pub x_f_lambda: f64,
    /// Largest `|E|` over valid points of the line, V/m.
    pub peak_field: Option<f64>,
    /// Where that maximum sits; may differ from `x_f` by the focal shift.
    pub peak_location_m: Option<f64>,
    pub gain_db: Option<f64>,
    pub status: RecordStatus,
}

/// For every focal position `x_f`, searches the whole valid part of the
/// `x` axis for the largest field magnitude (coarse grid at
/// `search_step`, then golden-section refinement).
pub fn peak_gain_scan(
    elements: &ElementSet,
    region: &ValidityRegion,
    focal_xs: &[f64],
    search_step: f64,
    convention: DbConvention,
) -> Result<Vec<GainScanRecord>> {
    let lambda = elements.wavelength_m();
    check_search_step(search_step, lambda)?;
    focal_xs
        .par_iter()
        .map(|&x_f| {
            let focal = FocalSpec::on_x_axis(x_f);
            let focused = FocusedArray::new(elements, focal)?.with_region(*region);
            let mut record = GainScanRecord {
                x_f_m: x_f,
                x_f_lambda: x_f / lambda,
                peak_field: None,
                peak_location_m: None,
                gain_db: None,
                status: RecordStatus::Ok,
            };
            if !focused.is_valid(focal.point) {
                record.status = RecordStatus::FocalMasked;
                return Ok(record);
            }
            let profile = LineProfile::sample(&focused, Axis::X, Point2::ORIGIN, search_step)?;
            let Some(i) = profile.argmax() else {
                record.status = RecordStatus::NoValidPoints;
                return Ok(record);
            };
            let (t, v) = profile.refine(&focused, i)?;
            record.peak_field = Some(v);
            record.peak_location_m = Some(t);
            record.gain_db = Some(convention.to_db(v));
            Ok(record)
        })
        .collect()
}
