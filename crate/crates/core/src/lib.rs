//! Phase-conjugation near-field focusing of uniform circular arrays.
//!
//! The array elements are vertically polarized, omnidirectional in the
//! array plane and uncoupled. [`geometry`] builds full- and half-circle
//! arrays, [`field`] evaluates the phase-conjugated field, [`analysis`]
//! extracts peak gain, 3 dB focal width, sidelobe level and far-field
//! beamwidth, and [`closedform`] holds the Bessel and arc-integral limits
//! together with their quadrature oracles.

pub mod analysis;
pub mod closedform;
pub mod error;
pub mod field;
pub mod geometry;
pub mod output;
pub mod quadrature;
pub mod search;
pub mod special;
pub mod validate;

pub use analysis::{
    far_field_pattern, focal_width, nf_ff_comparison, peak_gain_scan, sidelobe_at, sidelobe_scan,
    width_scan, AxisWidth, DbConvention, FarFieldPattern, GainScanRecord, NfFfRow, RecordStatus,
    SidelobeDomain, SidelobeRecord, WidthRecord,
};
pub use closedform::{
    amplitude_sum_at, arc_integral, bessel_field, center_edge_ratio, closed_form_table,
    taylor_field_sum, ClosedFormRow, HalfCircleLimits,
};
pub use error::{NffError, Result};
pub use field::{
    field_at, field_line, field_map, Axis, FieldMap, FieldSample, FocalSpec, FocusedArray, GridSpec,
};
pub use geometry::{
    build_full_circle, build_half_circle, is_valid_point, ArrayConfig, ArrayKind, ElementSet,
    Point2, ValidityRegion,
};
pub use special::j0;

/// Symmetric focal positions `i·step` (meters) for integer `i` with
/// `start ≤ i·step ≤ stop`. Anchoring at zero keeps `x_f = 0` and mirrored
/// pairs exactly representable.
pub fn focal_positions(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(error::invalid(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    if !(start.is_finite() && stop.is_finite()) || start > stop {
        return Err(NffError::EmptyRange { start, stop });
    }
    let lo = (start / step - 1e-9).ceil() as i64;
    let hi = (stop / step + 1e-9).floor() as i64;
    if lo > hi {
        return Err(NffError::EmptyRange { start, stop });
    }
    Ok((lo..=hi).map(|i| i as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn focal_positions_standard_grid() {
        let lambda = 0.2;
        let xs = focal_positions(-7.0 * lambda, 7.0 * lambda, 0.1 * lambda).unwrap();
        assert_eq!(xs.len(), 141);
        assert_eq!(xs[70], 0.0);
        assert_eq!(xs[0], -xs[140]);
    }

    #[test]
    fn focal_positions_rejects_bad_input() {
        assert!(focal_positions(1.0, 0.0, 0.1).is_err());
        assert!(focal_positions(0.0, 1.0, 0.0).is_err());
        assert!(focal_positions(0.01, 0.02, 0.1).is_err());
    }
}
