//! CSV serialisation of results.
//!
//! Numbers are written with 12 significant digits so that identical
//! results always produce identical bytes. Missing values are written as
//! `nan`.

use std::fmt::Write;

use crate::analysis::{GainScanRecord, NfFfRow, SidelobeRecord, WidthRecord};
use crate::closedform::ClosedFormRow;
use crate::field::{Axis, FieldMap, FieldSample};

pub const FIELD_MAP_HEADER: &str = "x_m,y_m,re,im,magnitude,valid";
pub const LINE_HEADER: &str = "coord_m,coord_lambda,magnitude,magnitude_norm,valid";
pub const GAIN_HEADER: &str = "x_f_m,x_f_lambda,peak_field_vpm,gain_db,peak_loc_m";
pub const WIDTH_HEADER: &str = "x_f_lambda,width_x_lambda,width_y_lambda,resolvable";
pub const SLL_HEADER: &str = "x_f_lambda,sll_db,sidelobe_loc_m";
pub const NF_FF_HEADER: &str = "r_c_lambda,nf_width_lambda,ff_bw_deg";
pub const CLOSED_FORM_HEADER: &str = "delta_lambda,eq1_norm,eq3_norm,eq4_norm,quadrature_norm";

const SIGNIFICANT: i32 = 12;

/// Formats `v` with 12 significant digits.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let mag = v.abs();
    let s = if (1e-6..1e12).contains(&mag) {
        let exp = mag.log10().floor() as i32;
        let decimals = (SIGNIFICANT - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{:.*e}", (SIGNIFICANT - 1) as usize, v)
    };
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".into(), fmt_num)
}

fn body<T>(header: &str, rows: &[T], mut row: impl FnMut(&mut String, &T)) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for r in rows {
        row(&mut out, r);
        out.push('\n');
    }
    out
}

pub fn field_map_csv(map: &FieldMap) -> String {
    body(FIELD_MAP_HEADER, &map.samples, |out, s| {
        let _ = write!(
            out,
            "{},{},{},{},{},{}",
            fmt_num(s.point.x),
            fmt_num(s.point.y),
            fmt_num(s.value.re),
            fmt_num(s.value.im),
            fmt_num(s.magnitude()),
            s.valid
        );
    })
}

/// Line samples; `magnitude_norm` is relative to the largest valid sample.
pub fn line_csv(samples: &[FieldSample], axis: Axis, wavelength_m: f64) -> String {
    let peak = samples
        .iter()
        .filter(|s| s.valid)
        .map(FieldSample::magnitude)
        .fold(0.0, f64::max);
    body(LINE_HEADER, samples, |out, s| {
        let c = axis.coord(s.point);
        let m = s.magnitude();
        let norm = if peak > 0.0 { m / peak } else { 0.0 };
        let _ = write!(
            out,
            "{},{},{},{},{}",
            fmt_num(c),
            fmt_num(c / wavelength_m),
            fmt_num(m),
            fmt_num(norm),
            s.valid
        );
    })
}

pub fn gain_csv(records: &[GainScanRecord]) -> String {
    body(GAIN_HEADER, records, |out, r| {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            fmt_num(r.x_f_m),
            fmt_num(r.x_f_lambda),
            opt(r.peak_field),
            opt(r.gain_db),
            opt(r.peak_location_m)
        );
    })
}

pub fn width_csv(records: &[WidthRecord]) -> String {
    body(WIDTH_HEADER, records, |out, r| {
        let _ = write!(
            out,
            "{},{},{},{}",
            fmt_num(r.x_f_lambda),
            opt(r.width_x_lambda),
            opt(r.width_y_lambda),
            r.resolvable
        );
    })
}

/// `sidelobe_loc_m` is the signed offset of the sidelobe from the main
/// peak along the line on which it was found.
pub fn sll_csv(records: &[SidelobeRecord]) -> String {
    body(SLL_HEADER, records, |out, r| {
        let _ = write!(
            out,
            "{},{},{}",
            fmt_num(r.x_f_lambda),
            opt(r.sll_db),
            opt(r.sidelobe_offset_m)
        );
    })
}

pub fn nf_ff_csv(rows: &[NfFfRow]) -> String {
    body(NF_FF_HEADER, rows, |out, r| {
        let _ = write!(
            out,
            "{},{},{}",
            fmt_num(r.r_c_lambda),
            opt(r.nf_width_lambda),
            opt(r.ff_beamwidth_deg)
        );
    })
}

pub fn closed_form_csv(rows: &[ClosedFormRow]) -> String {
    body(CLOSED_FORM_HEADER, rows, |out, r| {
        let _ = write!(
            out,
            "{},{},{},{},{}",
            fmt_num(r.delta_lambda),
            fmt_num(r.eq1_norm),
            fmt_num(r.eq3_norm),
            fmt_num(r.eq4_norm),
            fmt_num(r.quadrature_norm)
        );
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(80.0), "80.0000000000");
        assert_eq!(fmt_num(0.36), "0.360000000000");
        assert_eq!(fmt_num(-1.5), "-1.50000000000");
        assert_eq!(fmt_num(1e-9), "1.00000000000e-9");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(-1e-17), "-1.00000000000e-17");
    }

    #[test]
    fn empty_tables_have_headers() {
        assert_eq!(gain_csv(&[]), format!("{GAIN_HEADER}\n"));
        assert_eq!(nf_ff_csv(&[]), format!("{NF_FF_HEADER}\n"));
    }
}
