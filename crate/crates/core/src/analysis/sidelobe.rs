use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DbConvention, LineProfile, RecordStatus};
use crate::error::{invalid, Result};
use crate::field::{neighbours, Axis, FocalSpec, FocusedArray, GridSpec};
use crate::geometry::{ElementSet, Point2, ValidityRegion};

/// Where sidelobes are searched for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SidelobeDomain {
    /// The `x` line through the focal point only.
    XLine,
    /// The `x` and `y` lines through the focal point; the higher sidelobe wins.
    #[default]
    CrossLines,
    /// The whole valid aperture on a square grid.
    Plane,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidelobeRecord {
    pub x_f_m: f64,
    pub x_f_lambda: f64,
    pub main_peak: Option<Point2>,
    pub main_field: Option<f64>,
    /// `20·log10(main / sidelobe)`.
    pub sll_db: Option<f64>,
    pub sidelobe_location: Option<Point2>,
    pub sidelobe_field: Option<f64>,
    /// Signed distance from the main peak to the sidelobe along the line it
    /// was found on (Euclidean distance for the plane search).
    pub sidelobe_offset_m: Option<f64>,
    pub status: RecordStatus,
}

struct Lobe {
    main: Point2,
    main_field: f64,
    side: Option<(Point2, f64, f64)>,
}

fn line_lobes(focused: &FocusedArray<'_>, axis: Axis, step: f64) -> Result<Option<Lobe>> {
    let through = focused.focal().point;
    let profile = LineProfile::sample(focused, axis, through, step)?;
    let Some(im) = profile.argmax() else {
        return Ok(None);
    };
    let v = &profile.mags;
    let ok = &profile.valid;
    // main lobe extends to the first minimum on each side
    let mut l = im;
    while l > 0 && ok[l - 1] && v[l - 1] < v[l] {
        l -= 1;
    }
    let mut r = im;
    while r + 1 < v.len() && ok[r + 1] && v[r + 1] < v[r] {
        r += 1;
    }
    let mut side: Option<usize> = None;
    for j in 1..v.len() - 1 {
        if (l..=r).contains(&j) || !(ok[j - 1] && ok[j] && ok[j + 1]) {
            continue;
        }
        if v[j] < v[j - 1] || v[j] < v[j + 1] {
            continue;
        }
        side = match side {
            None => Some(j),
            Some(s) if v[j] > v[s] => Some(j),
            Some(s) if v[j] == v[s] && j.abs_diff(im) < s.abs_diff(im) => Some(j),
            keep => keep,
        };
    }
    let (t_main, main_field) = profile.refine(focused, im)?;
    let side = match side {
        Some(j) => {
            let (t, f) = profile.refine(focused, j)?;
            Some((profile.point(t), f, t - t_main))
        }
        None => None,
    };
    Ok(Some(Lobe {
        main: profile.point(t_main),
        main_field,
        side,
    }))
}

fn plane_lobes(focused: &FocusedArray<'_>, step: f64) -> Result<Option<Lobe>> {
    let grid = GridSpec::covering_disc(focused.elements().radius_m(), step);
    let map = focused.map(grid)?;
    let Some(peak) = map.peak() else {
        return Ok(None);
    };
    let (nx, ny) = (grid.nx, grid.ny);
    let mut in_main = vec![false; nx * ny];
    let mut queue = VecDeque::from([peak.index]);
    in_main[peak.index] = true;
    while let Some(idx) = queue.pop_front() {
        let (i, j) = (idx % nx, idx / nx);
        let here = map.magnitude(i, j);
        for (a, b) in neighbours(i, j, nx, ny) {
            let n = b * nx + a;
            if !in_main[n] && map.samples[n].valid && map.magnitude(a, b) <= here {
                in_main[n] = true;
                queue.push_back(n);
            }
        }
    }
    let side = map
        .local_maxima(0.0, None)
        .into_iter()
        .filter(|m| !in_main[m.index])
        .fold(None, |best: Option<crate::field::MapPeak>, m| match best {
            Some(b) if b.magnitude > m.magnitude => Some(b),
            Some(b)
                if b.magnitude == m.magnitude
                    && b.point.distance(peak.point) <= m.point.distance(peak.point) =>
            {
                Some(b)
            }
            _ => Some(m),
        });
    Ok(Some(Lobe {
        main: peak.point,
        main_field: peak.magnitude,
        side: side.map(|s| (s.point, s.magnitude, s.point.distance(peak.point))),
    }))
}

/// Sidelobe level for one focused array. `step` is the sampling step of
/// the search (`λ/200` is adequate on lines, `λ/25` on the plane).
pub fn sidelobe_at(
    focused: &FocusedArray<'_>,
    domain: SidelobeDomain,
    step: f64,
) -> Result<SidelobeRecord> {
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid("step", format!("must be positive, got {step}")));
    }
    let lambda = focused.wavelength_m();
    let x_f = focused.focal().point.x;
    let mut record = SidelobeRecord {
        x_f_m: x_f,
        x_f_lambda: x_f / lambda,
        main_peak: None,
        main_field: None,
        sll_db: None,
        sidelobe_location: None,
        sidelobe_field: None,
        sidelobe_offset_m: None,
        status: RecordStatus::Ok,
    };
    if !focused.is_valid(focused.focal().point) {
        record.status = RecordStatus::FocalMasked;
        return Ok(record);
    }
    let candidates = match domain {
        SidelobeDomain::XLine => vec![line_lobes(focused, Axis::X, step)?],
        SidelobeDomain::CrossLines => vec![
            line_lobes(focused, Axis::X, step)?,
            line_lobes(focused, Axis::Y, step)?,
        ],
        SidelobeDomain::Plane => vec![plane_lobes(focused, step)?],
    };
    let mut best: Option<(f64, Lobe)> = None;
    let mut any = false;
    for lobe in candidates.into_iter().flatten() {
        if !any {
            record.main_peak = Some(lobe.main);
            record.main_field = Some(lobe.main_field);
            any = true;
        }
        if let Some((_, side, _)) = lobe.side {
            let sll = DbConvention::Field20.to_db(lobe.main_field / side);
            if best.as_ref().is_none_or(|(b, _)| sll < *b) {
                best = Some((sll, lobe));
            }
        }
    }
    if !any {
        record.status = RecordStatus::NoValidPoints;
        return Ok(record);
    }
    match best {
        Some((sll, lobe)) => {
            let (loc, field, offset) = lobe.side.expect("sidelobe present");
            record.main_peak = Some(lobe.main);
            record.main_field = Some(lobe.main_field);
            record.sll_db = Some(sll);
            record.sidelobe_location = Some(loc);
            record.sidelobe_field = Some(field);
            record.sidelobe_offset_m = Some(offset);
        }
        None => record.status = RecordStatus::NoSidelobe,
    }
    Ok(record)
}

/// Sidelobe level for each focal position along `x`.
pub fn sidelobe_scan(
    elements: &ElementSet,
    region: &ValidityRegion,
    focal_xs: &[f64],
    domain: SidelobeDomain,
    step: f64,
) -> Result<Vec<SidelobeRecord>> {
    focal_xs
        .par_iter()
        .map(|&x_f| {
            let focused =
                FocusedArray::new(elements, FocalSpec::on_x_axis(x_f))?.with_region(*region);
            sidelobe_at(&focused, domain, step)
        })
        .collect()
}
