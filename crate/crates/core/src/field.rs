//! Phase-conjugated field of the array at observation points.
//!
//! With the element phases conjugated to the focal point `r_f`, the
//! z-polarized field at `r` is
//!
//! ```text
//! E(r) = E0 · Σ_n exp(-j·2π(|r - r_n| - |r_f - r_n|)/λ) / |r - r_n|
//! ```
//!
//! Evaluation is pure; lines and rasters are evaluated point-parallel and
//! every sample is computed independently, so results do not depend on the
//! number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NffError, Result};
use crate::geometry::{check_finite, is_valid_point, ElementSet, Point2, ValidityRegion};

const COINCIDENCE_TOL: f64 = 1e-12;

/// Commanded focal point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FocalSpec {
    pub point: Point2,
}

impl FocalSpec {
    pub const CENTER: FocalSpec = FocalSpec {
        point: Point2::ORIGIN,
    };

    pub fn new(x: f64, y: f64) -> Self {
        Self {
            point: Point2::new(x, y),
        }
    }

    pub fn on_x_axis(x: f64) -> Self {
        Self::new(x, 0.0)
    }
}

/// One observation: masked samples hold exactly zero with `valid = false`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub point: Point2,
    pub value: Complex64,
    pub valid: bool,
}

impl FieldSample {
    pub fn magnitude(&self) -> f64 {
        self.value.norm()
    }

    fn masked(point: Point2) -> Self {
        Self {
            point,
            value: Complex64::new(0.0, 0.0),
            valid: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    /// Point at coordinate `t` on the line parallel to this axis through `through`.
    pub fn point_on_line(self, through: Point2, t: f64) -> Point2 {
        match self {
            Axis::X => Point2::new(t, through.y),
            Axis::Y => Point2::new(through.x, t),
        }
    }

    pub fn coord(self, p: Point2) -> f64 {
        match self {
            Axis::X => p.x,
            Axis::Y => p.y,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
        }
    }
}

/// Evaluates the field of `elements` conjugated to `focal`.
pub fn field_at(p: Point2, elements: &ElementSet, focal: FocalSpec) -> Result<Complex64> {
    FocusedArray::new(elements, focal)?.field_at(p)
}

/// An array with its element phases conjugated to a focal point.
///
/// Focal distances are computed once, so repeated evaluations cost one
/// distance per element.
#[derive(Debug, Clone)]
pub struct FocusedArray<'a> {
    elements: &'a ElementSet,
    focal: FocalSpec,
    region: ValidityRegion,
    focal_distances: Vec<f64>,
    wavenumber: f64,
    amplitude: f64,
}

impl<'a> FocusedArray<'a> {
    pub fn new(elements: &'a ElementSet, focal: FocalSpec) -> Result<Self> {
        check_finite(focal.point)?;
        let config = elements.config();
        let focal_distances = elements
            .positions()
            .iter()
            .map(|r| focal.point.distance(*r))
            .collect();
        Ok(Self {
            elements,
            focal,
            region: ValidityRegion::for_config(config),
            focal_distances,
            wavenumber: config.wavenumber(),
            amplitude: config.source_amplitude,
        })
    }

    pub fn with_region(mut self, region: ValidityRegion) -> Self {
        self.region = region;
        self
    }

    pub fn elements(&self) -> &'a ElementSet {
        self.elements
    }

    pub fn focal(&self) -> FocalSpec {
        self.focal
    }

    pub fn region(&self) -> &ValidityRegion {
        &self.region
    }

    pub fn wavelength_m(&self) -> f64 {
        self.elements.wavelength_m()
    }

    pub fn is_valid(&self, p: Point2) -> bool {
        is_valid_point(p, &self.region, self.elements)
    }

    /// Unmasked field at `p`.
    pub fn field_at(&self, p: Point2) -> Result<Complex64> {
        check_finite(p)?;
        let tol = COINCIDENCE_TOL * self.elements.radius_m();
        let mut sum = Complex64::new(0.0, 0.0);
        for (index, (r, df)) in self
            .elements
            .positions()
            .iter()
            .zip(&self.focal_distances)
            .enumerate()
        {
            let d = p.distance(*r);
            if d <= tol {
                return Err(NffError::CoincidentPoint { index: index + 1 });
            }
            sum += Complex64::from_polar(1.0 / d, -self.wavenumber * (d - df));
        }
        Ok(sum * self.amplitude)
    }

    /// `|E(p)|` for a point known to be valid.
    pub(crate) fn magnitude_at(&self, p: Point2) -> Result<f64> {
        self.field_at(p).map(|v| v.norm())
    }

    /// Masked evaluation: invalid points become zero-valued samples.
    pub fn sample(&self, p: Point2) -> Result<FieldSample> {
        if !self.is_valid(p) {
            return Ok(FieldSample::masked(p));
        }
        Ok(FieldSample {
            point: p,
            value: self.field_at(p)?,
            valid: true,
        })
    }

    /// Samples on the line parallel to `axis` through the focal point, at
    /// axis coordinates `start + i·step` up to `stop`.
    pub fn line(&self, axis: Axis, start: f64, stop: f64, step: f64) -> Result<Vec<FieldSample>> {
        let coords = line_coords(start, stop, step)?;
        coords
            .into_par_iter()
            .map(|t| self.sample(axis.point_on_line(self.focal.point, t)))
            .collect()
    }

    pub fn map(&self, grid: GridSpec) -> Result<FieldMap> {
        grid.validate()?;
        let samples = (0..grid.len())
            .into_par_iter()
            .map(|i| self.sample(grid.point(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldMap {
            grid,
            samples,
            focal: self.focal,
        })
    }
}

pub(crate) fn line_coords(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(crate::error::invalid(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    if !(start.is_finite() && stop.is_finite()) || start >= stop {
        return Err(NffError::EmptyRange { start, stop });
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// Samples along a line through the focal point (see [`FocusedArray::line`]).
pub fn field_line(
    axis: Axis,
    range: (f64, f64),
    step: f64,
    elements: &ElementSet,
    focal: FocalSpec,
) -> Result<Vec<FieldSample>> {
    FocusedArray::new(elements, focal)?.line(axis, range.0, range.1, step)
}

/// Masked raster evaluation (see [`FocusedArray::map`]).
pub fn field_map(grid: GridSpec, elements: &ElementSet, focal: FocalSpec) -> Result<FieldMap> {
    FocusedArray::new(elements, focal)?.map(grid)
}

/// Rectangular lattice `origin + (i·step, j·step)`, `i < nx`, `j < ny`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point2,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Square grid centred on the origin covering the disc of `radius`,
    /// with the origin itself on a lattice node.
    pub fn covering_disc(radius: f64, step: f64) -> Self {
        let half = (radius / step - 1e-9).ceil() as usize;
        let n = 2 * half + 1;
        let o = -(half as f64) * step;
        Self {
            origin: Point2::new(o, o),
            step,
            nx: n,
            ny: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(NffError::DegenerateGrid {
                nx: self.nx,
                ny: self.ny,
            });
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(crate::error::invalid(
                "step",
                format!("must be positive, got {}", self.step),
            ));
        }
        check_finite(self.origin)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major: index `j·nx + i`.
    pub fn point(&self, index: usize) -> Point2 {
        let (i, j) = (index % self.nx, index / self.nx);
        self.point_at(i, j)
    }

    pub fn point_at(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.origin.x + i as f64 * self.step,
            self.origin.y + j as f64 * self.step,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPeak {
    pub index: usize,
    pub point: Point2,
    pub magnitude: f64,
}

/// Raster of masked samples, row-major over `y` then `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    pub grid: GridSpec,
    pub samples: Vec<FieldSample>,
    pub focal: FocalSpec,
}

impl FieldMap {
    pub fn magnitude(&self, i: usize, j: usize) -> f64 {
        self.samples[j * self.grid.nx + i].magnitude()
    }

    /// Largest magnitude over valid samples, or `None` when every sample
    /// is masked.
    pub fn peak(&self) -> Option<MapPeak> {
        self.samples
            .iter()
            .enumerate()
            .filter(|(_, s)| s.valid)
            .fold(None, |best: Option<MapPeak>, (index, s)| {
                let m = s.magnitude();
                match best {
                    Some(b) if b.magnitude >= m => Some(b),
                    _ => Some(MapPeak {
                        index,
                        point: s.point,
                        magnitude: m,
                    }),
                }
            })
    }

    /// Valid samples that are at least as large as each of their eight
    /// neighbours (masked neighbours count as zero) and at least
    /// `min_rel · peak`. `window`, when given, is an inclusive
    /// `(lower-left, upper-right)` box restricting which maxima are kept.
    pub fn local_maxima(&self, min_rel: f64, window: Option<(Point2, Point2)>) -> Vec<MapPeak> {
        let Some(peak) = self.peak() else {
            return Vec::new();
        };
        let threshold = min_rel * peak.magnitude;
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let s = &self.samples[j * nx + i];
                if !s.valid {
                    continue;
                }
                if let Some((lo, hi)) = window {
                    let p = s.point;
                    if p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y {
                        continue;
                    }
                }
                let m = s.magnitude();
                if m < threshold {
                    continue;
                }
                let is_max = neighbours(i, j, nx, ny).all(|(a, b)| self.magnitude(a, b) <= m);
                if is_max {
                    out.push(MapPeak {
                        index: j * nx + i,
                        point: s.point,
                        magnitude: m,
                    });
                }
            }
        }
        out
    }
}

pub(crate) fn neighbours(
    i: usize,
    j: usize,
    nx: usize,
    ny: usize,
) -> impl Iterator<Item = (usize, usize)> {
    (-1i64..=1)
        .flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)))
        .filter(|&(di, dj)| di != 0 || dj != 0)
        .filter_map(move |(di, dj)| {
            let a = i as i64 + di;
            let b = j as i64 + dj;
            (a >= 0 && b >= 0 && (a as usize) < nx && (b as usize) < ny)
                .then_some((a as usize, b as usize))
        })
}
