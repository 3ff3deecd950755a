//! Uniform circular array construction and the observation-validity region.
//!
//! Two array shapes are supported: a full circle of `N` elements and a
//! half circle with all elements on the `+x` side. Every element is a
//! vertically (z) polarized omnidirectional radiator lying in the xy plane.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, NffError, Result};

/// Default reactive near-field exclusion, in wavelengths.
pub const DEFAULT_MARGIN_LAMBDA: f64 = 0.2;

/// A point (or vector) in the array plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    pub fn norm(self) -> f64 {
        // plain sqrt: hypot's overflow guard costs ~3x in the field loop
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Rotates the point about the origin by `angle` radians.
    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Array shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrayKind {
    #[serde(alias = "full")]
    FullCircle,
    #[serde(alias = "half")]
    HalfCircle,
}

impl ArrayKind {
    /// Angular extent of the populated arc, or `None` for the whole circle.
    pub fn arc(self) -> Option<(f64, f64)> {
        match self {
            ArrayKind::FullCircle => None,
            ArrayKind::HalfCircle => Some((-FRAC_PI_2, FRAC_PI_2)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ArrayKind::FullCircle => "full",
            ArrayKind::HalfCircle => "half",
        }
    }
}

impl fmt::Display for ArrayKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn default_amplitude() -> f64 {
    1.0
}

/// Array parameters. Lengths are in meters, the source amplitude in volts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub kind: ArrayKind,
    pub n_elements: usize,
    pub radius_m: f64,
    pub wavelength_m: f64,
    #[serde(default = "default_amplitude")]
    pub source_amplitude: f64,
}

impl ArrayConfig {
    pub fn new(
        kind: ArrayKind,
        n_elements: usize,
        radius_m: f64,
        wavelength_m: f64,
    ) -> Result<Self> {
        let config = Self {
            kind,
            n_elements,
            radius_m,
            wavelength_m,
            source_amplitude: 1.0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn full(n_elements: usize, radius_m: f64, wavelength_m: f64) -> Result<Self> {
        Self::new(ArrayKind::FullCircle, n_elements, radius_m, wavelength_m)
    }

    pub fn half(n_elements: usize, radius_m: f64, wavelength_m: f64) -> Result<Self> {
        Self::new(ArrayKind::HalfCircle, n_elements, radius_m, wavelength_m)
    }

    pub fn with_amplitude(mut self, source_amplitude: f64) -> Result<Self> {
        self.source_amplitude = source_amplitude;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_elements == 0 {
            return Err(invalid("n_elements", "must be at least 1"));
        }
        if !(self.radius_m.is_finite() && self.radius_m > 0.0) {
            return Err(invalid(
                "radius_m",
                format!("must be positive, got {}", self.radius_m),
            ));
        }
        if !(self.wavelength_m.is_finite() && self.wavelength_m > 0.0) {
            return Err(invalid(
                "wavelength_m",
                format!("must be positive, got {}", self.wavelength_m),
            ));
        }
        if !self.source_amplitude.is_finite() {
            return Err(invalid("source_amplitude", "must be finite"));
        }
        Ok(())
    }

    /// Chord between neighbouring elements, in meters.
    pub fn element_spacing_m(&self) -> f64 {
        let n = self.n_elements as f64;
        match self.kind {
            ArrayKind::FullCircle => 2.0 * self.radius_m * (PI / n).sin(),
            ArrayKind::HalfCircle => 2.0 * self.radius_m * (PI / (2.0 * n)).sin(),
        }
    }

    pub fn element_spacing_lambda(&self) -> f64 {
        self.element_spacing_m() / self.wavelength_m
    }

    pub fn radius_lambda(&self) -> f64 {
        self.radius_m / self.wavelength_m
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength_m
    }

    pub fn build(&self) -> Result<ElementSet> {
        match self.kind {
            ArrayKind::FullCircle => build_full_circle(*self),
            ArrayKind::HalfCircle => build_half_circle(*self),
        }
    }
}

/// Element positions of an array, in element order `n = 1..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementSet {
    config: ArrayConfig,
    positions: Vec<Point2>,
    angles: Vec<f64>,
}

impl ElementSet {
    pub fn config(&self) -> &ArrayConfig {
        &self.config
    }

    pub fn positions(&self) -> &[Point2] {
        &self.positions
    }

    /// Placement angle of each element, in radians, as used to build it.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn radius_m(&self) -> f64 {
        self.config.radius_m
    }

    pub fn wavelength_m(&self) -> f64 {
        self.config.wavelength_m
    }

    pub fn kind(&self) -> ArrayKind {
        self.config.kind
    }

    fn from_angles(config: ArrayConfig, angles: Vec<f64>) -> Self {
        let positions = angles
            .iter()
            .map(|&a| Point2::from_polar(config.radius_m, a))
            .collect();
        Self {
            config,
            positions,
            angles,
        }
    }
}

/// Places `N` elements uniformly on the full circle.
///
/// Element `n` sits at angle `2π(n+1)/N` when `N` is even and `2πn/N`
/// when `N` is odd. The two rules differ only by a rigid rotation.
pub fn build_full_circle(config: ArrayConfig) -> Result<ElementSet> {
    config.validate()?;
    if config.kind != ArrayKind::FullCircle {
        return Err(invalid(
            "kind",
            "build_full_circle needs a full-circle config",
        ));
    }
    let n = config.n_elements;
    let offset = usize::from(n.is_multiple_of(2));
    let angles = (1..=n)
        .map(|i| 2.0 * PI * (i + offset) as f64 / n as f64)
        .collect();
    Ok(ElementSet::from_angles(config, angles))
}

/// Places `N` elements on the `+x` half circle at midpoint angles
/// `θ_n = -π/2 + (n - 1/2)·π/N`.
pub fn build_half_circle(config: ArrayConfig) -> Result<ElementSet> {
    config.validate()?;
    if config.kind != ArrayKind::HalfCircle {
        return Err(invalid(
            "kind",
            "build_half_circle needs a half-circle config",
        ));
    }
    let n = config.n_elements as f64;
    let angles = (1..=config.n_elements)
        .map(|i| -FRAC_PI_2 + (i as f64 - 0.5) * PI / n)
        .collect();
    Ok(ElementSet::from_angles(config, angles))
}

/// Reactive/radiative near-field boundary `(D/λ)^{1/3}·D/2` for a
/// half-wave dipole (`D = λ/2`), in meters.
pub fn reactive_boundary_m(wavelength_m: f64) -> f64 {
    let d = wavelength_m / 2.0;
    (d / wavelength_m).cbrt() * d / 2.0
}

/// Region of the aperture where the point-source field model is used.
///
/// Points within `margin_m` of the populated arc are in the reactive near
/// field and are excluded; so is everything outside the aperture disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidityRegion {
    pub margin_m: f64,
    pub radius_m: f64,
}

impl ValidityRegion {
    pub fn new(radius_m: f64, margin_m: f64) -> Result<Self> {
        if !(margin_m.is_finite() && margin_m > 0.0) {
            return Err(invalid(
                "margin_m",
                format!("must be positive, got {margin_m}"),
            ));
        }
        if !(radius_m.is_finite() && radius_m > 0.0) {
            return Err(invalid(
                "radius_m",
                format!("must be positive, got {radius_m}"),
            ));
        }
        Ok(Self { margin_m, radius_m })
    }

    /// Region with the default `0.2λ` margin.
    pub fn for_config(config: &ArrayConfig) -> Self {
        Self {
            margin_m: DEFAULT_MARGIN_LAMBDA * config.wavelength_m,
            radius_m: config.radius_m,
        }
    }

    pub fn with_margin_lambda(config: &ArrayConfig, margin_lambda: f64) -> Result<Self> {
        Self::new(config.radius_m, margin_lambda * config.wavelength_m)
    }
}

const BOUNDARY_SLACK: f64 = 1e-9;

/// Distance from `p` to the arc of radius `radius` spanning `arc`
/// (or the whole circle).
pub fn distance_to_arc(p: Point2, radius: f64, arc: Option<(f64, f64)>) -> f64 {
    let r = p.norm();
    match arc {
        None => (radius - r).abs(),
        Some((lo, hi)) => {
            let theta = p.angle();
            if r > 0.0 && theta >= lo && theta <= hi {
                (radius - r).abs()
            } else {
                let a = Point2::from_polar(radius, lo);
                let b = Point2::from_polar(radius, hi);
                p.distance(a).min(p.distance(b))
            }
        }
    }
}

/// Whether `p` lies inside the aperture and outside the reactive
/// near-field band around the populated arc.
pub fn is_valid_point(p: Point2, region: &ValidityRegion, elements: &ElementSet) -> bool {
    if !p.is_finite() {
        return false;
    }
    let slack = BOUNDARY_SLACK * region.radius_m;
    if p.norm() > region.radius_m + slack {
        return false;
    }
    let d = distance_to_arc(p, region.radius_m, elements.kind().arc());
    d >= region.margin_m - slack
}

pub(crate) fn check_finite(p: Point2) -> Result<()> {
    match [p.x, p.y].into_iter().find(|v| !v.is_finite()) {
        Some(v) => Err(NffError::NonFinite(v)),
        None => Ok(()),
    }
}
