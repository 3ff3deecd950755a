//! Analytic approximations of the focal field and their quadrature oracles.
//!
//! For a full circle focused at its centre the field at offset `Δ` along
//! `x` approaches `J0(2πΔ/λ)` (normalised) once `N` is large and `Δ ≪ r_c`.
//! With phases removed, the field reduces to the amplitude sum
//! `Σ 1/|r - r_n|`, whose large-`N` limit is an arc integral; for the half
//! circle that integral has closed forms at the centre (`π/r_c`) and at the
//! element-free edge (`ln((√2+1)/(√2-1))/r_c`).

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, NffError, Result};
use crate::field::{FocalSpec, FocusedArray};
use crate::geometry::{check_finite, distance_to_arc, ArrayKind, ElementSet, Point2};
use crate::quadrature::{integrate, QuadOptions};
use crate::search::bisect;
use crate::special::{j0, J0_FIRST_ZERO};

/// Which approximation produced a [`ClosedFormResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClosedFormSource {
    /// `|J0(2πΔ/λ)|`.
    Bessel,
    /// First-order Taylor sum over the actual elements.
    Taylor,
    /// Numerical integral of the Bessel kernel.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormResult {
    pub delta_lambda: f64,
    /// Normalised so that the value at `Δ = 0` is 1.
    pub value: f64,
    pub source: ClosedFormSource,
}

/// Normalised Bessel approximation `|J0(2πΔ/λ)|` of the centre-focused
/// full-circle field.
pub fn bessel_field(delta_m: f64, radius_m: f64, wavelength_m: f64) -> Result<f64> {
    if delta_m.abs() > radius_m / 5.0 {
        log::debug!(
            "Bessel approximation used at Δ = {delta_m} m, beyond r_c/5 = {} m",
            radius_m / 5.0
        );
    }
    Ok(j0(2.0 * PI * delta_m / wavelength_m)?.abs())
}

/// Full 3 dB (half-power) width of `|J0(2πΔ/λ)|`, in wavelengths.
pub fn bessel_half_power_width_lambda() -> f64 {
    let x = bisect(
        |x| j0(x).expect("finite") - FRAC_1_SQRT_2,
        0.0,
        J0_FIRST_ZERO,
        1e-14,
    )
    .expect("J0 crosses 1/sqrt(2) before its first zero");
    // Δ = x λ / 2π on each side
    x / PI
}

/// Offset of the first null of `J0(2πΔ/λ)`, in wavelengths.
pub fn bessel_first_null_lambda() -> f64 {
    J0_FIRST_ZERO / (2.0 * PI)
}

/// First-order Taylor approximation of the centre-focused field at `Δ`
/// along `x`, normalised to its value at `Δ = 0`.
///
/// Each element contributes
/// `exp(-jπΔ²/(λ r_c))·exp(-j2πΔcosθ_n/λ) / sqrt(r_c² + Δ² - 2 r_c Δ cosθ_n)`.
pub fn taylor_field_sum(delta_m: f64, elements: &ElementSet) -> Result<f64> {
    if elements.kind() != ArrayKind::FullCircle {
        return Err(NffError::RequiresFullCircle("taylor_field_sum"));
    }
    if !delta_m.is_finite() {
        return Err(NffError::NonFinite(delta_m));
    }
    Ok(taylor_sum(delta_m, elements)? / taylor_sum(0.0, elements)?)
}

fn taylor_sum(delta_m: f64, elements: &ElementSet) -> Result<f64> {
    let rc = elements.radius_m();
    let lambda = elements.wavelength_m();
    let k = 2.0 * PI / lambda;
    let common = Complex64::from_polar(1.0, -PI * delta_m * delta_m / (lambda * rc));
    let mut sum = Complex64::new(0.0, 0.0);
    for (index, theta) in elements.angles().iter().enumerate() {
        let c = theta.cos();
        let d2 = rc * rc + delta_m * delta_m - 2.0 * rc * delta_m * c;
        if d2 <= (1e-12 * rc).powi(2) {
            return Err(NffError::CoincidentPoint { index: index + 1 });
        }
        sum += common * Complex64::from_polar(1.0 / d2.sqrt(), -k * delta_m * c);
    }
    Ok(sum.norm())
}

/// Phase-free field `Σ_n 1/|p - r_n|` per unit source amplitude (1/m).
pub fn amplitude_sum_at(p: Point2, elements: &ElementSet) -> Result<f64> {
    check_finite(p)?;
    let tol = 1e-12 * elements.radius_m();
    elements
        .positions()
        .iter()
        .enumerate()
        .try_fold(0.0, |acc, (index, r)| {
            let d = p.distance(*r);
            if d <= tol {
                Err(NffError::CoincidentPoint { index: index + 1 })
            } else {
                Ok(acc + 1.0 / d)
            }
        })
}

/// `∫ dθ / |p - r_c(cosθ, sinθ)|` over `arc` (radians).
///
/// This is the large-`N` limit of [`amplitude_sum_at`] scaled by the
/// angular element density.
pub fn arc_integral(p: Point2, radius_m: f64, arc: (f64, f64)) -> Result<f64> {
    check_finite(p)?;
    let (lo, hi) = arc;
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(NffError::EmptyRange {
            start: lo,
            stop: hi,
        });
    }
    let span = hi - lo;
    let arc_opt = if span >= 2.0 * PI - 1e-15 {
        None
    } else {
        Some(arc)
    };
    if distance_to_arc(p, radius_m, arc_opt) <= 1e-12 * radius_m {
        return Err(invalid("p", format!("{p} lies on the integration arc")));
    }
    let rho2 = p.dot(p) + radius_m * radius_m;
    let integrand = |t: f64| 1.0 / (rho2 - 2.0 * radius_m * (p.x * t.cos() + p.y * t.sin())).sqrt();
    // split at the angle of p so a near-singular peak sits on a node boundary
    let mut theta = p.angle();
    while theta < lo {
        theta += 2.0 * PI;
    }
    while theta > hi {
        theta -= 2.0 * PI;
    }
    let opts = QuadOptions::default();
    let pieces: Vec<(f64, f64)> = if p.norm() > 0.0 && theta > lo && theta < hi {
        vec![(lo, theta), (theta, hi)]
    } else {
        vec![(lo, hi)]
    };
    pieces.into_iter().try_fold(0.0, |acc, (a, b)| {
        integrate(integrand, a, b, opts).map(|r| acc + r.value)
    })
}

/// Numerical value of `|(1/2π) ∫_0^{2π} exp(-j2πΔcosθ/λ) dθ|`, the
/// quadrature counterpart of [`bessel_field`].
pub fn bessel_kernel_quadrature(delta_m: f64, wavelength_m: f64) -> Result<f64> {
    let k = 2.0 * PI / wavelength_m;
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..QuadOptions::default()
    };
    let re = integrate(|t| (k * delta_m * t.cos()).cos(), 0.0, 2.0 * PI, opts)?.value;
    let im = integrate(|t| -(k * delta_m * t.cos()).sin(), 0.0, 2.0 * PI, opts)?.value;
    Ok(re.hypot(im) / (2.0 * PI))
}

/// Large-`N` half-circle fields at the centre and at the element-free edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfCircleLimits {
    /// `π / r_c`, 1/m.
    pub center_field: f64,
    /// `ln((√2+1)/(√2-1)) / r_c`, 1/m.
    pub edge_field: f64,
    pub ratio: f64,
    /// `10·log10(ratio)`.
    pub ratio_db: f64,
}

pub fn center_edge_ratio(radius_m: f64) -> Result<HalfCircleLimits> {
    if !(radius_m.is_finite() && radius_m > 0.0) {
        return Err(invalid(
            "radius_m",
            format!("must be positive, got {radius_m}"),
        ));
    }
    let center_field = PI / radius_m;
    let edge_field = ((SQRT_2 + 1.0) / (SQRT_2 - 1.0)).ln() / radius_m;
    let ratio = center_field / edge_field;
    Ok(HalfCircleLimits {
        center_field,
        edge_field,
        ratio,
        ratio_db: 10.0 * ratio.log10(),
    })
}

/// One row of the direct-vs-approximation comparison along `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormRow {
    pub delta_lambda: f64,
    /// Direct phase-conjugated sum; zero where the point is masked.
    pub eq1_norm: f64,
    pub eq3_norm: f64,
    pub eq4_norm: f64,
    pub quadrature_norm: f64,
}

/// Evaluates one approximation at each offset (meters).
pub fn closed_form_curve(
    source: ClosedFormSource,
    elements: &ElementSet,
    deltas_m: &[f64],
) -> Result<Vec<ClosedFormResult>> {
    let lambda = elements.wavelength_m();
    deltas_m
        .iter()
        .map(|&d| {
            let value = match source {
                ClosedFormSource::Bessel => bessel_field(d, elements.radius_m(), lambda)?,
                ClosedFormSource::Taylor => taylor_field_sum(d, elements)?,
                ClosedFormSource::Quadrature => bessel_kernel_quadrature(d, lambda)?,
            };
            Ok(ClosedFormResult {
                delta_lambda: d / lambda,
                value,
                source,
            })
        })
        .collect()
}

/// Side-by-side table of the direct sum and the three approximations for
/// a full circle focused at its centre.
pub fn closed_form_table(elements: &ElementSet, deltas_m: &[f64]) -> Result<Vec<ClosedFormRow>> {
    if elements.kind() != ArrayKind::FullCircle {
        return Err(NffError::RequiresFullCircle("closed_form_table"));
    }
    let focused = FocusedArray::new(elements, FocalSpec::CENTER)?;
    let peak = focused.field_at(Point2::ORIGIN)?.norm();
    let lambda = elements.wavelength_m();
    let rc = elements.radius_m();
    if let Some(d) = deltas_m
        .iter()
        .map(|d| d.abs())
        .reduce(f64::max)
        .filter(|d| *d > rc / 5.0)
    {
        log::warn!(
            "Bessel approximation used up to Δ = {d} m, beyond r_c/5 = {} m",
            rc / 5.0
        );
    }
    deltas_m
        .iter()
        .map(|&d| {
            let sample = focused.sample(Point2::new(d, 0.0))?;
            Ok(ClosedFormRow {
                delta_lambda: d / lambda,
                eq1_norm: sample.magnitude() / peak,
                eq3_norm: taylor_field_sum(d, elements)?,
                eq4_norm: bessel_field(d, rc, lambda)?,
                quadrature_norm: bessel_kernel_quadrature(d, lambda)?,
            })
        })
        .collect()
}
