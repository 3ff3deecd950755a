use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_search_step, focal_width};
use crate::error::{invalid, Result};
use crate::field::{Axis, FocalSpec, FocusedArray};
use crate::geometry::{ArrayConfig, ElementSet, Point2};
use crate::search::bisect;

const MAX_ANGULAR_STEP: f64 = 0.1 * PI / 180.0;

/// In-plane array factor of the array steered to `steering_rad`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarFieldPattern {
    pub steering_rad: f64,
    pub step_rad: f64,
    pub angles_rad: Vec<f64>,
    pub values: Vec<f64>,
    /// Full half-power beamwidth of the main beam, in degrees.
    pub beamwidth_deg: Option<f64>,
}

impl FarFieldPattern {
    pub fn peak_angle(&self) -> f64 {
        let i = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        self.angles_rad[i]
    }
}

fn unit(phi: f64) -> Point2 {
    Point2::from_polar(1.0, phi)
}

fn array_factor(elements: &ElementSet, steering: Point2, phi: f64) -> f64 {
    let k = elements.config().wavenumber();
    let u = unit(phi) - steering;
    elements
        .positions()
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, r| {
            acc + Complex64::from_polar(1.0, k * u.dot(*r))
        })
        .norm()
}

/// Far-field (Fraunhofer) limit of the conjugated sum: element `n`
/// contributes `exp(j·k·(û(φ) - û(φ0))·r_n)`.
///
/// The half-power beamwidth is found by stepping away from `φ0` at
/// `angular_step_rad` and bisecting each crossing.
pub fn far_field_pattern(
    elements: &ElementSet,
    steering_rad: f64,
    angular_step_rad: f64,
) -> Result<FarFieldPattern> {
    if !(angular_step_rad.is_finite() && angular_step_rad > 0.0) {
        return Err(invalid(
            "angular_step",
            format!("must be positive, got {angular_step_rad}"),
        ));
    }
    if angular_step_rad > MAX_ANGULAR_STEP * (1.0 + 1e-12) {
        return Err(invalid("angular_step", "must not exceed 0.1 degree"));
    }
    if !steering_rad.is_finite() {
        return Err(crate::error::NffError::NonFinite(steering_rad));
    }
    let steering = unit(steering_rad);
    let n = (2.0 * PI / angular_step_rad).ceil() as usize;
    let angles_rad: Vec<f64> = (0..n).map(|i| i as f64 * angular_step_rad).collect();
    let values = angles_rad
        .par_iter()
        .map(|&phi| array_factor(elements, steering, phi))
        .collect();

    let peak = array_factor(elements, steering, steering_rad);
    let threshold = peak * FRAC_1_SQRT_2;
    let edge = |dir: f64| {
        let mut prev = steering_rad;
        let mut j = 1;
        while (j as f64) * angular_step_rad <= PI {
            let phi = steering_rad + dir * j as f64 * angular_step_rad;
            if array_factor(elements, steering, phi) < threshold {
                return bisect(
                    |p| array_factor(elements, steering, p) - threshold,
                    prev,
                    phi,
                    1e-12,
                );
            }
            prev = phi;
            j += 1;
        }
        None
    };
    let beamwidth_deg = edge(-1.0).zip(edge(1.0)).map(|(l, r)| (r - l).to_degrees());
    Ok(FarFieldPattern {
        steering_rad,
        step_rad: angular_step_rad,
        angles_rad,
        values,
        beamwidth_deg,
    })
}

/// One radius of the near-field vs far-field comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NfFfRow {
    pub r_c_lambda: f64,
    /// Centre-focused 3 dB width along `x`, in wavelengths.
    pub nf_width_lambda: Option<f64>,
    pub nf_resolvable: bool,
    pub ff_beamwidth_deg: Option<f64>,
}

/// Near-field focal width at the centre and far-field beamwidth for full
/// circles of `n_elements` at each radius (given in wavelengths, ≥ 2).
pub fn nf_ff_comparison(
    radii_lambda: &[f64],
    n_elements: usize,
    wavelength_m: f64,
    search_step: f64,
    angular_step_rad: f64,
) -> Result<Vec<NfFfRow>> {
    check_search_step(search_step, wavelength_m)?;
    if let Some(r) = radii_lambda.iter().find(|r| r.is_nan() || **r < 2.0) {
        return Err(invalid(
            "radii_lambda",
            format!("every radius must be at least 2λ, got {r}"),
        ));
    }
    radii_lambda
        .par_iter()
        .map(|&r| {
            let elements =
                ArrayConfig::full(n_elements, r * wavelength_m, wavelength_m)?.build()?;
            let focused = FocusedArray::new(&elements, FocalSpec::CENTER)?;
            let w = focal_width(&focused, Axis::X, search_step)?;
            let ff = far_field_pattern(&elements, 0.0, angular_step_rad)?;
            Ok(NfFfRow {
                r_c_lambda: r,
                nf_width_lambda: w.width_lambda(wavelength_m),
                nf_resolvable: w.resolvable,
                ff_beamwidth_deg: ff.beamwidth_deg,
            })
        })
        .collect()
}
