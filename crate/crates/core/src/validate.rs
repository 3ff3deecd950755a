//! Quick self-check against known analytic anchors.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{focal_width, sidelobe_at, SidelobeDomain};
use crate::closedform::{amplitude_sum_at, arc_integral, center_edge_ratio};
use crate::error::Result;
use crate::field::{field_at, Axis, FocalSpec, FocusedArray};
use crate::geometry::{ArrayConfig, Point2};
use crate::quadrature::{integrate, QuadOptions};
use crate::special::j0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl ValidationCheck {
    fn absolute(name: &'static str, measured: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name,
            measured,
            expected,
            tolerance,
            passed: (measured - expected).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ValidationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "[{}] {:<30} measured {:.6} expected {:.6} (tol {:.1e})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.measured,
                c.expected,
                c.tolerance
            );
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

pub fn run_validation() -> Result<ValidationReport> {
    let lambda = 0.2;
    let mut checks = Vec::new();

    let full = ArrayConfig::full(120, 1.5, lambda)?.build()?;
    let center = field_at(Point2::ORIGIN, &full, FocalSpec::CENTER)?.norm();
    checks.push(ValidationCheck::absolute(
        "center field (V/m)",
        center,
        80.0,
        80.0 * 1e-9,
    ));

    let focused = FocusedArray::new(&full, FocalSpec::CENTER)?;
    let w = focal_width(&focused, Axis::X, lambda / 50.0)?;
    checks.push(ValidationCheck::absolute(
        "3 dB width at center (λ)",
        w.width_lambda(lambda).unwrap_or(f64::NAN),
        0.36,
        0.02,
    ));

    let sll = sidelobe_at(&focused, SidelobeDomain::CrossLines, lambda / 200.0)?;
    checks.push(ValidationCheck::absolute(
        "sidelobe level at center (dB)",
        sll.sll_db.unwrap_or(f64::NAN),
        7.9,
        0.5,
    ));

    let limits = center_edge_ratio(1.0)?;
    let half = ArrayConfig::half(10_000, 1.0, lambda)?.build()?;
    let measured =
        amplitude_sum_at(Point2::ORIGIN, &half)? / amplitude_sum_at(Point2::new(-1.0, 0.0), &half)?;
    checks.push(ValidationCheck::absolute(
        "center/edge ratio",
        measured,
        limits.ratio,
        0.005 * limits.ratio,
    ));
    checks.push(ValidationCheck::absolute(
        "center/edge ratio (dB)",
        limits.ratio_db,
        2.51,
        0.01,
    ));

    let edge = ((SQRT_2 + 1.0) / (SQRT_2 - 1.0)).ln();
    let arc = (-FRAC_PI_2, FRAC_PI_2);
    checks.push(ValidationCheck::absolute(
        "arc integral at center",
        arc_integral(Point2::ORIGIN, 1.0, arc)?,
        PI,
        1e-9,
    ));
    checks.push(ValidationCheck::absolute(
        "arc integral at free edge",
        arc_integral(Point2::new(-1.0, 0.0), 1.0, arc)?,
        edge,
        1e-9,
    ));

    let mut worst = 0.0f64;
    for i in 0..50 {
        let x = 20.0 * i as f64 / 49.0;
        let repr = integrate(|t| (x * t.sin()).cos(), 0.0, PI, QuadOptions::default())?.value / PI;
        worst = worst.max((j0(x)? - repr).abs());
    }
    checks.push(ValidationCheck::absolute(
        "J0 vs integral (max err)",
        worst,
        0.0,
        1e-9,
    ));

    Ok(ValidationReport { checks })
}
