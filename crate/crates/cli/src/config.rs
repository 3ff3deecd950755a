//! Run configuration.
//!
//! A TOML file; every key is optional and defaults to the reference
//! setup (full circle, N = 120, r_c = 1.5 m, λ = 0.2 m, E0 = 1 V/m,
//! 0.2λ reactive margin). Lengths suffixed `_lambda` are in wavelengths of
//! the array being run.
//!
//! ```toml
//! db_convention = "field10"        # or "field20"
//!
//! [[arrays]]                       # one or more; a single [array] table also works
//! label = "full"                   # file-name suffix when several arrays are given
//! kind = "full-circle"             # or "half-circle"
//! n_elements = 120
//! radius_m = 1.5
//! wavelength_m = 0.2
//! source_amplitude = 1.0
//! margin_lambda = 0.2
//!
//! [focal]                          # map experiment
//! x_lambda = 0.0
//! y_lambda = 0.0
//!
//! [scan]                           # scan-gain, scan-width, scan-sll
//! start_lambda = -7.0
//! stop_lambda = 7.0
//! step_lambda = 0.1
//! search_step_lambda = 0.02
//!
//! [map]
//! step_lambda = 0.05
//! line_step_lambda = 0.005
//!
//! [sidelobes]
//! domain = "cross-lines"           # "x-line", "cross-lines" or "plane"
//! step_lambda = 0.005
//!
//! [nf_ff]
//! radii_lambda = [2, 3, 4, 5, 6, 7, 8, 9, 10]
//! angular_step_deg = 0.05
//!
//! [closed_form]
//! delta_max_lambda = 3.0
//! delta_step_lambda = 0.01
//! ```

use std::path::Path;

use anyhow::{bail, Context};
use nff_core::{ArrayConfig, ArrayKind, DbConvention, SidelobeDomain, ValidityRegion};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArraySpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub kind: ArrayKind,
    pub n_elements: usize,
    pub radius_m: f64,
    pub wavelength_m: f64,
    pub source_amplitude: f64,
    pub margin_lambda: f64,
}

impl Default for ArraySpec {
    fn default() -> Self {
        Self {
            label: None,
            kind: ArrayKind::FullCircle,
            n_elements: 120,
            radius_m: 1.5,
            wavelength_m: 0.2,
            source_amplitude: 1.0,
            margin_lambda: 0.2,
        }
    }
}

impl ArraySpec {
    pub fn array_config(&self) -> nff_core::Result<ArrayConfig> {
        ArrayConfig::new(self.kind, self.n_elements, self.radius_m, self.wavelength_m)?
            .with_amplitude(self.source_amplitude)
    }

    pub fn region(&self) -> nff_core::Result<ValidityRegion> {
        ValidityRegion::with_margin_lambda(&self.array_config()?, self.margin_lambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FocalSection {
    pub x_lambda: f64,
    pub y_lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanSection {
    pub start_lambda: f64,
    pub stop_lambda: f64,
    pub step_lambda: f64,
    pub search_step_lambda: f64,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            start_lambda: -7.0,
            stop_lambda: 7.0,
            step_lambda: 0.1,
            search_step_lambda: 0.02,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MapSection {
    pub step_lambda: f64,
    pub line_step_lambda: f64,
}

impl Default for MapSection {
    fn default() -> Self {
        Self {
            step_lambda: 0.05,
            line_step_lambda: 0.005,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SidelobeSection {
    pub domain: SidelobeDomain,
    pub step_lambda: f64,
}

impl Default for SidelobeSection {
    fn default() -> Self {
        Self {
            domain: SidelobeDomain::CrossLines,
            step_lambda: 0.005,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NfFfSection {
    pub radii_lambda: Vec<f64>,
    pub angular_step_deg: f64,
}

impl Default for NfFfSection {
    fn default() -> Self {
        Self {
            radii_lambda: (2..=10).map(f64::from).collect(),
            angular_step_deg: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosedFormSection {
    pub delta_max_lambda: f64,
    pub delta_step_lambda: f64,
}

impl Default for ClosedFormSection {
    fn default() -> Self {
        Self {
            delta_max_lambda: 3.0,
            delta_step_lambda: 0.01,
        }
    }
}

/// Raw file contents before `array`/`arrays` are merged.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawConfig {
    db_convention: DbConvention,
    array: Option<ArraySpec>,
    arrays: Vec<ArraySpec>,
    focal: FocalSection,
    scan: ScanSection,
    map: MapSection,
    sidelobes: SidelobeSection,
    nf_ff: NfFfSection,
    closed_form: ClosedFormSection,
}

/// Normalised configuration. Serialising it gives TOML that loads back to
/// an equal value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub db_convention: DbConvention,
    pub arrays: Vec<ArraySpec>,
    pub focal: FocalSection,
    pub scan: ScanSection,
    pub map: MapSection,
    pub sidelobes: SidelobeSection,
    pub nf_ff: NfFfSection,
    pub closed_form: ClosedFormSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RawConfig::default()
            .normalise()
            .expect("defaults are valid")
    }
}

impl RawConfig {
    fn normalise(self) -> anyhow::Result<RunConfig> {
        let arrays = match (self.array, self.arrays.is_empty()) {
            (Some(_), false) => bail!("give either [array] or [[arrays]], not both"),
            (Some(a), true) => vec![a],
            (None, true) => vec![ArraySpec::default()],
            (None, false) => self.arrays,
        };
        let cfg = RunConfig {
            db_convention: self.db_convention,
            arrays,
            focal: self.focal,
            scan: self.scan,
            map: self.map,
            sidelobes: self.sidelobes,
            nf_ff: self.nf_ff,
            closed_form: self.closed_form,
        };
        cfg.check()?;
        Ok(cfg)
    }
}

fn positive(name: &str, v: f64) -> anyhow::Result<()> {
    if !(v.is_finite() && v > 0.0) {
        bail!("{name} must be positive, got {v}");
    }
    Ok(())
}

fn finite(name: &str, v: f64) -> anyhow::Result<()> {
    if !v.is_finite() {
        bail!("{name} must be finite, got {v}");
    }
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let raw: RawConfig = toml::from_str(text).context("malformed config")?;
        raw.normalise()
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Rejects bad values with a message naming the key.
    pub fn check(&self) -> anyhow::Result<()> {
        let mut labels = Vec::new();
        for (i, a) in self.arrays.iter().enumerate() {
            a.array_config()
                .and_then(|_| a.region())
                .with_context(|| format!("arrays[{i}]"))?;
            if let Some(l) = &a.label {
                if l.is_empty()
                    || !l
                        .chars()
                        .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
                {
                    bail!("arrays[{i}].label must be non-empty [A-Za-z0-9_-], got {l:?}");
                }
            }
            labels.push(self.label(i));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            bail!("array labels must be unique, got {labels:?}");
        }
        finite("focal.x_lambda", self.focal.x_lambda)?;
        finite("focal.y_lambda", self.focal.y_lambda)?;
        finite("scan.start_lambda", self.scan.start_lambda)?;
        finite("scan.stop_lambda", self.scan.stop_lambda)?;
        if self.scan.start_lambda > self.scan.stop_lambda {
            bail!("scan.start_lambda must not exceed scan.stop_lambda");
        }
        positive("scan.step_lambda", self.scan.step_lambda)?;
        positive("scan.search_step_lambda", self.scan.search_step_lambda)?;
        if self.scan.search_step_lambda > 0.02 + 1e-12 {
            bail!(
                "scan.search_step_lambda must be at most 0.02, got {}",
                self.scan.search_step_lambda
            );
        }
        positive("map.step_lambda", self.map.step_lambda)?;
        positive("map.line_step_lambda", self.map.line_step_lambda)?;
        positive("sidelobes.step_lambda", self.sidelobes.step_lambda)?;
        positive("nf_ff.angular_step_deg", self.nf_ff.angular_step_deg)?;
        if self.nf_ff.angular_step_deg > 0.1 {
            bail!(
                "nf_ff.angular_step_deg must be at most 0.1, got {}",
                self.nf_ff.angular_step_deg
            );
        }
        if self.nf_ff.radii_lambda.is_empty() {
            bail!("nf_ff.radii_lambda must not be empty");
        }
        for r in &self.nf_ff.radii_lambda {
            positive("nf_ff.radii_lambda", *r)?;
        }
        positive(
            "closed_form.delta_max_lambda",
            self.closed_form.delta_max_lambda,
        )?;
        positive(
            "closed_form.delta_step_lambda",
            self.closed_form.delta_step_lambda,
        )?;
        Ok(())
    }

    /// File-name suffix for array `i`; empty for a lone unlabelled array.
    pub fn label(&self, i: usize) -> String {
        match &self.arrays[i].label {
            Some(l) => l.clone(),
            None if self.arrays.len() == 1 => String::new(),
            None => {
                let kind = match self.arrays[i].kind {
                    ArrayKind::FullCircle => "full",
                    ArrayKind::HalfCircle => "half",
                };
                format!("{i}-{kind}")
            }
        }
    }
}
