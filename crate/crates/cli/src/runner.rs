use std::fmt;

use anyhow::{bail, Context};
use clap::ValueEnum;
use nff_core::output::{
    closed_form_csv, field_map_csv, gain_csv, line_csv, nf_ff_csv, sll_csv, width_csv,
};
use nff_core::validate::run_validation;
use nff_core::{
    closed_form_table, focal_positions, nf_ff_comparison, peak_gain_scan, sidelobe_scan,
    width_scan, ArrayKind, Axis, DbConvention, ElementSet, FocalSpec, FocusedArray, GridSpec,
};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Map,
    ScanGain,
    ScanWidth,
    ScanSll,
    NfFf,
    ClosedForm,
    Validate,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(
            self.to_possible_value()
                .expect("no skipped variants")
                .get_name(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    /// Outputs were written but some result is unusable.
    Partial,
    Failed,
}

/// Everything one run produces, held in memory until the single write.
#[derive(Debug)]
pub struct Artifacts {
    pub files: Vec<(String, Vec<u8>)>,
    pub status: RunStatus,
    pub notes: Vec<String>,
}

impl Artifacts {
    fn new() -> Self {
        Self {
            files: Vec::new(),
            status: RunStatus::Ok,
            notes: Vec::new(),
        }
    }

    fn add(&mut self, stem: &str, label: &str, ext: &str, body: String) {
        let name = if label.is_empty() {
            format!("{stem}.{ext}")
        } else {
            format!("{stem}_{label}.{ext}")
        };
        self.files.push((name, body.into_bytes()));
    }

    fn degrade(&mut self, status: RunStatus, note: String) {
        log::warn!("{note}");
        self.notes.push(note);
        if status == RunStatus::Failed || self.status == RunStatus::Ok {
            self.status = status;
        }
    }
}

pub fn run(experiment: Experiment, cfg: &RunConfig) -> anyhow::Result<Artifacts> {
    let mut out = Artifacts::new();
    match experiment {
        Experiment::Validate => {
            let report = run_validation()?;
            for f in report.failures() {
                out.degrade(
                    RunStatus::Failed,
                    format!("validation check failed: {}", f.name),
                );
            }
            out.add("validation", "", "txt", report.render());
        }
        Experiment::NfFf => {
            // radii come from the config; element count and wavelength from each array
            for (i, a) in cfg.arrays.iter().enumerate() {
                if a.kind != ArrayKind::FullCircle {
                    bail!("nf-ff: arrays[{i}] must be a full circle");
                }
                let rows = nf_ff_comparison(
                    &cfg.nf_ff.radii_lambda,
                    a.n_elements,
                    a.wavelength_m,
                    cfg.scan.search_step_lambda * a.wavelength_m,
                    cfg.nf_ff.angular_step_deg.to_radians(),
                )
                .with_context(|| format!("nf-ff on arrays[{i}]"))?;
                if rows.iter().any(|r| !r.nf_resolvable) {
                    out.degrade(
                        RunStatus::Partial,
                        format!("nf-ff arrays[{i}]: some near-field widths are not resolvable"),
                    );
                }
                out.add("nf_ff", &cfg.label(i), "csv", nf_ff_csv(&rows));
            }
        }
        _ => {
            for i in 0..cfg.arrays.len() {
                run_array(experiment, cfg, i, &mut out)
                    .with_context(|| format!("{experiment} on arrays[{i}]"))?;
            }
        }
    }
    Ok(out)
}

fn run_array(
    experiment: Experiment,
    cfg: &RunConfig,
    i: usize,
    out: &mut Artifacts,
) -> anyhow::Result<()> {
    let array = &cfg.arrays[i];
    let label = cfg.label(i);
    let lambda = array.wavelength_m;
    let set: ElementSet = array.array_config()?.build()?;
    let region = array.region()?;
    let search_step = cfg.scan.search_step_lambda * lambda;
    let xs = || {
        focal_positions(
            cfg.scan.start_lambda * lambda,
            cfg.scan.stop_lambda * lambda,
            cfg.scan.step_lambda * lambda,
        )
    };
    match experiment {
        Experiment::Map => {
            let focal = FocalSpec::new(cfg.focal.x_lambda * lambda, cfg.focal.y_lambda * lambda);
            let focused = FocusedArray::new(&set, focal)?.with_region(region);
            if !focused.is_valid(focal.point) {
                out.degrade(
                    RunStatus::Partial,
                    format!("map {label}: focal point is outside the valid region"),
                );
            }
            let map = focused.map(GridSpec::covering_disc(
                array.radius_m,
                cfg.map.step_lambda * lambda,
            ))?;
            out.add("field_map", &label, "csv", field_map_csv(&map));
            let rc = array.radius_m;
            let step = cfg.map.line_step_lambda * lambda;
            let f = focal.point;
            // lines through the focal point spanning the aperture
            let lx = focused.line(Axis::X, -rc - f.x, rc - f.x, step)?;
            let ly = focused.line(Axis::Y, -rc - f.y, rc - f.y, step)?;
            out.add("line_x", &label, "csv", line_csv(&lx, Axis::X, lambda));
            out.add("line_y", &label, "csv", line_csv(&ly, Axis::Y, lambda));
        }
        Experiment::ScanGain => {
            let recs = peak_gain_scan(&set, &region, &xs()?, search_step, cfg.db_convention)?;
            if recs.iter().all(|r| r.gain_db.is_none()) {
                out.degrade(
                    RunStatus::Partial,
                    format!("scan-gain {label}: no valid focal position"),
                );
            }
            out.add("gain", &label, "csv", gain_csv(&recs));
        }
        Experiment::ScanWidth => {
            let recs = width_scan(&set, &region, &xs()?, search_step)?;
            let n_ok = recs.iter().filter(|r| r.resolvable).count();
            if n_ok == 0 {
                out.degrade(
                    RunStatus::Partial,
                    format!("scan-width {label}: width unresolvable at every focal position"),
                );
            } else if n_ok < recs.len() {
                out.notes.push(format!(
                    "scan-width {label}: {} of {} positions unresolvable",
                    recs.len() - n_ok,
                    recs.len()
                ));
            }
            out.add("width", &label, "csv", width_csv(&recs));
        }
        Experiment::ScanSll => {
            let recs = sidelobe_scan(
                &set,
                &region,
                &xs()?,
                cfg.sidelobes.domain,
                cfg.sidelobes.step_lambda * lambda,
            )?;
            if recs.iter().all(|r| r.sll_db.is_none()) {
                out.degrade(
                    RunStatus::Partial,
                    format!("scan-sll {label}: no sidelobe found anywhere"),
                );
            }
            out.add("sll", &label, "csv", sll_csv(&recs));
        }
        Experiment::ClosedForm => {
            if array.kind != ArrayKind::FullCircle {
                bail!("closed-form needs a full-circle array");
            }
            let deltas = focal_positions(
                0.0,
                cfg.closed_form.delta_max_lambda * lambda,
                cfg.closed_form.delta_step_lambda * lambda,
            )?;
            let rows = closed_form_table(&set, &deltas)?;
            out.add("closed_form", &label, "csv", closed_form_csv(&rows));
        }
        Experiment::NfFf | Experiment::Validate => unreachable!("handled by run"),
    }
    Ok(())
}

pub fn db_label(c: DbConvention) -> &'static str {
    match c {
        DbConvention::Field10 => "field10",
        DbConvention::Field20 => "field20",
    }
}
