//! CSV and JSON trajectory output.
//!
//! The CSV column order is fixed and floats carry 17 significant digits, so
//! identical configs produce byte-identical files. The JSON document mirrors
//! the CSV rows and prepends a header echoing the resolved configuration;
//! serde's shortest-round-trip float encoding makes re-parsing exact.

use std::io::Write;
use std::path::Path;

use nhtls_core::model::{HamiltonianSpec, RootSign, Scenario};
use nhtls_core::observables::ObservableRecord;
use nhtls_core::op2::Operator2;
use nhtls_core::propagator::StateTrajectory;
use serde::{Deserialize, Serialize};

use crate::config::RunPlan;
use crate::error::CliError;

pub const CSV_HEADER: &str = "t,rho11_re,rho11_im,rho12_re,rho12_im,rho21_re,rho21_im,\
rho22_re,rho22_im,trace_raw,sx,sy,sz,purity,det_norm,energy_avg,gamma_avg";

/// One output row: normalized density-matrix entries plus observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub rho11_re: f64,
    pub rho11_im: f64,
    pub rho12_re: f64,
    pub rho12_im: f64,
    pub rho21_re: f64,
    pub rho21_im: f64,
    pub rho22_re: f64,
    pub rho22_im: f64,
    pub trace_raw: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub purity: f64,
    pub det_norm: f64,
    pub energy_avg: f64,
    pub gamma_avg: f64,
}

impl TrajectoryRow {
    pub fn new(rho_norm: &Operator2, record: &ObservableRecord) -> Self {
        TrajectoryRow {
            t: record.t,
            rho11_re: rho_norm.m11.re,
            rho11_im: rho_norm.m11.im,
            rho12_re: rho_norm.m12.re,
            rho12_im: rho_norm.m12.im,
            rho21_re: rho_norm.m21.re,
            rho21_im: rho_norm.m21.im,
            rho22_re: rho_norm.m22.re,
            rho22_im: rho_norm.m22.im,
            trace_raw: record.trace,
            sx: record.sx,
            sy: record.sy,
            sz: record.sz,
            purity: record.purity,
            det_norm: record.det_norm,
            energy_avg: record.energy_avg,
            gamma_avg: record.gamma_avg,
        }
    }

    fn fields(&self) -> [f64; 17] {
        [
            self.t,
            self.rho11_re,
            self.rho11_im,
            self.rho12_re,
            self.rho12_im,
            self.rho21_re,
            self.rho21_im,
            self.rho22_re,
            self.rho22_im,
            self.trace_raw,
            self.sx,
            self.sy,
            self.sz,
            self.purity,
            self.det_norm,
            self.energy_avg,
            self.gamma_avg,
        ]
    }
}

pub fn rows_from_trajectory(traj: &StateTrajectory) -> Vec<TrajectoryRow> {
    traj.normalized_states
        .iter()
        .zip(&traj.observables)
        .map(|(rho, rec)| TrajectoryRow::new(rho, rec))
        .collect()
}

/// 17 significant digits, enough to reproduce any f64 exactly.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, rows: &[TrajectoryRow]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let line: Vec<String> = row.fields().iter().map(|v| format_float(*v)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Header object echoed into the JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub scenario: String,
    pub omega: f64,
    pub gamma: f64,
    pub beta: f64,
    pub a2: f64,
    pub a0: f64,
    pub w_sign: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub initial: String,
    pub initial_entries: [f64; 8],
    pub dt: f64,
    pub t_max: f64,
    pub form: String,
    pub record_every: usize,
}

impl ConfigEcho {
    pub fn from_plan(plan: &RunPlan) -> Self {
        let spec: &HamiltonianSpec = &plan.spec;
        let rho = plan.initial.rho;
        ConfigEcho {
            scenario: spec.scenario.name().to_string(),
            omega: spec.omega,
            gamma: spec.gamma,
            beta: spec.beta,
            a2: spec.a2,
            a0: spec.a0,
            w_sign: match spec.w_sign {
                RootSign::Positive => 1.0,
                RootSign::Negative => -1.0,
            },
            p: match spec.scenario {
                Scenario::Purification { p } => Some(p),
                _ => None,
            },
            initial: plan.initial_label.clone(),
            initial_entries: [
                rho.m11.re, rho.m11.im, rho.m12.re, rho.m12.im, rho.m21.re, rho.m21.im, rho.m22.re,
                rho.m22.im,
            ],
            dt: plan.integrator.dt,
            t_max: plan.integrator.t_max,
            form: plan.integrator.form.name().to_string(),
            record_every: plan.integrator.record_every,
        }
    }
}

/// The full JSON document: resolved config plus all rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonDocument {
    pub config: ConfigEcho,
    pub records: Vec<TrajectoryRow>,
}

pub fn write_json(path: &Path, doc: &JsonDocument) -> Result<(), CliError> {
    let out = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(out, doc)
        .map_err(|e| CliError::usage(format!("json write failed: {e}")))?;
    Ok(())
}
