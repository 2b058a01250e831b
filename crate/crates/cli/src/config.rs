//! Scenario configuration: flat key-value files, flag overrides (flags win)
//! and resolution into a validated run plan.

use std::path::{Path, PathBuf};

use nhtls_core::model::{build_scenario, HamiltonianSpec, RootSign, Scenario};
use nhtls_core::op2::Operator2;
use nhtls_core::propagator::{EvolutionForm, IntegratorConfig};
use nhtls_core::state::DensityState;
use num_complex::Complex64;

use crate::error::CliError;

/// One sweep axis: a parameter swept over `count` evenly spaced values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| self.start + step * k as f64)
            .collect()
    }
}

/// Raw, unresolved options from a config file and/or command-line flags.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub scenario: Option<String>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub beta: Option<f64>,
    pub a2: Option<f64>,
    pub a0: Option<f64>,
    pub w_sign: Option<f64>,
    pub p: Option<f64>,
    pub initial: Option<String>,
    pub dt: Option<f64>,
    pub t_max: Option<f64>,
    pub form: Option<String>,
    pub record_every: Option<usize>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub verify: Option<bool>,
    pub sweep_param: Option<String>,
    pub sweep_start: Option<f64>,
    pub sweep_stop: Option<f64>,
    pub sweep_count: Option<usize>,
}

impl RawConfig {
    /// Overlay `self` (flags) on top of `base` (file); set fields win.
    pub fn merged_over(self, base: RawConfig) -> RawConfig {
        RawConfig {
            scenario: self.scenario.or(base.scenario),
            omega: self.omega.or(base.omega),
            gamma: self.gamma.or(base.gamma),
            beta: self.beta.or(base.beta),
            a2: self.a2.or(base.a2),
            a0: self.a0.or(base.a0),
            w_sign: self.w_sign.or(base.w_sign),
            p: self.p.or(base.p),
            initial: self.initial.or(base.initial),
            dt: self.dt.or(base.dt),
            t_max: self.t_max.or(base.t_max),
            form: self.form.or(base.form),
            record_every: self.record_every.or(base.record_every),
            out_csv: self.out_csv.or(base.out_csv),
            out_json: self.out_json.or(base.out_json),
            verify: self.verify.or(base.verify),
            sweep_param: self.sweep_param.or(base.sweep_param),
            sweep_start: self.sweep_start.or(base.sweep_start),
            sweep_stop: self.sweep_stop.or(base.sweep_stop),
            sweep_count: self.sweep_count.or(base.sweep_count),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, CliError> {
    value
        .parse()
        .map_err(|_| CliError::usage(format!("config key `{key}`: `{value}` is not a number")))
}

/// Parse a flat `key = value` file; `#` starts a comment.
pub fn parse_config_file(path: &Path) -> Result<RawConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = RawConfig::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::usage(format!(
                "config line {}: expected `key = value`",
                lineno + 1
            ))
        })?;
        let key = key.trim().to_lowercase().replace('-', "_");
        let value = value.trim();
        match key.as_str() {
            "scenario" => cfg.scenario = Some(value.to_string()),
            "omega" => cfg.omega = Some(parse_f64(&key, value)?),
            "gamma" => cfg.gamma = Some(parse_f64(&key, value)?),
            "beta" => cfg.beta = Some(parse_f64(&key, value)?),
            "a2" => cfg.a2 = Some(parse_f64(&key, value)?),
            "a0" => cfg.a0 = Some(parse_f64(&key, value)?),
            "w_sign" => cfg.w_sign = Some(parse_f64(&key, value)?),
            "p" => cfg.p = Some(parse_f64(&key, value)?),
            "initial" => cfg.initial = Some(value.to_string()),
            "dt" => cfg.dt = Some(parse_f64(&key, value)?),
            "t_max" => cfg.t_max = Some(parse_f64(&key, value)?),
            "form" => cfg.form = Some(value.to_string()),
            "record_every" => {
                cfg.record_every = Some(value.parse().map_err(|_| {
                    CliError::usage(format!(
                        "config key `record_every`: `{value}` is not an integer"
                    ))
                })?)
            }
            "out_csv" => cfg.out_csv = Some(PathBuf::from(value)),
            "out_json" => cfg.out_json = Some(PathBuf::from(value)),
            "verify" => {
                cfg.verify = Some(match value {
                    "true" | "1" | "yes" => true,
                    "false" | "0" | "no" => false,
                    _ => return Err(CliError::usage(format!("config key `verify`: `{value}`"))),
                })
            }
            "sweep_param" => cfg.sweep_param = Some(value.to_string()),
            "sweep_start" => cfg.sweep_start = Some(parse_f64(&key, value)?),
            "sweep_stop" => cfg.sweep_stop = Some(parse_f64(&key, value)?),
            "sweep_count" => {
                cfg.sweep_count = Some(value.parse().map_err(|_| {
                    CliError::usage(format!(
                        "config key `sweep_count`: `{value}` is not an integer"
                    ))
                })?)
            }
            other => return Err(CliError::usage(format!("unknown config key `{other}`"))),
        }
    }
    Ok(cfg)
}

pub fn parse_scenario(name: &str, p: Option<f64>) -> Result<Scenario, CliError> {
    let normalized = name.to_lowercase().replace('_', "-");
    Ok(match normalized.as_str() {
        "general" => Scenario::General,
        "conserved-energy-exp" | "exp" => Scenario::ConservedEnergyExp,
        "conserved-energy-poly" | "poly" => Scenario::ConservedEnergyPoly,
        "vanishing-population" => Scenario::VanishingPopulation,
        "dephasing" => Scenario::Dephasing,
        "purification" => {
            let p = p.ok_or_else(|| {
                CliError::usage("the purification scenario needs --p (0 < p < 1)")
            })?;
            Scenario::Purification { p }
        }
        other => return Err(CliError::usage(format!("unknown scenario `{other}`"))),
    })
}

pub fn parse_form(name: &str) -> Result<EvolutionForm, CliError> {
    let normalized = name.to_lowercase().replace('_', "-");
    Ok(match normalized.as_str() {
        "linear-raw" | "raw" | "linear" => EvolutionForm::LinearRaw,
        "nonlinear-normalized" | "nonlinear" => EvolutionForm::NonlinearNormalized,
        "state-vector" | "statevector" => EvolutionForm::StateVector,
        other => return Err(CliError::usage(format!("unknown form `{other}`"))),
    })
}

/// Parse an initial-state description.
pub fn parse_initial(text: &str) -> Result<(DensityState, String), CliError> {
    let normalized = text.to_lowercase().replace('_', "-");
    if let Some(rest) = normalized.strip_prefix("diag-mixed:") {
        let p: f64 = rest
            .parse()
            .map_err(|_| CliError::usage(format!("diag-mixed: `{rest}` is not a number")))?;
        let state = DensityState::diag_mixed(p).map_err(CliError::from)?;
        return Ok((state, format!("diag-mixed:{p}")));
    }
    if let Some(rest) = normalized.strip_prefix("explicit:") {
        let parts: Vec<f64> = rest
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::usage("explicit: expected 8 comma-separated numbers"))?;
        if parts.len() != 8 {
            return Err(CliError::usage(
                "explicit: expected re11,im11,re12,im12,re21,im21,re22,im22",
            ));
        }
        let rho = Operator2::new(
            Complex64::new(parts[0], parts[1]),
            Complex64::new(parts[2], parts[3]),
            Complex64::new(parts[4], parts[5]),
            Complex64::new(parts[6], parts[7]),
        );
        let state = DensityState::new(rho, 0.0).map_err(CliError::from)?;
        return Ok((state, format!("explicit:{rest}")));
    }
    match normalized.as_str() {
        "excited" => Ok((DensityState::excited(), "excited".into())),
        "ground" => Ok((DensityState::ground(), "ground".into())),
        "plus-coherent" | "plus" => Ok((DensityState::plus_coherent(), "plus-coherent".into())),
        other => Err(CliError::usage(format!("unknown initial state `{other}`"))),
    }
}

/// A fully resolved run: spec, initial state and integration settings.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub spec: HamiltonianSpec,
    pub initial: DensityState,
    pub initial_label: String,
    pub integrator: IntegratorConfig,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
    pub verify: bool,
    pub sweep: Option<SweepAxis>,
}

/// Default initial state of a scenario (the one its closed form assumes).
pub fn canonical_initial(scenario: &Scenario) -> (DensityState, String) {
    match scenario {
        Scenario::Dephasing => (DensityState::plus_coherent(), "plus-coherent".into()),
        Scenario::Purification { p } => (
            DensityState::diag_mixed(*p).expect("validated p"),
            format!("diag-mixed:{p}"),
        ),
        _ => (DensityState::excited(), "excited".into()),
    }
}

pub fn resolve(raw: &RawConfig) -> Result<RunPlan, CliError> {
    let scenario_name = raw.scenario.clone().unwrap_or_else(|| "general".into());
    let scenario = parse_scenario(&scenario_name, raw.p)?;

    let omega = raw.omega.unwrap_or(1.0);
    let gamma = raw.gamma.unwrap_or(0.0);
    let w_sign = match raw.w_sign {
        None => RootSign::Positive,
        Some(v) => RootSign::from_f64(v).map_err(CliError::from)?,
    };
    let base = HamiltonianSpec {
        omega,
        gamma,
        beta: raw.beta.unwrap_or(0.0),
        a2: raw.a2.unwrap_or(0.0),
        a0: raw.a0.unwrap_or(gamma),
        w_sign,
        scenario: Scenario::General,
    };
    let spec = build_scenario(scenario, base).map_err(CliError::from)?;

    let (initial, initial_label) = match &raw.initial {
        Some(text) => parse_initial(text)?,
        None => canonical_initial(&spec.scenario),
    };

    let integrator = IntegratorConfig {
        dt: raw.dt.unwrap_or(0.002 / omega),
        t_max: raw.t_max.unwrap_or(10.0 / omega),
        form: raw
            .form
            .as_deref()
            .map(parse_form)
            .transpose()?
            .unwrap_or_default(),
        record_every: raw.record_every.unwrap_or(10),
        ..Default::default()
    };
    integrator.validate().map_err(CliError::from)?;

    let sweep = match (
        &raw.sweep_param,
        raw.sweep_start,
        raw.sweep_stop,
        raw.sweep_count,
    ) {
        (None, None, None, None) => None,
        (Some(param), Some(start), Some(stop), count) => Some(SweepAxis {
            param: param.to_lowercase(),
            start,
            stop,
            count: count.unwrap_or(11),
        }),
        _ => return Err(CliError::usage(
            "a sweep needs sweep_param, sweep_start and sweep_stop (and optionally sweep_count)",
        )),
    };

    Ok(RunPlan {
        spec,
        initial,
        initial_label,
        integrator,
        out_csv: raw.out_csv.clone(),
        out_json: raw.out_json.clone(),
        verify: raw.verify.unwrap_or(false),
        sweep,
    })
}
