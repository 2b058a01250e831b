//! The `run`/`verify` subcommand: propagate, write outputs, verify.

use nhtls_core::propagator::propagate;

use crate::config::RunPlan;
use crate::error::{CliError, EXIT_VERIFICATION};
use crate::output::{rows_from_trajectory, write_csv, write_json, ConfigEcho, JsonDocument};
use crate::verify::run_verification;

pub fn execute_run(plan: &RunPlan) -> Result<(), CliError> {
    let traj = propagate(&plan.spec, &plan.initial, &plan.integrator)?;

    let rows = rows_from_trajectory(&traj);
    if let Some(path) = &plan.out_csv {
        write_csv(path, &rows)?;
        println!("wrote {} rows to {}", rows.len(), path.display());
    }
    if let Some(path) = &plan.out_json {
        let doc = JsonDocument {
            config: ConfigEcho::from_plan(plan),
            records: rows.clone(),
        };
        write_json(path, &doc)?;
        println!("wrote {} records to {}", doc.records.len(), path.display());
    }

    let last = traj.final_record();
    println!(
        "{} γ={} β={} a₂={}: t={:.4}  ⟨σx⟩={:+.6}  ⟨σy⟩={:+.6}  ⟨σz⟩={:+.6}  purity={:.6}",
        plan.spec.scenario.name(),
        plan.spec.gamma,
        plan.spec.beta,
        plan.spec.a2,
        last.t,
        last.sx,
        last.sy,
        last.sz,
        last.purity
    );

    if plan.verify {
        let checks = run_verification(plan, &traj)?;
        let mut any_failed = false;
        for check in &checks {
            println!("{}", check.line());
            any_failed |= !check.passed;
        }
        if any_failed {
            return Err(CliError {
                code: EXIT_VERIFICATION,
                message: "verification failed (see the FAIL lines above)".into(),
            });
        }
        println!("verification passed ({} checks)", checks.len());
    }
    Ok(())
}
