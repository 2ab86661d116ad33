//! Run orchestration and persistence: single runs, deterministic sweeps,
//! trajectory/snapshot CSVs and JSON-lines run records.

use crate::config::{serialize, RunConfig, SweepSpec};
use crate::dichotomy::{
    classify, speed_estimate, thresholds, ClassificationReport, SpeedEstimate, ThresholdSet,
    Verdict,
};
use crate::error::{Error, Result};
use crate::solver::{run, Trajectory};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

/// Outcome of one run: either a verdict with its evidence, or the fault that
/// stopped the integrator.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status")]
pub enum RunOutcome {
    Completed {
        report: ClassificationReport,
        speed: Option<SpeedEstimate>,
    },
    Failed {
        error: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    /// Deterministic hash of the serialized configuration.
    pub run_id: String,
    pub config: String,
    pub thresholds: ThresholdSet,
    pub outcome: RunOutcome,
    pub trajectory_file: String,
    pub duration_secs: f64,
}

/// Deterministic run id: sha256 of the canonical serialized config,
/// truncated to 16 hex characters.
pub fn run_id(cfg: &RunConfig) -> String {
    let digest = Sha256::digest(serialize(cfg).as_bytes());
    let mut id = String::new();
    for byte in &digest[..8] {
        write!(id, "{byte:02x}").unwrap();
    }
    id
}

fn format_row(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        // 17 significant digits: exact round-trip for f64.
        write!(line, "{v:.16e}").unwrap();
    }
    line.push('\n');
    line
}

/// Write the trajectory time series as CSV.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<()> {
    let mut out = String::from("t,h,hprime,u_sup,v_sup,u_center,v_center\n");
    for s in &traj.samples {
        out.push_str(&format_row(&[s.t, s.h, s.h_prime, s.u_sup, s.v_sup, s.u_center, s.v_center]));
    }
    fs::write(path, out)?;
    Ok(())
}

fn write_snapshots(traj: &Trajectory, dir: &Path, id: &str) -> Result<()> {
    for (k, snap) in traj.snapshots.iter().enumerate() {
        let mut out = String::from("y,u,v\n");
        for j in 0..snap.y.len() {
            out.push_str(&format_row(&[snap.y[j], snap.u[j], snap.v[j]]));
        }
        fs::write(dir.join(format!("run-{id}-snap-{k}.csv")), out)?;
    }
    Ok(())
}

/// Execute one configuration end to end and persist its artifacts under
/// `out_dir`. Solver faults are captured in the record instead of aborting.
pub fn run_single(cfg: &RunConfig, out_dir: &Path) -> Result<RunRecord> {
    fs::create_dir_all(out_dir)?;
    let record = run_single_no_append(cfg, out_dir)?;
    append_record(&record, out_dir)?;
    Ok(record)
}

fn append_record(record: &RunRecord, out_dir: &Path) -> Result<()> {
    let line = serde_json::to_string(record)
        .map_err(|e| Error::Precondition(format!("record serialization failed: {e}")))?;
    let mut file =
        fs::OpenOptions::new().create(true).append(true).open(out_dir.join("runs.jsonl"))?;
    writeln!(file, "{line}")?;
    Ok(())
}

/// One summary row per grid point, in row-major coordinate order.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub coordinates: Vec<f64>,
    pub verdict: String,
    pub h_final: Option<f64>,
    pub slope: Option<f64>,
    pub within_bracket: Option<bool>,
}

#[derive(Debug)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
    pub summary_file: PathBuf,
}

/// Execute every grid point, up to `concurrency` in parallel, and write a
/// deterministic summary CSV. Point failures become `Failed` rows.
pub fn run_sweep(spec: &SweepSpec, out_dir: &Path) -> Result<SweepSummary> {
    spec.validate()?;
    fs::create_dir_all(out_dir)?;
    let total = spec.grid_size();

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(SweepRow, Option<RunRecord>)>>> =
        Mutex::new((0..total).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..spec.concurrency.min(total) {
            scope.spawn(|| loop {
                let index = next.fetch_add(1, Ordering::Relaxed);
                if index >= total {
                    break;
                }
                let coordinates = spec.coordinates(index);
                let slot = match evaluate_point(spec, index, out_dir) {
                    Ok((row_tail, record)) => {
                        (SweepRow { coordinates, ..row_tail }, Some(record))
                    }
                    Err(_) => (
                        SweepRow {
                            coordinates,
                            verdict: "Failed".into(),
                            h_final: None,
                            slope: None,
                            within_bracket: None,
                        },
                        None,
                    ),
                };
                slots.lock().unwrap()[index] = Some(slot);
            });
        }
    });

    let mut rows = Vec::with_capacity(total);
    for slot in slots.into_inner().unwrap() {
        let (row, record) = slot.expect("every sweep index must be filled");
        // Records are appended in coordinate order so runs.jsonl is
        // deterministic regardless of scheduling.
        if let Some(record) = record {
            append_record(&record, out_dir)?;
        }
        rows.push(row);
    }

    let mut out = String::new();
    for (key, _) in &spec.axes {
        write!(out, "{key},").unwrap();
    }
    out.push_str("verdict,h_final,slope,within_bracket\n");
    for row in &rows {
        for c in &row.coordinates {
            write!(out, "{c:.16e},").unwrap();
        }
        let h = row.h_final.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let s = row.slope.map(|v| format!("{v:.16e}")).unwrap_or_default();
        let b = row.within_bracket.map(|v| v.to_string()).unwrap_or_default();
        writeln!(out, "{},{h},{s},{b}", row.verdict).unwrap();
    }
    let summary_file = out_dir.join("sweep-summary.csv");
    fs::write(&summary_file, out)?;
    Ok(SweepSummary { rows, summary_file })
}

fn evaluate_point(
    spec: &SweepSpec,
    index: usize,
    out_dir: &Path,
) -> Result<(SweepRow, RunRecord)> {
    let cfg = spec.config_at(index)?;
    let record = run_single_no_append(&cfg, out_dir)?;
    let (verdict, h_final, slope, within_bracket) = match &record.outcome {
        RunOutcome::Completed { report, speed } => (
            format!("{:?}", report.verdict),
            Some(report.final_h),
            speed.as_ref().map(|s| s.slope),
            speed.as_ref().map(|s| s.within_bracket),
        ),
        RunOutcome::Failed { .. } => ("Failed".into(), None, None, None),
    };
    Ok((
        SweepRow { coordinates: Vec::new(), verdict, h_final, slope, within_bracket },
        record,
    ))
}

// Same as run_single but leaves runs.jsonl to the sweep merger.
fn run_single_no_append(cfg: &RunConfig, out_dir: &Path) -> Result<RunRecord> {
    cfg.validate()?;
    let id = run_id(cfg);
    let started = Instant::now();
    let ip = cfg.initial_profile()?;
    let th = thresholds(&cfg.params, &ip, cfg.theta)?;
    let traj_file = format!("run-{id}.csv");
    let outcome = match run(&cfg.params, &ip, &cfg.solver) {
        Ok(traj) => {
            write_trajectory_csv(&traj, &out_dir.join(&traj_file))?;
            write_snapshots(&traj, out_dir, &id)?;
            let report = classify(&traj, &th, &cfg.params, &cfg.classify)?;
            let speed = if report.verdict == Verdict::Spreading {
                Some(speed_estimate(&traj, &report, &cfg.params, 0.5)?)
            } else {
                None
            };
            RunOutcome::Completed { report, speed }
        }
        Err(e @ (Error::IntegrationFault { .. } | Error::Divergence { .. })) => {
            RunOutcome::Failed { error: e.to_string() }
        }
        Err(e) => return Err(e),
    };
    Ok(RunRecord {
        run_id: id,
        config: serialize(cfg),
        thresholds: th,
        outcome,
        trajectory_file: traj_file,
        duration_secs: started.elapsed().as_secs_f64(),
    })
}
