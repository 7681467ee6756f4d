//! Runs every (null set, PAPR level) cell of an experiment and writes its files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use ofdm_mismatch::altopt::{random_phase_baseline, run};
use ofdm_mismatch::{AltOptConfig, RunResult64, Termination};
use rayon::prelude::*;
use serde::Serialize;

use crate::artifact::{
    csv_table, emit_profile, float_cell, format_profile, format_trace, profile_rows, write_json,
    write_text, PairMetrics, RunConfigEcho, SequenceArtifact,
};
use crate::config::{format_ranges, ExperimentSpec, NullRange};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub null_ranges: Vec<NullRange>,
    pub papr_level: f64,
    pub dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Finished {
        metrics: PairMetrics,
        termination: Termination,
        outer_iterations: usize,
    },
    Failed {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub cell: Cell,
    pub outcome: CellOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub null_ranges: Vec<NullRange>,
    pub dir: PathBuf,
    pub metrics: PairMetrics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub cells: Vec<CellReport>,
    pub baselines: Vec<BaselineReport>,
    /// Departures from the expected trends; informational only.
    pub warnings: Vec<String>,
}

impl SweepReport {
    pub fn failures(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c.outcome, CellOutcome::Failed { .. }))
            .count()
    }

    fn baseline_for(&self, ranges: &[NullRange]) -> Option<&BaselineReport> {
        self.baselines.iter().find(|b| b.null_ranges == ranges)
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    status: &'a str,
    error: Option<&'a str>,
    papr_level: f64,
    null_ranges: String,
    seed: u64,
    termination: Option<String>,
    outer_iterations: usize,
    elapsed_seconds: f64,
    finished_unix_seconds: u64,
}

fn echo(
    spec: &ExperimentSpec,
    cfg: &AltOptConfig<f64>,
    ranges: &[NullRange],
    papr_level: Option<f64>,
) -> RunConfigEcho {
    RunConfigEcho {
        n_subcarriers: spec.n_subcarriers,
        null_ranges: ranges.iter().map(|r| [r.start, r.end]).collect(),
        papr_level,
        avg_power: cfg.avg_power,
        penalty: spec.penalty,
        outer_iters: spec.outer_iters,
        admm_max_iters: spec.admm_max_iters,
        admm_tol: spec.admm_tol,
        bcd_sweeps: spec.bcd_sweeps,
        seed: spec.seed,
    }
}

fn termination_label(t: Termination) -> String {
    match t {
        Termination::MaxIterations => "max_iterations".into(),
        Termination::EarlyExit { iteration } => format!("early_exit at {iteration}"),
    }
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Lays out one directory per cell under `spec.output_dir`. With a single
/// null set the level is the only path component.
pub fn plan_cells(spec: &ExperimentSpec, null_sets: &[Vec<NullRange>]) -> Vec<Cell> {
    let mut cells = Vec::new();
    for ranges in null_sets {
        for &rho in &spec.papr_levels {
            cells.push(Cell {
                null_ranges: ranges.clone(),
                papr_level: rho,
                dir: mask_dir(spec, null_sets, ranges).join(format!("rho_{rho}")),
            });
        }
    }
    cells
}

fn mask_dir(spec: &ExperimentSpec, null_sets: &[Vec<NullRange>], ranges: &[NullRange]) -> PathBuf {
    if null_sets.len() == 1 {
        spec.output_dir.clone()
    } else {
        let label = format_ranges(ranges).replace(':', "-").replace(',', "_");
        spec.output_dir.join(format!("nulls_{label}"))
    }
}

/// Writes `trace.csv`, `correlation.csv` and `sequence.json` for a finished run.
pub fn write_run_outputs(
    dir: &Path,
    result: &RunResult64,
    config: RunConfigEcho,
) -> Result<(), CliError> {
    create_dir(dir)?;
    write_text(&dir.join("trace.csv"), &format_trace(result))?;
    emit_profile(result, &dir.join("correlation.csv"))?;
    SequenceArtifact::new(
        config,
        result.symbols.symbols(),
        result.x.as_slice(),
        &result.y,
        result.h.as_slice(),
    )
    .write(&dir.join("sequence.json"))
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell) -> Result<CellOutcome, CliError> {
    create_dir(&cell.dir)?;
    let started = Instant::now();
    let attempt = spec
        .altopt_config(cell.papr_level, &cell.null_ranges)
        .and_then(|cfg| run(&cfg).map(|result| (cfg, result)))
        .and_then(|(cfg, result)| PairMetrics::of(&result.x, &result.h).map(|m| (cfg, result, m)));
    let elapsed = started.elapsed().as_secs_f64();

    let (outcome, error_text) = match attempt {
        Ok((cfg, result, metrics)) => {
            write_run_outputs(
                &cell.dir,
                &result,
                echo(spec, &cfg, &cell.null_ranges, Some(cell.papr_level)),
            )?;
            (
                CellOutcome::Finished {
                    metrics,
                    termination: result.termination,
                    outer_iterations: result.outer_trace.len(),
                },
                None,
            )
        }
        Err(e) => {
            let message = e.to_string();
            (
                CellOutcome::Failed {
                    message: message.clone(),
                },
                Some(message),
            )
        }
    };

    let (termination, outer_iterations) = match &outcome {
        CellOutcome::Finished {
            termination,
            outer_iterations,
            ..
        } => (Some(termination_label(*termination)), *outer_iterations),
        CellOutcome::Failed { .. } => (None, 0),
    };
    let meta = Meta {
        status: if error_text.is_none() { "ok" } else { "failed" },
        error: error_text.as_deref(),
        papr_level: cell.papr_level,
        null_ranges: format_ranges(&cell.null_ranges),
        seed: spec.seed,
        termination,
        outer_iterations,
        elapsed_seconds: elapsed,
        finished_unix_seconds: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    };
    write_json(&cell.dir.join("meta.json"), &meta)?;
    Ok(outcome)
}

fn run_baseline(
    spec: &ExperimentSpec,
    ranges: &[NullRange],
    dir: PathBuf,
) -> Result<BaselineReport, CliError> {
    let rho = spec.papr_levels[0];
    let cfg = spec.altopt_config(rho, ranges)?;
    let (x, h) = random_phase_baseline(&cfg)?;
    let metrics = PairMetrics::of(&x, &h)?;
    create_dir(&dir)?;
    write_text(
        &dir.join("correlation.csv"),
        &format_profile(&profile_rows(&x, &h)?),
    )?;
    let symbols = ofdm_mismatch::numerics::dft(x.as_slice())?;
    SequenceArtifact::new(
        echo(spec, &cfg, ranges, None),
        &symbols,
        x.as_slice(),
        x.as_slice(),
        h.as_slice(),
    )
    .write(&dir.join("sequence.json"))?;
    Ok(BaselineReport {
        null_ranges: ranges.to_vec(),
        dir,
        metrics,
    })
}

/// Runs the experiment's own null set at every PAPR level.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<SweepReport, CliError> {
    run_sweep(spec, std::slice::from_ref(&spec.null_ranges))
}

/// Runs every (null set, PAPR level) cell in parallel, all from the experiment's
/// seed, plus one random-phase baseline per null set.
pub fn run_sweep(
    spec: &ExperimentSpec,
    null_sets: &[Vec<NullRange>],
) -> Result<SweepReport, CliError> {
    let null_sets: Vec<Vec<NullRange>> = if null_sets.is_empty() {
        vec![spec.null_ranges.clone()]
    } else {
        null_sets.to_vec()
    };
    create_dir(&spec.output_dir)?;
    let baselines = null_sets
        .iter()
        .map(|ranges| {
            run_baseline(
                spec,
                ranges,
                mask_dir(spec, &null_sets, ranges).join("baseline"),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;

    let cells = plan_cells(spec, &null_sets);
    let outcomes = cells
        .par_iter()
        .map(|cell| run_cell(spec, cell))
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = SweepReport {
        cells: cells
            .into_iter()
            .zip(outcomes)
            .map(|(cell, outcome)| CellReport { cell, outcome })
            .collect(),
        baselines,
        warnings: Vec::new(),
    };
    report.warnings = trend_warnings(&report);
    write_text(
        &spec.output_dir.join("summary.csv"),
        &format_summary(&report),
    )?;
    Ok(report)
}

/// Flags levels where a larger PAPR budget did not lower the sidelobes, and
/// designs that do not beat their random-phase baseline.
pub fn trend_warnings(report: &SweepReport) -> Vec<String> {
    let mut warnings = Vec::new();
    let mut groups: Vec<&Vec<NullRange>> = Vec::new();
    for c in &report.cells {
        if !groups.contains(&&c.cell.null_ranges) {
            groups.push(&c.cell.null_ranges);
        }
    }
    for ranges in groups {
        let mut finished: Vec<(f64, PairMetrics)> = report
            .cells
            .iter()
            .filter(|c| &c.cell.null_ranges == ranges)
            .filter_map(|c| match &c.outcome {
                CellOutcome::Finished { metrics, .. } => Some((c.cell.papr_level, *metrics)),
                CellOutcome::Failed { .. } => None,
            })
            .collect();
        finished.sort_by(|a, b| a.0.total_cmp(&b.0));
        let label = format_ranges(ranges);
        for w in finished.windows(2) {
            let ((lo, a), (hi, b)) = (w[0], w[1]);
            if b.isl > a.isl {
                warnings.push(format!(
                    "nulls {label}: ISL rises from {:.4e} at rho={lo} to {:.4e} at rho={hi}",
                    a.isl, b.isl
                ));
            }
            if b.peak_sidelobe_db > a.peak_sidelobe_db {
                warnings.push(format!(
                    "nulls {label}: peak sidelobe rises from {:.2} dB at rho={lo} to {:.2} dB at rho={hi}",
                    a.peak_sidelobe_db, b.peak_sidelobe_db
                ));
            }
        }
        if let Some(base) = report.baseline_for(ranges) {
            for (rho, m) in &finished {
                if m.peak_sidelobe_db >= base.metrics.peak_sidelobe_db {
                    warnings.push(format!(
                        "nulls {label}: design at rho={rho} ({:.2} dB) does not beat the random-phase baseline ({:.2} dB)",
                        m.peak_sidelobe_db, base.metrics.peak_sidelobe_db
                    ));
                }
            }
        }
    }
    warnings
}

pub const SUMMARY_HEADER: &str =
    "null_ranges,papr_level,status,isl,pslr_db,papr,peak_sidelobe_db,baseline_peak_sidelobe_db";

pub fn format_summary(report: &SweepReport) -> String {
    let rows = report.cells.iter().map(|c| {
        let baseline = report
            .baseline_for(&c.cell.null_ranges)
            .map_or(String::new(), |b| float_cell(b.metrics.peak_sidelobe_db));
        let mut row = vec![
            format_ranges(&c.cell.null_ranges),
            float_cell(c.cell.papr_level),
        ];
        match &c.outcome {
            CellOutcome::Finished { metrics: m, .. } => row.extend([
                "ok".to_string(),
                float_cell(m.isl),
                float_cell(m.pslr_db),
                float_cell(m.papr),
                float_cell(m.peak_sidelobe_db),
            ]),
            CellOutcome::Failed { .. } => row.extend(
                ["failed".to_string()]
                    .into_iter()
                    .chain(vec![String::new(); 4]),
            ),
        }
        row.push(baseline);
        row
    });
    csv_table(SUMMARY_HEADER, rows)
}
