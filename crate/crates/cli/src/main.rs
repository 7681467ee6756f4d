use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ofdm_mismatch::numerics::dft;
use ofdm_mismatch_cli::artifact::{format_profile, profile_rows, write_text};
use ofdm_mismatch_cli::config::{
    format_ranges, parse_config_with, parse_null_ranges, ExperimentSpec, NullRange,
};
use ofdm_mismatch_cli::error::{ConfigError, Source};
use ofdm_mismatch_cli::experiment::{CellOutcome, SweepReport};
use ofdm_mismatch_cli::{run_sweep, CliError, SequenceArtifact};

#[derive(Parser)]
#[command(
    name = "ofdm-design",
    version,
    about = "Joint OFDM sequence and mismatch filter design"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured null set at every PAPR level.
    Run(SpecArgs),
    /// Run every (null set, PAPR level) cell in parallel.
    Sweep {
        #[command(flatten)]
        spec: SpecArgs,
        /// One null set per flag, e.g. `--null-set 209:304 --null-set 200:313`;
        /// `none` leaves every subcarrier available.
        #[arg(long = "null-set")]
        null_sets: Vec<String>,
    },
    /// Recompute metrics from a saved `sequence.json`.
    Profile {
        artifact: PathBuf,
        /// Write the correlation table here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Every flag overrides the key of the same name in the config file.
#[derive(Args)]
struct SpecArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n_subcarriers: Option<String>,
    /// Null ranges, e.g. `209:304`.
    #[arg(long, allow_hyphen_values = true)]
    null: Option<String>,
    /// Comma-separated PAPR levels.
    #[arg(long)]
    papr_levels: Option<String>,
    #[arg(long)]
    penalty: Option<String>,
    #[arg(long)]
    outer_iters: Option<String>,
    #[arg(long)]
    admm_max_iters: Option<String>,
    #[arg(long)]
    admm_tol: Option<String>,
    #[arg(long)]
    bcd_sweeps: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    output_dir: Option<String>,
}

impl SpecArgs {
    fn load(&self) -> Result<ExperimentSpec, CliError> {
        let text = match &self.config {
            Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?,
            None => String::new(),
        };
        let flags = [
            ("n_subcarriers", &self.n_subcarriers),
            ("null", &self.null),
            ("papr_levels", &self.papr_levels),
            ("penalty", &self.penalty),
            ("outer_iters", &self.outer_iters),
            ("admm_max_iters", &self.admm_max_iters),
            ("admm_tol", &self.admm_tol),
            ("bcd_sweeps", &self.bcd_sweeps),
            ("seed", &self.seed),
            ("output_dir", &self.output_dir),
        ];
        let overrides: Vec<(String, String)> = flags
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        Ok(parse_config_with(&text, &overrides)?)
    }
}

fn parse_null_sets(spec: &ExperimentSpec, raw: &[String]) -> Result<Vec<Vec<NullRange>>, CliError> {
    raw.iter()
        .map(|s| {
            let value = if s.trim() == "none" { "" } else { s.as_str() };
            let ranges = parse_null_ranges(value, spec.n_subcarriers)
                .map_err(|m| ConfigError::new(Source::Flag("null_set".into()), m))?;
            ofdm_mismatch_cli::config::mask_for(spec.n_subcarriers, &ranges)
                .map_err(|e| ConfigError::new(Source::Flag("null_set".into()), e.to_string()))?;
            Ok(ranges)
        })
        .collect()
}

fn print_report(report: &SweepReport) {
    for b in &report.baselines {
        println!(
            "baseline  nulls={:<12} peak sidelobe {:>8.2} dB  pslr {:>6.2} dB  isl {:.4e}",
            format_ranges(&b.null_ranges),
            b.metrics.peak_sidelobe_db,
            b.metrics.pslr_db,
            b.metrics.isl
        );
    }
    for c in &report.cells {
        let nulls = format_ranges(&c.cell.null_ranges);
        match &c.outcome {
            CellOutcome::Finished { metrics: m, .. } => println!(
                "rho={:<5} nulls={:<12} peak sidelobe {:>8.2} dB  pslr {:>6.2} dB  isl {:.4e}  papr {:.4}  -> {}",
                c.cell.papr_level,
                nulls,
                m.peak_sidelobe_db,
                m.pslr_db,
                m.isl,
                m.papr,
                c.cell.dir.display()
            ),
            CellOutcome::Failed { message } => {
                println!("rho={:<5} nulls={:<12} FAILED: {message}", c.cell.papr_level, nulls)
            }
        }
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn finish(report: SweepReport) -> Result<(), CliError> {
    print_report(&report);
    match report.failures() {
        0 => Ok(()),
        failed => Err(CliError::RunsFailed {
            failed,
            total: report.cells.len(),
        }),
    }
}

fn profile(artifact: &Path, output: Option<&Path>) -> Result<(), CliError> {
    let saved = SequenceArtifact::read(artifact)?;
    let x = saved.sequence()?;
    let h = saved.filter()?;
    let m = saved.metrics()?;
    let spectral_error = dft(x.as_slice())?
        .iter()
        .zip(saved.symbols())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    println!("isl               {:e}", m.isl);
    println!("pslr_db           {}", m.pslr_db);
    println!("papr              {}", m.papr);
    println!("peak_sidelobe_db  {}", m.peak_sidelobe_db);
    println!("spectral_error    {spectral_error:e}");
    if let Some(path) = output {
        write_text(path, &format_profile(&profile_rows(&x, &h)?))?;
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.load()?;
            finish(run_sweep(&spec, std::slice::from_ref(&spec.null_ranges))?)
        }
        Command::Sweep { spec, null_sets } => {
            let spec = spec.load()?;
            let sets = parse_null_sets(&spec, &null_sets)?;
            finish(run_sweep(&spec, &sets)?)
        }
        Command::Profile { artifact, output } => profile(&artifact, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
