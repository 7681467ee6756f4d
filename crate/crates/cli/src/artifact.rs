//! On-disk formats: `trace.csv`, `correlation.csv`, `sequence.json`, `meta.json`.

use std::fs;
use std::path::Path;

use ofdm_mismatch::waveform::{cross_correlation, isl, papr, pslr, to_db};
use ofdm_mismatch::{
    Complex, ComplexVector, MismatchFilter, OuterTracePoint, RunResult64, TimeSequence,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// dB value written for an exactly zero correlation lag.
pub const DB_FLOOR_SENTINEL: f64 = -999.0;

pub const TRACE_HEADER: &str = "iter,pslr_db,isl,papr,primal_residual";
pub const CORRELATION_HEADER: &str = "lag,value_db";

type Pair = [f64; 2];

fn pairs(v: &[Complex<f64>]) -> Vec<Pair> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complex(v: &[Pair]) -> Vec<Complex<f64>> {
    v.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

/// Echo of the settings that produced an artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfigEcho {
    pub n_subcarriers: usize,
    pub null_ranges: Vec<[usize; 2]>,
    pub papr_level: Option<f64>,
    pub avg_power: f64,
    pub penalty: f64,
    pub outer_iters: usize,
    pub admm_max_iters: usize,
    pub admm_tol: f64,
    pub bcd_sweeps: usize,
    pub seed: u64,
}

/// Symbols, sequence, auxiliary sequence and filter as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceArtifact {
    pub config: RunConfigEcho,
    pub s: Vec<Pair>,
    pub x: Vec<Pair>,
    pub y: Vec<Pair>,
    pub h: Vec<Pair>,
}

impl SequenceArtifact {
    pub fn new(
        config: RunConfigEcho,
        s: &[Complex<f64>],
        x: &[Complex<f64>],
        y: &[Complex<f64>],
        h: &[Complex<f64>],
    ) -> Self {
        Self {
            config,
            s: pairs(s),
            x: pairs(x),
            y: pairs(y),
            h: pairs(h),
        }
    }

    pub fn sequence(&self) -> Result<TimeSequence<f64>, ofdm_mismatch::Error> {
        TimeSequence::new(ComplexVector::new(complex(&self.x))?)
    }

    pub fn filter(&self) -> Result<MismatchFilter<f64>, ofdm_mismatch::Error> {
        MismatchFilter::new(ComplexVector::new(complex(&self.h))?)
    }

    pub fn symbols(&self) -> Vec<Complex<f64>> {
        complex(&self.s)
    }

    pub fn metrics(&self) -> Result<PairMetrics, ofdm_mismatch::Error> {
        PairMetrics::of(&self.sequence()?, &self.filter()?)
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Artifact {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        write_json(path, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairMetrics {
    pub isl: f64,
    pub pslr_db: f64,
    pub papr: f64,
    /// Largest sidelobe relative to the peak, in dB.
    pub peak_sidelobe_db: f64,
}

impl PairMetrics {
    pub fn of(
        x: &TimeSequence<f64>,
        h: &MismatchFilter<f64>,
    ) -> Result<Self, ofdm_mismatch::Error> {
        let rows = profile_rows(x, h)?;
        Ok(Self {
            isl: isl(x, h)?,
            pslr_db: to_db(pslr(x, h)?),
            papr: papr(x)?,
            peak_sidelobe_db: peak_sidelobe_db(&rows),
        })
    }
}

/// `(lag, 20 log10(|r_k| / |r_0|))` for every lag; exact zeros map to the sentinel.
pub fn profile_rows(
    x: &TimeSequence<f64>,
    h: &MismatchFilter<f64>,
) -> Result<Vec<(isize, f64)>, ofdm_mismatch::Error> {
    let profile = cross_correlation(x, h)?;
    let peak = profile.peak().norm();
    if peak <= 0.0 || peak.is_nan() {
        return Err(ofdm_mismatch::Error::ZeroDenominator);
    }
    Ok(profile
        .iter()
        .map(|(k, r)| {
            let mag = r.norm();
            let db = if mag == 0.0 {
                DB_FLOOR_SENTINEL
            } else {
                20.0 * (mag / peak).log10()
            };
            (k, db)
        })
        .collect())
}

pub fn peak_sidelobe_db(rows: &[(isize, f64)]) -> f64 {
    rows.iter()
        .filter(|(k, _)| *k != 0)
        .map(|&(_, db)| db)
        .fold(DB_FLOOR_SENTINEL, f64::max)
}

/// Float cell in the shortest round-trip form, so the sentinel reads `-999.0`.
pub fn float_cell(v: f64) -> String {
    format!("{v:?}")
}

/// Renders a header and rows as CSV text.
pub fn csv_table<I>(header: &str, rows: I) -> String
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header.split(','))
        .expect("in-memory write");
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

pub fn format_profile(rows: &[(isize, f64)]) -> String {
    csv_table(
        CORRELATION_HEADER,
        rows.iter()
            .map(|&(k, db)| vec![k.to_string(), float_cell(db)]),
    )
}

/// Parses a `correlation.csv` body back into rows.
pub fn parse_profile(text: &str) -> Result<Vec<(isize, f64)>, String> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| e.to_string())?;
    if header.iter().collect::<Vec<_>>().join(",") != CORRELATION_HEADER {
        return Err("missing correlation header".into());
    }
    reader
        .deserialize()
        .map(|row| row.map_err(|e| e.to_string()))
        .collect()
}

/// Writes the correlation profile of a finished run's `(x, h)` pair.
pub fn emit_profile(result: &RunResult64, path: &Path) -> Result<(), CliError> {
    let rows = profile_rows(&result.x, &result.h)?;
    write_text(path, &format_profile(&rows))
}

fn trace_row(p: &OuterTracePoint<f64>) -> Vec<String> {
    vec![
        p.iteration.to_string(),
        float_cell(to_db(p.pslr)),
        float_cell(p.isl),
        float_cell(p.papr),
        float_cell(p.primal_residual),
    ]
}

/// Iteration 0 (the random-phase start) followed by every outer iteration.
pub fn format_trace(result: &RunResult64) -> String {
    csv_table(
        TRACE_HEADER,
        std::iter::once(&result.initial)
            .chain(&result.outer_trace)
            .map(trace_row),
    )
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}
