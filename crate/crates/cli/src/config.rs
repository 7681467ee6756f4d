//! Line-oriented `key = value` experiment configuration.
//!
//! ```text
//! # 512 subcarriers, 96 nulled
//! n_subcarriers = 512
//! null = 209:304
//! papr_levels = 1.25, 2.0
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use ofdm_mismatch::{AdmmConfig, AltOptConfig, SpectralMask};
use serde::Serialize;

use crate::error::{ConfigError, Source};

pub const KEYS: [&str; 10] = [
    "n_subcarriers",
    "null",
    "papr_levels",
    "penalty",
    "outer_iters",
    "admm_max_iters",
    "admm_tol",
    "bcd_sweeps",
    "seed",
    "output_dir",
];

/// 1-based inclusive subcarrier range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct NullRange {
    pub start: usize,
    pub end: usize,
}

impl NullRange {
    pub fn as_range(&self) -> RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for NullRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

/// Renders ranges as `a:b,c:d`, or `none`.
pub fn format_ranges(ranges: &[NullRange]) -> String {
    if ranges.is_empty() {
        return "none".into();
    }
    ranges
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub n_subcarriers: usize,
    pub null_ranges: Vec<NullRange>,
    pub papr_levels: Vec<f64>,
    pub penalty: f64,
    pub outer_iters: usize,
    pub admm_max_iters: usize,
    pub admm_tol: f64,
    pub bcd_sweeps: usize,
    pub seed: u64,
    #[serde(skip)]
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    pub const DEFAULT_OUTPUT_DIR: &'static str = "out";

    pub fn mask(&self) -> Result<SpectralMask, ofdm_mismatch::Error> {
        mask_for(self.n_subcarriers, &self.null_ranges)
    }

    /// Solver configuration for one PAPR level and null set.
    pub fn altopt_config(
        &self,
        papr_level: f64,
        null_ranges: &[NullRange],
    ) -> Result<AltOptConfig<f64>, ofdm_mismatch::Error> {
        let mut cfg = AltOptConfig::new(mask_for(self.n_subcarriers, null_ranges)?, papr_level);
        cfg.outer_iters = self.outer_iters;
        cfg.seed = self.seed;
        cfg.admm = AdmmConfig {
            rho0: self.penalty,
            max_iters: self.admm_max_iters,
            bcd_sweeps: self.bcd_sweeps,
            primal_tol: self.admm_tol,
            ..cfg.admm
        };
        Ok(cfg)
    }
}

pub fn mask_for(n: usize, ranges: &[NullRange]) -> Result<SpectralMask, ofdm_mismatch::Error> {
    let ranges: Vec<_> = ranges.iter().map(NullRange::as_range).collect();
    SpectralMask::from_null_ranges(n, &ranges)
}

pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    parse_config_with(text, &[])
}

/// Parses `text`, then applies `overrides` (`(key, value)` pairs from the
/// command line) on top of it before validating.
pub fn parse_config_with(
    text: &str,
    overrides: &[(String, String)],
) -> Result<ExperimentSpec, ConfigError> {
    let mut entries: BTreeMap<String, (Source, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ConfigError::new(
                Source::Line(line),
                format!("expected `key = value`, got `{content}`"),
            )
        })?;
        let key = key.trim();
        check_key(key, Source::Line(line))?;
        if let Some((Source::Line(first), _)) = entries.get(key) {
            return Err(ConfigError::new(
                Source::Line(line),
                format!("duplicate key `{key}` (first set on line {first})"),
            ));
        }
        entries.insert(
            key.to_string(),
            (Source::Line(line), value.trim().to_string()),
        );
    }
    for (key, value) in overrides {
        let src = Source::Flag(key.clone());
        check_key(key, src.clone())?;
        entries.insert(key.clone(), (src, value.trim().to_string()));
    }
    build(&entries)
}

fn check_key(key: &str, src: Source) -> Result<(), ConfigError> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(ConfigError::new(src, format!("unknown key `{key}`")))
    }
}

type Entries = BTreeMap<String, (Source, String)>;

fn lookup<'a>(entries: &'a Entries, key: &str) -> Option<(&'a Source, &'a str)> {
    entries.get(key).map(|(s, v)| (s, v.as_str()))
}

fn parse_value<T: std::str::FromStr>(
    entries: &Entries,
    key: &str,
    default: Option<T>,
) -> Result<T, ConfigError> {
    match lookup(entries, key) {
        Some((src, v)) => v
            .parse()
            .map_err(|_| ConfigError::new(src.clone(), format!("`{key}`: cannot parse `{v}`"))),
        None => default.ok_or_else(|| {
            ConfigError::new(Source::Missing, format!("missing required key `{key}`"))
        }),
    }
}

fn require(entries: &Entries, key: &str, ok: bool, what: &str) -> Result<(), ConfigError> {
    if ok {
        return Ok(());
    }
    let src = lookup(entries, key).map_or(Source::Missing, |(s, _)| s.clone());
    Err(ConfigError::new(src, format!("`{key}` {what}")))
}

fn build(entries: &Entries) -> Result<ExperimentSpec, ConfigError> {
    let n: usize = parse_value(entries, "n_subcarriers", None)?;
    require(entries, "n_subcarriers", n >= 2, "must be at least 2")?;

    let null_ranges = match lookup(entries, "null") {
        Some((src, v)) => parse_null_ranges(v, n).map_err(|m| ConfigError::new(src.clone(), m))?,
        None => Vec::new(),
    };
    let nulled: usize = null_ranges.iter().map(NullRange::len).sum();
    require(
        entries,
        "null",
        nulled < n,
        "leaves no available subcarrier",
    )?;

    let papr_levels = match lookup(entries, "papr_levels") {
        Some((src, v)) => parse_levels(v).map_err(|m| ConfigError::new(src.clone(), m))?,
        None => {
            return Err(ConfigError::new(
                Source::Missing,
                "missing required key `papr_levels`",
            ))
        }
    };

    let penalty: f64 = parse_value(entries, "penalty", Some(AdmmConfig::<f64>::DEFAULT_RHO0))?;
    require(
        entries,
        "penalty",
        penalty.is_finite() && penalty > 0.0,
        "must be positive",
    )?;
    let outer_iters: usize = parse_value(
        entries,
        "outer_iters",
        Some(AltOptConfig::<f64>::DEFAULT_OUTER_ITERS),
    )?;
    require(
        entries,
        "outer_iters",
        outer_iters >= 1,
        "must be at least 1",
    )?;
    let admm_max_iters: usize = parse_value(
        entries,
        "admm_max_iters",
        Some(AdmmConfig::<f64>::DEFAULT_MAX_ITERS),
    )?;
    require(
        entries,
        "admm_max_iters",
        admm_max_iters >= 1,
        "must be at least 1",
    )?;
    let admm_tol: f64 = parse_value(
        entries,
        "admm_tol",
        Some(AdmmConfig::<f64>::DEFAULT_PRIMAL_TOL),
    )?;
    require(
        entries,
        "admm_tol",
        admm_tol.is_finite() && admm_tol > 0.0,
        "must be positive",
    )?;
    let bcd_sweeps: usize = parse_value(entries, "bcd_sweeps", Some(1))?;
    require(entries, "bcd_sweeps", bcd_sweeps >= 1, "must be at least 1")?;
    let seed: u64 = parse_value(entries, "seed", Some(0))?;
    let output_dir = lookup(entries, "output_dir").map_or_else(
        || PathBuf::from(ExperimentSpec::DEFAULT_OUTPUT_DIR),
        |(_, v)| PathBuf::from(v),
    );

    Ok(ExperimentSpec {
        n_subcarriers: n,
        null_ranges,
        papr_levels,
        penalty,
        outer_iters,
        admm_max_iters,
        admm_tol,
        bcd_sweeps,
        seed,
        output_dir,
    })
}

/// Parses `a:b, c, d:e` (1-based, inclusive) against `n` subcarriers.
/// An empty value means no nulled subcarriers.
pub fn parse_null_ranges(value: &str, n: usize) -> Result<Vec<NullRange>, String> {
    let mut ranges = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = item.split_once(':').unwrap_or((item, item));
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad subcarrier index `{}` in `{item}`", s.trim()))
        };
        let (start, end) = (parse(a)?, parse(b)?);
        if start == 0 || end > n || start > end {
            return Err(format!("range `{item}` outside 1..={n} or reversed"));
        }
        ranges.push(NullRange { start, end });
    }
    ranges.sort();
    for w in ranges.windows(2) {
        if w[1].start <= w[0].end {
            return Err(format!("null ranges {} and {} overlap", w[0], w[1]));
        }
    }
    Ok(ranges)
}

fn parse_levels(value: &str) -> Result<Vec<f64>, String> {
    let mut levels = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let rho: f64 = item
            .parse()
            .map_err(|_| format!("bad PAPR level `{item}`"))?;
        if !(rho.is_finite() && rho >= 1.0) {
            return Err(format!("PAPR level {item} must be at least 1"));
        }
        levels.push(rho);
    }
    if levels.is_empty() {
        return Err("at least one PAPR level is required".into());
    }
    Ok(levels)
}
