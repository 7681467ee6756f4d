//! Outer alternation between the sequence (ADMM) and the mismatch filter.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::admm::{solve_x_subproblem, AdmmConfig, AdmmState, AdmmTracePoint};
use crate::error::{Error, Result};
use crate::filter::update_filter;
use crate::numerics::ComplexVector;
use crate::scalar::Real;
use crate::waveform::{
    isl, papr, pslr, FrequencySymbols, MismatchFilter, SpectralMask, TimeSequence,
};

/// Window length for the optional relative-change early exit.
pub const EARLY_EXIT_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct AltOptConfig<T> {
    pub mask: SpectralMask,
    /// PAPR level `rho`; overrides `admm.papr_level`.
    pub papr_level: T,
    /// Average power `P`; overrides `admm.avg_power`.
    pub avg_power: T,
    pub outer_iters: usize,
    pub admm: AdmmConfig<T>,
    pub seed: u64,
    /// Stop when the PSLR spread over the last `EARLY_EXIT_WINDOW` outer
    /// iterations falls below this fraction of the latest value. Off by default.
    pub early_exit_tol: Option<T>,
    pub record_inner: bool,
}

impl<T: Real> AltOptConfig<T> {
    pub const DEFAULT_OUTER_ITERS: usize = 2000;

    /// Defaults: `P = |available| / N^2` (the power of every spectrally
    /// feasible sequence), `M = 2000`, `rho0 = 10`, seed 0.
    pub fn new(mask: SpectralMask, papr_level: T) -> Self {
        let avg_power = feasible_avg_power(&mask);
        Self {
            admm: AdmmConfig::new(papr_level, avg_power),
            mask,
            papr_level,
            avg_power,
            outer_iters: Self::DEFAULT_OUTER_ITERS,
            seed: 0,
            early_exit_tol: None,
            record_inner: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.outer_iters == 0 {
            return Err(Error::InvalidConfig(
                "outer_iters must be at least 1".into(),
            ));
        }
        if self.mask.n_subcarriers() < 2 {
            return Err(Error::InvalidConfig("need at least 2 subcarriers".into()));
        }
        self.inner_config().validate()
    }

    fn inner_config(&self) -> AdmmConfig<T> {
        AdmmConfig {
            papr_level: self.papr_level,
            avg_power: self.avg_power,
            ..self.admm.clone()
        }
    }
}

/// `||x||^2 / N` for any `x = F_I s` obeying the mask: `|available| / N^2`.
pub fn feasible_avg_power<T: Real>(mask: &SpectralMask) -> T {
    let n = T::from_usize(mask.n_subcarriers()).unwrap();
    T::from_usize(mask.num_available()).unwrap() / (n * n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterTracePoint<T> {
    /// 0 for the initialization.
    pub iteration: usize,
    /// PSLR of the new sequence against the new filter (linear).
    pub pslr: T,
    /// PSLR of the new sequence against the previous filter.
    pub pslr_before_filter: T,
    pub isl: T,
    pub papr: T,
    pub primal_residual: T,
    pub inner_iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxIterations,
    EarlyExit { iteration: usize },
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub symbols: FrequencySymbols<T>,
    pub x: TimeSequence<T>,
    /// Final PAPR-feasible auxiliary sequence.
    pub y: ComplexVector<T>,
    pub h: MismatchFilter<T>,
    /// Metrics of the random-phase start with its matched filter.
    pub initial: OuterTracePoint<T>,
    pub outer_trace: Vec<OuterTracePoint<T>>,
    pub inner_traces: Option<Vec<Vec<AdmmTracePoint<T>>>>,
    pub termination: Termination,
}

/// Seeded random-phase symbols, `y = x`, `u = 0` and the matched filter.
pub fn initialize<T: Real>(cfg: &AltOptConfig<T>) -> Result<(AdmmState<T>, MismatchFilter<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let symbols = FrequencySymbols::random_phase(cfg.mask.clone(), &mut rng);
    let state = AdmmState::new(symbols, cfg.admm.rho0);
    let h = MismatchFilter::matched(&state.x)?;
    Ok((state, h))
}

pub fn run<T: Real>(cfg: &AltOptConfig<T>) -> Result<RunResult<T>> {
    cfg.validate()?;
    let inner_cfg = cfg.inner_config();
    let (mut state, mut h) = initialize(cfg)?;
    let at = |iteration: usize| {
        move |e: Error| Error::Outer {
            iteration,
            source: Box::new(e),
        }
    };

    let initial_pslr = pslr(&state.x, &h).map_err(at(0))?;
    let initial = OuterTracePoint {
        iteration: 0,
        pslr: initial_pslr,
        pslr_before_filter: initial_pslr,
        isl: isl(&state.x, &h).map_err(at(0))?,
        papr: papr(&state.x).map_err(at(0))?,
        primal_residual: T::zero(),
        inner_iterations: 0,
    };

    let mut outer_trace = Vec::with_capacity(cfg.outer_iters);
    let mut inner_traces = cfg.record_inner.then(Vec::new);
    let mut termination = Termination::MaxIterations;

    for m in 1..=cfg.outer_iters {
        let solution = solve_x_subproblem(state, &h, &inner_cfg).map_err(at(m))?;
        state = solution.state;

        let pslr_before_filter = pslr(&state.x, &h).map_err(at(m))?;
        h = update_filter(&state.x, T::zero()).map_err(at(m))?;
        outer_trace.push(OuterTracePoint {
            iteration: m,
            pslr: pslr(&state.x, &h).map_err(at(m))?,
            pslr_before_filter,
            isl: isl(&state.x, &h).map_err(at(m))?,
            papr: papr(&state.x).map_err(at(m))?,
            primal_residual: state.primal_residual(),
            inner_iterations: solution.trace.len(),
        });
        if let Some(traces) = inner_traces.as_mut() {
            traces.push(solution.trace);
        }

        if let Some(tol) = cfg.early_exit_tol {
            if outer_trace.len() >= EARLY_EXIT_WINDOW {
                let window = &outer_trace[outer_trace.len() - EARLY_EXIT_WINDOW..];
                let hi = window
                    .iter()
                    .map(|p| p.pslr)
                    .fold(T::neg_infinity(), T::max);
                let lo = window.iter().map(|p| p.pslr).fold(T::infinity(), T::min);
                if hi - lo < tol * window[EARLY_EXIT_WINDOW - 1].pslr.abs() {
                    termination = Termination::EarlyExit { iteration: m };
                    break;
                }
            }
        }
    }

    Ok(RunResult {
        symbols: state.symbols,
        x: state.x,
        y: state.y,
        h,
        initial,
        outer_trace,
        inner_traces,
        termination,
    })
}

/// The random-phase sequence and matched filter a run with `cfg` starts from.
pub fn random_phase_baseline<T: Real>(
    cfg: &AltOptConfig<T>,
) -> Result<(TimeSequence<T>, MismatchFilter<T>)> {
    let (state, h) = initialize(cfg)?;
    Ok((state.x, h))
}
