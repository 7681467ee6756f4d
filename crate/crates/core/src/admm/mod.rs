//! Scaled-form ADMM for the sequence update with the filter held fixed.
//!
//! The splitting `y = x` moves the PAPR constraint onto `y` and leaves the
//! spectral constraint on `x`. One iteration is:
//!
//! 1. x-update: coordinate descent over the free subcarrier phases,
//! 2. y-update: closed-form unconstrained minimizer, then per-sample projection,
//! 3. u-update: `u += x - y`.

mod bcd;
mod ystep;

pub use bcd::{bcd_coefficient, bcd_update_symbol, x_update, SidelobeCache};
pub use ystep::{
    reduced_gradient, reduced_objective, solve_reduced, y_unconstrained, y_unconstrained_detailed,
    y_update, ReducedCase, UnconstrainedY,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::vector::max_abs_diff;
use crate::numerics::ComplexVector;
use crate::scalar::{is_finite_complex, Real};
use crate::waveform::{isl, synthesize, FrequencySymbols, MismatchFilter, TimeSequence};

#[derive(Debug, Clone, PartialEq)]
pub struct AdmmConfig<T> {
    /// Penalty `rho0`.
    pub rho0: T,
    pub max_iters: usize,
    /// Coordinate-descent passes per x-update.
    pub bcd_sweeps: usize,
    /// Stop once `||x - y||_inf` falls to this value.
    pub primal_tol: T,
    /// PAPR level `rho`; every sample obeys `|y_n|^2 <= rho P`.
    pub papr_level: T,
    /// Average power `P` of the designed sequence.
    pub avg_power: T,
}

impl<T: Real> AdmmConfig<T> {
    pub const DEFAULT_RHO0: f64 = 10.0;
    pub const DEFAULT_MAX_ITERS: usize = 100;
    pub const DEFAULT_PRIMAL_TOL: f64 = 1e-4;

    pub fn new(papr_level: T, avg_power: T) -> Self {
        Self {
            rho0: T::lit(Self::DEFAULT_RHO0),
            max_iters: Self::DEFAULT_MAX_ITERS,
            bcd_sweeps: 1,
            primal_tol: T::lit(Self::DEFAULT_PRIMAL_TOL),
            papr_level,
            avg_power,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.rho0 > T::zero()) || !self.rho0.is_finite() {
            return bad("penalty rho0 must be positive");
        }
        if self.max_iters == 0 {
            return bad("ADMM max_iters must be at least 1");
        }
        if self.bcd_sweeps == 0 {
            return bad("bcd_sweeps must be at least 1");
        }
        if !(self.primal_tol > T::zero()) {
            return bad("primal tolerance must be positive");
        }
        if !(self.papr_level >= T::one()) || !self.papr_level.is_finite() {
            return bad("PAPR level must be at least 1");
        }
        if !(self.avg_power > T::zero()) || !self.avg_power.is_finite() {
            return bad("average power must be positive");
        }
        Ok(())
    }
}

/// Iterate of the x-subproblem ADMM.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmmState<T> {
    pub symbols: FrequencySymbols<T>,
    /// Always `synthesize(&symbols)`.
    pub x: TimeSequence<T>,
    pub y: ComplexVector<T>,
    /// Scaled dual variable.
    pub u: ComplexVector<T>,
    pub rho0: T,
    pub iteration: usize,
}

impl<T: Real> AdmmState<T> {
    /// `y = x`, `u = 0`.
    pub fn new(symbols: FrequencySymbols<T>, rho0: T) -> Self {
        let x = synthesize(&symbols);
        let y = x.samples().clone();
        let u = ComplexVector::zeros(x.len());
        Self {
            symbols,
            x,
            y,
            u,
            rho0,
            iteration: 0,
        }
    }

    /// `||x - y||_inf`.
    pub fn primal_residual(&self) -> T {
        max_abs_diff(self.x.as_slice(), &self.y)
    }
}

/// Scaled augmented Lagrangian
/// `ISL(x, h) / |y^H h|^2 + (rho0 / 2) ||x - y + u||^2`.
pub fn augmented_lagrangian<T: Real>(state: &AdmmState<T>, h: &MismatchFilter<T>) -> Result<T> {
    let denom = bcd::filter_gain(h, &state.y)?;
    let ratio = isl(&state.x, h)? / denom;
    let penalty: T = state
        .x
        .as_slice()
        .iter()
        .zip(state.y.iter().zip(state.u.iter()))
        .map(|(x, (y, u))| (x - y + u).norm_sqr())
        .sum();
    Ok(ratio + state.rho0 / T::lit(2.0) * penalty)
}

/// `u + x - y`.
pub fn u_update<T: Real>(state: &AdmmState<T>) -> ComplexVector<T> {
    let u: Vec<Complex<T>> = state
        .u
        .iter()
        .zip(state.x.as_slice().iter().zip(state.y.iter()))
        .map(|(u, (x, y))| u + x - y)
        .collect();
    ComplexVector::from_vec_unchecked(u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmmTracePoint<T> {
    pub iteration: usize,
    /// Augmented Lagrangian at the end of the iteration.
    pub lagrangian: T,
    pub primal_residual: T,
}

#[derive(Debug, Clone)]
pub struct XSolution<T> {
    /// Final iterate; `symbols` and `x` are the sequence estimate.
    pub state: AdmmState<T>,
    pub trace: Vec<AdmmTracePoint<T>>,
    pub converged: bool,
}

impl<T: Real> XSolution<T> {
    pub fn symbols(&self) -> &FrequencySymbols<T> {
        &self.state.symbols
    }

    pub fn sequence(&self) -> &TimeSequence<T> {
        &self.state.x
    }
}

fn ensure_finite<T: Real>(
    values: &[Complex<T>],
    stage: &'static str,
    iteration: usize,
) -> Result<()> {
    if values.iter().all(is_finite_complex) {
        Ok(())
    } else {
        Err(Error::NonFinite { stage, iteration })
    }
}

/// Runs ADMM iterations until `||x - y||_inf <= primal_tol` or `max_iters`.
pub fn solve_x_subproblem<T: Real>(
    init: AdmmState<T>,
    h: &MismatchFilter<T>,
    cfg: &AdmmConfig<T>,
) -> Result<XSolution<T>> {
    cfg.validate()?;
    let mut state = init;
    state.rho0 = cfg.rho0;
    if h.len() != state.x.len() {
        return Err(Error::LengthMismatch {
            expected: state.x.len(),
            found: h.len(),
        });
    }
    let cache = SidelobeCache::new(h)?;
    let mut trace = Vec::new();
    let mut converged = false;

    for k in 1..=cfg.max_iters {
        bcd::x_update_cached(&mut state, h, &cache, cfg.bcd_sweeps)?;
        ensure_finite(state.x.as_slice(), "x", k)?;

        let sidelobe_energy = isl(&state.x, h)?;
        let unc =
            y_unconstrained_detailed(state.x.as_slice(), &state.u, h, state.rho0, sidelobe_energy)?;
        ensure_finite(&unc.y, "y", k)?;
        state.y = y_update(&unc.y, cfg.papr_level, cfg.avg_power);

        state.u = u_update(&state);
        ensure_finite(&state.u, "u", k)?;
        state.iteration += 1;

        let primal_residual = state.primal_residual();
        let lagrangian = augmented_lagrangian(&state, h).map_err(|e| match e {
            Error::ZeroDenominator => Error::NonFinite {
                stage: "y",
                iteration: k,
            },
            other => other,
        })?;
        trace.push(AdmmTracePoint {
            iteration: k,
            lagrangian,
            primal_residual,
        });
        if primal_residual <= cfg.primal_tol {
            converged = true;
            break;
        }
    }
    Ok(XSolution {
        state,
        trace,
        converged,
    })
}
