//! Joint design of a spectrally-constrained OFDM transmit sequence and a
//! receive mismatch filter.
//!
//! The design maximizes the peak-to-sidelobe ratio `|x^H h|^2 / ISL(x, h)`
//! of the aperiodic cross-correlation between the time-domain sequence
//! `x = F_I s` and the filter `h`, subject to
//!
//! * unit-modulus symbols on the available subcarriers and zeros on the
//!   nulled ones, and
//! * a per-sample PAPR bound `|x_n|^2 <= rho P`.
//!
//! [`altopt::run`] alternates a scaled-form ADMM over the subcarrier phases
//! ([`admm`]) with a closed-form generalized Rayleigh quotient update of the
//! filter ([`filter`]).
//!
//! All solvers are generic over [`Real`] (`f32` or `f64`); the `*64` and
//! `*32` aliases below fix the scalar.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod admm;
pub mod altopt;
pub mod error;
pub mod filter;
pub mod numerics;
pub mod scalar;
pub mod waveform;

pub use admm::{AdmmConfig, AdmmState, AdmmTracePoint, XSolution};
pub use altopt::{AltOptConfig, OuterTracePoint, RunResult, Termination};
pub use error::{Error, Result};
pub use filter::update_filter;
pub use numerics::{ComplexMatrix, ComplexVector};
pub use scalar::Real;
pub use waveform::{
    CorrelationProfile, FrequencySymbols, MismatchFilter, SpectralMask, TimeSequence,
};

pub use num_complex::Complex;

pub type ComplexVector64 = ComplexVector<f64>;
pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type FrequencySymbols64 = FrequencySymbols<f64>;
pub type TimeSequence64 = TimeSequence<f64>;
pub type MismatchFilter64 = MismatchFilter<f64>;
pub type CorrelationProfile64 = CorrelationProfile<f64>;
pub type AdmmConfig64 = AdmmConfig<f64>;
pub type AdmmState64 = AdmmState<f64>;
pub type AltOptConfig64 = AltOptConfig<f64>;
pub type RunResult64 = RunResult<f64>;

pub type ComplexVector32 = ComplexVector<f32>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type FrequencySymbols32 = FrequencySymbols<f32>;
pub type TimeSequence32 = TimeSequence<f32>;
pub type MismatchFilter32 = MismatchFilter<f32>;
pub type AdmmConfig32 = AdmmConfig<f32>;
pub type AltOptConfig32 = AltOptConfig<f32>;
pub type RunResult32 = RunResult<f32>;
