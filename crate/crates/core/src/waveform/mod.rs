//! OFDM design-problem types and correlation quality metrics.

pub mod mask;
pub mod metrics;
pub mod sequence;

pub use mask::SpectralMask;
pub use metrics::{
    correlate, cross_correlation, filter_gram, isl, papr, papr_of, pslr, pslr_from_profile,
    sidelobe_apply, sidelobe_gram, to_db, CorrelationProfile,
};
pub use sequence::{synthesize, FrequencySymbols, MismatchFilter, TimeSequence};
