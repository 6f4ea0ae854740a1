//! Privacy-preserving methods and their combinations: spectral smoothing,
//! temporal smoothing, McAdams anonymization and low-frequency audio.

mod config;
mod lpc;
mod mcadams;
mod pipeline;
mod smoothing;

pub use config::{
    McAdamsPolicy, Method, SampleKey, TransformConfig, DEFAULT_LOWFREQ_RATE,
    DEFAULT_MCADAMS_RANGE, DEFAULT_N_MELS, DEFAULT_SMOOTHING_HOP_MS, DEFAULT_TAU_MS,
    FEATURE_HOP_MS, FEATURE_WINDOW_MS,
};
pub use lpc::{analysis_filter, lpc_analyze, synthesize, LpcModel};
pub use mcadams::{
    lpc_envelope_db, mcadams_anonymize, mcadams_anonymize_with_report,
    resolve_mcadams_coefficient, transform_poles, McAdamsReport, ANGLE_GUARD_RAD,
    MCADAMS_LPC_ORDER, MCADAMS_WINDOW_MS, POLE_MAGNITUDE_CLAMP,
};
pub use pipeline::featurize;
pub use smoothing::{subsample_and_repeat, temporal_smooth};

use thiserror::Error;

use crate::audio::AudioError;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error("smoothing time must be positive, got {0} ms")]
    NonPositiveTau(f64),
    #[error("subsampling factor must be at least 1")]
    ZeroFactor,
    #[error("LPC order {order} too small, need at least 2")]
    OrderTooSmall { order: usize },
    #[error("frame of {len} samples too short for LPC order {order}")]
    FrameTooShort { len: usize, order: usize },
    #[error("McAdams coefficient {0} outside (0, 1]")]
    InvalidCoefficient(f64),
    #[error("McAdams range ({lo}, {hi}) not inside (0, 1]")]
    InvalidMcAdamsRange { lo: f64, hi: f64 },
    #[error("tau {tau_ms} ms is not an integer multiple of the {hop_ms} ms hop")]
    TauNotMultipleOfHop { tau_ms: f64, hop_ms: f64 },
    #[error("polynomial root finding failed")]
    RootFindingFailed,
    #[error("invalid transform config: {0}")]
    Invalid(String),
}
