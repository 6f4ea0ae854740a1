//! Environmental degradation: additive noise at controlled SNR and
//! reverberation at controlled RT60.

mod noise;
mod rir;

pub use noise::{mix_noise, mix_noise_with_report, MixReport, NoiseSource, NoiseSpec};
pub use rir::{convolve_rir, measure_rt60, synthesize_rir, RirSource, RirSpec};

use thiserror::Error;

use crate::audio::AudioError;

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error(transparent)]
    Audio(#[from] AudioError),
    #[error("speech is digitally silent, SNR undefined")]
    SilentSpeech,
    #[error("noise source is digitally silent")]
    SilentNoise,
    #[error("SNR must be finite")]
    NonFiniteSnr,
    #[error("sample rate mismatch: speech {speech_hz} Hz vs impulse response {rir_hz} Hz")]
    RateMismatch { speech_hz: u32, rir_hz: u32 },
    #[error("invalid RIR spec: rt60 {rt60_s} s, duration {duration_s} s")]
    InvalidRirSpec { rt60_s: f64, duration_s: f64 },
    #[error("impulse response decay never reaches the -5 to -25 dB fit range")]
    DecayRangeNotReached,
}
