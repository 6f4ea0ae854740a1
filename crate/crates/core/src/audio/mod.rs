//! Audio buffers, framing, spectral analysis and log Mel features.
//!
//! Everything downstream (privacy transforms, augmentation, evaluators)
//! consumes and produces the types defined here.

mod features;
mod framing;
mod mel;
mod resample;
mod spectrum;
mod wav;

pub use features::FeatureMatrix;
pub use framing::{frame_signal, FrameGrid, WindowShape, WindowedFrames};
pub use mel::{build_mel_filterbank, hz_to_mel, mel_to_hz, MelFilterbank};
pub use resample::decimate;
pub use spectrum::{fft_convolve, power_spectrum, PsdMatrix};
pub use wav::{load_audio, save_wav_16bit};

use thiserror::Error;

/// Linear power floor applied before taking logs, keeps digital silence finite.
pub const LOG_FLOOR: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("WAV error: {0}")]
    Wav(#[from] hound::Error),
    #[error("unsupported WAV encoding: {bits} bit {format}")]
    UnsupportedEncoding { bits: u16, format: &'static str },
    #[error("audio is empty")]
    EmptyAudio,
    #[error("audio contains non-finite samples")]
    NonFiniteSamples,
    #[error("sample rate must be positive")]
    InvalidSampleRate,
    #[error("invalid frame grid: window {window_ms} ms, hop {hop_ms} ms")]
    InvalidGrid { window_ms: f64, hop_ms: f64 },
    #[error("audio too short: {samples} samples, window needs {window}")]
    AudioTooShort { samples: usize, window: usize },
    #[error("fft size {fft_size} smaller than frame length {frame_len}")]
    FftTooSmall { fft_size: usize, frame_len: usize },
    #[error("fft size {0} is not a power of two")]
    FftNotPowerOfTwo(usize),
    #[error("invalid mel range: f_min {f_min} Hz, f_max {f_max} Hz, nyquist {nyquist} Hz")]
    InvalidMelRange { f_min: f64, f_max: f64, nyquist: f64 },
    #[error("mel filter {index} has no positive weight; too many filters for the bin resolution")]
    EmptyMelFilter { index: usize },
    #[error("bin count mismatch: filterbank has {filterbank}, psd has {psd}")]
    BinCountMismatch { filterbank: usize, psd: usize },
    #[error("target rate {target_hz} Hz must be below source rate {source_hz} Hz")]
    TargetRateNotBelowSource { source_hz: u32, target_hz: u32 },
    #[error("malformed feature file: {0}")]
    FeatureFormat(String),
}

/// Mono PCM audio: samples nominally in [-1, 1] at a fixed rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    samples: Vec<f64>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self, AudioError> {
        if sample_rate == 0 {
            return Err(AudioError::InvalidSampleRate);
        }
        if samples.is_empty() {
            return Err(AudioError::EmptyAudio);
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(AudioError::NonFiniteSamples);
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }

    /// Largest absolute sample value.
    pub fn peak(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    /// Mean-square power over the whole buffer.
    pub fn power(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }
}
