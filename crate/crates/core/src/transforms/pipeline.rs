//! Feature extraction under a privacy-preserving configuration.

use crate::audio::{
    build_mel_filterbank, decimate, frame_signal, power_spectrum, AudioBuffer, AudioError,
    FeatureMatrix, FrameGrid, WindowShape, LOG_FLOOR,
};

use super::config::{FEATURE_HOP_MS, FEATURE_WINDOW_MS};
use super::mcadams::mcadams_anonymize;
use super::smoothing::{subsample_and_repeat, temporal_smooth};
use super::{Method, SampleKey, TransformConfig, TransformError};

const MAX_FFT_SIZE: usize = 8192;

/// Runs the full composition pipeline:
/// 1. McAdams anonymization (waveform domain), when configured;
/// 2. decimation to the low-frequency rate, when configured;
/// 3. framing on the 25/10 ms grid, or 25/12.5 ms when temporal smoothing
///    is active;
/// 4. power spectrum;
/// 5. temporal smoothing plus subsample-and-repeat, when configured;
/// 6. Mel filterbank with the configured size over [0, current Nyquist];
/// 7. log with floor. Provenance is recorded on the output.
pub fn featurize(
    audio: &AudioBuffer,
    cfg: &TransformConfig,
    key: SampleKey<'_>,
) -> Result<FeatureMatrix, TransformError> {
    cfg.validate()?;

    let mut current: AudioBuffer = audio.clone();
    if cfg.has(Method::McAdams) {
        current = mcadams_anonymize(&current, cfg, key)?;
    }
    if cfg.has(Method::LowFreq) {
        current = decimate(&current, cfg.lowfreq_rate)?;
    }

    let smoothing = cfg.has(Method::TemporalSmooth);
    let hop_ms = if smoothing { cfg.smoothing_hop_ms } else { FEATURE_HOP_MS };
    let grid = FrameGrid::new(FEATURE_WINDOW_MS, hop_ms, WindowShape::Hann)?;
    let frames = frame_signal(&current, &grid)?;

    let fs = current.sample_rate();
    let window_len = grid.window_samples(fs);
    let (psd, filterbank) = {
        // zero-pad the FFT until every Mel triangle covers a bin; low target
        // rates need finer bin spacing than the window length provides
        let mut fft_size = window_len.next_power_of_two();
        loop {
            let psd = power_spectrum(&frames, fft_size)?;
            match build_mel_filterbank(cfg.n_mels, fs, fft_size, 0.0, fs as f64 / 2.0) {
                Ok(fb) => break (psd, fb),
                Err(AudioError::EmptyMelFilter { .. }) if fft_size < MAX_FFT_SIZE => {
                    fft_size *= 2;
                }
                Err(e) => return Err(e.into()),
            }
        }
    };

    let psd = if smoothing {
        let smoothed = temporal_smooth(&psd, cfg.tau_ms)?;
        subsample_and_repeat(&smoothed, cfg.subsample_factor())?
    } else {
        psd
    };

    let mut features = FeatureMatrix::from_psd(&psd, &filterbank, LOG_FLOOR)?;
    features.provenance = Some(cfg.clone());
    Ok(features)
}
