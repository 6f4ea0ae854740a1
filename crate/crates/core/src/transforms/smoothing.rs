//! Temporal smoothing of power spectral densities.

use crate::audio::PsdMatrix;

use super::TransformError;

/// First-order recursive smoothing along time, per frequency bin:
/// y[0] = x[0]; y[n] = a*y[n-1] + (1-a)*x[n] with a = exp(-hop/tau).
pub fn temporal_smooth(psd: &PsdMatrix, tau_ms: f64) -> Result<PsdMatrix, TransformError> {
    if tau_ms <= 0.0 {
        return Err(TransformError::NonPositiveTau(tau_ms));
    }
    let a = (-psd.grid.hop_ms / tau_ms).exp();
    let mut out = psd.clone();
    let Some(first) = psd.frames.first() else {
        return Ok(out);
    };
    let mut state = first.clone();
    for (t, frame) in psd.frames.iter().enumerate().skip(1) {
        for (s, &x) in state.iter_mut().zip(frame) {
            *s = a * *s + (1.0 - a) * x;
        }
        out.frames[t].copy_from_slice(&state);
    }
    Ok(out)
}

/// Keeps every `factor`-th frame and repeats it `factor` times, truncated to
/// the original frame count. The result is piecewise constant in time.
pub fn subsample_and_repeat(psd: &PsdMatrix, factor: usize) -> Result<PsdMatrix, TransformError> {
    if factor == 0 {
        return Err(TransformError::ZeroFactor);
    }
    let mut out = psd.clone();
    for t in 0..out.frames.len() {
        let kept = (t / factor) * factor;
        if kept != t {
            out.frames[t] = psd.frames[kept].clone();
        }
    }
    Ok(out)
}
