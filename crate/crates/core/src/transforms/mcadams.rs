//! Formant-shifting speaker anonymization.
//!
//! Pole angles of a frame-wise all-pole model are raised to the McAdams
//! coefficient, which moves formants while keeping the excitation intact.

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::Rng;

use crate::audio::{AudioBuffer, AudioError, WindowShape};
use crate::seeding;

use super::lpc::{lpc_analyze, synthesize, LpcModel};
use super::{McAdamsPolicy, SampleKey, TransformConfig, TransformError};

/// Analysis window for the anonymization chain.
pub const MCADAMS_WINDOW_MS: f64 = 25.0;
/// Wideband LPC order at 16 kHz.
pub const MCADAMS_LPC_ORDER: usize = 20;
/// Pole angles closer than this to the real axis are left untouched;
/// they carry spectral tilt rather than formants.
pub const ANGLE_GUARD_RAD: f64 = 0.01;
/// Poles at or outside the unit circle are pulled back to this magnitude.
pub const POLE_MAGNITUDE_CLAMP: f64 = 0.999;

/// What happened while anonymizing one utterance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McAdamsReport {
    pub total_frames: usize,
    /// Frames passed through unmodified because root finding failed.
    pub passthrough_frames: usize,
    pub coefficient: f64,
}

/// The coefficient the configured policy yields for this key.
pub fn resolve_mcadams_coefficient(cfg: &TransformConfig, key: SampleKey<'_>) -> f64 {
    let (lo, hi) = cfg.mcadams_range;
    match cfg.mcadams_policy {
        McAdamsPolicy::Fixed(c) => c,
        McAdamsPolicy::PerUtterance => {
            let mut rng = seeding::rng_for(cfg.seed, &["mcadams", "utterance", key.utterance]);
            lo + (hi - lo) * rng.gen::<f64>()
        }
        McAdamsPolicy::PerSpeaker => {
            let mut rng = seeding::rng_for(cfg.seed, &["mcadams", "speaker", key.speaker]);
            lo + (hi - lo) * rng.gen::<f64>()
        }
    }
}

/// Raises pole angles to `coeff`, preserving magnitudes and conjugate
/// symmetry. Real and near-real poles are unchanged; any pole with
/// magnitude >= 1 is clamped to 0.999 first.
pub fn transform_poles(model: &LpcModel, coeff: f64) -> Result<LpcModel, TransformError> {
    if !(coeff > 0.0 && coeff <= 1.0) {
        return Err(TransformError::InvalidCoefficient(coeff));
    }
    let degree = effective_degree(&model.coefficients);
    if degree == 0 {
        return Ok(model.clone());
    }
    let roots = polynomial_roots(&model.coefficients[..=degree])?;

    let mut reals: Vec<f64> = Vec::new();
    let mut uppers: Vec<Complex<f64>> = Vec::new();
    let mut lower_count = 0usize;
    for r in &roots {
        if r.im > 0.0 {
            uppers.push(*r);
        } else if r.im < 0.0 {
            lower_count += 1;
        } else {
            reals.push(r.re);
        }
    }
    if uppers.len() != lower_count {
        return Err(TransformError::RootFindingFailed);
    }

    let clamp = |mag: f64| if mag >= 1.0 { POLE_MAGNITUDE_CLAMP } else { mag };
    let reals: Vec<f64> = reals.iter().map(|&r| r.signum() * clamp(r.abs())).collect();
    let pairs: Vec<Complex<f64>> = uppers
        .iter()
        .map(|r| {
            let mag = clamp(r.norm());
            let angle = r.arg();
            let new_angle = if angle > ANGLE_GUARD_RAD
                && angle < std::f64::consts::PI - ANGLE_GUARD_RAD
            {
                angle.powf(coeff)
            } else {
                angle
            };
            Complex::from_polar(mag, new_angle)
        })
        .collect();

    let mut coefficients = vec![1.0];
    for r in &reals {
        multiply_factor(&mut coefficients, &[-r]);
    }
    for p in &pairs {
        multiply_factor(&mut coefficients, &[-2.0 * p.re, p.norm_sqr()]);
    }
    coefficients.resize(model.coefficients.len(), 0.0);

    Ok(LpcModel {
        order: model.order,
        coefficients,
        residual: model.residual.clone(),
        gain: model.gain,
    })
}

/// Frame-wise anonymization: 25 ms Hann frames at 50% overlap, order-20 LPC,
/// pole transform, residual resynthesis through the modified filter, and
/// window-compensated overlap-add. Output is peak-normalized to the input.
pub fn mcadams_anonymize(
    audio: &AudioBuffer,
    cfg: &TransformConfig,
    key: SampleKey<'_>,
) -> Result<AudioBuffer, TransformError> {
    mcadams_anonymize_with_report(audio, cfg, key).map(|(out, _)| out)
}

pub fn mcadams_anonymize_with_report(
    audio: &AudioBuffer,
    cfg: &TransformConfig,
    key: SampleKey<'_>,
) -> Result<(AudioBuffer, McAdamsReport), TransformError> {
    let coeff = resolve_mcadams_coefficient(cfg, key);
    if !(coeff > 0.0 && coeff <= 1.0) {
        return Err(TransformError::InvalidCoefficient(coeff));
    }
    let fs = audio.sample_rate();
    let w = (MCADAMS_WINDOW_MS * fs as f64 / 1000.0).round() as usize;
    let hop = w / 2;
    let n = audio.len();
    if n < w {
        return Err(TransformError::Audio(AudioError::AudioTooShort { samples: n, window: w }));
    }

    // half-window zero padding on both sides gives every original sample
    // full overlap-add coverage (window sum of one)
    let cover = n + 2 * hop;
    let n_frames = (cover - w + hop - 1) / hop + 1;
    let padded_len = (n_frames - 1) * hop + w;
    let mut padded = vec![0.0; padded_len];
    padded[hop..hop + n].copy_from_slice(audio.samples());

    let window = WindowShape::Hann.weights(w);
    let mut out = vec![0.0; padded_len];
    let mut wsum = vec![0.0; padded_len];
    let mut passthrough = 0usize;

    for f in 0..n_frames {
        let start = f * hop;
        let frame: Vec<f64> =
            padded[start..start + w].iter().zip(&window).map(|(s, w)| s * w).collect();
        let model = lpc_analyze(&frame, MCADAMS_LPC_ORDER)?;
        let synth = match transform_poles(&model, coeff) {
            Ok(modified) => synthesize(&modified.coefficients, &model.residual),
            Err(TransformError::RootFindingFailed) => {
                passthrough += 1;
                frame.clone()
            }
            Err(e) => return Err(e),
        };
        for (i, (&s, &wv)) in synth.iter().zip(&window).enumerate() {
            out[start + i] += s;
            wsum[start + i] += wv;
        }
    }

    for (o, &ws) in out.iter_mut().zip(&wsum) {
        if ws > 1e-8 {
            *o /= ws;
        } else {
            *o = 0.0;
        }
    }
    let mut out: Vec<f64> = out[hop..hop + n].to_vec();

    let in_peak = audio.peak();
    let out_peak = out.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    if out_peak > 0.0 && in_peak > 0.0 {
        let g = in_peak / out_peak;
        for o in &mut out {
            *o *= g;
        }
    }

    let report =
        McAdamsReport { total_frames: n_frames, passthrough_frames: passthrough, coefficient: coeff };
    Ok((AudioBuffer::new(out, fs)?, report))
}

/// Magnitude of 1/A(e^{jw}) in dB on a dense grid up to Nyquist.
pub fn lpc_envelope_db(coefficients: &[f64], n_points: usize, sample_rate: u32) -> Vec<(f64, f64)> {
    (0..n_points)
        .map(|i| {
            let hz = i as f64 * sample_rate as f64 / 2.0 / (n_points - 1).max(1) as f64;
            let omega = 2.0 * std::f64::consts::PI * hz / sample_rate as f64;
            let a: Complex<f64> = coefficients
                .iter()
                .enumerate()
                .map(|(k, &c)| c * Complex::from_polar(1.0, -(k as f64) * omega))
                .sum();
            let mag = 1.0 / a.norm().max(1e-12);
            (hz, 20.0 * mag.log10())
        })
        .collect()
}

fn effective_degree(coefficients: &[f64]) -> usize {
    coefficients.iter().rposition(|&c| c != 0.0).unwrap_or(0)
}

/// Roots of 1 + c1 z^-1 + ... + cp z^-p via companion-matrix eigenvalues.
fn polynomial_roots(coefficients: &[f64]) -> Result<Vec<Complex<f64>>, TransformError> {
    let p = coefficients.len() - 1;
    let companion = DMatrix::from_fn(p, p, |i, j| {
        if i == 0 {
            -coefficients[j + 1]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eigen = companion.complex_eigenvalues();
    let roots: Vec<Complex<f64>> = eigen.iter().copied().collect();
    if roots.iter().any(|r| !r.re.is_finite() || !r.im.is_finite()) {
        return Err(TransformError::RootFindingFailed);
    }
    Ok(roots)
}

/// In-place multiply of a monic polynomial (in z^-1) by a monic factor whose
/// trailing coefficients are given.
fn multiply_factor(poly: &mut Vec<f64>, factor_tail: &[f64]) {
    let mut result = vec![0.0; poly.len() + factor_tail.len()];
    for (i, &a) in poly.iter().enumerate() {
        result[i] += a;
        for (j, &b) in factor_tail.iter().enumerate() {
            result[i + j + 1] += a * b;
        }
    }
    *poly = result;
}
