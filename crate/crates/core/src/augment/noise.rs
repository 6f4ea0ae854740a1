//! Point-source noise mixed at an exact signal-to-noise ratio.

use std::path::PathBuf;

use rand::Rng;

use crate::audio::{load_audio, AudioBuffer};
use crate::seeding;

use super::AugmentError;

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSource {
    File(PathBuf),
    White,
    Pink,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpec {
    pub source: NoiseSource,
    pub snr_db: f64,
    pub seed: u64,
}

/// How the mix was realized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixReport {
    /// Gain applied to the noise to hit the requested SNR.
    pub noise_gain: f64,
    /// Joint rescale applied when the mix would have clipped, 1.0 otherwise.
    pub rescale: f64,
}

/// Adds the configured noise to `speech` so that
/// 10*log10(P_speech / P_noise) equals `snr_db`, with P the mean-square
/// power over the full utterance. A clipping mix is rescaled jointly,
/// preserving the SNR; the gain is reported.
pub fn mix_noise(speech: &AudioBuffer, spec: &NoiseSpec) -> Result<AudioBuffer, AugmentError> {
    mix_noise_with_report(speech, spec).map(|(audio, _)| audio)
}

pub fn mix_noise_with_report(
    speech: &AudioBuffer,
    spec: &NoiseSpec,
) -> Result<(AudioBuffer, MixReport), AugmentError> {
    if !spec.snr_db.is_finite() {
        return Err(AugmentError::NonFiniteSnr);
    }
    let p_speech = speech.power();
    if p_speech == 0.0 {
        return Err(AugmentError::SilentSpeech);
    }

    let n = speech.len();
    let mut rng = seeding::rng_for(spec.seed, &["mix-noise"]);
    let noise: Vec<f64> = match &spec.source {
        NoiseSource::White => {
            let mut g = seeding::rng_for(spec.seed, &["white-noise"]);
            (0..n).map(|_| g.sample::<f64, _>(rand_distr::StandardNormal)).collect()
        }
        NoiseSource::Pink => pink_noise(n, spec.seed),
        NoiseSource::File(path) => {
            let loaded = load_audio(path)?;
            let loaded = resample_to(&loaded, speech.sample_rate())?;
            fit_to_length(loaded.samples(), n, &mut rng)
        }
    };

    let p_noise = noise.iter().map(|s| s * s).sum::<f64>() / n as f64;
    if p_noise == 0.0 {
        return Err(AugmentError::SilentNoise);
    }

    let target_noise_power = p_speech / 10f64.powf(spec.snr_db / 10.0);
    let gain = (target_noise_power / p_noise).sqrt();

    let mut mixed: Vec<f64> =
        speech.samples().iter().zip(&noise).map(|(s, v)| s + gain * v).collect();
    let peak = mixed.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let rescale = if peak > 1.0 { 1.0 / peak } else { 1.0 };
    if rescale != 1.0 {
        for s in &mut mixed {
            *s *= rescale;
        }
    }

    Ok((
        AudioBuffer::new(mixed, speech.sample_rate())?,
        MixReport { noise_gain: gain, rescale },
    ))
}

/// Loops or crops noise to the requested length, with a seeded random offset.
fn fit_to_length(noise: &[f64], len: usize, rng: &mut impl Rng) -> Vec<f64> {
    let offset = rng.gen_range(0..noise.len());
    (0..len).map(|i| noise[(offset + i) % noise.len()]).collect()
}

/// 1/f noise via the Kellet three-state filter bank over seeded white noise.
fn pink_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut g = seeding::rng_for(seed, &["pink-noise"]);
    let (mut b0, mut b1, mut b2) = (0.0f64, 0.0f64, 0.0f64);
    (0..n)
        .map(|_| {
            let white: f64 = g.sample(rand_distr::StandardNormal);
            b0 = 0.99765 * b0 + white * 0.0990460;
            b1 = 0.96300 * b1 + white * 0.2965164;
            b2 = 0.57000 * b2 + white * 1.0526913;
            b0 + b1 + b2 + white * 0.1848
        })
        .collect()
}

/// Rate adaptation for file-based noise: decimation downward, linear
/// interpolation upward.
fn resample_to(buffer: &AudioBuffer, rate: u32) -> Result<AudioBuffer, AugmentError> {
    use std::cmp::Ordering;
    match buffer.sample_rate().cmp(&rate) {
        Ordering::Equal => Ok(buffer.clone()),
        Ordering::Greater => Ok(crate::audio::decimate(buffer, rate)?),
        Ordering::Less => {
            let ratio = buffer.sample_rate() as f64 / rate as f64;
            let n_out = ((buffer.len() - 1) as f64 / ratio).floor() as usize + 1;
            let x = buffer.samples();
            let out: Vec<f64> = (0..n_out)
                .map(|m| {
                    let pos = m as f64 * ratio;
                    let i = pos.floor() as usize;
                    let frac = pos - i as f64;
                    if i + 1 < x.len() {
                        x[i] * (1.0 - frac) + x[i + 1] * frac
                    } else {
                        x[i]
                    }
                })
                .collect();
            Ok(AudioBuffer::new(out, rate)?)
        }
    }
}
