//! Sample-rate reduction with FIR anti-aliasing.

use super::{fft_convolve, AudioBuffer, AudioError};

/// Resamples to a lower rate. Anti-alias FIR (Kaiser-windowed sinc, stopband
/// starting at 0.5 * target_rate with > 60 dB attenuation) runs at the source
/// rate; the heavily oversampled output is then interpolated at the exact
/// ratio, which need not be an integer.
pub fn decimate(audio: &AudioBuffer, target_rate: u32) -> Result<AudioBuffer, AudioError> {
    if target_rate == 0 {
        return Err(AudioError::InvalidSampleRate);
    }
    if target_rate >= audio.sample_rate() {
        return Err(AudioError::TargetRateNotBelowSource {
            source_hz: audio.sample_rate(),
            target_hz: target_rate,
        });
    }
    let fs = audio.sample_rate() as f64;
    let target = target_rate as f64;

    // passband to 0.4*target, stopband from 0.5*target, 70 dB design margin
    let pass_edge = 0.4 * target;
    let stop_edge = 0.5 * target;
    let cutoff = 0.5 * (pass_edge + stop_edge);
    let atten_db = 70.0;
    let taps = kaiser_tap_count(atten_db, (stop_edge - pass_edge) / fs);
    let fir = kaiser_lowpass(taps, cutoff / fs, atten_db);

    let filtered = filter_reflect_padded(audio.samples(), &fir);

    // linear interpolation is accurate here: post-filter content sits far
    // below the source Nyquist (target/2 vs fs/2), droop < 0.05 dB
    let n = filtered.len();
    let ratio = fs / target;
    let n_out = ((n - 1) as f64 / ratio).floor() as usize + 1;
    let mut out = Vec::with_capacity(n_out);
    for m in 0..n_out {
        let pos = m as f64 * ratio;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        let v = if i + 1 < n {
            filtered[i] * (1.0 - frac) + filtered[i + 1] * frac
        } else {
            filtered[i]
        };
        out.push(v);
    }
    AudioBuffer::new(out, target_rate)
}

/// Zero-phase FIR application: reflect-pad both ends by half the filter
/// length, convolve, and slice out the delay-compensated center.
fn filter_reflect_padded(x: &[f64], fir: &[f64]) -> Vec<f64> {
    let m = fir.len() / 2;
    let n = x.len();
    let mirror = |i: isize| -> f64 {
        let idx = if i < 0 {
            (-i) as usize
        } else if i as usize >= n {
            2 * (n - 1) - i as usize
        } else {
            i as usize
        };
        x[idx.min(n - 1)]
    };
    let padded: Vec<f64> = (-(m as isize)..(n + m) as isize).map(mirror).collect();
    let conv = fft_convolve(&padded, fir);
    conv[2 * m..2 * m + n].to_vec()
}

fn kaiser_tap_count(atten_db: f64, transition_norm: f64) -> usize {
    let delta_omega = 2.0 * std::f64::consts::PI * transition_norm;
    let n = ((atten_db - 7.95) / (2.285 * delta_omega)).ceil() as usize;
    // odd length for a symmetric type-I filter
    if n % 2 == 0 {
        n + 1
    } else {
        n
    }
}

/// Windowed-sinc lowpass with cutoff as a fraction of the sample rate,
/// normalized to unit DC gain.
fn kaiser_lowpass(taps: usize, cutoff_norm: f64, atten_db: f64) -> Vec<f64> {
    let beta = if atten_db > 50.0 {
        0.1102 * (atten_db - 8.7)
    } else if atten_db >= 21.0 {
        0.5842 * (atten_db - 21.0).powf(0.4) + 0.07886 * (atten_db - 21.0)
    } else {
        0.0
    };
    let mid = (taps - 1) as f64 / 2.0;
    let denom = bessel_i0(beta);
    let mut h: Vec<f64> = (0..taps)
        .map(|i| {
            let t = i as f64 - mid;
            let sinc = if t == 0.0 {
                2.0 * cutoff_norm
            } else {
                (2.0 * std::f64::consts::PI * cutoff_norm * t).sin() / (std::f64::consts::PI * t)
            };
            let r = t / (mid + f64::EPSILON);
            let window = bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom;
            sinc * window
        })
        .collect();
    let sum: f64 = h.iter().sum();
    for v in &mut h {
        *v /= sum;
    }
    h
}

/// Modified Bessel function of the first kind, order zero (power series).
fn bessel_i0(x: f64) -> f64 {
    let mut sum = 1.0;
    let mut term = 1.0;
    let half_x = x / 2.0;
    for k in 1..64 {
        term *= (half_x / k as f64) * (half_x / k as f64);
        sum += term;
        if term < sum * 1e-16 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, rate: u32, seconds: f64, amp: f64) -> AudioBuffer {
        // raised-cosine fade at both ends keeps the tone's spectrum clean,
        // so the measurement sees the filter, not onset splatter
        let n = (seconds * rate as f64) as usize;
        let fade = (0.1 * rate as f64) as usize;
        let samples = (0..n)
            .map(|i| {
                let env = if i < fade {
                    0.5 - 0.5 * (std::f64::consts::PI * i as f64 / fade as f64).cos()
                } else if i >= n - fade {
                    0.5 - 0.5 * (std::f64::consts::PI * (n - 1 - i) as f64 / fade as f64).cos()
                } else {
                    1.0
                };
                env * amp * (2.0 * std::f64::consts::PI * freq * i as f64 / rate as f64).sin()
            })
            .collect();
        AudioBuffer::new(samples, rate).unwrap()
    }

    fn rms(buf: &AudioBuffer) -> f64 {
        buf.power().sqrt()
    }

    #[test]
    fn dc_is_preserved_within_half_db() {
        let audio = AudioBuffer::new(vec![0.3; 16000], 16000).unwrap();
        let out = decimate(&audio, 1250).unwrap();
        assert_eq!(out.sample_rate(), 1250);
        assert_eq!(out.len(), 1250);
        for &s in out.samples() {
            let db = 20.0 * (s / 0.3).abs().log10();
            assert!(db.abs() <= 0.5, "sample {s} deviates {db} dB");
        }
    }

    #[test]
    fn stopband_tone_attenuated_60_db() {
        let audio = tone(1000.0, 16000, 1.0, 0.5);
        let before = rms(&audio);
        let out = decimate(&audio, 1250).unwrap();
        let after = rms(&out);
        let drop_db = 20.0 * (before / after.max(1e-30)).log10();
        assert!(drop_db >= 60.0, "only {drop_db} dB attenuation");
    }

    #[test]
    fn passband_tone_within_one_db() {
        let audio = tone(300.0, 16000, 1.0, 0.5);
        let before = rms(&audio);
        let out = decimate(&audio, 1250).unwrap();
        let after = rms(&out);
        let dev_db = (20.0 * (after / before).log10()).abs();
        assert!(dev_db <= 1.0, "passband deviation {dev_db} dB");
    }

    #[test]
    fn target_at_or_above_source_is_an_error() {
        let audio = tone(100.0, 16000, 0.1, 0.5);
        assert!(matches!(
            decimate(&audio, 16000),
            Err(AudioError::TargetRateNotBelowSource { .. })
        ));
        assert!(decimate(&audio, 48000).is_err());
    }
}
