//! Room impulse responses: synthesis, RT60 measurement, convolution.

use std::path::PathBuf;

use rand::Rng;

use crate::audio::{fft_convolve, load_audio, AudioBuffer};
use crate::seeding;

use super::AugmentError;

#[derive(Debug, Clone, PartialEq)]
pub enum RirSource {
    File(PathBuf),
    Synthetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RirSpec {
    pub source: RirSource,
    pub rt60_s: f64,
    pub duration_s: f64,
    pub seed: u64,
}

impl RirSpec {
    pub fn synthetic(rt60_s: f64, seed: u64) -> Self {
        Self { source: RirSource::Synthetic, rt60_s, duration_s: rt60_s.max(0.1) * 1.5, seed }
    }

    pub fn validate(&self) -> Result<(), AugmentError> {
        if self.rt60_s <= 0.0 || self.duration_s < self.rt60_s {
            return Err(AugmentError::InvalidRirSpec {
                rt60_s: self.rt60_s,
                duration_s: self.duration_s,
            });
        }
        Ok(())
    }
}

/// Exponentially decaying seeded Gaussian noise with a unit direct-path
/// sample at n = 0, normalized to unit energy. The decay rate
/// delta = 3*ln(10)/rt60 puts the 60 dB energy drop exactly at rt60.
pub fn synthesize_rir(spec: &RirSpec, sample_rate: u32) -> Result<AudioBuffer, AugmentError> {
    spec.validate()?;
    if let RirSource::File(path) = &spec.source {
        return Ok(load_audio(path)?);
    }
    let fs = sample_rate as f64;
    let n = (spec.duration_s * fs).round() as usize;
    let delta = 3.0 * 10f64.ln() / spec.rt60_s;
    let mut rng = seeding::rng_for(spec.seed, &["rir"]);
    let mut h: Vec<f64> = (0..n)
        .map(|i| {
            let g: f64 = rng.sample(rand_distr::StandardNormal);
            g * (-delta * i as f64 / fs).exp()
        })
        .collect();
    h[0] = 1.0;
    let energy: f64 = h.iter().map(|v| v * v).sum();
    let scale = 1.0 / energy.sqrt();
    for v in &mut h {
        *v *= scale;
    }
    Ok(AudioBuffer::new(h, sample_rate)?)
}

/// RT60 from Schroeder backward energy integration: a least-squares line is
/// fit to the -5..-25 dB stretch of the decay curve and extrapolated, i.e.
/// three times the fitted 20 dB decay time.
pub fn measure_rt60(rir: &AudioBuffer) -> Result<f64, AugmentError> {
    let fs = rir.sample_rate() as f64;
    let energy: Vec<f64> = rir.samples().iter().map(|v| v * v).collect();
    let total: f64 = energy.iter().sum();
    if total <= 0.0 {
        return Err(AugmentError::DecayRangeNotReached);
    }
    // backward integral
    let mut tail = 0.0;
    let mut curve: Vec<f64> = energy
        .iter()
        .rev()
        .map(|e| {
            tail += e;
            tail
        })
        .collect();
    curve.reverse();

    let points: Vec<(f64, f64)> = curve
        .iter()
        .enumerate()
        .filter_map(|(i, &c)| {
            let db = 10.0 * (c / total).log10();
            db.is_finite().then_some((i as f64 / fs, db))
        })
        .filter(|&(_, db)| (-25.0..=-5.0).contains(&db))
        .collect();
    if points.len() < 3 {
        return Err(AugmentError::DecayRangeNotReached);
    }

    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom <= 0.0 {
        return Err(AugmentError::DecayRangeNotReached);
    }
    let slope = (n * sxy - sx * sy) / denom;
    if slope >= 0.0 {
        return Err(AugmentError::DecayRangeNotReached);
    }
    Ok(-60.0 / slope)
}

/// Full linear convolution with the impulse response, truncated to the
/// speech length and peak-normalized to the input's peak.
pub fn convolve_rir(speech: &AudioBuffer, rir: &AudioBuffer) -> Result<AudioBuffer, AugmentError> {
    if speech.sample_rate() != rir.sample_rate() {
        return Err(AugmentError::RateMismatch {
            speech_hz: speech.sample_rate(),
            rir_hz: rir.sample_rate(),
        });
    }
    let mut out = fft_convolve(speech.samples(), rir.samples());
    out.truncate(speech.len());
    let out_peak = out.iter().fold(0.0f64, |m, s| m.max(s.abs()));
    let in_peak = speech.peak();
    if out_peak > 0.0 && in_peak > 0.0 {
        let g = in_peak / out_peak;
        for s in &mut out {
            *s *= g;
        }
    }
    Ok(AudioBuffer::new(out, speech.sample_rate())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_exponential_decay_measures_its_rt60() {
        // deterministic envelope, no stochastic fine structure
        let rt = 0.37f64;
        let fs = 16000u32;
        let delta = 3.0 * 10f64.ln() / rt;
        let h: Vec<f64> = (0..(0.8 * fs as f64) as usize)
            .map(|i| (-delta * i as f64 / fs as f64).exp())
            .collect();
        let rir = AudioBuffer::new(h, fs).unwrap();
        let measured = measure_rt60(&rir).unwrap();
        assert!((measured - rt).abs() / rt < 0.05, "measured {measured}");
    }

    #[test]
    fn synthesized_rirs_hit_their_rt60_within_ten_percent() {
        for &rt in &[0.21, 0.37, 0.70] {
            for seed in 0..20u64 {
                let rir = synthesize_rir(&RirSpec::synthetic(rt, seed), 16000).unwrap();
                let measured = measure_rt60(&rir).unwrap();
                assert!(
                    (measured - rt).abs() / rt < 0.10,
                    "rt60 {rt}, seed {seed}: measured {measured}"
                );
            }
        }
    }

    #[test]
    fn envelope_drops_60_db_at_rt60() {
        let rir = synthesize_rir(&RirSpec::synthetic(0.5, 3), 16000).unwrap();
        let fs = 16000.0;
        let window = 160usize; // 10 ms
        let early: f64 =
            rir.samples()[1..1 + window].iter().map(|v| v * v).sum::<f64>() / window as f64;
        let at = (0.5 * fs) as usize;
        let late: f64 =
            rir.samples()[at..at + window].iter().map(|v| v * v).sum::<f64>() / window as f64;
        let drop_db = 10.0 * (early / late).log10();
        // stochastic fine structure allows a few dB of slack around the
        // closed-form exp(-2*delta*t) envelope
        assert!((drop_db - 60.0).abs() < 6.0, "drop {drop_db} dB");
    }

    #[test]
    fn same_seed_gives_identical_rir() {
        let a = synthesize_rir(&RirSpec::synthetic(0.21, 5), 16000).unwrap();
        let b = synthesize_rir(&RirSpec::synthetic(0.21, 5), 16000).unwrap();
        assert_eq!(a.samples(), b.samples());
        let c = synthesize_rir(&RirSpec::synthetic(0.21, 6), 16000).unwrap();
        assert_ne!(a.samples(), c.samples());
    }

    #[test]
    fn unit_energy_and_unit_direct_path() {
        let rir = synthesize_rir(&RirSpec::synthetic(0.7, 1), 16000).unwrap();
        let energy: f64 = rir.samples().iter().map(|v| v * v).sum();
        assert!((energy - 1.0).abs() < 1e-9);
        // h[0] is the deterministic unit direct path (positive after the
        // energy normalization), not a Gaussian draw
        assert!(rir.samples()[0] > 0.0);
    }

    #[test]
    fn single_impulse_has_no_decay_range() {
        let mut h = vec![0.0; 1000];
        h[0] = 1.0;
        let rir = AudioBuffer::new(h, 16000).unwrap();
        assert!(matches!(measure_rt60(&rir), Err(AugmentError::DecayRangeNotReached)));
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let spec = RirSpec { source: RirSource::Synthetic, rt60_s: 0.5, duration_s: 0.3, seed: 0 };
        assert!(matches!(
            synthesize_rir(&spec, 16000),
            Err(AugmentError::InvalidRirSpec { .. })
        ));
    }

    fn speechy(seed: u64, n: usize) -> AudioBuffer {
        let mut rng = seeding::rng_for(seed, &["conv-speech"]);
        AudioBuffer::new((0..n).map(|_| rng.gen::<f64>() * 0.6 - 0.3).collect(), 16000).unwrap()
    }

    #[test]
    fn unit_impulse_is_convolution_identity() {
        let speech = speechy(0, 3000);
        let mut h = vec![0.0; 100];
        h[0] = 1.0;
        let rir = AudioBuffer::new(h, 16000).unwrap();
        let out = convolve_rir(&speech, &rir).unwrap();
        for (a, b) in speech.samples().iter().zip(out.samples()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn delayed_impulse_shifts_the_signal() {
        let speech = speechy(1, 3000);
        let k = 37usize;
        let mut h = vec![0.0; 100];
        h[k] = 1.0;
        let rir = AudioBuffer::new(h, 16000).unwrap();
        let out = convolve_rir(&speech, &rir).unwrap();
        // output is the shifted input, rescaled to the input peak
        let gain = speech.peak() / speech.samples()[..speech.len() - k]
            .iter()
            .fold(0.0f64, |m, s| m.max(s.abs()));
        for i in k..speech.len() {
            assert!((out.samples()[i] - gain * speech.samples()[i - k]).abs() < 1e-9);
        }
        for i in 0..k {
            assert!(out.samples()[i].abs() < 1e-12);
        }
    }

    #[test]
    fn rate_mismatch_is_an_error() {
        let speech = speechy(2, 1000);
        let rir = AudioBuffer::new(vec![1.0, 0.5], 8000).unwrap();
        assert!(matches!(
            convolve_rir(&speech, &rir),
            Err(AugmentError::RateMismatch { .. })
        ));
    }

    #[test]
    fn convolution_is_linear() {
        let a = speechy(3, 500);
        let b = speechy(4, 500);
        let sum = AudioBuffer::new(
            a.samples().iter().zip(b.samples()).map(|(x, y)| x + y).collect(),
            16000,
        )
        .unwrap();
        let rir = synthesize_rir(&RirSpec::synthetic(0.21, 9), 16000).unwrap();
        // raw convolution is linear; peak normalization is per-call, so
        // compare unnormalized tails via fft_convolve directly
        let ca = fft_convolve(a.samples(), rir.samples());
        let cb = fft_convolve(b.samples(), rir.samples());
        let cs = fft_convolve(sum.samples(), rir.samples());
        for i in 0..cs.len() {
            assert!((cs[i] - ca[i] - cb[i]).abs() < 1e-6);
        }
    }
}
