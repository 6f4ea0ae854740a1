//! Power spectra and FFT convolution.

use num_complex::Complex;
use rustfft::FftPlanner;

use super::{AudioError, FrameGrid, WindowedFrames};

/// Per-frame power spectral densities over bins 0..=fft_size/2.
#[derive(Debug, Clone)]
pub struct PsdMatrix {
    pub frames: Vec<Vec<f64>>,
    pub bin_hz: f64,
    pub grid: FrameGrid,
}

impl PsdMatrix {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn n_bins(&self) -> usize {
        self.frames.first().map_or(0, Vec::len)
    }
}

/// Squared magnitude of the real-input DFT of every frame, zero-padded to
/// `fft_size`. Keeps bins 0..=fft_size/2.
pub fn power_spectrum(frames: &WindowedFrames, fft_size: usize) -> Result<PsdMatrix, AudioError> {
    if !fft_size.is_power_of_two() {
        return Err(AudioError::FftNotPowerOfTwo(fft_size));
    }
    let frame_len = frames.frames.first().map_or(0, Vec::len);
    if fft_size < frame_len {
        return Err(AudioError::FftTooSmall { fft_size, frame_len });
    }
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(fft_size);
    let n_bins = fft_size / 2 + 1;
    let mut out = Vec::with_capacity(frames.frames.len());
    let mut buf = vec![Complex::new(0.0, 0.0); fft_size];
    for frame in &frames.frames {
        for (b, s) in buf.iter_mut().zip(frame.iter().chain(std::iter::repeat(&0.0))) {
            *b = Complex::new(*s, 0.0);
        }
        fft.process(&mut buf);
        out.push(buf[..n_bins].iter().map(|c| c.norm_sqr()).collect());
    }
    Ok(PsdMatrix {
        frames: out,
        bin_hz: frames.sample_rate as f64 / fft_size as f64,
        grid: frames.grid,
    })
}

/// Full linear convolution computed in the frequency domain.
pub fn fft_convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    let fft_len = out_len.next_power_of_two();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(fft_len);
    let inv = planner.plan_fft_inverse(fft_len);

    let mut fa: Vec<Complex<f64>> = a
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(fft_len)
        .collect();
    let mut fb: Vec<Complex<f64>> = b
        .iter()
        .map(|&x| Complex::new(x, 0.0))
        .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
        .take(fft_len)
        .collect();
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inv.process(&mut fa);
    let scale = 1.0 / fft_len as f64;
    fa[..out_len].iter().map(|c| c.re * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audio::{frame_signal, AudioBuffer, WindowShape};

    fn rect_frames(samples: Vec<f64>, window_ms: f64) -> WindowedFrames {
        let audio = AudioBuffer::new(samples, 16000).unwrap();
        let grid = FrameGrid::new(window_ms, window_ms, WindowShape::Rectangular).unwrap();
        frame_signal(&audio, &grid).unwrap()
    }

    #[test]
    fn zero_frame_gives_zero_psd() {
        let psd = power_spectrum(&rect_frames(vec![0.0; 400], 25.0), 512).unwrap();
        assert_eq!(psd.n_bins(), 257);
        assert!(psd.frames[0].iter().all(|&p| p == 0.0));
    }

    #[test]
    fn bin_aligned_sinusoid_concentrates_in_one_bin() {
        // 256-sample frame and fft, k=8 cycles -> bin 8 exactly
        let n = 256usize;
        let samples: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * 8.0 * i as f64 / n as f64).sin())
            .collect();
        let audio = AudioBuffer::new(samples, 16000).unwrap();
        let grid = FrameGrid::new(16.0, 16.0, WindowShape::Rectangular).unwrap();
        let frames = frame_signal(&audio, &grid).unwrap();
        let psd = power_spectrum(&frames, 256).unwrap();
        let row = &psd.frames[0];
        let total: f64 = row.iter().sum();
        assert!(row[8] / total > 0.999);
    }

    #[test]
    fn parseval_holds_relative_1e_minus_6() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let frame: Vec<f64> = (0..400).map(|_| next()).collect();
        let time_energy: f64 = frame.iter().map(|x| x * x).sum();
        let frames = rect_frames(frame, 25.0);
        let fft_size = 512usize;
        let psd = power_spectrum(&frames, fft_size).unwrap();
        let row = &psd.frames[0];
        // double-count interior bins, bins 0 and N/2 appear once
        let spec_energy: f64 = row[0]
            + row[fft_size / 2]
            + 2.0 * row[1..fft_size / 2].iter().sum::<f64>();
        let rel = (spec_energy - fft_size as f64 * time_energy).abs()
            / (fft_size as f64 * time_energy);
        assert!(rel < 1e-6, "relative error {rel}");
    }

    #[test]
    fn fft_size_below_frame_length_is_an_error() {
        assert!(matches!(
            power_spectrum(&rect_frames(vec![0.0; 400], 25.0), 256),
            Err(AudioError::FftTooSmall { .. })
        ));
    }

    #[test]
    fn fft_convolve_matches_direct() {
        let a: Vec<f64> = (0..50).map(|i| ((i * 7919) % 13) as f64 / 13.0 - 0.5).collect();
        let b: Vec<f64> = (0..17).map(|i| ((i * 104729) % 7) as f64 / 7.0 - 0.5).collect();
        let direct: Vec<f64> = (0..a.len() + b.len() - 1)
            .map(|n| {
                (0..=n)
                    .filter(|&k| k < a.len() && n - k < b.len())
                    .map(|k| a[k] * b[n - k])
                    .sum()
            })
            .collect();
        let fast = fft_convolve(&a, &b);
        assert_eq!(fast.len(), direct.len());
        for (x, y) in fast.iter().zip(&direct) {
            assert!((x - y).abs() < 1e-6);
        }
    }
}
