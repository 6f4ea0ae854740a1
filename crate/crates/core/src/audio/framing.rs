//! Signal framing with windowing.

use super::{AudioBuffer, AudioError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowShape {
    Hann,
    Rectangular,
}

impl WindowShape {
    /// Window weights of the given length. The Hann variant is periodic,
    /// which sums to one at 50% overlap.
    pub fn weights(&self, len: usize) -> Vec<f64> {
        match self {
            WindowShape::Rectangular => vec![1.0; len],
            WindowShape::Hann => (0..len)
                .map(|n| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * n as f64 / len as f64).cos())
                .collect(),
        }
    }
}

/// Analysis grid: window and hop in milliseconds plus the window shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameGrid {
    pub window_ms: f64,
    pub hop_ms: f64,
    pub window_shape: WindowShape,
}

impl FrameGrid {
    pub fn new(window_ms: f64, hop_ms: f64, window_shape: WindowShape) -> Result<Self, AudioError> {
        if !(hop_ms > 0.0 && hop_ms <= window_ms) {
            return Err(AudioError::InvalidGrid { window_ms, hop_ms });
        }
        Ok(Self { window_ms, hop_ms, window_shape })
    }

    /// Window length in samples at the given rate.
    pub fn window_samples(&self, sample_rate: u32) -> usize {
        (self.window_ms * sample_rate as f64 / 1000.0).round() as usize
    }

    /// Hop length in samples at the given rate.
    pub fn hop_samples(&self, sample_rate: u32) -> usize {
        (self.hop_ms * sample_rate as f64 / 1000.0).round() as usize
    }
}

/// Windowed frames cut from one buffer, trailing partial segment dropped.
#[derive(Debug, Clone)]
pub struct WindowedFrames {
    pub frames: Vec<Vec<f64>>,
    pub grid: FrameGrid,
    pub sample_rate: u32,
}

/// Cuts `audio` into `1 + floor((N - W)/H)` frames of length W at hop H,
/// each multiplied by the grid's window shape.
pub fn frame_signal(audio: &AudioBuffer, grid: &FrameGrid) -> Result<WindowedFrames, AudioError> {
    let w = grid.window_samples(audio.sample_rate());
    let h = grid.hop_samples(audio.sample_rate());
    let n = audio.len();
    if n < w || w == 0 {
        return Err(AudioError::AudioTooShort { samples: n, window: w });
    }
    let n_frames = 1 + (n - w) / h;
    let window = grid.window_shape.weights(w);
    let samples = audio.samples();
    let mut frames = Vec::with_capacity(n_frames);
    for f in 0..n_frames {
        let start = f * h;
        let frame: Vec<f64> = samples[start..start + w]
            .iter()
            .zip(&window)
            .map(|(s, w)| s * w)
            .collect();
        frames.push(frame);
    }
    Ok(WindowedFrames { frames, grid: *grid, sample_rate: audio.sample_rate() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(window_ms: f64, hop_ms: f64, shape: WindowShape) -> FrameGrid {
        FrameGrid::new(window_ms, hop_ms, shape).unwrap()
    }

    #[test]
    fn one_second_at_16k_gives_98_frames() {
        let audio = AudioBuffer::new(vec![0.1; 16000], 16000).unwrap();
        let frames = frame_signal(&audio, &grid(25.0, 10.0, WindowShape::Hann)).unwrap();
        assert_eq!(frames.frames.len(), 98);
        assert_eq!(frames.frames[0].len(), 400);
    }

    #[test]
    fn temporal_smoothing_grid_hops_200_samples() {
        let g = grid(25.0, 12.5, WindowShape::Hann);
        assert_eq!(g.hop_samples(16000), 200);
        assert_eq!(g.window_samples(16000), 400);
    }

    #[test]
    fn hop_equals_window_rectangular_is_nonoverlapping_identity() {
        let audio = AudioBuffer::new(vec![0.25; 1600], 16000).unwrap();
        let frames = frame_signal(&audio, &grid(25.0, 25.0, WindowShape::Rectangular)).unwrap();
        assert_eq!(frames.frames.len(), 4);
        for f in &frames.frames {
            assert!(f.iter().all(|&s| s == 0.25));
        }
    }

    #[test]
    fn too_short_audio_is_an_error() {
        let audio = AudioBuffer::new(vec![0.0; 100], 16000).unwrap();
        assert!(matches!(
            frame_signal(&audio, &grid(25.0, 10.0, WindowShape::Hann)),
            Err(AudioError::AudioTooShort { .. })
        ));
    }

    #[test]
    fn invalid_grid_is_rejected() {
        assert!(FrameGrid::new(25.0, 0.0, WindowShape::Hann).is_err());
        assert!(FrameGrid::new(10.0, 25.0, WindowShape::Hann).is_err());
    }

    #[test]
    fn frame_count_formula_matches_brute_force_slicer() {
        // brute force: slide a window until it no longer fits
        let mut rng_state = 0x243f6a8885a308d3u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng_state >> 33) as usize
        };
        for _ in 0..1000 {
            let w = 1 + next() % 500;
            let h = 1 + next() % w;
            let n = w + next() % 4000;
            let mut brute = 0usize;
            let mut start = 0usize;
            while start + w <= n {
                brute += 1;
                start += h;
            }
            assert_eq!(1 + (n - w) / h, brute, "n={n} w={w} h={h}");
        }
    }
}
