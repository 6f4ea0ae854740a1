//! Triangular Mel filterbanks.

use super::AudioError;

/// m(f) = 2595 * log10(1 + f/700)
pub fn hz_to_mel(hz: f64) -> f64 {
    2595.0 * (1.0 + hz / 700.0).log10()
}

pub fn mel_to_hz(mel: f64) -> f64 {
    700.0 * (10f64.powf(mel / 2595.0) - 1.0)
}

/// Peak-normalized triangular filters, centers equally spaced on the Mel scale.
#[derive(Debug, Clone)]
pub struct MelFilterbank {
    pub weights: Vec<Vec<f64>>,
    pub centers_hz: Vec<f64>,
    pub f_min: f64,
    pub f_max: f64,
}

impl MelFilterbank {
    pub fn n_filters(&self) -> usize {
        self.weights.len()
    }

    pub fn n_bins(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }
}

/// Builds `n_filters` triangles over FFT bins of `fft_size` at `sample_rate`.
///
/// The usual construction: n_filters + 2 breakpoints equally spaced in Mel
/// between f_min and f_max; triangle k rises from breakpoint k to k+1 and
/// falls to k+2, with analytic peak value 1.
pub fn build_mel_filterbank(
    n_filters: usize,
    sample_rate: u32,
    fft_size: usize,
    f_min: f64,
    f_max: f64,
) -> Result<MelFilterbank, AudioError> {
    let nyquist = sample_rate as f64 / 2.0;
    if n_filters == 0 || !(0.0 <= f_min && f_min < f_max && f_max <= nyquist) {
        return Err(AudioError::InvalidMelRange { f_min, f_max, nyquist });
    }
    let n_bins = fft_size / 2 + 1;
    let bin_hz = sample_rate as f64 / fft_size as f64;

    let mel_lo = hz_to_mel(f_min);
    let mel_hi = hz_to_mel(f_max);
    let breakpoints: Vec<f64> = (0..n_filters + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (n_filters + 1) as f64))
        .collect();

    let mut weights = Vec::with_capacity(n_filters);
    for k in 0..n_filters {
        let (lo, center, hi) = (breakpoints[k], breakpoints[k + 1], breakpoints[k + 2]);
        let row: Vec<f64> = (0..n_bins)
            .map(|b| {
                let f = b as f64 * bin_hz;
                let rising = (f - lo) / (center - lo);
                let falling = (hi - f) / (hi - center);
                rising.min(falling).max(0.0)
            })
            .collect();
        if !row.iter().any(|&w| w > 0.0) {
            return Err(AudioError::EmptyMelFilter { index: k });
        }
        weights.push(row);
    }

    Ok(MelFilterbank {
        weights,
        centers_hz: breakpoints[1..=n_filters].to_vec(),
        f_min,
        f_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_80_filter_shape() {
        let fb = build_mel_filterbank(80, 16000, 512, 0.0, 8000.0).unwrap();
        assert_eq!(fb.n_filters(), 80);
        assert_eq!(fb.n_bins(), 257);
    }

    #[test]
    fn smoothed_10_filter_triangles_are_wider() {
        // every 10-bank triangle is wider than each 80-bank triangle whose
        // center falls inside it
        let fb80 = build_mel_filterbank(80, 16000, 512, 0.0, 8000.0).unwrap();
        let fb10 = build_mel_filterbank(10, 16000, 512, 0.0, 8000.0).unwrap();
        assert_eq!(fb10.n_bins(), 257);
        let support = |row: &[f64]| row.iter().filter(|&&w| w > 0.0).count();
        let span = |row: &[f64]| {
            let lo = row.iter().position(|&w| w > 0.0).unwrap();
            let hi = row.iter().rposition(|&w| w > 0.0).unwrap();
            (lo, hi)
        };
        for (j, wide) in fb10.weights.iter().enumerate() {
            let (lo, hi) = span(wide);
            for (k, narrow) in fb80.weights.iter().enumerate() {
                let center_bin = (fb80.centers_hz[k] / 31.25).round() as usize;
                if center_bin >= lo && center_bin <= hi {
                    assert!(
                        support(wide) >= support(narrow),
                        "10-bank filter {j} narrower than overlapping 80-bank filter {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn centers_equally_spaced_in_mel() {
        let fb = build_mel_filterbank(40, 16000, 512, 0.0, 8000.0).unwrap();
        let mels: Vec<f64> = fb.centers_hz.iter().map(|&f| hz_to_mel(f)).collect();
        let step = mels[1] - mels[0];
        for w in mels.windows(2) {
            assert!((w[1] - w[0] - step).abs() < 1e-9);
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn too_many_filters_for_resolution_is_an_error() {
        // 512-point FFT at 16 kHz has 31.25 Hz bins; 400 filters leave some empty
        assert!(matches!(
            build_mel_filterbank(400, 16000, 512, 0.0, 8000.0),
            Err(AudioError::EmptyMelFilter { .. })
        ));
    }

    #[test]
    fn invalid_range_is_rejected() {
        assert!(build_mel_filterbank(10, 16000, 512, 100.0, 50.0).is_err());
        assert!(build_mel_filterbank(10, 16000, 512, 0.0, 9000.0).is_err());
        assert!(build_mel_filterbank(0, 16000, 512, 0.0, 8000.0).is_err());
    }

    #[test]
    fn shrinking_filter_count_never_shrinks_support() {
        // fixed range, fewer filters -> wider triangles (monotone over the sweep)
        let counts = [80usize, 40, 20, 10];
        let mut prev_min = 0usize;
        for &c in &counts {
            let fb = build_mel_filterbank(c, 16000, 512, 0.0, 8000.0).unwrap();
            let min_support = fb
                .weights
                .iter()
                .map(|row| row.iter().filter(|&&w| w > 0.0).count())
                .min()
                .unwrap();
            assert!(min_support >= prev_min);
            prev_min = min_support;
        }
    }
}
