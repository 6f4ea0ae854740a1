//! Linear-prediction analysis and synthesis.

use super::TransformError;

/// All-pole model of one frame: A(z) with leading 1, the excitation that
/// A(z) leaves behind, and the prediction-error gain.
#[derive(Debug, Clone)]
pub struct LpcModel {
    pub order: usize,
    /// order + 1 coefficients of A(z), coefficients[0] == 1.
    pub coefficients: Vec<f64>,
    pub residual: Vec<f64>,
    pub gain: f64,
}

impl LpcModel {
    /// Trivial model A(z) = 1 whose residual is the frame itself.
    fn trivial(order: usize, frame: &[f64]) -> Self {
        let mut coefficients = vec![0.0; order + 1];
        coefficients[0] = 1.0;
        Self { order, coefficients, residual: frame.to_vec(), gain: 0.0 }
    }

    /// Filters the residual through 1/A(z) with zero initial state; the exact
    /// algebraic inverse of the analysis filtering.
    pub fn synthesize(&self) -> Vec<f64> {
        synthesize(&self.coefficients, &self.residual)
    }
}

/// Autocorrelation-method LPC via Levinson-Durbin.
///
/// Zero-energy frames yield the trivial model. The returned residual always
/// reconstructs the frame exactly through `synthesize`.
pub fn lpc_analyze(frame: &[f64], order: usize) -> Result<LpcModel, TransformError> {
    if order < 2 {
        return Err(TransformError::OrderTooSmall { order });
    }
    if frame.len() <= order {
        return Err(TransformError::FrameTooShort { len: frame.len(), order });
    }

    let mut autocorr = vec![0.0; order + 1];
    for (lag, r) in autocorr.iter_mut().enumerate() {
        *r = frame[lag..].iter().zip(frame).map(|(a, b)| a * b).sum();
    }
    if autocorr[0] <= 0.0 {
        return Ok(LpcModel::trivial(order, frame));
    }

    // Levinson-Durbin recursion
    let mut a = vec![0.0; order + 1];
    a[0] = 1.0;
    let mut err = autocorr[0];
    for m in 1..=order {
        let mut acc = autocorr[m];
        for k in 1..m {
            acc += a[k] * autocorr[m - k];
        }
        let reflection = -acc / err;
        if !reflection.is_finite() || reflection.abs() >= 1.0 {
            // ill-conditioned frame; keep the stable lower-order solution
            break;
        }
        let half = m / 2;
        for k in 1..=half {
            let tmp = a[k] + reflection * a[m - k];
            a[m - k] += reflection * a[k];
            a[k] = tmp;
        }
        a[m] = reflection;
        err *= 1.0 - reflection * reflection;
        if err <= autocorr[0] * 1e-12 {
            break;
        }
    }

    let residual = analysis_filter(&a, frame);
    Ok(LpcModel { order, coefficients: a, residual, gain: err.max(0.0).sqrt() })
}

/// FIR filtering with A(z): e[n] = sum_k a[k] x[n-k], zero initial state.
pub fn analysis_filter(coefficients: &[f64], signal: &[f64]) -> Vec<f64> {
    signal
        .iter()
        .enumerate()
        .map(|(n, _)| {
            coefficients
                .iter()
                .enumerate()
                .take(n + 1)
                .map(|(k, &a)| a * signal[n - k])
                .sum()
        })
        .collect()
}

/// IIR filtering with 1/A(z): y[n] = e[n] - sum_{k>=1} a[k] y[n-k].
pub fn synthesize(coefficients: &[f64], excitation: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; excitation.len()];
    for n in 0..excitation.len() {
        let mut y = excitation[n];
        for (k, &a) in coefficients.iter().enumerate().skip(1) {
            if k > n {
                break;
            }
            y -= a * out[n - k];
        }
        out[n] = y;
    }
    out
}
