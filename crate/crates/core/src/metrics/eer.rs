//! Equal error rate from labeled trial scores.

use super::MetricError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialLabel {
    Target,
    Nontarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialEntry {
    pub score: f64,
    pub label: TrialLabel,
    /// Resampling unit this trial belongs to (speaker for verification).
    pub unit_id: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialScores {
    pub entries: Vec<TrialEntry>,
}

impl TrialScores {
    pub fn push(&mut self, score: f64, label: TrialLabel, unit_id: impl Into<String>) {
        self.entries.push(TrialEntry { score, label, unit_id: unit_id.into() });
    }

    pub fn targets(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().filter(|e| e.label == TrialLabel::Target).map(|e| e.score)
    }

    pub fn nontargets(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().filter(|e| e.label == TrialLabel::Nontarget).map(|e| e.score)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EerResult {
    pub eer: f64,
    pub threshold: f64,
}

/// Sweeps every distinct score as an accept-if-greater-or-equal threshold
/// and linearly interpolates the FAR/FRR crossing between the two adjacent
/// operating points.
pub fn eer(scores: &TrialScores) -> Result<EerResult, MetricError> {
    let targets: Vec<f64> = scores.targets().collect();
    let nontargets: Vec<f64> = scores.nontargets().collect();
    if targets.is_empty() || nontargets.is_empty() {
        return Err(MetricError::MissingClass);
    }

    let mut thresholds: Vec<f64> =
        targets.iter().chain(&nontargets).copied().collect();
    thresholds.sort_by(|a, b| a.partial_cmp(b).expect("finite scores"));
    thresholds.dedup();

    let operating_point = |theta: f64| -> (f64, f64) {
        let far = nontargets.iter().filter(|&&s| s >= theta).count() as f64
            / nontargets.len() as f64;
        let frr = targets.iter().filter(|&&s| s < theta).count() as f64 / targets.len() as f64;
        (far, frr)
    };

    // theta below every score accepts everything; a sentinel above every
    // score rejects everything, so the crossing always exists
    let mut prev_theta = thresholds[0] - 1.0;
    let (mut prev_far, mut prev_frr) = (1.0, 0.0);
    for &theta in thresholds.iter().chain(std::iter::once(&(thresholds[thresholds.len() - 1] + 1.0)))
    {
        let (far, frr) = operating_point(theta);
        let prev_diff = prev_frr - prev_far;
        let diff = frr - far;
        if diff >= 0.0 {
            if diff == 0.0 {
                return Ok(EerResult { eer: far, threshold: theta });
            }
            if prev_diff < 0.0 {
                // interpolate between the two adjacent operating points
                let t = -prev_diff / (diff - prev_diff);
                let eer = prev_far + t * (far - prev_far);
                let threshold = prev_theta + t * (theta - prev_theta);
                return Ok(EerResult { eer, threshold });
            }
            return Ok(EerResult { eer: (prev_far + prev_frr) / 2.0, threshold: prev_theta });
        }
        prev_theta = theta;
        prev_far = far;
        prev_frr = frr;
    }
    // unreachable: the sentinel has frr = 1, far = 0
    Ok(EerResult { eer: (prev_far + prev_frr) / 2.0, threshold: prev_theta })
}

/// Weighted average of per-subset EERs.
pub fn weighted_eer(per_subset: &[(f64, f64)]) -> Result<f64, MetricError> {
    if per_subset.iter().any(|&(_, w)| w < 0.0) {
        return Err(MetricError::ZeroWeight);
    }
    let total: f64 = per_subset.iter().map(|&(_, w)| w).sum();
    if total <= 0.0 {
        return Err(MetricError::ZeroWeight);
    }
    Ok(per_subset.iter().map(|&(e, w)| e * w).sum::<f64>() / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trials(targets: &[f64], nontargets: &[f64]) -> TrialScores {
        let mut t = TrialScores::default();
        for &s in targets {
            t.push(s, TrialLabel::Target, "u");
        }
        for &s in nontargets {
            t.push(s, TrialLabel::Nontarget, "u");
        }
        t
    }

    #[test]
    fn perfect_separation_is_zero() {
        let r = eer(&trials(&[0.9, 0.8, 0.7], &[0.3, 0.2, 0.1])).unwrap();
        assert_eq!(r.eer, 0.0);
    }

    #[test]
    fn identical_distributions_are_chance() {
        let shared = [0.1, 0.4, 0.7, 0.9];
        let r = eer(&trials(&shared, &shared)).unwrap();
        assert!((r.eer - 0.5).abs() < 1e-12, "got {}", r.eer);
    }

    #[test]
    fn hand_swept_example_is_one_third() {
        let r = eer(&trials(&[0.9, 0.8, 0.4], &[0.7, 0.3, 0.2])).unwrap();
        assert!((r.eer - 1.0 / 3.0).abs() < 1e-12);
        assert!(r.threshold > 0.4 && r.threshold <= 0.7, "threshold {}", r.threshold);
    }

    #[test]
    fn missing_class_is_an_error() {
        assert!(matches!(eer(&trials(&[0.5], &[])), Err(MetricError::MissingClass)));
        assert!(matches!(eer(&trials(&[], &[0.5])), Err(MetricError::MissingClass)));
    }

    #[test]
    fn invariant_under_strictly_monotone_transforms() {
        let t = [0.9, 0.82, 0.4, 0.55];
        let nt = [0.7, 0.3, 0.2, 0.51];
        let base = eer(&trials(&t, &nt)).unwrap().eer;
        for transform in [
            |x: f64| 2.0 * x + 3.0,
            |x: f64| x.exp(),
            |x: f64| x.powi(3),
        ] {
            let tt: Vec<f64> = t.iter().map(|&x| transform(x)).collect();
            let tn: Vec<f64> = nt.iter().map(|&x| transform(x)).collect();
            let got = eer(&trials(&tt, &tn)).unwrap().eer;
            assert!((got - base).abs() < 1e-12);
        }
    }

    #[test]
    fn label_swap_with_negated_scores_is_symmetric() {
        let t = [0.9, 0.8, 0.4, 0.52];
        let nt = [0.7, 0.3, 0.2];
        let base = eer(&trials(&t, &nt)).unwrap().eer;
        let neg_t: Vec<f64> = nt.iter().map(|&x| -x).collect();
        let neg_nt: Vec<f64> = t.iter().map(|&x| -x).collect();
        let swapped = eer(&trials(&neg_t, &neg_nt)).unwrap().eer;
        assert!((base - swapped).abs() < 1e-9, "{base} vs {swapped}");
    }

    #[test]
    fn weighted_average_examples() {
        assert_eq!(weighted_eer(&[(0.12, 1.0)]).unwrap(), 0.12);
        assert!((weighted_eer(&[(0.1, 1.0), (0.3, 1.0)]).unwrap() - 0.2).abs() < 1e-12);
        assert!((weighted_eer(&[(0.1, 1.0), (0.3, 3.0)]).unwrap() - 0.25).abs() < 1e-12);
        assert!(matches!(weighted_eer(&[(0.1, 0.0)]), Err(MetricError::ZeroWeight)));
        assert!(matches!(weighted_eer(&[(0.1, -1.0)]), Err(MetricError::ZeroWeight)));
    }
}
