//! Diarization error rate with a forgiveness collar.

use std::collections::BTreeMap;

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;

use super::MetricError;

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start_s: f64,
    pub end_s: f64,
    pub speaker: String,
}

impl Segment {
    pub fn new(start_s: f64, end_s: f64, speaker: impl Into<String>) -> Self {
        Self { start_s, end_s, speaker: speaker.into() }
    }
}

/// Speaker-labeled time intervals over a recording. Overlaps are permitted.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentAnnotation {
    pub segments: Vec<Segment>,
    pub total_duration_s: f64,
}

impl SegmentAnnotation {
    pub fn new(segments: Vec<Segment>, total_duration_s: f64) -> Result<Self, MetricError> {
        let a = Self { segments, total_duration_s };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<(), MetricError> {
        if self.total_duration_s <= 0.0 {
            return Err(MetricError::InvalidSegments("total duration must be positive".into()));
        }
        for s in &self.segments {
            if !(s.start_s < s.end_s) {
                return Err(MetricError::InvalidSegments(format!(
                    "segment [{}, {}] has nonpositive length",
                    s.start_s, s.end_s
                )));
            }
            if s.start_s < -1e-9 || s.end_s > self.total_duration_s + 1e-9 {
                return Err(MetricError::InvalidSegments(format!(
                    "segment [{}, {}] outside [0, {}]",
                    s.start_s, s.end_s, self.total_duration_s
                )));
            }
        }
        Ok(())
    }

    pub fn speakers(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.segments.iter().map(|s| s.speaker.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    fn active_at(&self, t: f64) -> Vec<&str> {
        let mut active: Vec<&str> = self
            .segments
            .iter()
            .filter(|s| s.start_s <= t && t < s.end_s)
            .map(|s| s.speaker.as_str())
            .collect();
        active.sort();
        active.dedup();
        active
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerBreakdown {
    /// Missed speech time, seconds.
    pub miss_s: f64,
    /// False-alarm speech time, seconds.
    pub false_alarm_s: f64,
    /// Speaker-confusion time, seconds.
    pub confusion_s: f64,
    /// Scored reference speech time (overlap counted per speaker), seconds.
    pub scored_speech_s: f64,
    pub der: f64,
}

/// Scores `hyp` against `ref_`, ignoring everything within `collar_s` of any
/// reference segment boundary. Speaker identities are matched by the
/// maximum-overlap one-to-one assignment.
pub fn der(
    ref_: &SegmentAnnotation,
    hyp: &SegmentAnnotation,
    collar_s: f64,
) -> Result<DerBreakdown, MetricError> {
    ref_.validate()?;
    hyp.validate()?;
    if (ref_.total_duration_s - hyp.total_duration_s).abs() > 1e-6 {
        return Err(MetricError::DurationMismatch {
            ref_s: ref_.total_duration_s,
            hyp_s: hyp.total_duration_s,
        });
    }
    let total = ref_.total_duration_s;

    // collar exclusions around reference boundaries, merged
    let mut exclusions: Vec<(f64, f64)> = Vec::new();
    if collar_s > 0.0 {
        for s in &ref_.segments {
            for b in [s.start_s, s.end_s] {
                exclusions.push(((b - collar_s).max(0.0), (b + collar_s).min(total)));
            }
        }
        exclusions.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for e in exclusions {
            match merged.last_mut() {
                Some(last) if e.0 <= last.1 => last.1 = last.1.max(e.1),
                _ => merged.push(e),
            }
        }
        exclusions = merged;
    }
    let excluded = |t: f64| exclusions.iter().any(|&(a, b)| a <= t && t < b);

    // elementary intervals from every boundary of interest
    let mut cuts: Vec<f64> = vec![0.0, total];
    for s in ref_.segments.iter().chain(&hyp.segments) {
        cuts.push(s.start_s);
        cuts.push(s.end_s);
    }
    for &(a, b) in &exclusions {
        cuts.push(a);
        cuts.push(b);
    }
    cuts.retain(|&t| (0.0..=total).contains(&t));
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
    cuts.dedup();

    // first pass: co-activity overlap for the speaker mapping
    let ref_speakers = ref_.speakers();
    let hyp_speakers = hyp.speakers();
    let ref_index: BTreeMap<&str, usize> =
        ref_speakers.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let hyp_index: BTreeMap<&str, usize> =
        hyp_speakers.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let mut overlap = vec![vec![0.0f64; hyp_speakers.len()]; ref_speakers.len()];
    for w in cuts.windows(2) {
        let (t1, t2) = (w[0], w[1]);
        let dt = t2 - t1;
        let mid = 0.5 * (t1 + t2);
        if dt <= 0.0 || excluded(mid) {
            continue;
        }
        for r in ref_.active_at(mid) {
            for h in hyp.active_at(mid) {
                overlap[ref_index[r]][hyp_index[h]] += dt;
            }
        }
    }
    let mapping = optimal_mapping(&overlap);

    // second pass: accumulate miss, false alarm and confusion
    let mut miss = 0.0;
    let mut false_alarm = 0.0;
    let mut confusion = 0.0;
    let mut scored_speech = 0.0;
    for w in cuts.windows(2) {
        let (t1, t2) = (w[0], w[1]);
        let dt = t2 - t1;
        let mid = 0.5 * (t1 + t2);
        if dt <= 0.0 || excluded(mid) {
            continue;
        }
        let ref_active = ref_.active_at(mid);
        let hyp_active = hyp.active_at(mid);
        let n_ref = ref_active.len() as f64;
        let n_hyp = hyp_active.len() as f64;
        scored_speech += n_ref * dt;
        miss += (n_ref - n_hyp).max(0.0) * dt;
        false_alarm += (n_hyp - n_ref).max(0.0) * dt;
        let matched = ref_active
            .iter()
            .filter(|r| {
                mapping[ref_index[**r]]
                    .map(|h| hyp_active.contains(&hyp_speakers[h].as_str()))
                    .unwrap_or(false)
            })
            .count() as f64;
        confusion += (n_ref.min(n_hyp) - matched).max(0.0) * dt;
    }

    if scored_speech <= 0.0 {
        return Err(MetricError::NoScoredSpeech);
    }
    Ok(DerBreakdown {
        miss_s: miss,
        false_alarm_s: false_alarm,
        confusion_s: confusion,
        scored_speech_s: scored_speech,
        der: (miss + false_alarm + confusion) / scored_speech,
    })
}

/// Maximum-overlap one-to-one assignment of reference to hypothesis
/// speakers; returns, per reference speaker, the mapped hypothesis index.
fn optimal_mapping(overlap: &[Vec<f64>]) -> Vec<Option<usize>> {
    let n_ref = overlap.len();
    let n_hyp = overlap.first().map_or(0, Vec::len);
    if n_ref == 0 || n_hyp == 0 {
        return vec![None; n_ref];
    }
    // integer weights at 0.1 microsecond resolution for the assignment solver
    let to_i64 = |v: f64| (v * 1e7).round() as i64;
    let mut mapping = vec![None; n_ref];
    if n_ref <= n_hyp {
        let m = Matrix::from_fn(n_ref, n_hyp, |(r, h)| to_i64(overlap[r][h]));
        let (_, assignment) = kuhn_munkres(&m);
        for (r, h) in assignment.into_iter().enumerate() {
            if overlap[r][h] > 0.0 {
                mapping[r] = Some(h);
            }
        }
    } else {
        let m = Matrix::from_fn(n_hyp, n_ref, |(h, r)| to_i64(overlap[r][h]));
        let (_, assignment) = kuhn_munkres(&m);
        for (h, r) in assignment.into_iter().enumerate() {
            if overlap[r][h] > 0.0 {
                mapping[r] = Some(h);
            }
        }
    }
    mapping
}
