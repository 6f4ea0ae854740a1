//! Bootstrap percentile confidence intervals.

use rand::Rng;

use crate::seeding;

use super::MetricError;

const REPLICATE_RETRIES: usize = 100;

/// A point estimate with its percentile interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub point: f64,
    pub low: f64,
    pub high: f64,
    pub level: f64,
    pub replicates: usize,
}

/// Resamples `units` with replacement `replicates` times, evaluates the
/// metric per replicate and returns the percentile interval for `level`
/// plus the point estimate on the full set.
///
/// The metric returns `None` when undefined on a resample (e.g. a missing
/// class); such replicates are redrawn a bounded number of times.
pub fn bootstrap_ci<T, F>(
    metric: F,
    units: &[T],
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<Interval, MetricError>
where
    F: Fn(&[&T]) -> Option<f64>,
{
    if replicates < 100 {
        return Err(MetricError::TooFewReplicates(replicates));
    }
    if units.is_empty() {
        return Err(MetricError::UndefinedMetric);
    }
    let full: Vec<&T> = units.iter().collect();
    let point = metric(&full).ok_or(MetricError::UndefinedMetric)?;

    let n = units.len();
    let mut values = Vec::with_capacity(replicates);
    for r in 0..replicates {
        let mut rng = seeding::rng_for(seed, &["bootstrap", &r.to_string()]);
        let mut value = None;
        for _ in 0..REPLICATE_RETRIES {
            let sample: Vec<&T> = (0..n).map(|_| &units[rng.gen_range(0..n)]).collect();
            if let Some(v) = metric(&sample) {
                value = Some(v);
                break;
            }
        }
        values.push(value.ok_or(MetricError::ReplicateRetriesExhausted(REPLICATE_RETRIES))?);
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite metric values"));

    let alpha = 1.0 - level;
    Ok(Interval {
        point,
        low: percentile(&values, alpha / 2.0),
        high: percentile(&values, 1.0 - alpha / 2.0),
        level,
        replicates,
    })
}

/// Linear interpolation between order statistics.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[hi] * frac
}
