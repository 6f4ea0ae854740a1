//! Privacy and utility metrics with bootstrap confidence intervals.

mod bootstrap;
mod der;
mod eer;
mod io;
mod mcc;
mod wer;

pub use bootstrap::{bootstrap_ci, Interval};
pub use der::{der, DerBreakdown, Segment, SegmentAnnotation};
pub use eer::{eer, weighted_eer, EerResult, TrialEntry, TrialLabel, TrialScores};
pub use io::{
    annotation_from_rttm, read_rttm, read_transcripts, read_trials, write_rttm, RttmLine,
    TrialDef,
};
pub use mcc::{mcc, ConfusionCounts};
pub use wer::{wer, WerBreakdown};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("reference token list is empty")]
    EmptyReference,
    #[error("trial scores need at least one target and one nontarget")]
    MissingClass,
    #[error("subset weights must be nonnegative with positive sum")]
    ZeroWeight,
    #[error("confusion counts sum to zero")]
    ZeroTotal,
    #[error("reference and hypothesis cover different durations: {ref_s} s vs {hyp_s} s")]
    DurationMismatch { ref_s: f64, hyp_s: f64 },
    #[error("no scored reference speech remains after collar exclusion")]
    NoScoredSpeech,
    #[error("invalid segment annotation: {0}")]
    InvalidSegments(String),
    #[error("bootstrap needs at least 100 replicates, got {0}")]
    TooFewReplicates(usize),
    #[error("metric undefined on the full unit set")]
    UndefinedMetric,
    #[error("metric undefined after {0} redraws of a bootstrap replicate")]
    ReplicateRetriesExhausted(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
