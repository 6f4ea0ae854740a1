//! Text formats: RTTM-style segment files, trial lists and transcripts.

use std::collections::BTreeMap;
use std::path::Path;

use super::{MetricError, Segment, SegmentAnnotation, TrialLabel};

/// One `SPEAKER <file-id> <channel> <start> <duration> <speaker>` line.
#[derive(Debug, Clone, PartialEq)]
pub struct RttmLine {
    pub file_id: String,
    pub channel: u32,
    pub start_s: f64,
    pub duration_s: f64,
    pub speaker: String,
}

pub fn read_rttm<P: AsRef<Path>>(path: P) -> Result<Vec<RttmLine>, MetricError> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 6 || fields[0] != "SPEAKER" {
            return Err(MetricError::Parse(format!(
                "line {}: expected 'SPEAKER file channel start duration speaker'",
                lineno + 1
            )));
        }
        let parse_f64 = |s: &str, what: &str| {
            s.parse::<f64>().map_err(|_| {
                MetricError::Parse(format!("line {}: bad {what} '{s}'", lineno + 1))
            })
        };
        lines.push(RttmLine {
            file_id: fields[1].to_string(),
            channel: fields[2]
                .parse()
                .map_err(|_| MetricError::Parse(format!("line {}: bad channel", lineno + 1)))?,
            start_s: parse_f64(fields[3], "start")?,
            duration_s: parse_f64(fields[4], "duration")?,
            speaker: fields[5].to_string(),
        });
    }
    Ok(lines)
}

pub fn write_rttm<P: AsRef<Path>>(path: P, lines: &[RttmLine]) -> Result<(), MetricError> {
    let mut out = String::new();
    for l in lines {
        out.push_str(&format!(
            "SPEAKER {} {} {:.3} {:.3} {}\n",
            l.file_id, l.channel, l.start_s, l.duration_s, l.speaker
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Collects the lines of one file id into an annotation.
pub fn annotation_from_rttm(
    lines: &[RttmLine],
    file_id: &str,
    total_duration_s: f64,
) -> Result<SegmentAnnotation, MetricError> {
    let segments: Vec<Segment> = lines
        .iter()
        .filter(|l| l.file_id == file_id)
        .map(|l| Segment::new(l.start_s, l.start_s + l.duration_s, l.speaker.clone()))
        .collect();
    SegmentAnnotation::new(segments, total_duration_s)
}

/// One `enroll_id test_id target|nontarget` line.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialDef {
    pub enroll_id: String,
    pub test_id: String,
    pub label: TrialLabel,
}

pub fn read_trials<P: AsRef<Path>>(path: P) -> Result<Vec<TrialDef>, MetricError> {
    let text = std::fs::read_to_string(path)?;
    let mut trials = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(MetricError::Parse(format!(
                "line {}: expected 'enroll_id test_id target|nontarget'",
                lineno + 1
            )));
        }
        let label = match fields[2] {
            "target" => TrialLabel::Target,
            "nontarget" => TrialLabel::Nontarget,
            other => {
                return Err(MetricError::Parse(format!(
                    "line {}: unknown label '{other}'",
                    lineno + 1
                )))
            }
        };
        trials.push(TrialDef {
            enroll_id: fields[0].to_string(),
            test_id: fields[1].to_string(),
            label,
        });
    }
    Ok(trials)
}

/// Lines of `utt_id token token ...`.
pub fn read_transcripts<P: AsRef<Path>>(
    path: P,
) -> Result<BTreeMap<String, Vec<String>>, MetricError> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let utt = fields
            .next()
            .ok_or_else(|| MetricError::Parse(format!("line {}: empty", lineno + 1)))?;
        map.insert(utt.to_string(), fields.map(str::to_string).collect());
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rttm_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("segs.rttm");
        let lines = vec![
            RttmLine {
                file_id: "meet1".into(),
                channel: 1,
                start_s: 0.5,
                duration_s: 3.25,
                speaker: "spk_a".into(),
            },
            RttmLine {
                file_id: "meet1".into(),
                channel: 1,
                start_s: 4.0,
                duration_s: 2.0,
                speaker: "spk_b".into(),
            },
        ];
        write_rttm(&path, &lines).unwrap();
        let back = read_rttm(&path).unwrap();
        assert_eq!(back, lines);
        let ann = annotation_from_rttm(&back, "meet1", 10.0).unwrap();
        assert_eq!(ann.segments.len(), 2);
        assert_eq!(ann.segments[0].end_s, 3.75);
        assert!(annotation_from_rttm(&back, "other", 10.0).unwrap().segments.is_empty());
    }

    #[test]
    fn malformed_rttm_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.rttm");
        std::fs::write(&path, "SPKR meet1 1 0.0 1.0 a\n").unwrap();
        assert!(matches!(read_rttm(&path), Err(MetricError::Parse(_))));
        std::fs::write(&path, "SPEAKER meet1 1 zero 1.0 a\n").unwrap();
        assert!(matches!(read_rttm(&path), Err(MetricError::Parse(_))));
    }

    #[test]
    fn trial_list_parses_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trials.txt");
        std::fs::write(&path, "spk1 utt9 target\nspk2 utt9 nontarget\n\n# comment\n").unwrap();
        let trials = read_trials(&path).unwrap();
        assert_eq!(trials.len(), 2);
        assert_eq!(trials[0].label, TrialLabel::Target);
        assert_eq!(trials[1].label, TrialLabel::Nontarget);

        std::fs::write(&path, "spk1 utt9 impostor\n").unwrap();
        assert!(matches!(read_trials(&path), Err(MetricError::Parse(_))));
    }

    #[test]
    fn transcripts_keyed_by_utterance() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("text");
        std::fs::write(&path, "utt1 red green blue\nutt2 blue\n").unwrap();
        let map = read_transcripts(&path).unwrap();
        assert_eq!(map["utt1"], vec!["red", "green", "blue"]);
        assert_eq!(map["utt2"], vec!["blue"]);
    }
}
