//! Declarative description of one privacy-preserving method.

use serde::{Deserialize, Serialize};

use super::TransformError;

/// One elementary privacy-preserving method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Baseline,
    SpectralSmooth,
    TemporalSmooth,
    McAdams,
    LowFreq,
}

/// How the McAdams coefficient is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum McAdamsPolicy {
    /// One coefficient per utterance, deterministic in (seed, utterance id).
    PerUtterance,
    /// One coefficient per speaker, deterministic in (seed, speaker id).
    PerSpeaker,
    /// A fixed coefficient.
    Fixed(f64),
}

/// Identifies the unit being transformed, for coefficient sampling.
#[derive(Debug, Clone, Copy, Default)]
pub struct SampleKey<'a> {
    pub utterance: &'a str,
    pub speaker: &'a str,
}

impl<'a> SampleKey<'a> {
    pub fn new(utterance: &'a str, speaker: &'a str) -> Self {
        Self { utterance, speaker }
    }
}

/// All parameters of one method or ordered combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    /// Elementary methods to combine. Waveform-domain steps always run
    /// before frame-domain steps: McAdams, then band limiting, then smoothing.
    pub methods: Vec<Method>,
    /// Mel filterbank size (80 baseline, 10 for spectral smoothing).
    pub n_mels: usize,
    /// Recursive-smoothing time constant in milliseconds.
    pub tau_ms: f64,
    /// Hop of the temporal-smoothing grid in milliseconds.
    pub smoothing_hop_ms: f64,
    /// Interval the McAdams coefficient is sampled from.
    pub mcadams_range: (f64, f64),
    pub mcadams_policy: McAdamsPolicy,
    /// Target rate for the low-frequency method, in Hz.
    pub lowfreq_rate: u32,
    pub seed: u64,
}

pub const DEFAULT_N_MELS: usize = 80;
pub const DEFAULT_TAU_MS: f64 = 125.0;
pub const DEFAULT_SMOOTHING_HOP_MS: f64 = 12.5;
pub const DEFAULT_MCADAMS_RANGE: (f64, f64) = (0.5, 0.9);
pub const DEFAULT_LOWFREQ_RATE: u32 = 1250;
/// Feature-extraction grid.
pub const FEATURE_WINDOW_MS: f64 = 25.0;
pub const FEATURE_HOP_MS: f64 = 10.0;

impl TransformConfig {
    pub fn baseline(seed: u64) -> Self {
        Self {
            methods: vec![],
            n_mels: DEFAULT_N_MELS,
            tau_ms: DEFAULT_TAU_MS,
            smoothing_hop_ms: DEFAULT_SMOOTHING_HOP_MS,
            mcadams_range: DEFAULT_MCADAMS_RANGE,
            mcadams_policy: McAdamsPolicy::PerUtterance,
            lowfreq_rate: DEFAULT_LOWFREQ_RATE,
            seed,
        }
    }

    pub fn spectral_smooth(n_mels: usize, seed: u64) -> Self {
        Self {
            methods: vec![Method::SpectralSmooth],
            n_mels,
            ..Self::baseline(seed)
        }
    }

    pub fn temporal_smooth(tau_ms: f64, seed: u64) -> Self {
        Self { methods: vec![Method::TemporalSmooth], tau_ms, ..Self::baseline(seed) }
    }

    pub fn mcadams(seed: u64) -> Self {
        Self { methods: vec![Method::McAdams], ..Self::baseline(seed) }
    }

    pub fn lowfreq(rate: u32, seed: u64) -> Self {
        Self { methods: vec![Method::LowFreq], lowfreq_rate: rate, ..Self::baseline(seed) }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn has(&self, method: Method) -> bool {
        self.methods.contains(&method)
    }

    /// Subsampling factor tau/L of the temporal-smoothing pipeline.
    pub fn subsample_factor(&self) -> usize {
        (self.tau_ms / self.smoothing_hop_ms).round() as usize
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        let (lo, hi) = self.mcadams_range;
        if !(0.0 < lo && lo < hi && hi <= 1.0) {
            return Err(TransformError::InvalidMcAdamsRange { lo, hi });
        }
        if let McAdamsPolicy::Fixed(c) = self.mcadams_policy {
            if !(c > 0.0 && c <= 1.0) {
                return Err(TransformError::InvalidCoefficient(c));
            }
        }
        if self.n_mels == 0 {
            return Err(TransformError::Invalid("n_mels must be positive".into()));
        }
        if self.tau_ms <= 0.0 || self.smoothing_hop_ms <= 0.0 {
            return Err(TransformError::NonPositiveTau(self.tau_ms.min(self.smoothing_hop_ms)));
        }
        let factor = self.tau_ms / self.smoothing_hop_ms;
        if (factor - factor.round()).abs() > 1e-9 || factor.round() < 1.0 {
            return Err(TransformError::TauNotMultipleOfHop {
                tau_ms: self.tau_ms,
                hop_ms: self.smoothing_hop_ms,
            });
        }
        if self.methods.iter().filter(|m| **m == Method::Baseline).count() > 0
            && self.methods.len() > 1
        {
            return Err(TransformError::Invalid(
                "baseline cannot be combined with other methods".into(),
            ));
        }
        let mut seen = Vec::new();
        for m in &self.methods {
            if seen.contains(m) {
                return Err(TransformError::Invalid(format!("duplicate method {m:?}")));
            }
            seen.push(*m);
        }
        Ok(())
    }

    /// Canonical token, e.g. "mcadams+tau125" or "mel10".
    pub fn name(&self) -> String {
        if self.methods.is_empty() || self.methods == [Method::Baseline] {
            return "baseline".into();
        }
        let mut parts: Vec<String> = Vec::new();
        // canonical order: waveform first, then band limit, then smoothing
        if self.has(Method::McAdams) {
            parts.push("mcadams".into());
        }
        if self.has(Method::LowFreq) {
            if self.lowfreq_rate == DEFAULT_LOWFREQ_RATE {
                parts.push("lowfreq".into());
            } else {
                parts.push(format!("lowfreq{}", self.lowfreq_rate));
            }
        }
        if self.has(Method::SpectralSmooth) {
            parts.push(format!("mel{}", self.n_mels));
        }
        if self.has(Method::TemporalSmooth) {
            parts.push(format!("tau{}", self.tau_ms.round() as i64));
        }
        parts.join("+")
    }

    /// Parses a method token: `baseline`, `mel<N>`, `tau<MS>`, `mcadams`,
    /// `lowfreq[<HZ>]`, or combinations joined with `+`.
    pub fn parse_name(token: &str, seed: u64) -> Result<Self, TransformError> {
        let mut cfg = Self::baseline(seed);
        let parts: Vec<&str> = token.split('+').map(str::trim).collect();
        if parts.len() == 1 && parts[0] == "baseline" {
            return Ok(cfg);
        }
        for part in parts {
            if part == "baseline" {
                return Err(TransformError::Invalid(
                    "baseline cannot be combined with other methods".into(),
                ));
            } else if part == "mcadams" {
                cfg.methods.push(Method::McAdams);
            } else if let Some(rest) = part.strip_prefix("mel") {
                cfg.n_mels = rest
                    .parse()
                    .map_err(|_| TransformError::Invalid(format!("bad method token {part}")))?;
                cfg.methods.push(Method::SpectralSmooth);
            } else if let Some(rest) = part.strip_prefix("tau") {
                cfg.tau_ms = rest
                    .parse()
                    .map_err(|_| TransformError::Invalid(format!("bad method token {part}")))?;
                cfg.methods.push(Method::TemporalSmooth);
            } else if let Some(rest) = part.strip_prefix("lowfreq") {
                if !rest.is_empty() {
                    cfg.lowfreq_rate = rest.parse().map_err(|_| {
                        TransformError::Invalid(format!("bad method token {part}"))
                    })?;
                }
                cfg.methods.push(Method::LowFreq);
            } else {
                return Err(TransformError::Invalid(format!("unknown method token {part}")));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_the_experimental_settings() {
        let cfg = TransformConfig::baseline(0);
        assert_eq!(cfg.n_mels, 80);
        assert_eq!(cfg.mcadams_range, (0.5, 0.9));
        assert_eq!(cfg.lowfreq_rate, 1250);
        assert_eq!(cfg.smoothing_hop_ms, 12.5);
    }

    #[test]
    fn subsample_factors_for_the_three_taus() {
        for (tau, factor) in [(125.0, 10), (250.0, 20), (375.0, 30)] {
            let cfg = TransformConfig::temporal_smooth(tau, 0);
            assert_eq!(cfg.subsample_factor(), factor);
        }
    }

    #[test]
    fn tau_must_be_a_multiple_of_the_hop() {
        let mut cfg = TransformConfig::temporal_smooth(130.0, 0);
        assert!(matches!(cfg.validate(), Err(TransformError::TauNotMultipleOfHop { .. })));
        cfg.tau_ms = 125.0;
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn name_round_trips() {
        for token in [
            "baseline",
            "mel10",
            "tau125",
            "tau250",
            "tau375",
            "mcadams",
            "mcadams+mel10",
            "mcadams+tau125",
            "mcadams+tau250",
            "mcadams+tau375",
            "lowfreq",
        ] {
            let cfg = TransformConfig::parse_name(token, 1).unwrap();
            assert_eq!(cfg.name(), token, "round trip of {token}");
        }
    }

    #[test]
    fn bad_tokens_are_rejected() {
        assert!(TransformConfig::parse_name("melX", 0).is_err());
        assert!(TransformConfig::parse_name("gauss", 0).is_err());
        assert!(TransformConfig::parse_name("baseline+mcadams", 0).is_err());
        assert!(TransformConfig::parse_name("mcadams+mcadams", 0).is_err());
    }

    #[test]
    fn range_validation() {
        let mut cfg = TransformConfig::mcadams(0);
        cfg.mcadams_range = (0.0, 0.9);
        assert!(cfg.validate().is_err());
        cfg.mcadams_range = (0.5, 1.2);
        assert!(cfg.validate().is_err());
        cfg.mcadams_range = (0.5, 0.9);
        assert!(cfg.validate().is_ok());
    }
}
