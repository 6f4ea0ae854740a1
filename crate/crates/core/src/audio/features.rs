//! Log Mel feature matrices and their on-disk forms.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AudioError, FrameGrid, MelFilterbank, PsdMatrix, WindowShape};
use crate::transforms::TransformConfig;

const MAGIC: &[u8; 4] = b"AVF1";

/// Frames x coefficients matrix of log Mel filterbank energies.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub features: Vec<Vec<f64>>,
    pub grid: FrameGrid,
    pub provenance: Option<TransformConfig>,
}

impl FeatureMatrix {
    pub fn n_frames(&self) -> usize {
        self.features.len()
    }

    pub fn n_coeffs(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    /// features[t][k] = ln(max(sum_b fb[k][b] * psd[t][b], floor))
    pub fn from_psd(psd: &PsdMatrix, fb: &MelFilterbank, floor: f64) -> Result<Self, AudioError> {
        if psd.n_bins() != fb.n_bins() {
            return Err(AudioError::BinCountMismatch {
                filterbank: fb.n_bins(),
                psd: psd.n_bins(),
            });
        }
        let features = psd
            .frames
            .iter()
            .map(|row| {
                fb.weights
                    .iter()
                    .map(|filter| {
                        let e: f64 = filter.iter().zip(row).map(|(w, p)| w * p).sum();
                        e.max(floor).ln()
                    })
                    .collect()
            })
            .collect();
        Ok(Self { features, grid: psd.grid, provenance: None })
    }

    /// Binary container: magic "AVF1", LE u32 n_frames, LE u32 n_filters,
    /// LE f32 hop_ms, LE f32 window_ms, row-major LE f32 payload.
    pub fn write_binary<P: AsRef<Path>>(&self, path: P) -> Result<(), AudioError> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        out.write_all(MAGIC)?;
        out.write_all(&(self.n_frames() as u32).to_le_bytes())?;
        out.write_all(&(self.n_coeffs() as u32).to_le_bytes())?;
        out.write_all(&(self.grid.hop_ms as f32).to_le_bytes())?;
        out.write_all(&(self.grid.window_ms as f32).to_le_bytes())?;
        for row in &self.features {
            for &v in row {
                out.write_all(&(v as f32).to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn read_binary<P: AsRef<Path>>(path: P) -> Result<Self, AudioError> {
        let mut input = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(AudioError::FeatureFormat(format!(
                "bad magic {:?}, expected {:?}",
                magic, MAGIC
            )));
        }
        let mut u32buf = [0u8; 4];
        input.read_exact(&mut u32buf)?;
        let n_frames = u32::from_le_bytes(u32buf) as usize;
        input.read_exact(&mut u32buf)?;
        let n_filters = u32::from_le_bytes(u32buf) as usize;
        input.read_exact(&mut u32buf)?;
        let hop_ms = f32::from_le_bytes(u32buf) as f64;
        input.read_exact(&mut u32buf)?;
        let window_ms = f32::from_le_bytes(u32buf) as f64;
        let mut features = Vec::with_capacity(n_frames);
        for _ in 0..n_frames {
            let mut row = Vec::with_capacity(n_filters);
            for _ in 0..n_filters {
                input.read_exact(&mut u32buf)?;
                row.push(f32::from_le_bytes(u32buf) as f64);
            }
            features.push(row);
        }
        let grid = FrameGrid::new(window_ms, hop_ms, WindowShape::Hann)
            .map_err(|_| AudioError::FeatureFormat("invalid grid in header".into()))?;
        Ok(Self { features, grid, provenance: None })
    }

    /// JSON debug form carrying the same fields as the binary container.
    pub fn to_json(&self) -> String {
        let doc = FeatureJson {
            n_frames: self.n_frames(),
            n_filters: self.n_coeffs(),
            hop_ms: self.grid.hop_ms as f32,
            window_ms: self.grid.window_ms as f32,
            features: self
                .features
                .iter()
                .map(|row| row.iter().map(|&v| v as f32).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("feature matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AudioError> {
        let doc: FeatureJson = serde_json::from_str(text)
            .map_err(|e| AudioError::FeatureFormat(e.to_string()))?;
        if doc.features.len() != doc.n_frames
            || doc.features.iter().any(|r| r.len() != doc.n_filters)
        {
            return Err(AudioError::FeatureFormat("shape does not match header".into()));
        }
        let grid = FrameGrid::new(doc.window_ms as f64, doc.hop_ms as f64, WindowShape::Hann)
            .map_err(|_| AudioError::FeatureFormat("invalid grid in header".into()))?;
        Ok(Self {
            features: doc
                .features
                .into_iter()
                .map(|row| row.into_iter().map(|v| v as f64).collect())
                .collect(),
            grid,
            provenance: None,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FeatureJson {
    n_frames: usize,
    n_filters: usize,
    hop_ms: f32,
    window_ms: f32,
    features: Vec<Vec<f32>>,
}
