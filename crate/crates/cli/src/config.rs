//! Experiment configuration: flat JSON file, CLI overrides, provenance hash.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Resolved configuration for the experiment runners. Every field has a
/// default; a config file supplies any subset as a flat JSON object and
/// command-line flags override the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Trials per class (correlation study) or per Q/target combination
    /// (bandwidth sweep).
    pub trials: usize,
    /// Harmonic count of the random draws.
    pub k: usize,
    /// Quality factor of the correlation study and the filtering study.
    pub q: f64,
    /// Time-bandwidth product of the correlation study and the filtering
    /// study.
    pub tbp: f64,
    /// Carrier frequency (Hz).
    pub fc: f64,
    /// Quality factors of the bandwidth sweep.
    pub q_list: Vec<f64>,
    /// Time-bandwidth products of the bandwidth sweep, paired with `q_list`.
    pub tbp_list: Vec<f64>,
    /// Targeted angles of maximum FI (degrees) for the bandwidth sweep.
    pub targets_deg: Vec<f64>,
    /// Master seed.
    pub seed: u64,
    /// Bearing scan extent (degrees).
    pub scan_max_deg: f64,
    /// Bearing scan step (degrees).
    pub scan_step_deg: f64,
    /// Number of frequencies in the echo-model band.
    pub band_points: usize,
    /// Aperture length in wavelengths at the carrier.
    pub aperture_wavelengths: f64,
    /// Seed of the representative waveform used by the filtering study.
    pub fig4_waveform_seed: u64,
    /// Sound speed (m/s).
    pub sound_speed: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            k: 32,
            q: 5.0,
            tbp: 100.0,
            fc: 500.0,
            q_list: vec![20.0, 10.0, 5.0],
            tbp_list: vec![100.0, 200.0, 400.0],
            targets_deg: vec![2.0, 3.0, 4.0, 5.0],
            seed: 20_260_810,
            scan_max_deg: 20.0,
            scan_step_deg: 0.01,
            band_points: 256,
            aperture_wavelengths: 10.0,
            fig4_waveform_seed: 16,
            sound_speed: 1500.0,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {p:?}: {e}")))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {p:?}: {e}")))
            }
        }
    }

    /// Restore publication-scale trial counts.
    pub fn apply_paper_scale(&mut self, fig3: bool) {
        self.trials = if fig3 { 2000 } else { 1000 };
    }

    /// Bearing scan grid in radians.
    pub fn theta_grid(&self) -> Vec<f64> {
        let n = (self.scan_max_deg / self.scan_step_deg).round() as usize;
        (0..=n).map(|i| (i as f64 * self.scan_step_deg).to_radians()).collect()
    }

    /// Stable hash of the resolved configuration (FNV-1a over the canonical
    /// JSON), stamped into every output file.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }

    /// Provenance line embedded as the first comment of CSV/SVG outputs.
    pub fn provenance(&self) -> String {
        format!("wblab {} config_hash={}", wblab_core::VERSION, self.hash())
    }
}

/// Output directory helper: create and return the joined path.
pub fn ensure_out_dir(dir: &Path) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
