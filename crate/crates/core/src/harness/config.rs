use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelKind, DEFAULT_TAPS};
use crate::detection::DetectorKind;
use crate::error::{bail, Error, Result};
use crate::schemes::{SchemeConfig, SchemeKind};

/// Bits-error count below which a BER point is flagged low-confidence.
pub const MIN_CONFIDENT_ERRORS: u64 = 100;

fn default_taps() -> usize {
    DEFAULT_TAPS
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    /// Multipath taps of the frequency-selective model.
    #[serde(default = "default_taps")]
    pub taps: usize,
}

impl ChannelConfig {
    pub fn flat() -> Self {
        Self { kind: ChannelKind::FlatMimo, taps: 1 }
    }

    pub fn freq_selective(taps: usize) -> Self {
        Self { kind: ChannelKind::FreqSelectiveMimo, taps }
    }

    /// Frequency-selective for OFDM-type schemes, flat otherwise.
    pub fn default_for(kind: SchemeKind) -> Self {
        if kind.is_frequency() {
            Self::freq_selective(DEFAULT_TAPS)
        } else {
            Self::flat()
        }
    }
}

fn default_min_errors() -> u64 {
    MIN_CONFIDENT_ERRORS
}

fn default_max_bits() -> u64 {
    10_000_000
}

/// Per-SNR-point stopping rule: stop once `min_bits` and `min_bit_errors`
/// are both reached, or when `max_bits` have been sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopRule {
    #[serde(default)]
    pub min_bits: u64,
    #[serde(default = "default_min_errors")]
    pub min_bit_errors: u64,
    #[serde(default = "default_max_bits")]
    pub max_bits: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { min_bits: 0, min_bit_errors: default_min_errors(), max_bits: default_max_bits() }
    }
}

impl StopRule {
    pub fn done(&self, bits: u64, errors: u64) -> bool {
        bits >= self.max_bits || (bits >= self.min_bits && errors >= self.min_bit_errors)
    }
}

/// One Monte Carlo experiment, normally read from a TOML file.
///
/// ```toml
/// label = "example"
/// master_seed = 7
/// detector = "mmse"
/// snr_db = [0.0, 10.0, 20.0]
///
/// [scheme]
/// kind = "mimo_ofdm_im"
/// nt = 4
/// nr = 4
/// n_subcarriers = 128
/// group_size = 4
/// active = 2
/// constellation = { kind = "psk", order = 2 }
///
/// [channel]
/// kind = "freq_selective_mimo"
/// taps = 10
///
/// [stop]
/// min_bit_errors = 100
/// max_bits = 1_000_000
/// ```
///
/// `snr_db` accepts `inf` for a noiseless point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub scheme: SchemeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelConfig>,
    /// Es/N0 grid in dB, strictly increasing.
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub stop: StopRule,
    pub detector: DetectorKind,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(scheme: SchemeConfig, detector: DetectorKind, snr_db: Vec<f64>) -> Self {
        Self {
            label: None,
            scheme,
            channel: None,
            snr_db,
            stop: StopRule::default(),
            detector,
            master_seed: 0,
            output: None,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn channel(&self) -> ChannelConfig {
        self.channel.unwrap_or_else(|| ChannelConfig::default_for(self.scheme.kind))
    }

    /// Label used in output rows.
    pub fn display_label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.scheme.label().to_string())
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        if self.snr_db.is_empty() {
            bail!(Config, "snr_db must list at least one point");
        }
        if self.snr_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            bail!(Config, "snr_db entries must be finite or +inf");
        }
        if self.snr_db.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Config, "snr_db must be strictly increasing");
        }
        if self.stop.max_bits == 0 {
            bail!(Config, "stop.max_bits must be positive");
        }
        let ch = self.channel();
        match ch.kind {
            ChannelKind::FreqSelectiveMimo => {
                if !self.scheme.kind.is_frequency() {
                    bail!(Config, "{} is single-carrier; use a flat_mimo channel", self.scheme.label());
                }
                if ch.taps == 0 || ch.taps > self.scheme.n_subcarriers {
                    bail!(Config, "channel.taps must be in 1..={}", self.scheme.n_subcarriers);
                }
            }
            ChannelKind::FlatMimo => {}
        }
        let dsm = self.scheme.kind == SchemeKind::Dsm;
        match self.detector {
            DetectorKind::DsmNoncoherent if !dsm => {
                bail!(Config, "dsm_noncoherent detection requires a D-SM scheme, got {}", self.scheme.label())
            }
            DetectorKind::Ml | DetectorKind::Mmse if dsm => {
                bail!(Config, "D-SM is detected noncoherently; use detector = \"dsm_noncoherent\"")
            }
            _ => Ok(()),
        }
    }
}
