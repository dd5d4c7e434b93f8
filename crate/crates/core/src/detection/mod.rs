//! Receivers: exhaustive ML over block codebooks, two-stage MMSE for the
//! MIMO-OFDM schemes, and noncoherent detection for D-SM.
//!
//! Every detector searches legal activation patterns only, and ties are
//! broken towards the lowest codebook (or pattern) rank.

mod dsm;
mod ml;
mod mmse;

pub use dsm::detect_dsm_noncoherent;
pub use ml::{detect_ml, MlDetector};
pub use mmse::detect_mmse;

use serde::{Deserialize, Serialize};

use crate::numerics::{ActivationPattern, CMat};
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorKind {
    Ml,
    Mmse,
    DsmNoncoherent,
}

impl DetectorKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Ml => "ML",
            Self::Mmse => "MMSE",
            Self::DsmNoncoherent => "DSM-noncoherent",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult<T> {
    pub bits: Vec<u8>,
    pub detected_pattern: Vec<ActivationPattern>,
    /// Decision metric (squared Euclidean distance of the chosen hypothesis).
    pub metric: T,
    /// Whether every detected pattern lies in the legal set.
    pub legal: bool,
}

impl<T: Real> DetectionResult<T> {
    fn empty() -> Self {
        Self { bits: Vec::new(), detected_pattern: Vec::new(), metric: T::zero(), legal: true }
    }

    fn append(&mut self, other: DetectionResult<T>) {
        self.bits.extend(other.bits);
        self.detected_pattern.extend(other.detected_pattern);
        self.metric += other.metric;
        self.legal &= other.legal;
    }
}

/// Received columns belonging to one block.
pub(crate) fn block_columns<T: Real>(y: &CMat<T>, cols: &[usize]) -> CMat<T> {
    CMat::from_fn(y.rows(), cols.len(), |r, j| y[(r, cols[j])])
}
