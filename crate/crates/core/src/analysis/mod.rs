//! Semi-analytic performance: union-bound error probability over Rayleigh
//! fading, coding-gain and diversity-order extraction, and comparison
//! tables across schemes.
//!
//! The high-SNR model is `ABEP ~ (Gc * snr)^(-Gd)`: `Gd` is the diversity
//! order (log-log slope) and `Gc` the coding gain (horizontal shift).

mod fit;
mod pep;
mod report;
mod sweep;
mod union_bound;

pub use fit::{fit_coding_gain, snr_at_abep, GainFit, DIVERSITY_MISMATCH, GAIN_TARGET_ABEP, TAIL_ABEP};
pub use pep::{pep_rayleigh, FadingModel, PepProfile};
pub use report::{format_report_table, report_scheme_comparison, write_report_csv, ComparisonRow, REPORT_HEADER};
pub use sweep::{sweep_se_vs_coding_gain, write_sweep_csv, SweepPoint, SweepRow, SWEEP_HEADER};
pub use union_bound::{union_bound_abep, AbepCurve, CurveSource, DistanceSpectrum, MAX_PAIRS};

/// Evenly spaced dB grid from `start` to `stop` inclusive.
pub fn db_grid(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}
