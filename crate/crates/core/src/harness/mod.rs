//! Monte Carlo engine, experiment files, result persistence and the
//! built-in presets used to reproduce the reference figures.
//!
//! SNR throughout is Es/N0: average transmitted energy per channel use over
//! the per-antenna noise variance. For a scheme carrying `SE` bits per
//! channel use, `Eb/N0 = Es/N0 - 10 log10(SE)` (see [`SimRecord::eb_n0_db`]).

mod config;
mod engine;
mod output;
mod presets;

pub use config::{ChannelConfig, ExperimentConfig, StopRule, MIN_CONFIDENT_ERRORS};
pub use engine::{ber_curve, run_monte_carlo, run_monte_carlo_as, wilson_halfwidth, SimRecord};
pub use output::{content_hash, manifest_json, records_to_csv_string, write_records_csv, RECORD_HEADER};
pub use presets::{
    fig3_checks, preset, preset_ids, preset_source, reproduce_fig3, reproduce_fig4, Fig3Checks, Fig3Result, Fig4Checks,
    Fig4Result, NamedPoint, Preset, SimSuite, SuiteCurve, SweepSuite, Trend, TrendCheck, FIG3_CURVES,
};

