use std::io::Write;

use serde::{Deserialize, Serialize};

use super::fit::fit_coding_gain;
use super::union_bound::union_bound_abep;
use crate::error::Result;
use crate::schemes::{spectral_efficiency, Scheme, SchemeConfig};

pub const SWEEP_HEADER: [&str; 7] =
    ["scheme", "params", "se_fractional", "se_practical", "coding_gain_db", "diversity_order", "reference"];

/// One configuration of a spectral-efficiency / coding-gain sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    /// Curve the point belongs to (e.g. `G-SM Na=2`).
    #[serde(default)]
    pub family: Option<String>,
    pub scheme: SchemeConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub family: Option<String>,
    pub scheme: String,
    pub params: String,
    pub se_fractional: f64,
    pub se_practical: f64,
    pub coding_gain_db: f64,
    pub diversity_order: f64,
    pub diversity_mismatch: bool,
    pub reference: String,
}

fn describe(cfg: &SchemeConfig) -> String {
    format!("{} {}", cfg.label(), cfg.params())
}

/// Union-bound coding gain of every point relative to `reference`, read at
/// the common target ABEP.
pub fn sweep_se_vs_coding_gain(
    points: &[SweepPoint],
    reference: &SchemeConfig,
    snr_grid_db: &[f64],
) -> Result<Vec<SweepRow>> {
    let ref_curve = union_bound_abep(&Scheme::<f64>::new(reference.clone())?, snr_grid_db)?;
    points
        .iter()
        .map(|p| {
            let scheme = Scheme::<f64>::new(p.scheme.clone())?;
            let curve = union_bound_abep(&scheme, snr_grid_db)?;
            let fit = fit_coding_gain(&curve, &ref_curve)?;
            let se = spectral_efficiency(&p.scheme)?;
            Ok(SweepRow {
                family: p.family.clone(),
                scheme: p.scheme.label().to_string(),
                params: p.scheme.params(),
                se_fractional: se.fractional,
                se_practical: se.practical,
                coding_gain_db: fit.coding_gain_db,
                diversity_order: fit.diversity_order,
                diversity_mismatch: fit.diversity_mismatch,
                reference: describe(reference),
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.clone(),
            r.params.clone(),
            format!("{:.6}", r.se_fractional),
            format!("{:.6}", r.se_practical),
            format!("{:.4}", r.coding_gain_db),
            format!("{:.4}", r.diversity_order),
            r.reference.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
