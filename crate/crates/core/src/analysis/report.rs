use std::fmt::Write as _;
use std::io::Write;

use super::fit::fit_coding_gain;
use super::union_bound::{union_bound_abep, DistanceSpectrum};
use super::db_grid;
use crate::error::{Error, Result};
use crate::schemes::{spectral_efficiency, Scheme, SchemeConfig};

pub const REPORT_HEADER: [&str; 9] = [
    "scheme",
    "params",
    "rf_chains",
    "se_fractional",
    "se_practical",
    "codebook_size",
    "diversity_order",
    "csit",
    "csir",
];

/// One row of the scheme comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub scheme: String,
    pub params: String,
    pub rf_chains: usize,
    pub se_fractional: f64,
    pub se_practical: f64,
    /// Legal transmit blocks per block.
    pub codebook_size: u64,
    /// Union-bound tail slope; `None` when the codebook is too large to bound.
    pub diversity_order: Option<f64>,
    pub csit: bool,
    pub csir: bool,
}

/// Measures each scheme from first principles: RF chains and spectral
/// efficiency from the configuration, diversity from the union-bound tail.
pub fn report_scheme_comparison(configs: &[SchemeConfig]) -> Result<Vec<ComparisonRow>> {
    let grid = db_grid(0.0, 60.0, 2.0);
    configs
        .iter()
        .map(|cfg| {
            let scheme = Scheme::<f64>::new(cfg.clone())?;
            let se = spectral_efficiency(cfg)?;
            let diversity_order = match DistanceSpectrum::of_scheme(&scheme) {
                Ok(_) => {
                    let curve = union_bound_abep(&scheme, &grid)?;
                    Some(fit_coding_gain(&curve, &curve)?.diversity_order)
                }
                Err(Error::Capacity(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(ComparisonRow {
                scheme: cfg.label().to_string(),
                params: cfg.params(),
                rf_chains: cfg.rf_chains(),
                se_fractional: se.fractional,
                se_practical: se.practical,
                codebook_size: 1u64 << scheme.block_bits(),
                diversity_order,
                csit: false,
                csir: cfg.needs_csir(),
            })
        })
        .collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Fixed-width text rendering for terminals.
pub fn format_report_table(rows: &[ComparisonRow]) -> String {
    let mut s = String::new();
    let w = rows.iter().map(|r| r.params.len()).max().unwrap_or(0).max(6);
    let _ = writeln!(
        s,
        "{:<14} {:<w$} {:>3} {:>8} {:>8} {:>9} {:>9} {:>4} {:>4}",
        "scheme", "params", "RF", "SE frac", "SE prac", "codebook", "diversity", "CSIT", "CSIR"
    );
    for r in rows {
        let div = r.diversity_order.map_or_else(|| "n/a".to_string(), |d| format!("{d:.2}"));
        let _ = writeln!(
            s,
            "{:<14} {:<w$} {:>3} {:>8.3} {:>8.3} {:>9} {:>9} {:>4} {:>4}",
            r.scheme,
            r.params,
            r.rf_chains,
            r.se_fractional,
            r.se_practical,
            r.codebook_size,
            div,
            yes_no(r.csit),
            yes_no(r.csir)
        );
    }
    s
}

pub fn write_report_csv<W: Write>(rows: &[ComparisonRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in rows {
        w.write_record([
            r.scheme.clone(),
            r.params.clone(),
            r.rf_chains.to_string(),
            format!("{:.6}", r.se_fractional),
            format!("{:.6}", r.se_practical),
            r.codebook_size.to_string(),
            r.diversity_order.map_or_else(String::new, |d| format!("{d:.4}")),
            yes_no(r.csit).to_string(),
            yes_no(r.csir).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
