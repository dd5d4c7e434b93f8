use std::io::Write;

use serde_json::json;
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::engine::SimRecord;
use crate::error::{Error, Result};

pub const RECORD_HEADER: [&str; 9] =
    ["scheme", "params", "snr_db", "bits_sent", "bit_errors", "index_bit_errors", "ber", "ci95", "seed"];

fn fmt_snr(db: f64) -> String {
    if db.is_infinite() {
        "inf".into()
    } else {
        db.to_string()
    }
}

/// Writes records under the fixed header. Wall time and the
/// low-confidence flag are left to the manifest so the CSV is reproducible
/// byte for byte.
pub fn write_records_csv<W: Write>(records: &[SimRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record([
            r.scheme.clone(),
            r.params.clone(),
            fmt_snr(r.snr_db),
            r.bits_sent.to_string(),
            r.bit_errors.to_string(),
            r.index_bit_errors.to_string(),
            format!("{:.6e}", r.ber),
            format!("{:.6e}", r.ci95),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_to_csv_string(records: &[SimRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records_csv(records, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// Git-style content hash: SHA-256 of `blob <len>\0<content>`, hex encoded.
pub fn content_hash(content: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(format!("blob {}\0", content.len()).as_bytes());
    h.update(content);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// JSON manifest: the config echoed as TOML, its content hash, and the
/// full records including wall time and the low-confidence flag.
pub fn manifest_json(cfg: &ExperimentConfig, workers: usize, records: &[SimRecord]) -> Result<String> {
    let config = cfg.to_toml_string()?;
    let rows: Vec<_> = records
        .iter()
        .map(|r| {
            json!({
                "scheme": r.scheme,
                "params": r.params,
                "snr_db": fmt_snr(r.snr_db),
                "bits_sent": r.bits_sent,
                "bit_errors": r.bit_errors,
                "index_bit_errors": r.index_bit_errors,
                "symbol_errors": r.symbol_errors,
                "ber": r.ber,
                "ci95": r.ci95,
                "seed": r.seed,
                "wall_time_s": r.wall_time_s,
                "low_confidence": r.low_confidence,
            })
        })
        .collect();
    let doc = json!({
        "tool": concat!("imsim ", env!("CARGO_PKG_VERSION")),
        "input_hash": content_hash(config.as_bytes()),
        "workers": workers,
        "config": config,
        "records": rows,
    });
    serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))
}
