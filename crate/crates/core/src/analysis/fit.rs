use super::union_bound::AbepCurve;
use crate::error::{bail, Result};
use crate::schemes::SchemeConfig;

/// Points strictly below this ABEP form the high-SNR tail.
pub const TAIL_ABEP: f64 = 1e-3;
/// Coding gain is read as the horizontal shift at this ABEP.
pub const GAIN_TARGET_ABEP: f64 = 1e-4;
/// Slope difference beyond which the diversity orders count as mismatched.
pub const DIVERSITY_MISMATCH: f64 = 0.3;
const MIN_TAIL_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct GainFit {
    /// dB by which `curve` is to the left of `reference` at the target ABEP.
    pub coding_gain_db: f64,
    /// Negative least-squares slope of log10 ABEP vs log10 SNR on the tail.
    pub diversity_order: f64,
    pub reference_diversity: f64,
    /// RMS residual of the tail fit, in decades.
    pub fit_residual: f64,
    pub diversity_mismatch: bool,
    pub reference: Option<SchemeConfig>,
}

struct TailFit {
    slope: f64,
    rms: f64,
}

fn tail_fit(curve: &AbepCurve) -> Result<TailFit> {
    let pts: Vec<(f64, f64)> = curve
        .snr_db
        .iter()
        .zip(&curve.abep)
        .filter(|(_, &p)| p > 0.0 && p < TAIL_ABEP)
        .map(|(&db, &p)| (db / 10.0, p.log10()))
        .collect();
    if pts.len() < MIN_TAIL_POINTS {
        bail!(Domain, "curve has {} points below ABEP {TAIL_ABEP}; need {MIN_TAIL_POINTS}", pts.len());
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rms = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok(TailFit { slope, rms })
}

/// SNR (dB) at which the curve first falls to `target`, interpolating
/// log10 ABEP linearly in dB.
pub fn snr_at_abep(curve: &AbepCurve, target: f64) -> Result<f64> {
    let lt = target.log10();
    for i in 1..curve.abep.len() {
        let (p0, p1) = (curve.abep[i - 1], curve.abep[i]);
        if p0 >= target && p1 <= target && p1 > 0.0 {
            let (l0, l1) = (p0.log10(), p1.log10());
            let (s0, s1) = (curve.snr_db[i - 1], curve.snr_db[i]);
            if l0 == l1 {
                return Ok(s0);
            }
            return Ok(s0 + (lt - l0) * (s1 - s0) / (l1 - l0));
        }
    }
    bail!(Domain, "curve never crosses ABEP {target:e}")
}

/// Diversity order of `curve` and its coding gain relative to `reference`.
pub fn fit_coding_gain(curve: &AbepCurve, reference: &AbepCurve) -> Result<GainFit> {
    let own = tail_fit(curve)?;
    let refr = tail_fit(reference)?;
    let gain = snr_at_abep(reference, GAIN_TARGET_ABEP)? - snr_at_abep(curve, GAIN_TARGET_ABEP)?;
    let diversity_order = -own.slope;
    if !(diversity_order > 0.0) {
        bail!(Numeric, "non-positive diversity order {diversity_order}");
    }
    Ok(GainFit {
        coding_gain_db: gain,
        diversity_order,
        reference_diversity: -refr.slope,
        fit_residual: own.rms,
        diversity_mismatch: (own.slope - refr.slope).abs() > DIVERSITY_MISMATCH,
        reference: reference.scheme.clone(),
    })
}
