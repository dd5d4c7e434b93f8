use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{ChannelConfig, ExperimentConfig, StopRule};
use super::engine::{run_monte_carlo, SimRecord};
use crate::analysis::{db_grid, sweep_se_vs_coding_gain, SweepPoint, SweepRow};
use crate::detection::DetectorKind;
use crate::error::{bail, Error, Result};
use crate::schemes::SchemeConfig;

const BUILTIN: [(&str, &str); 6] = [
    ("smoke", include_str!("../../presets/smoke.toml")),
    ("rayleigh-bpsk", include_str!("../../presets/rayleigh-bpsk.toml")),
    ("fig3-4bpshz", include_str!("../../presets/fig3-4bpshz.toml")),
    ("fig3-8bpshz", include_str!("../../presets/fig3-8bpshz.toml")),
    ("fig4a", include_str!("../../presets/fig4a.toml")),
    ("fig4b", include_str!("../../presets/fig4b.toml")),
];

/// Curve labels a `fig3-*` preset must contain, in this order.
pub const FIG3_CURVES: [&str; 4] = ["MIMO-OFDM-IM", "GSFIM", "SM-OFDM", "V-BLAST"];
const FIG3_IM: [&str; 3] = ["MIMO-OFDM-IM", "GSFIM", "SM-OFDM"];

pub fn preset_ids() -> Vec<&'static str> {
    BUILTIN.iter().map(|(id, _)| *id).collect()
}

/// Raw TOML text of a built-in preset.
pub fn preset_source(id: &str) -> Result<&'static str> {
    match BUILTIN.iter().find(|(k, _)| *k == id) {
        Some((_, src)) => Ok(src),
        None => bail!(Config, "unknown preset `{id}` (known: {})", preset_ids().join(", ")),
    }
}

/// A set of Monte Carlo curves sharing grid, channel, stop rule and seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimSuite {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub snr_db: Vec<f64>,
    pub detector: DetectorKind,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<ChannelConfig>,
    #[serde(default)]
    pub stop: StopRule,
    #[serde(rename = "curve")]
    pub curves: Vec<SuiteCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteCurve {
    pub label: String,
    /// Overrides the suite detector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detector: Option<DetectorKind>,
    pub scheme: SchemeConfig,
}

impl SimSuite {
    pub fn experiments(&self) -> Vec<ExperimentConfig> {
        self.curves
            .iter()
            .map(|c| ExperimentConfig {
                label: Some(c.label.clone()),
                scheme: c.scheme.clone(),
                channel: self.channel,
                snr_db: self.snr_db.clone(),
                stop: self.stop,
                detector: c.detector.unwrap_or(self.detector),
                master_seed: self.master_seed,
                output: None,
            })
            .collect()
    }

    /// Runs every curve; records are grouped per curve in preset order.
    pub fn run(&self, workers: usize) -> Result<Vec<SimRecord>> {
        let mut out = Vec::new();
        for exp in self.experiments() {
            out.extend(run_monte_carlo(&exp, workers)?);
        }
        Ok(out)
    }
}

/// Dominance relation to check on a union-bound sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Trend {
    /// Raising the SE from `base` by adding index bits (`via_index`) costs
    /// less coding gain than the same SE step by constellation order alone
    /// (`via_order`).
    StepCheaper { base: String, via_index: String, via_order: String },
    /// `gain(a) - gain(b) > 0` for every `[a, b]`.
    AdvantagePositive { pairs: Vec<[String; 2]> },
    /// `gain(a) - gain(b)` strictly decreases along `pairs`.
    AdvantageDecreasing { pairs: Vec<[String; 2]> },
    /// The named point has zero coding gain (within 1e-9 dB).
    ZeroGain { point: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPoint {
    pub id: String,
    #[serde(default)]
    pub family: Option<String>,
    pub scheme: SchemeConfig,
}

/// A coding-gain sweep against a fixed reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSuite {
    pub id: String,
    #[serde(default)]
    pub description: String,
    /// `[start, stop, step]` in dB.
    pub snr_grid: [f64; 3],
    pub reference: SchemeConfig,
    #[serde(rename = "point")]
    pub points: Vec<NamedPoint>,
    #[serde(default, rename = "trend")]
    pub trends: Vec<Trend>,
}

#[derive(Debug, Clone)]
pub enum Preset {
    Sim(SimSuite),
    Sweep(SweepSuite),
}

impl Preset {
    pub fn id(&self) -> &str {
        match self {
            Preset::Sim(s) => &s.id,
            Preset::Sweep(s) => &s.id,
        }
    }

    pub fn description(&self) -> &str {
        match self {
            Preset::Sim(s) => &s.description,
            Preset::Sweep(s) => &s.description,
        }
    }

    /// Parses preset text; sweep presets are recognised by `snr_grid`.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let value: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let parsed = if value.contains_key("snr_grid") {
            toml::from_str(text).map(Preset::Sweep)
        } else {
            toml::from_str(text).map(Preset::Sim)
        };
        let p = parsed.map_err(|e| Error::Parse(e.to_string()))?;
        if let Preset::Sim(s) = &p {
            for e in s.experiments() {
                e.validate()?;
            }
        }
        Ok(p)
    }
}

pub fn preset(id: &str) -> Result<Preset> {
    Preset::from_toml_str(preset_source(id)?)
}

/// Ordering assertions on the MIMO-OFDM comparison curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Checks {
    /// Curve labels are exactly [`FIG3_CURVES`].
    pub curves_complete: bool,
    /// SM-OFDM has the lowest BER among the IM schemes at the lowest SNR.
    pub sm_ofdm_best_low_among_im: bool,
    /// MIMO-OFDM-IM has the lowest BER of all curves at the highest SNR.
    pub mimo_ofdm_im_best_high: bool,
    /// SM-OFDM has the highest BER of all curves at the highest SNR.
    pub sm_ofdm_worst_high: bool,
    /// Every IM curve is above V-BLAST at the lowest SNR.
    pub im_worse_than_vblast_low: bool,
    /// Per IM curve: below V-BLAST at the highest SNR.
    pub im_beats_vblast_high: Vec<(String, bool)>,
}

impl Fig3Checks {
    pub fn all_im_beat_vblast_high(&self) -> bool {
        self.im_beats_vblast_high.iter().all(|(_, ok)| *ok)
    }
}

#[derive(Debug, Clone)]
pub struct Fig3Result {
    pub suite: SimSuite,
    pub records: Vec<SimRecord>,
    pub checks: Fig3Checks,
}

pub fn fig3_checks(records: &[SimRecord]) -> Result<Fig3Checks> {
    let mut curves: BTreeMap<&str, Vec<&SimRecord>> = BTreeMap::new();
    for r in records {
        curves.entry(r.scheme.as_str()).or_default().push(r);
    }
    let mut labels: Vec<&str> = curves.keys().copied().collect();
    labels.sort_unstable();
    let mut want = FIG3_CURVES.to_vec();
    want.sort_unstable();
    let curves_complete = labels == want;
    let at = |label: &str, first: bool| -> Result<f64> {
        let c = curves.get(label).ok_or_else(|| Error::Config(format!("missing curve {label}")))?;
        let r = if first { c.first() } else { c.last() };
        Ok(r.expect("non-empty curve").ber)
    };
    let mut low = BTreeMap::new();
    let mut high = BTreeMap::new();
    for l in FIG3_CURVES {
        low.insert(l, at(l, true)?);
        high.insert(l, at(l, false)?);
    }
    let vb_low = low["V-BLAST"];
    let vb_high = high["V-BLAST"];
    Ok(Fig3Checks {
        curves_complete,
        sm_ofdm_best_low_among_im: FIG3_IM.iter().all(|l| *l == "SM-OFDM" || low["SM-OFDM"] < low[l]),
        mimo_ofdm_im_best_high: FIG3_CURVES.iter().all(|l| *l == "MIMO-OFDM-IM" || high["MIMO-OFDM-IM"] < high[l]),
        sm_ofdm_worst_high: FIG3_CURVES.iter().all(|l| *l == "SM-OFDM" || high["SM-OFDM"] > high[l]),
        im_worse_than_vblast_low: FIG3_IM.iter().all(|l| low[l] > vb_low),
        im_beats_vblast_high: FIG3_IM.iter().map(|l| (l.to_string(), high[l] < vb_high)).collect(),
    })
}

/// Runs a `fig3-*` preset and evaluates its curve orderings.
pub fn reproduce_fig3(id: &str, workers: usize) -> Result<Fig3Result> {
    let Preset::Sim(suite) = preset(id)? else {
        bail!(Config, "preset `{id}` is not a simulation preset");
    };
    let records = suite.run(workers)?;
    let checks = fig3_checks(&records)?;
    Ok(Fig3Result { suite, records, checks })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendCheck {
    pub description: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Checks {
    pub trends: Vec<TrendCheck>,
}

impl Fig4Checks {
    pub fn passed(&self) -> usize {
        self.trends.iter().filter(|t| t.pass).count()
    }
}

#[derive(Debug, Clone)]
pub struct Fig4Result {
    pub suite: SweepSuite,
    /// Rows in point order.
    pub rows: Vec<SweepRow>,
    pub checks: Fig4Checks,
}

impl Fig4Result {
    pub fn gain(&self, id: &str) -> Option<f64> {
        let i = self.suite.points.iter().position(|p| p.id == id)?;
        Some(self.rows[i].coding_gain_db)
    }

    pub fn row(&self, id: &str) -> Option<&SweepRow> {
        let i = self.suite.points.iter().position(|p| p.id == id)?;
        Some(&self.rows[i])
    }
}

fn evaluate_trend(t: &Trend, res: &Fig4Result) -> Result<TrendCheck> {
    let gain = |id: &str| res.gain(id).ok_or_else(|| Error::Config(format!("trend names unknown point `{id}`")));
    let se = |id: &str| res.row(id).map(|r| r.se_practical).unwrap_or(f64::NAN);
    Ok(match t {
        Trend::StepCheaper { base, via_index, via_order } => {
            let (g0, gi, go) = (gain(base)?, gain(via_index)?, gain(via_order)?);
            if se(via_index) != se(via_order) || se(via_index) <= se(base) {
                bail!(Config, "step {base} -> {via_index} / {via_order} is not an equal-SE increase");
            }
            TrendCheck {
                description: format!(
                    "{base} -> {via_index} costs {:.2} dB < {base} -> {via_order} costs {:.2} dB",
                    g0 - gi,
                    g0 - go
                ),
                pass: g0 - gi < g0 - go,
            }
        }
        Trend::AdvantagePositive { pairs } => {
            let adv: Vec<f64> = pairs.iter().map(|[a, b]| Ok(gain(a)? - gain(b)?)).collect::<Result<_>>()?;
            TrendCheck {
                description: format!("advantages {} all positive", fmt_pairs(pairs, &adv)),
                pass: adv.iter().all(|a| *a > 0.0),
            }
        }
        Trend::AdvantageDecreasing { pairs } => {
            let adv: Vec<f64> = pairs.iter().map(|[a, b]| Ok(gain(a)? - gain(b)?)).collect::<Result<_>>()?;
            TrendCheck {
                description: format!("advantages {} strictly decreasing", fmt_pairs(pairs, &adv)),
                pass: adv.windows(2).all(|w| w[1] < w[0]),
            }
        }
        Trend::ZeroGain { point } => {
            let g = gain(point)?;
            TrendCheck { description: format!("{point} gain {g:.3} dB is zero"), pass: g.abs() < 1e-9 }
        }
    })
}

fn fmt_pairs(pairs: &[[String; 2]], adv: &[f64]) -> String {
    pairs.iter().zip(adv).map(|([a, b], v)| format!("{a}-{b}={v:.2}dB")).collect::<Vec<_>>().join(", ")
}

impl SweepSuite {
    pub fn grid(&self) -> Vec<f64> {
        let [a, b, s] = self.snr_grid;
        db_grid(a, b, s)
    }

    pub fn run(&self) -> Result<Fig4Result> {
        let points: Vec<SweepPoint> = self
            .points
            .iter()
            .map(|p| SweepPoint { family: p.family.clone().or_else(|| Some(p.id.clone())), scheme: p.scheme.clone() })
            .collect();
        let rows = sweep_se_vs_coding_gain(&points, &self.reference, &self.grid())?;
        let mut res = Fig4Result { suite: self.clone(), rows, checks: Fig4Checks { trends: Vec::new() } };
        res.checks.trends = self.trends.iter().map(|t| evaluate_trend(t, &res)).collect::<Result<_>>()?;
        Ok(res)
    }
}

/// Union-bound coding-gain sweep for a `fig4*` preset, with its trend checks.
pub fn reproduce_fig4(id: &str) -> Result<Fig4Result> {
    let Preset::Sweep(suite) = preset(id)? else {
        bail!(Config, "preset `{id}` is not a sweep preset");
    };
    suite.run()
}
