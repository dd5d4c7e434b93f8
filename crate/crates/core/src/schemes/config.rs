use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::numerics::combinadic::{binom, floor_log2};
use crate::numerics::{ConstellationKind, ConstellationSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    Sm,
    Gsm,
    Vblast,
    Qsm,
    Dsm,
    Ofdm,
    ImOfdm,
    SmOfdm,
    MimoOfdmIm,
    Gsfim,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 10] = [
        Self::Sm,
        Self::Gsm,
        Self::Vblast,
        Self::Qsm,
        Self::Dsm,
        Self::Ofdm,
        Self::ImOfdm,
        Self::SmOfdm,
        Self::MimoOfdmIm,
        Self::Gsfim,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Sm => "SM",
            Self::Gsm => "G-SM",
            Self::Vblast => "V-BLAST",
            Self::Qsm => "QSM",
            Self::Dsm => "D-SM",
            Self::Ofdm => "OFDM",
            Self::ImOfdm => "IM-OFDM",
            Self::SmOfdm => "SM-OFDM",
            Self::MimoOfdmIm => "MIMO-OFDM-IM",
            // the index mapping is a declared stand-in for the original
            Self::Gsfim => "GSFIM-like",
        }
    }

    /// Parses the short names used on the command line (`sm`, `gsm`, ...).
    pub fn parse(s: &str) -> Result<Self> {
        let k = match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "sm" => Self::Sm,
            "gsm" | "g_sm" => Self::Gsm,
            "vblast" | "v_blast" => Self::Vblast,
            "qsm" => Self::Qsm,
            "dsm" | "d_sm" => Self::Dsm,
            "ofdm" => Self::Ofdm,
            "im_ofdm" | "imofdm" => Self::ImOfdm,
            "sm_ofdm" | "smofdm" => Self::SmOfdm,
            "mimo_ofdm_im" | "mimoofdmim" => Self::MimoOfdmIm,
            "gsfim" => Self::Gsfim,
            other => bail!(Config, "unknown scheme `{other}`"),
        };
        Ok(k)
    }

    /// Schemes whose frame spans OFDM subcarriers.
    pub fn is_frequency(self) -> bool {
        matches!(self, Self::Ofdm | Self::ImOfdm | Self::SmOfdm | Self::MimoOfdmIm | Self::Gsfim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Grouping {
    /// Group `g` owns subcarriers `g, g + G, g + 2G, ...`.
    #[default]
    Interleaved,
    /// Group `g` owns a contiguous run of subcarriers.
    Localized,
}

/// `GSFIM(antennas, subcarriers; active)` space-frequency block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GsfimBlock {
    pub antennas: usize,
    pub subcarriers: usize,
    pub active: usize,
}

fn one() -> usize {
    1
}

fn yes() -> bool {
    true
}

/// Full parameterization of one scheme instance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    #[serde(default = "one")]
    pub nt: usize,
    #[serde(default = "one")]
    pub nr: usize,
    /// Active antennas (G-SM only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub na: Option<usize>,
    #[serde(default = "one")]
    pub n_subcarriers: usize,
    /// Subcarriers per IM group (`n`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_size: Option<usize>,
    /// Active subcarriers per IM group (`k`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub active: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gsfim: Option<GsfimBlock>,
    pub constellation: ConstellationSpec,
    #[serde(default)]
    pub grouping: Grouping,
    #[serde(default = "yes")]
    pub power_reallocation: bool,
}

impl SchemeConfig {
    fn base(kind: SchemeKind, nt: usize, nr: usize, constellation: ConstellationSpec) -> Self {
        Self {
            kind,
            nt,
            nr,
            na: None,
            n_subcarriers: 1,
            group_size: None,
            active: None,
            gsfim: None,
            constellation,
            grouping: Grouping::Interleaved,
            power_reallocation: true,
        }
    }

    pub fn sm(nt: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self::base(SchemeKind::Sm, nt, nr, c)
    }

    pub fn gsm(nt: usize, na: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self { na: Some(na), ..Self::base(SchemeKind::Gsm, nt, nr, c) }
    }

    pub fn vblast(nt: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self::base(SchemeKind::Vblast, nt, nr, c)
    }

    pub fn qsm(nt: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self::base(SchemeKind::Qsm, nt, nr, c)
    }

    pub fn dsm(nt: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self::base(SchemeKind::Dsm, nt, nr, c)
    }

    pub fn ofdm(n_subcarriers: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self { n_subcarriers, ..Self::base(SchemeKind::Ofdm, 1, nr, c) }
    }

    pub fn im_ofdm(n_subcarriers: usize, n: usize, k: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self {
            n_subcarriers,
            group_size: Some(n),
            active: Some(k),
            ..Self::base(SchemeKind::ImOfdm, 1, nr, c)
        }
    }

    pub fn sm_ofdm(nt: usize, n_subcarriers: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self { n_subcarriers, ..Self::base(SchemeKind::SmOfdm, nt, nr, c) }
    }

    pub fn mimo_ofdm_im(nt: usize, n_subcarriers: usize, n: usize, k: usize, nr: usize, c: ConstellationSpec) -> Self {
        Self {
            n_subcarriers,
            group_size: Some(n),
            active: Some(k),
            ..Self::base(SchemeKind::MimoOfdmIm, nt, nr, c)
        }
    }

    pub fn gsfim(nt: usize, n_subcarriers: usize, block: GsfimBlock, nr: usize, c: ConstellationSpec) -> Self {
        Self { n_subcarriers, gsfim: Some(block), ..Self::base(SchemeKind::Gsfim, nt, nr, c) }
    }

    pub fn with_grouping(mut self, grouping: Grouping) -> Self {
        self.grouping = grouping;
        self
    }

    pub fn with_power_reallocation(mut self, on: bool) -> Self {
        self.power_reallocation = on;
        self
    }

    pub fn label(&self) -> &'static str {
        self.kind.label()
    }

    /// Compact, comma-free parameter string for tables.
    pub fn params(&self) -> String {
        let m = self.constellation.label();
        match self.kind {
            SchemeKind::Sm | SchemeKind::Vblast | SchemeKind::Qsm | SchemeKind::Dsm => {
                format!("nt={} nr={} {m}", self.nt, self.nr)
            }
            SchemeKind::Gsm => format!("nt={} na={} nr={} {m}", self.nt, self.na.unwrap_or(0), self.nr),
            SchemeKind::Ofdm => format!("N={} nr={} {m}", self.n_subcarriers, self.nr),
            SchemeKind::SmOfdm => format!("nt={} N={} nr={} {m}", self.nt, self.n_subcarriers, self.nr),
            SchemeKind::ImOfdm | SchemeKind::MimoOfdmIm => format!(
                "nt={} N={} (n={} k={}) nr={} {m} {} realloc={}",
                self.nt,
                self.n_subcarriers,
                self.group_size.unwrap_or(0),
                self.active.unwrap_or(0),
                self.nr,
                grouping_name(self.grouping),
                self.power_reallocation
            ),
            SchemeKind::Gsfim => {
                let g = self.gsfim.unwrap_or(GsfimBlock { antennas: 0, subcarriers: 0, active: 0 });
                format!(
                    "nt={} N={} GSFIM({}x{};{}) nr={} {m} {}",
                    self.nt,
                    self.n_subcarriers,
                    g.antennas,
                    g.subcarriers,
                    g.active,
                    self.nr,
                    grouping_name(self.grouping)
                )
            }
        }
    }

    fn im_group(&self) -> Result<(usize, usize)> {
        match (self.group_size, self.active) {
            (Some(n), Some(k)) => Ok((n, k)),
            _ => bail!(Config, "{} requires group_size and active", self.label()),
        }
    }

    /// Checks every structural invariant of the configuration.
    pub fn validate(&self) -> Result<()> {
        self.constellation.validate()?;
        if self.nt == 0 || self.nr == 0 {
            bail!(Config, "antenna counts must be positive (nt={}, nr={})", self.nt, self.nr);
        }
        let n_sub = self.n_subcarriers;
        if n_sub == 0 {
            bail!(Config, "n_subcarriers must be positive");
        }
        if self.kind.is_frequency() {
            if !n_sub.is_power_of_two() {
                bail!(Config, "n_subcarriers {n_sub} must be a power of two");
            }
        } else if n_sub != 1 {
            bail!(Config, "{} is a single-carrier scheme; n_subcarriers must be 1", self.label());
        }
        if self.na.is_some() && self.kind != SchemeKind::Gsm {
            bail!(Config, "na is only meaningful for G-SM");
        }
        if self.gsfim.is_some() && self.kind != SchemeKind::Gsfim {
            bail!(Config, "gsfim block is only meaningful for GSFIM");
        }
        let uses_group = matches!(self.kind, SchemeKind::ImOfdm | SchemeKind::MimoOfdmIm);
        if !uses_group && (self.group_size.is_some() || self.active.is_some()) {
            bail!(Config, "group_size/active are only meaningful for IM-OFDM and MIMO-OFDM-IM");
        }
        match self.kind {
            SchemeKind::Sm | SchemeKind::Qsm | SchemeKind::SmOfdm => {
                if !self.nt.is_power_of_two() {
                    bail!(Config, "{} requires a power-of-two nt, got {}", self.label(), self.nt);
                }
            }
            SchemeKind::Gsm => {
                let na = self.na.ok_or_else(|| crate::Error::Config("G-SM requires na".into()))?;
                if na == 0 || na > self.nt {
                    bail!(Config, "G-SM requires 1 <= na <= nt (na={na}, nt={})", self.nt);
                }
                if self.nt > 64 {
                    bail!(Config, "nt {} too large", self.nt);
                }
            }
            SchemeKind::Vblast => {}
            SchemeKind::Dsm => {
                if self.nt != 2 && self.nt != 4 {
                    bail!(Config, "D-SM supports nt in {{2, 4}}, got {}", self.nt);
                }
                if self.constellation.kind != ConstellationKind::Psk {
                    bail!(Config, "D-SM requires a PSK constellation");
                }
            }
            SchemeKind::Ofdm | SchemeKind::ImOfdm => {
                if self.nt != 1 {
                    bail!(Config, "{} is a single-antenna scheme; nt must be 1", self.label());
                }
            }
            SchemeKind::MimoOfdmIm => {}
            SchemeKind::Gsfim => {
                let g = self.gsfim.ok_or_else(|| crate::Error::Config("GSFIM requires a gsfim block".into()))?;
                if g.antennas != self.nt {
                    bail!(Config, "GSFIM block must span all {} antennas, got {}", self.nt, g.antennas);
                }
                let cells = g.antennas * g.subcarriers;
                if g.subcarriers == 0 || cells > 64 {
                    bail!(Config, "GSFIM block of {cells} cells unsupported");
                }
                if g.active == 0 || g.active > cells {
                    bail!(Config, "GSFIM requires 1 <= active <= {cells}, got {}", g.active);
                }
                if n_sub % g.subcarriers != 0 {
                    bail!(Config, "GSFIM block width {} must divide N = {n_sub}", g.subcarriers);
                }
            }
        }
        if uses_group {
            let (n, k) = self.im_group()?;
            if k == 0 || k > n {
                bail!(Config, "IM group requires 1 <= k <= n (n={n}, k={k})");
            }
            if n > 64 {
                bail!(Config, "group size {n} too large");
            }
            if n_sub % n != 0 {
                bail!(Config, "group size n={n} must divide N={n_sub}");
            }
        }
        Ok(())
    }

    /// Radio-frequency chains the transmitter needs.
    pub fn rf_chains(&self) -> usize {
        match self.kind {
            SchemeKind::Sm | SchemeKind::Qsm | SchemeKind::Dsm | SchemeKind::Ofdm | SchemeKind::ImOfdm => 1,
            SchemeKind::SmOfdm => 1,
            SchemeKind::Gsm => self.na.unwrap_or(1),
            SchemeKind::Vblast | SchemeKind::MimoOfdmIm | SchemeKind::Gsfim => self.nt,
        }
    }

    /// Whether the receiver needs channel knowledge.
    pub fn needs_csir(&self) -> bool {
        self.kind != SchemeKind::Dsm
    }
}

pub(crate) fn grouping_name(g: Grouping) -> &'static str {
    match g {
        Grouping::Interleaved => "interleaved",
        Grouping::Localized => "localized",
    }
}

/// Number of index bits for a k-of-n group.
pub(crate) fn group_index_bits(n: usize, k: usize) -> Result<usize> {
    Ok(floor_log2(binom(n as u64, k as u64)?) as usize)
}
