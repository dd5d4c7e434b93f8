#![allow(dead_code)]

use imsim::numerics::ConstellationSpec as C;
use imsim::schemes::{GsfimBlock, Grouping, SchemeConfig, SchemeKind};

/// Small instances of every scheme, several per kind.
pub fn small_configs() -> Vec<SchemeConfig> {
    vec![
        SchemeConfig::sm(2, 2, C::psk(2)),
        SchemeConfig::sm(4, 2, C::psk(4)),
        SchemeConfig::gsm(4, 2, 2, C::psk(2)),
        SchemeConfig::gsm(5, 3, 3, C::qam(4)),
        SchemeConfig::gsm(3, 2, 3, C::psk(4)),
        SchemeConfig::vblast(2, 2, C::qam(16)),
        SchemeConfig::vblast(3, 3, C::psk(2)),
        SchemeConfig::qsm(4, 2, C::psk(4)),
        SchemeConfig::qsm(2, 2, C::qam(16)),
        SchemeConfig::qsm(2, 1, C::psk(8)),
        SchemeConfig::dsm(2, 2, C::psk(2)),
        SchemeConfig::dsm(4, 2, C::psk(4)),
        SchemeConfig::ofdm(8, 1, C::psk(4)),
        SchemeConfig::ofdm(4, 2, C::qam(16)),
        SchemeConfig::im_ofdm(8, 4, 2, 1, C::psk(2)),
        SchemeConfig::im_ofdm(16, 4, 3, 1, C::psk(4)).with_grouping(Grouping::Localized),
        SchemeConfig::im_ofdm(8, 8, 5, 2, C::qam(4)).with_power_reallocation(false),
        SchemeConfig::sm_ofdm(2, 4, 2, C::psk(4)),
        SchemeConfig::sm_ofdm(4, 8, 4, C::psk(8)),
        SchemeConfig::mimo_ofdm_im(2, 8, 4, 2, 2, C::psk(2)),
        SchemeConfig::mimo_ofdm_im(4, 8, 4, 3, 4, C::psk(2)).with_grouping(Grouping::Localized),
        SchemeConfig::gsfim(2, 4, GsfimBlock { antennas: 2, subcarriers: 2, active: 3 }, 2, C::psk(4)),
        SchemeConfig::gsfim(4, 8, GsfimBlock { antennas: 4, subcarriers: 2, active: 3 }, 4, C::psk(2)),
    ]
}

/// One instance per kind with `nr == nt`, for identity-channel checks.
pub fn square_configs() -> Vec<SchemeConfig> {
    small_configs().into_iter().filter(|c| c.nr == c.nt).collect()
}

pub fn covers_all_kinds(cfgs: &[SchemeConfig]) -> bool {
    SchemeKind::ALL.iter().all(|k| cfgs.iter().any(|c| c.kind == *k))
}
