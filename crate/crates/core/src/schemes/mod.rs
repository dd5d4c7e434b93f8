//! Transmit-side mapping of information bits to frames for every scheme.
//!
//! A frame is an antennas x channel-uses grid (single-carrier schemes) or an
//! antennas x subcarriers grid (OFDM schemes). Each frame is tiled by
//! identical, independently encoded *blocks*; a block is the unit the
//! detectors and the union bound work on.

mod codebook;
mod config;
mod encode;
mod frame;
mod scheme;
mod se;

pub use codebook::{block_codebook, codebook, BlockCodebook, BlockEntry, MAX_CODEBOOK_BITS};
pub use config::{GsfimBlock, Grouping, SchemeConfig, SchemeKind};
pub use encode::{
    encode_dsm, encode_gsfim, encode_gsm, encode_im_ofdm, encode_mimo_ofdm_im, encode_ofdm, encode_qsm,
    encode_sm, encode_sm_ofdm, encode_vblast,
};
pub use frame::{DsmState, TxFrame};
pub use scheme::{BlockStructure, PatternGroup, Scheme};
pub use se::{spectral_efficiency, SpectralEfficiency};
