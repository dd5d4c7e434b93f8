//! Per-scheme entry points. Each checks the scheme kind and bit count and
//! then delegates to the shared block mapper in [`Scheme`].

use super::config::SchemeKind;
use super::frame::{DsmState, TxFrame};
use super::scheme::Scheme;
use crate::error::{bail, Result};
use crate::numerics::BitBlock;
use crate::real::Real;

fn encode_kind<T: Real>(kind: SchemeKind, bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    if scheme.kind() != kind {
        bail!(Config, "{} encoder called with a {} configuration", kind.label(), scheme.kind().label());
    }
    scheme.encode(bits.bits())
}

/// Spatial modulation: one active antenna chosen by `log2 Nt` index bits.
pub fn encode_sm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Sm, bits, scheme)
}

/// Generalized SM: `Na` active antennas, each symbol scaled by `1/sqrt(Na)`.
pub fn encode_gsm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Gsm, bits, scheme)
}

pub fn encode_vblast<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Vblast, bits, scheme)
}

/// Quadrature SM: `Re(s)` on one antenna, `j Im(s)` on an independently
/// selected one.
pub fn encode_qsm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Qsm, bits, scheme)
}

/// Differential SM block `X_t = X_{t-1} S(bits)` spanning `Nt` channel uses.
pub fn encode_dsm<T: Real>(
    bits: &BitBlock,
    prev: &DsmState<T>,
    scheme: &Scheme<T>,
) -> Result<(TxFrame<T>, DsmState<T>)> {
    scheme.encode_dsm(bits.bits(), prev)
}

pub fn encode_ofdm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Ofdm, bits, scheme)
}

pub fn encode_im_ofdm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::ImOfdm, bits, scheme)
}

pub fn encode_sm_ofdm<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::SmOfdm, bits, scheme)
}

pub fn encode_mimo_ofdm_im<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::MimoOfdmIm, bits, scheme)
}

/// Joint space-frequency activation over antenna-major flattened cells.
pub fn encode_gsfim<T: Real>(bits: &BitBlock, scheme: &Scheme<T>) -> Result<TxFrame<T>> {
    encode_kind(SchemeKind::Gsfim, bits, scheme)
}
