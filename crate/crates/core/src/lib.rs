//! Link-level simulation and analysis of index-modulation (IM) schemes.
//!
//! Information is carried both by conventional constellation symbols and by
//! *which* resources (antennas, subcarriers, space-frequency cells) are
//! active. The crate provides
//!
//! * [`numerics`]: combinadic subset ranking, Gray constellations, unitary
//!   FFT and small complex linear algebra,
//! * [`channel`]: Rayleigh MIMO channels and AWGN,
//! * [`schemes`]: encoders for SM, G-SM, V-BLAST, QSM, D-SM, OFDM, IM-OFDM,
//!   SM-OFDM, MIMO-OFDM-IM and GSFIM,
//! * [`detection`]: ML, MMSE and noncoherent differential receivers,
//! * [`analysis`]: union-bound error probability, coding-gain and diversity
//!   fits, scheme comparison tables,
//! * [`harness`]: Monte Carlo engine, configuration files and presets.
//!
//! The signal-processing core is generic over the scalar type ([`Real`] is
//! implemented for `f32` and `f64`); the aliases below fix it to `f64`.

pub mod analysis;
pub mod channel;
pub mod detection;
mod error;
pub mod harness;
pub mod numerics;
mod real;
pub mod rng;
pub mod schemes;

pub use error::{Error, Result};
pub use real::{KahanSum, Real};

pub type Constellation64 = numerics::Constellation<f64>;
pub type CMat64 = numerics::CMat<f64>;
pub type Channel64 = channel::ChannelRealization<f64>;
pub type Scheme64 = schemes::Scheme<f64>;
pub type TxFrame64 = schemes::TxFrame<f64>;
pub type Scheme32 = schemes::Scheme<f32>;
pub type Channel32 = channel::ChannelRealization<f32>;
