//! Numeric foundations: subset combinatorics, constellations, FFT, and
//! small dense complex linear algebra.

pub mod bits;
pub mod combinadic;
pub mod constellation;
pub mod fft;
pub mod linalg;

pub use bits::{bits_to_usize, usize_to_bits, BitBlock};
pub use combinadic::{binom, floor_log2, rank_subset, unrank_subset, ActivationPattern};
pub use constellation::{Constellation, ConstellationKind, ConstellationSpec};
pub use fft::{fft_unitary, ifft_unitary};
pub use linalg::CMat;
