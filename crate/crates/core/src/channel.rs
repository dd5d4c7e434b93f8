//! Rayleigh channel sampling and AWGN under a single Es/N0 convention:
//! every scheme radiates unit average energy per channel use (summed over
//! transmit antennas), so the noise variance per receive dimension is
//! `N0 = 10^(-Es/N0 [dB] / 10)`.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{bail, Result};
use crate::numerics::{fft_unitary, CMat};
use crate::real::Real;

/// Default number of taps for frequency-selective channels.
pub const DEFAULT_TAPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    FlatMimo,
    FreqSelectiveMimo,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelRealization<T> {
    /// One Nr x Nt matrix shared by every channel use of a block.
    Flat(CMat<T>),
    /// One Nr x Nt frequency response per subcarrier.
    FreqSelective { responses: Vec<CMat<T>>, taps: usize },
}

impl<T: Real> ChannelRealization<T> {
    pub fn kind(&self) -> ChannelKind {
        match self {
            Self::Flat(_) => ChannelKind::FlatMimo,
            Self::FreqSelective { .. } => ChannelKind::FreqSelectiveMimo,
        }
    }

    /// Channel matrix seen by channel use / subcarrier `col`.
    pub fn at(&self, col: usize) -> &CMat<T> {
        match self {
            Self::Flat(h) => h,
            Self::FreqSelective { responses, .. } => &responses[col],
        }
    }

    pub fn nr(&self) -> usize {
        self.at(0).rows()
    }

    pub fn nt(&self) -> usize {
        self.at(0).cols()
    }

    /// Noiseless received grid `H_c x_c` for every column `c` of `x`.
    pub fn apply(&self, x: &CMat<T>) -> CMat<T> {
        let mut y = CMat::zeros(self.nr(), x.cols());
        for c in 0..x.cols() {
            let yc = self.at(c).mul_vec(&x.column(c));
            y.set_column(c, &yc);
        }
        y
    }
}

/// Operating point on the Es/N0 axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrPoint {
    pub es_n0_db: f64,
    pub noise_variance: f64,
}

impl SnrPoint {
    /// `+inf` dB gives a noiseless point.
    pub fn from_db(es_n0_db: f64) -> Self {
        let noise_variance = if es_n0_db == f64::INFINITY { 0.0 } else { 10f64.powf(-es_n0_db / 10.0) };
        Self { es_n0_db, noise_variance }
    }

    pub fn noiseless() -> Self {
        Self::from_db(f64::INFINITY)
    }

    pub fn is_noiseless(&self) -> bool {
        self.noise_variance == 0.0
    }

    /// Linear Es/N0.
    pub fn linear(&self) -> f64 {
        10f64.powf(self.es_n0_db / 10.0)
    }
}

/// One CN(0, variance) sample.
pub fn complex_gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex<T> {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re * s), T::lit(im * s))
}

/// Nr x Nt matrix of i.i.d. CN(0, 1) entries.
pub fn sample_flat_mimo<T: Real, R: Rng + ?Sized>(nr: usize, nt: usize, rng: &mut R) -> ChannelRealization<T> {
    ChannelRealization::Flat(CMat::from_fn(nr, nt, |_, _| complex_gaussian(rng, 1.0)))
}

/// Per-subcarrier responses of an L-tap uniform power-delay profile.
///
/// Each link draws `l_taps` i.i.d. CN(0, 1/L) taps; the response on subcarrier
/// `f` is `sum_l h_l exp(-j 2 pi l f / N)`, so `E|H(f)|^2 = 1`.
pub fn sample_freq_selective<T: Real, R: Rng + ?Sized>(
    nr: usize,
    nt: usize,
    n_subcarriers: usize,
    l_taps: usize,
    rng: &mut R,
) -> Result<ChannelRealization<T>> {
    if !n_subcarriers.is_power_of_two() {
        bail!(Config, "subcarrier count {n_subcarriers} is not a power of two");
    }
    if l_taps == 0 || l_taps > n_subcarriers {
        bail!(Config, "tap count {l_taps} must be in [1, {n_subcarriers}]");
    }
    let mut responses = vec![CMat::zeros(nr, nt); n_subcarriers];
    let gain = T::of_usize(n_subcarriers).sqrt();
    let mut taps = vec![Complex::new(T::zero(), T::zero()); n_subcarriers];
    for r in 0..nr {
        for t in 0..nt {
            for (l, tap) in taps.iter_mut().enumerate() {
                *tap = if l < l_taps {
                    complex_gaussian(rng, 1.0 / l_taps as f64)
                } else {
                    Complex::new(T::zero(), T::zero())
                };
            }
            let freq = fft_unitary(&taps)?;
            for (f, v) in freq.into_iter().enumerate() {
                responses[f][(r, t)] = v.scale(gain);
            }
        }
    }
    Ok(ChannelRealization::FreqSelective { responses, taps: l_taps })
}

/// `y = x + w` with `w` i.i.d. CN(0, N0) per entry.
pub fn add_awgn<T: Real, R: Rng + ?Sized>(signal: &CMat<T>, snr: SnrPoint, rng: &mut R) -> CMat<T> {
    let mut out = signal.clone();
    add_awgn_in_place(&mut out, snr, rng);
    out
}

pub fn add_awgn_in_place<T: Real, R: Rng + ?Sized>(signal: &mut CMat<T>, snr: SnrPoint, rng: &mut R) {
    if snr.is_noiseless() {
        return;
    }
    for v in signal.as_mut_slice() {
        *v += complex_gaussian::<T, R>(rng, snr.noise_variance);
    }
}
