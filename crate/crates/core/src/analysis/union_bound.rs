use std::collections::BTreeMap;

use rayon::prelude::*;

use super::pep::{FadingModel, PepProfile};
use crate::error::{bail, Result};
use crate::numerics::CMat;
use crate::real::{KahanSum, Real};
use crate::schemes::{block_codebook, Scheme, SchemeConfig};

/// Largest number of unordered codeword pairs the union bound enumerates.
pub const MAX_PAIRS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveSource {
    UnionBound,
    MonteCarlo,
}

/// Average bit error probability against Es/N0 in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct AbepCurve {
    pub snr_db: Vec<f64>,
    pub abep: Vec<f64>,
    pub source: CurveSource,
    pub scheme: Option<SchemeConfig>,
}

impl AbepCurve {
    pub fn new(snr_db: Vec<f64>, abep: Vec<f64>, source: CurveSource) -> Result<Self> {
        if snr_db.len() != abep.len() {
            bail!(Domain, "curve has {} SNR points but {} values", snr_db.len(), abep.len());
        }
        if snr_db.windows(2).any(|w| w[0] >= w[1]) {
            bail!(Domain, "SNR grid must be strictly increasing");
        }
        Ok(Self { snr_db, abep, source, scheme: None })
    }

    /// Keeps every `step`-th point.
    pub fn subsample(&self, step: usize, offset: usize) -> Self {
        let pick = |v: &[f64]| v.iter().skip(offset).step_by(step).copied().collect::<Vec<_>>();
        Self { snr_db: pick(&self.snr_db), abep: pick(&self.abep), source: self.source, scheme: self.scheme.clone() }
    }
}

/// Hamming-weighted distance spectrum of a block codebook: for each
/// distinct PEP profile, the total Hamming distance of the ordered pairs
/// that produce it.
#[derive(Debug, Clone)]
pub struct DistanceSpectrum {
    pub bits_per_block: usize,
    pub codewords: usize,
    pub nr: usize,
    pub terms: Vec<(PepProfile, u64)>,
}

type Key = Vec<i64>;

fn quantize(v: f64) -> i64 {
    (v * 1e9).round() as i64
}

fn profile_key(p: &PepProfile) -> Key {
    match p {
        PepProfile::Eigen(l) => {
            let mut k: Vec<i64> = l.iter().map(|&v| quantize(v)).collect();
            k.sort_unstable();
            k.insert(0, 0);
            k
        }
        PepProfile::Gram(g) => {
            // det(I + sA) is a polynomial of degree n in s; n values pin it down
            let mut k = vec![1];
            for s in 1..=g.rows() {
                let mut m = g.scale(s as f64);
                for i in 0..m.rows() {
                    m[(i, i)] += num_complex::Complex::new(1.0, 0.0);
                }
                k.push(quantize(m.det().re));
            }
            k
        }
    }
}

impl DistanceSpectrum {
    pub fn of_scheme<T: Real>(scheme: &Scheme<T>) -> Result<Self> {
        let cb = block_codebook(scheme)?;
        let n = cb.len();
        let pairs = n * (n - 1) / 2;
        if pairs > MAX_PAIRS {
            bail!(Capacity, "{}: {pairs} codeword pairs exceed the budget of {MAX_PAIRS}", scheme.config().label());
        }
        let fading =
            if scheme.kind().is_frequency() { FadingModel::IndependentColumns } else { FadingModel::Shared };
        let rows: Vec<BTreeMap<Key, (PepProfile, u64)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut local: BTreeMap<Key, (PepProfile, u64)> = BTreeMap::new();
                let ei = &cb.entries[i];
                for ej in &cb.entries[i + 1..] {
                    let dh = ei.bits.iter().zip(&ej.bits).filter(|(a, b)| a != b).count() as u64;
                    let delta: CMat<T> = ei.grid.sub(&ej.grid);
                    let p = PepProfile::from_difference(&delta, fading);
                    // both orders of the pair contribute
                    local.entry(profile_key(&p)).or_insert((p, 0)).1 += 2 * dh;
                }
                local
            })
            .collect();
        let mut merged: BTreeMap<Key, (PepProfile, u64)> = BTreeMap::new();
        for row in rows {
            for (k, (p, w)) in row {
                merged.entry(k).or_insert((p, 0)).1 += w;
            }
        }
        if merged.keys().any(|k| k.iter().skip(1).all(|&v| v == 0) && k[0] == 0) {
            bail!(Domain, "{}: codebook contains duplicate codewords", scheme.config().label());
        }
        Ok(Self {
            bits_per_block: scheme.block_bits(),
            codewords: n,
            nr: scheme.nr(),
            terms: merged.into_values().collect(),
        })
    }

    /// Union bound on the average bit error probability at linear Es/N0.
    pub fn abep(&self, snr: f64) -> f64 {
        let mut acc = KahanSum::new();
        for (p, w) in &self.terms {
            acc.add(*w as f64 * p.eval(snr, self.nr));
        }
        acc.value() / (self.bits_per_block as f64 * self.codewords as f64)
    }
}

/// `ABEP <= 1/(B 2^B) sum_i sum_{j != i} d_H(b_i, b_j) PEP(x_i -> x_j)`.
///
/// OFDM schemes are bounded per block assuming every subcarrier of a group
/// fades independently.
pub fn union_bound_abep<T: Real>(scheme: &Scheme<T>, snr_grid_db: &[f64]) -> Result<AbepCurve> {
    let spectrum = DistanceSpectrum::of_scheme(scheme)?;
    let abep = snr_grid_db.iter().map(|&db| spectrum.abep(10f64.powf(db / 10.0))).collect();
    let mut curve = AbepCurve::new(snr_grid_db.to_vec(), abep, CurveSource::UnionBound)?;
    curve.scheme = Some(scheme.config().clone());
    Ok(curve)
}
