use std::time::Instant;

use rayon::prelude::*;

use super::config::{ChannelConfig, ExperimentConfig, MIN_CONFIDENT_ERRORS};
use crate::analysis::{AbepCurve, CurveSource};
use crate::channel::{add_awgn_in_place, sample_flat_mimo, sample_freq_selective, ChannelKind, ChannelRealization, SnrPoint};
use crate::detection::{detect_dsm_noncoherent, detect_mmse, DetectionResult, DetectorKind, MlDetector};
use crate::error::{Error, Result};
use crate::numerics::CMat;
use crate::real::Real;
use crate::rng::{stream, Purpose, SimRng};
use crate::schemes::{DsmState, Scheme};

/// Approximate number of information bits per batch.
const BATCH_BITS: usize = 4096;
/// Batches evaluated concurrently before the stop rule is consulted. Fixed,
/// so the set of batches used never depends on the worker count.
const BATCHES_PER_ROUND: u64 = 16;

/// One measured (scheme, SNR) point.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    pub scheme: String,
    pub params: String,
    /// Es/N0 in dB (`inf` for noiseless).
    pub snr_db: f64,
    pub bits_sent: u64,
    pub bit_errors: u64,
    pub index_bit_errors: u64,
    pub symbol_errors: u64,
    pub ber: f64,
    /// Half-width of the 95% Wilson score interval on `ber`.
    pub ci95: f64,
    pub seed: u64,
    pub wall_time_s: f64,
    /// Fewer than 100 bit errors were observed.
    pub low_confidence: bool,
}

impl SimRecord {
    /// Same measurement, ignoring wall-clock time.
    pub fn same_measurement(&self, other: &Self) -> bool {
        let mut a = self.clone();
        a.wall_time_s = other.wall_time_s;
        a == *other
    }

    /// Eb/N0 in dB given the spectral efficiency in bits per channel use.
    pub fn eb_n0_db(&self, se: f64) -> f64 {
        self.snr_db - 10.0 * se.log10()
    }
}

/// 95% Wilson score interval half-width for `k` successes in `n` trials.
pub fn wilson_halfwidth(k: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.5;
    }
    let z = 1.959_963_984_540_054_f64;
    let n = n as f64;
    let p = k as f64 / n;
    z / (1.0 + z * z / n) * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    bits: u64,
    errors: u64,
    index_errors: u64,
    symbol_errors: u64,
}

impl Tally {
    fn add(&mut self, o: Tally) {
        self.bits += o.bits;
        self.errors += o.errors;
        self.index_errors += o.index_errors;
        self.symbol_errors += o.symbol_errors;
    }
}

enum Receiver<T: Real> {
    Ml(MlDetector<T>),
    Mmse,
    Dsm,
}

struct Link<'a, T: Real> {
    scheme: &'a Scheme<T>,
    receiver: &'a Receiver<T>,
    channel: ChannelConfig,
    index_mask: Vec<bool>,
    trials_per_batch: usize,
    master: u64,
}

impl<T: Real> Link<'_, T> {
    fn draw_channel(&self, rng: &mut SimRng) -> Result<ChannelRealization<T>> {
        let (nr, nt) = (self.scheme.nr(), self.scheme.nt());
        match self.channel.kind {
            ChannelKind::FlatMimo => Ok(sample_flat_mimo(nr, nt, rng)),
            ChannelKind::FreqSelectiveMimo => {
                sample_freq_selective(nr, nt, self.scheme.frame_cols(), self.channel.taps, rng)
            }
        }
    }

    fn detect(&self, y: &CMat<T>, h: &ChannelRealization<T>, snr: SnrPoint) -> Result<DetectionResult<T>> {
        match self.receiver {
            Receiver::Ml(det) => det.detect(y, h),
            Receiver::Mmse => detect_mmse(y, h, self.scheme, snr.noise_variance),
            Receiver::Dsm => unreachable!("differential links use trial_dsm"),
        }
    }

    fn count(&self, sent: &[u8], got: &[u8], tally: &mut Tally) {
        tally.bits += sent.len() as u64;
        for ((a, b), &idx) in sent.iter().zip(got).zip(&self.index_mask) {
            if a != b {
                tally.errors += 1;
                if idx {
                    tally.index_errors += 1;
                }
            }
        }
        let bb = self.scheme.block_bits();
        tally.symbol_errors += sent.chunks(bb).zip(got.chunks(bb)).filter(|(a, b)| a != b).count() as u64;
    }

    fn trial(&self, snr: SnrPoint, rngs: &mut [SimRng; 3], tally: &mut Tally) -> Result<()> {
        let [bits_rng, ch_rng, noise_rng] = rngs;
        let bits = self.scheme.random_bits(bits_rng);
        let h = self.draw_channel(ch_rng)?;
        let frame = self.scheme.encode(&bits)?;
        let mut y = h.apply(&frame.grid);
        add_awgn_in_place(&mut y, snr, noise_rng);
        let det = self.detect(&y, &h, snr)?;
        self.count(&bits, &det.bits, tally);
        Ok(())
    }

    /// Reference block followed by one data block through a channel that is
    /// constant over both.
    fn trial_dsm(&self, snr: SnrPoint, rngs: &mut [SimRng; 3], tally: &mut Tally) -> Result<()> {
        let [bits_rng, ch_rng, noise_rng] = rngs;
        let bits = self.scheme.random_bits(bits_rng);
        let h = self.draw_channel(ch_rng)?;
        let reference = DsmState::initial(self.scheme.nt());
        let (frame, _) = self.scheme.encode_dsm(&bits, &reference)?;
        let mut y_prev = h.apply(&reference.block);
        let mut y_curr = h.apply(&frame.grid);
        add_awgn_in_place(&mut y_prev, snr, noise_rng);
        add_awgn_in_place(&mut y_curr, snr, noise_rng);
        let det = detect_dsm_noncoherent(&y_prev, &y_curr, self.scheme)?;
        self.count(&bits, &det.bits, tally);
        Ok(())
    }

    fn batch(&self, point: u64, batch: u64, snr: SnrPoint) -> Result<Tally> {
        let mut rngs = [
            stream(self.master, point, batch, Purpose::Bits),
            stream(self.master, point, batch, Purpose::Channel),
            stream(self.master, point, batch, Purpose::Noise),
        ];
        let mut tally = Tally::default();
        for _ in 0..self.trials_per_batch {
            match self.receiver {
                Receiver::Dsm => self.trial_dsm(snr, &mut rngs, &mut tally)?,
                _ => self.trial(snr, &mut rngs, &mut tally)?,
            }
        }
        Ok(tally)
    }
}

/// Monte Carlo BER over the SNR grid with `f64` signal processing.
pub fn run_monte_carlo(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<SimRecord>> {
    run_monte_carlo_as::<f64>(cfg, workers)
}

/// Monte Carlo BER with the scalar type chosen by the caller.
///
/// Each batch draws its bits, channels and noise from its own streams keyed
/// by `(master_seed, point, batch)`. Batches are computed in parallel in
/// fixed-size rounds and folded in batch order, stopping at the first batch
/// that satisfies the stop rule, so the records do not depend on `workers`
/// (0 selects the rayon default).
pub fn run_monte_carlo_as<T: Real>(cfg: &ExperimentConfig, workers: usize) -> Result<Vec<SimRecord>> {
    cfg.validate()?;
    let scheme = Scheme::<T>::new(cfg.scheme.clone())?;
    let receiver = match cfg.detector {
        DetectorKind::Ml => Receiver::Ml(MlDetector::new(&scheme)?),
        DetectorKind::Mmse => Receiver::Mmse,
        DetectorKind::DsmNoncoherent => Receiver::Dsm,
    };
    let link = Link {
        scheme: &scheme,
        receiver: &receiver,
        channel: cfg.channel(),
        index_mask: scheme.frame_index_mask(),
        trials_per_batch: BATCH_BITS.div_ceil(scheme.frame_bits().max(1)),
        master: cfg.master_seed,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        cfg.snr_db
            .iter()
            .enumerate()
            .map(|(point, &snr_db)| run_point(&link, cfg, point as u64, snr_db))
            .collect()
    })
}

fn run_point<T: Real>(link: &Link<'_, T>, cfg: &ExperimentConfig, point: u64, snr_db: f64) -> Result<SimRecord> {
    let start = Instant::now();
    let snr = SnrPoint::from_db(snr_db);
    let mut total = Tally::default();
    let mut next = 0u64;
    'rounds: while !cfg.stop.done(total.bits, total.errors) {
        let tallies: Vec<Result<Tally>> =
            (next..next + BATCHES_PER_ROUND).into_par_iter().map(|b| link.batch(point, b, snr)).collect();
        next += BATCHES_PER_ROUND;
        for t in tallies {
            total.add(t?);
            if cfg.stop.done(total.bits, total.errors) {
                break 'rounds;
            }
        }
    }
    let ber = if total.bits == 0 { 0.0 } else { total.errors as f64 / total.bits as f64 };
    Ok(SimRecord {
        scheme: cfg.display_label(),
        params: cfg.scheme.params(),
        snr_db,
        bits_sent: total.bits,
        bit_errors: total.errors,
        index_bit_errors: total.index_errors,
        symbol_errors: total.symbol_errors,
        ber,
        ci95: wilson_halfwidth(total.errors, total.bits),
        seed: cfg.master_seed,
        wall_time_s: start.elapsed().as_secs_f64(),
        low_confidence: total.errors < MIN_CONFIDENT_ERRORS,
    })
}

/// BER against SNR for one curve's records, skipping points with no
/// observed errors (their BER is only an upper bound).
pub fn ber_curve(records: &[SimRecord]) -> Result<AbepCurve> {
    let (snr, ber): (Vec<f64>, Vec<f64>) =
        records.iter().filter(|r| r.bit_errors > 0 && r.snr_db.is_finite()).map(|r| (r.snr_db, r.ber)).unzip();
    AbepCurve::new(snr, ber, CurveSource::MonteCarlo)
}
