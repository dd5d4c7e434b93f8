mod common;

use imsim::channel::{add_awgn, sample_flat_mimo, sample_freq_selective, ChannelRealization, SnrPoint};
use imsim::detection::{detect_dsm_noncoherent, detect_ml, detect_mmse, MlDetector};
use imsim::numerics::{CMat, ConstellationSpec as C};
use imsim::rng::seeded;
use imsim::schemes::{DsmState, GsfimBlock, SchemeConfig, SchemeKind};
use imsim::{Error, Scheme64};
use num_complex::Complex;
use proptest::prelude::*;

type Cx = Complex<f64>;

fn scheme(cfg: SchemeConfig) -> Scheme64 {
    Scheme64::new(cfg).unwrap()
}

fn dist(y: &CMat<f64>, hx: &CMat<f64>) -> f64 {
    y.sub(hx).norm_sqr()
}

fn sm2_bpsk_oracle(y: &CMat<f64>, h: &CMat<f64>) -> Vec<u8> {
    let mut best = (f64::INFINITY, vec![]);
    for ant in 0..2u8 {
        for sym in 0..2u8 {
            let mut x = CMat::zeros(2, 1);
            x[(ant as usize, 0)] = Cx::new(if sym == 0 { 1.0 } else { -1.0 }, 0.0);
            let d = dist(y, &h.matmul(&x));
            if d < best.0 {
                best = (d, vec![ant, sym]);
            }
        }
    }
    best.1
}

#[test]
fn ml_matches_brute_force_on_sm() {
    let s = scheme(SchemeConfig::sm(2, 2, C::psk(2)));
    let det = MlDetector::new(&s).unwrap();
    let mut rng = seeded(2024);
    let mut errors = 0;
    for t in 0..10_000 {
        let snr = SnrPoint::from_db([0.0, 5.0, 10.0][t % 3]);
        let bits = s.random_bits(&mut rng);
        let hm = match sample_flat_mimo::<f64, _>(2, 2, &mut rng) {
            ChannelRealization::Flat(m) => m,
            _ => unreachable!(),
        };
        let h = ChannelRealization::Flat(hm.clone());
        let y = add_awgn(&h.apply(&s.encode(&bits).unwrap().grid), snr, &mut rng);
        let got = det.detect(&y, &h).unwrap();
        assert_eq!(got.bits, sm2_bpsk_oracle(&y, &hm), "trial {t}");
        errors += usize::from(got.bits != bits);
    }
    assert!(errors > 0);
}

#[test]
fn dsm_matches_brute_force() {
    let s = scheme(SchemeConfig::dsm(2, 2, C::psk(2)));
    let b = s.block_bits();
    let blocks: Vec<(Vec<u8>, CMat<f64>)> = (0..1usize << b)
        .map(|v| {
            let bits: Vec<u8> = (0..b).rev().map(|i| ((v >> i) & 1) as u8).collect();
            let (f, _) = s.encode_dsm(&bits, &DsmState::initial(2)).unwrap();
            (bits, f.grid)
        })
        .collect();
    let mut rng = seeded(7);
    let snr = SnrPoint::from_db(6.0);
    for _ in 0..5_000 {
        let h = sample_flat_mimo::<f64, _>(2, 2, &mut rng);
        let state = DsmState::<f64>::initial(2);
        let bits = s.random_bits(&mut rng);
        let (f, _) = s.encode_dsm(&bits, &state).unwrap();
        let y0 = add_awgn(&h.apply(&state.block), snr, &mut rng);
        let y1 = add_awgn(&h.apply(&f.grid), snr, &mut rng);
        let got = detect_dsm_noncoherent(&y0, &y1, &s).unwrap();
        let oracle = blocks
            .iter()
            .map(|(bits, sm)| (dist(&y1, &y0.matmul(sm)), bits))
            .fold((f64::INFINITY, &blocks[0].0), |a, c| if c.0 < a.0 { c } else { a });
        assert_eq!(&got.bits, oracle.1);
    }
}

#[test]
fn fast_path_agrees_with_exhaustive() {
    let cfgs = [
        SchemeConfig::im_ofdm(16, 4, 2, 1, C::psk(4)),
        SchemeConfig::im_ofdm(16, 8, 3, 2, C::qam(16)),
        SchemeConfig::im_ofdm(8, 4, 4, 1, C::psk(8)),
    ];
    let mut rng = seeded(5);
    for cfg in cfgs {
        let s = scheme(cfg);
        let fast = MlDetector::new(&s).unwrap();
        let slow = MlDetector::exhaustive(&s).unwrap();
        for _ in 0..300 {
            let bits = s.random_bits(&mut rng);
            let h = sample_freq_selective::<f64, _>(s.nr(), 1, s.frame_cols(), 3, &mut rng).unwrap();
            let y = add_awgn(&h.apply(&s.encode(&bits).unwrap().grid), SnrPoint::from_db(8.0), &mut rng);
            let (a, b) = (fast.detect(&y, &h).unwrap(), slow.detect(&y, &h).unwrap());
            assert_eq!(a.bits, b.bits);
            assert!((a.metric - b.metric).abs() <= 1e-9 * (1.0 + b.metric));
        }
    }
}

fn legal(s: &Scheme64, pats: &[imsim::numerics::ActivationPattern]) -> bool {
    let imsim::schemes::BlockStructure::Groups(groups) = s.structure() else { return true };
    let per_frame = pats.len() / groups.len().max(1);
    pats.chunks(groups.len()).all(|chunk| {
        chunk.iter().zip(groups).all(|(p, g)| (p.rank() as usize) < g.legal_patterns() && p.n() == g.n())
    }) && per_frame > 0
}

#[test]
fn mmse_only_emits_legal_patterns() {
    let cfgs = [
        SchemeConfig::mimo_ofdm_im(4, 16, 4, 3, 4, C::psk(2)),
        SchemeConfig::gsfim(4, 16, GsfimBlock { antennas: 4, subcarriers: 2, active: 3 }, 4, C::psk(4)),
        SchemeConfig::gsfim(2, 8, GsfimBlock { antennas: 2, subcarriers: 4, active: 5 }, 2, C::psk(2)),
        SchemeConfig::sm_ofdm(4, 16, 4, C::psk(4)),
    ];
    let mut rng = seeded(11);
    for cfg in cfgs {
        let s = scheme(cfg);
        for db in [-5.0, 5.0, 20.0] {
            for _ in 0..50 {
                let bits = s.random_bits(&mut rng);
                let h = sample_freq_selective::<f64, _>(s.nr(), s.nt(), s.frame_cols(), 4, &mut rng).unwrap();
                let snr = SnrPoint::from_db(db);
                let y = add_awgn(&h.apply(&s.encode(&bits).unwrap().grid), snr, &mut rng);
                let r = detect_mmse(&y, &h, &s, snr.noise_variance).unwrap();
                assert!(r.legal);
                assert_eq!(r.bits.len(), s.frame_bits());
                assert!(legal(&s, &r.detected_pattern), "{}", s.config().label());
            }
        }
    }
}

#[test]
fn ml_beats_mmse_on_average() {
    let s = scheme(SchemeConfig::mimo_ofdm_im(2, 8, 4, 2, 2, C::psk(2)));
    let det = MlDetector::new(&s).unwrap();
    let mut rng = seeded(99);
    let snr = SnrPoint::from_db(6.0);
    let (mut ml, mut mmse) = (0usize, 0usize);
    for _ in 0..3_000 {
        let bits = s.random_bits(&mut rng);
        let h = sample_freq_selective::<f64, _>(2, 2, 8, 8, &mut rng).unwrap();
        let y = add_awgn(&h.apply(&s.encode(&bits).unwrap().grid), snr, &mut rng);
        let a = det.detect(&y, &h).unwrap();
        let b = detect_mmse(&y, &h, &s, snr.noise_variance).unwrap();
        let count = |d: &[u8]| d.iter().zip(&bits).filter(|(x, y)| x != y).count();
        // the ML decision never has a larger metric than the MMSE one
        let hx = h.apply(&s.encode(&b.bits).unwrap().grid);
        assert!(a.metric <= dist(&y, &hx) + 1e-9);
        ml += count(&a.bits);
        mmse += count(&b.bits);
    }
    assert!(ml < mmse, "ml {ml} mmse {mmse}");
}

#[test]
fn detectors_reject_wrong_inputs() {
    let dsm = scheme(SchemeConfig::dsm(2, 1, C::psk(2)));
    let sm = scheme(SchemeConfig::sm(2, 1, C::psk(2)));
    let h = ChannelRealization::Flat(CMat::<f64>::identity(2));
    let y = CMat::<f64>::zeros(2, 2);
    assert!(matches!(MlDetector::new(&dsm), Err(Error::Config(_))));
    assert!(matches!(detect_mmse(&y, &h, &dsm, 0.1), Err(Error::Config(_))));
    assert!(matches!(detect_dsm_noncoherent(&y, &y, &sm), Err(Error::Config(_))));
    assert!(matches!(detect_ml(&CMat::zeros(2, 3), &h, &sm), Err(Error::Domain(_))));
    let sq = ChannelRealization::Flat(CMat::<f64>::identity(2));
    assert!(detect_mmse(&CMat::zeros(2, 1), &sq, &sm, -1.0).is_err());
}

#[test]
fn ties_go_to_the_lowest_rank() {
    // zero channel: every hypothesis has the same metric
    let s = scheme(SchemeConfig::gsm(4, 2, 1, C::psk(4)));
    let h = ChannelRealization::Flat(CMat::<f64>::zeros(1, 4));
    let r = detect_ml(&CMat::zeros(1, 1), &h, &s).unwrap();
    assert!(r.bits.iter().all(|&b| b == 0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn ml_is_the_minimum_distance_codeword(seed in any::<u64>(), db in -5.0f64..25.0) {
        for cfg in common::small_configs() {
            if cfg.kind == SchemeKind::Dsm || cfg.kind.is_frequency() {
                continue;
            }
            let s = scheme(cfg);
            let mut rng = seeded(seed);
            let bits = s.random_bits(&mut rng);
            let h = sample_flat_mimo::<f64, _>(s.nr(), s.nt(), &mut rng);
            let y = add_awgn(&h.apply(&s.encode(&bits).unwrap().grid), SnrPoint::from_db(db), &mut rng);
            let r = detect_ml(&y, &h, &s).unwrap();
            let chosen = dist(&y, &h.apply(&s.encode(&r.bits).unwrap().grid));
            prop_assert!((chosen - r.metric).abs() <= 1e-9 * (1.0 + chosen));
            for (_, f) in imsim::schemes::codebook(&s).unwrap() {
                prop_assert!(chosen <= dist(&y, &h.apply(&f.grid)) + 1e-9);
            }
        }
    }
}
