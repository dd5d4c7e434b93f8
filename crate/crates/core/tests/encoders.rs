mod common;

use imsim::channel::{sample_flat_mimo, ChannelRealization};
use imsim::detection::{detect_dsm_noncoherent, detect_mmse, MlDetector};
use imsim::numerics::{BitBlock, CMat, ConstellationSpec as C};
use imsim::rng::seeded;
use imsim::schemes::*;
use imsim::{Error, Scheme32, Scheme64};
use num_complex::Complex;
use proptest::prelude::*;

fn scheme(cfg: &SchemeConfig) -> Scheme64 {
    Scheme64::new(cfg.clone()).unwrap()
}

fn bits_of(v: usize, width: usize) -> Vec<u8> {
    (0..width).rev().map(|i| ((v >> i) & 1) as u8).collect()
}

#[test]
fn fixtures_cover_every_scheme() {
    assert!(common::covers_all_kinds(&common::small_configs()));
    assert!(common::covers_all_kinds(&common::square_configs()));
}

#[test]
fn sm_first_index_first_symbol() {
    let s = scheme(&SchemeConfig::sm(4, 1, C::psk(2)));
    let f = s.encode(&[0, 0, 0]).unwrap();
    assert_eq!(f.grid.column(0), vec![Complex::new(1.0, 0.0), Complex::default(), Complex::default(), Complex::default()]);
    assert_eq!(f.active_map[0].indices(), &[0]);
}

#[test]
fn bits_per_use_counts() {
    let count = |c: SchemeConfig| scheme(&c).block_bits();
    assert_eq!(count(SchemeConfig::sm(4, 1, C::psk(4))), 4);
    assert_eq!(count(SchemeConfig::gsm(4, 2, 1, C::psk(2))), 4);
    assert_eq!(count(SchemeConfig::vblast(4, 1, C::psk(2))), 4);
    assert_eq!(count(SchemeConfig::qsm(4, 1, C::psk(4))), 6);
    assert_eq!(count(SchemeConfig::ofdm(4, 1, C::psk(2))), 1);
    assert_eq!(scheme(&SchemeConfig::ofdm(4, 1, C::psk(2))).frame_bits(), 4);
    let mimo = scheme(&SchemeConfig::mimo_ofdm_im(4, 4, 4, 3, 1, C::psk(2)));
    assert_eq!(mimo.frame_bits(), 20);
    // D-SM(4, QPSK): floor(log2 24) = 4 permutation bits plus 4 symbols
    assert_eq!(count(SchemeConfig::dsm(4, 1, C::psk(4))), 12);
}

#[test]
fn im_ofdm_frame_layout() {
    let s = scheme(&SchemeConfig::im_ofdm(128, 4, 3, 1, C::psk(4)));
    assert_eq!(s.frame_bits(), 256);
    assert_eq!(s.frame_index_mask().iter().filter(|m| **m).count(), 64);
    let mut rng = seeded(3);
    let bits = s.random_bits(&mut rng);
    let f = s.encode(&bits).unwrap();
    assert_eq!(f.carried_bits.index_bits().len(), 64);
    assert_eq!(f.carried_bits.constellation_bits().len(), 192);
    assert_eq!(f.active_map.len(), 32);
    assert!(f.active_map.iter().all(|p| p.k() == 3 && p.rank() < 4));
}

#[test]
fn codebook_sizes_and_distinctness() {
    for (cfg, size) in [
        (SchemeConfig::sm(4, 1, C::psk(4)), 16),
        (SchemeConfig::vblast(2, 1, C::psk(2)), 4),
        (SchemeConfig::vblast(4, 1, C::psk(2)), 16),
        (SchemeConfig::sm_ofdm(4, 1, 1, C::psk(4)), 16),
        (SchemeConfig::qsm(4, 1, C::psk(4)), 64),
        (SchemeConfig::gsfim(4, 2, GsfimBlock { antennas: 4, subcarriers: 2, active: 3 }, 1, C::psk(2)), 256),
    ] {
        let cb = block_codebook(&scheme(&cfg)).unwrap();
        assert_eq!(cb.len(), size, "{}", cfg.label());
        for i in 0..cb.len() {
            for j in i + 1..cb.len() {
                assert!(cb.entries[i].grid.sub(&cb.entries[j].grid).norm_sqr() > 1e-9, "{} {i} {j}", cfg.label());
            }
        }
    }
}

#[test]
fn gsfim_patterns_come_from_all_cells() {
    for k in 1..=8 {
        let cfg = SchemeConfig::gsfim(4, 2, GsfimBlock { antennas: 4, subcarriers: 2, active: k }, 1, C::psk(2));
        let s = scheme(&cfg);
        let BlockStructure::Groups(g) = s.structure() else { panic!() };
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].n(), 8);
        let c = imsim::numerics::binom(8, k as u64).unwrap();
        assert_eq!(g[0].legal_patterns() as u64, 1 << imsim::numerics::floor_log2(c));
    }
}

#[test]
fn qsm_bpsk_quadrature_antenna_is_silent() {
    let s = scheme(&SchemeConfig::qsm(4, 1, C::psk(2)));
    // i_re = 1, i_im = 2, symbol label 1 (-1)
    let f = s.encode(&[0, 1, 1, 0, 1]).unwrap();
    let col = f.grid.column(0);
    assert_eq!(col[1], Complex::new(-1.0, 0.0));
    assert_eq!(col[2], Complex::default());
}

#[test]
fn qsm_parts_go_to_their_antennas() {
    let s = scheme(&SchemeConfig::qsm(4, 1, C::qam(16)));
    let c = s.constellation().clone();
    for v in 0..64 {
        let bits = bits_of(v, 8);
        let (i_re, i_im, label) = (v >> 6, (v >> 4) & 3, v & 15);
        let col = s.encode(&bits).unwrap().grid.column(0);
        let p = c.point(label);
        for (a, z) in col.iter().enumerate() {
            let want_re = if a == i_re { p.re } else { 0.0 };
            let want_im = if a == i_im { p.im } else { 0.0 };
            assert!((z.re - want_re).abs() < 1e-12 && (z.im - want_im).abs() < 1e-12);
        }
    }
}

#[test]
fn dsm_blocks_stay_unitary_permutations() {
    let s = scheme(&SchemeConfig::dsm(4, 1, C::psk(4)));
    let mut rng = seeded(9);
    let mut state = DsmState::initial(4);
    for _ in 0..200 {
        let bits = s.random_bits(&mut rng);
        let (frame, next) = s.encode_dsm(&bits, &state).unwrap();
        assert!(next.is_valid());
        let gram = frame.grid.adjoint().matmul(&frame.grid);
        assert!(gram.sub(&CMat::identity(4)).norm_sqr() < 1e-20);
        let used: Vec<usize> = frame.active_map.iter().map(|p| p.indices()[0]).collect();
        let mut sorted = used.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2, 3]);
        state = next;
    }
}

#[test]
fn encoders_check_their_kind() {
    let s = scheme(&SchemeConfig::gsm(4, 2, 1, C::psk(2)));
    let bits = BitBlock::new(vec![0; 4], 2).unwrap();
    assert!(matches!(encode_sm(&bits, &s), Err(Error::Config(_))));
    assert!(encode_gsm(&bits, &s).is_ok());
    assert!(matches!(s.encode(&[0; 3]), Err(Error::Encoding(_))));
}

#[test]
fn typed_encoders_match_generic_encode() {
    let mut rng = seeded(1);
    for cfg in common::small_configs() {
        let s = scheme(&cfg);
        let bits = s.random_bits(&mut rng);
        let block = BitBlock::with_mask(bits.clone(), s.frame_index_mask()).unwrap();
        let f = match cfg.kind {
            SchemeKind::Sm => encode_sm(&block, &s),
            SchemeKind::Gsm => encode_gsm(&block, &s),
            SchemeKind::Vblast => encode_vblast(&block, &s),
            SchemeKind::Qsm => encode_qsm(&block, &s),
            SchemeKind::Dsm => encode_dsm(&block, &DsmState::initial(cfg.nt), &s).map(|(f, _)| f),
            SchemeKind::Ofdm => encode_ofdm(&block, &s),
            SchemeKind::ImOfdm => encode_im_ofdm(&block, &s),
            SchemeKind::SmOfdm => encode_sm_ofdm(&block, &s),
            SchemeKind::MimoOfdmIm => encode_mimo_ofdm_im(&block, &s),
            SchemeKind::Gsfim => encode_gsfim(&block, &s),
        }
        .unwrap();
        assert_eq!(f, s.encode(&bits).unwrap(), "{}", cfg.label());
    }
}

#[test]
fn unit_energy_per_channel_use() {
    for cfg in common::small_configs() {
        let s = scheme(&cfg);
        let cb = block_codebook(&s).unwrap();
        let total: f64 = cb.entries.iter().map(|e| e.grid.norm_sqr()).sum();
        let per_use = total / (cb.len() * s.block_cols()) as f64;
        let want = if cfg.power_reallocation || !cfg.kind.is_frequency() {
            1.0
        } else {
            let (n, k) = (cfg.group_size.unwrap() as f64, cfg.active.unwrap() as f64);
            k / n
        };
        assert!((per_use - want).abs() < 1e-12, "{}: {per_use}", cfg.label());
    }
}

#[test]
fn constant_energy_blocks_for_psk() {
    // with PSK and reallocation every legal block has the same energy
    for cfg in common::small_configs() {
        if cfg.constellation.kind != imsim::numerics::ConstellationKind::Psk || cfg.kind == SchemeKind::Qsm {
            continue;
        }
        let s = scheme(&cfg);
        for e in block_codebook(&s).unwrap().entries {
            let per_use = e.grid.norm_sqr() / s.block_cols() as f64;
            let want = if cfg.power_reallocation { 1.0 } else { f64::NAN };
            if cfg.power_reallocation && !matches!(cfg.kind, SchemeKind::MimoOfdmIm) {
                assert!((per_use - want).abs() < 1e-12, "{}", cfg.label());
            }
        }
    }
}

fn frame_set(cfg: SchemeConfig) -> Vec<Vec<(i64, i64)>> {
    let s = scheme(&cfg);
    let mut out: Vec<Vec<(i64, i64)>> = codebook(&s)
        .unwrap()
        .into_iter()
        .map(|(_, f)| f.grid.as_slice().iter().map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)).collect())
        .collect();
    out.sort();
    out
}

fn same_frames(a: SchemeConfig, b: SchemeConfig) -> bool {
    let (sa, sb) = (scheme(&a), scheme(&b));
    assert_eq!(sa.frame_bits(), sb.frame_bits());
    codebook(&sa).unwrap().iter().zip(codebook(&sb).unwrap().iter()).all(|((ba, fa), (bb, fb))| {
        ba == bb && fa.grid.sub(&fb.grid).norm_sqr() < 1e-24
    })
}

#[test]
fn degenerate_collapses() {
    for nt in [2, 4, 8] {
        for m in [2, 4] {
            assert!(same_frames(SchemeConfig::gsm(nt, 1, 1, C::psk(m)), SchemeConfig::sm(nt, 1, C::psk(m))));
        }
    }
    for nt in [1, 2, 3, 4] {
        assert!(same_frames(SchemeConfig::gsm(nt, nt, 1, C::psk(4)), SchemeConfig::vblast(nt, 1, C::psk(4))));
    }
    for n in [1, 2, 4] {
        let im = SchemeConfig::im_ofdm(4, n, n, 1, C::psk(4));
        assert!(same_frames(im.clone().with_grouping(Grouping::Localized), SchemeConfig::ofdm(4, 1, C::psk(4))));
        assert_eq!(frame_set(im), frame_set(SchemeConfig::ofdm(4, 1, C::psk(4))));
    }
    for (n, k) in [(4, 1), (4, 2), (4, 3), (2, 1)] {
        for g in [Grouping::Interleaved, Grouping::Localized] {
            let im = SchemeConfig::im_ofdm(8, n, k, 1, C::psk(2)).with_grouping(g);
            let gsfim = SchemeConfig::gsfim(1, 8, GsfimBlock { antennas: 1, subcarriers: n, active: k }, 1, C::psk(2))
                .with_grouping(g);
            let mimo = SchemeConfig::mimo_ofdm_im(1, 8, n, k, 1, C::psk(2)).with_grouping(g);
            assert!(same_frames(gsfim, im.clone()));
            assert!(same_frames(mimo, im));
        }
    }
    assert!(same_frames(SchemeConfig::sm_ofdm(1, 8, 1, C::psk(4)), SchemeConfig::ofdm(8, 1, C::psk(4))));
}

#[test]
fn mimo_ofdm_im_full_activation_is_vblast_ofdm() {
    let full = SchemeConfig::mimo_ofdm_im(2, 4, 2, 2, 1, C::psk(2));
    let s = scheme(&full);
    assert_eq!(s.frame_bits(), 8);
    let want: Vec<Vec<(i64, i64)>> = {
        let mut v: Vec<Vec<(i64, i64)>> = (0..256usize)
            .map(|b| {
                let g = CMat::from_fn(2, 4, |r, c| {
                    let bit = (b >> (r * 4 + c)) & 1;
                    Complex::new(if bit == 0 { 0.5f64.sqrt() } else { -(0.5f64.sqrt()) }, 0.0)
                });
                g.as_slice().iter().map(|z| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)).collect()
            })
            .collect();
        v.sort();
        v
    };
    assert_eq!(frame_set(full), want);
}

fn round_trip_ml(cfg: &SchemeConfig, seed: u64) {
    let s = scheme(cfg);
    let mut rng = seeded(seed);
    let bits = s.random_bits(&mut rng);
    if cfg.kind == SchemeKind::Dsm {
        let h = sample_flat_mimo::<f64, _>(cfg.nr, cfg.nt, &mut rng);
        let state = DsmState::<f64>::initial(cfg.nt);
        let (frame, _) = s.encode_dsm(&bits, &state).unwrap();
        let got = detect_dsm_noncoherent(&h.apply(&state.block), &h.apply(&frame.grid), &s).unwrap();
        assert_eq!(got.bits, bits, "{}", cfg.label());
        return;
    }
    let h = match cfg.kind.is_frequency() {
        true => imsim::channel::sample_freq_selective(cfg.nr, cfg.nt, s.frame_cols(), 2.min(s.frame_cols()), &mut rng).unwrap(),
        false => sample_flat_mimo(cfg.nr, cfg.nt, &mut rng),
    };
    let det = MlDetector::new(&s).unwrap();
    let frame = s.encode(&bits).unwrap();
    let got = det.detect(&h.apply(&frame.grid), &h).unwrap();
    assert_eq!(got.bits, bits, "{}", cfg.label());
    assert!(got.legal);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noiseless_round_trip_ml(seed in any::<u64>()) {
        for cfg in common::small_configs() {
            if cfg.kind == SchemeKind::Qsm && cfg.nr < 2 {
                continue;
            }
            round_trip_ml(&cfg, seed);
        }
    }

    #[test]
    fn noiseless_round_trip_identity_channel(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        for cfg in common::square_configs() {
            let s = scheme(&cfg);
            let bits = s.random_bits(&mut rng);
            let h = ChannelRealization::Flat(CMat::<f64>::identity(cfg.nt));
            if cfg.kind == SchemeKind::Dsm {
                let state = DsmState::initial(cfg.nt);
                let (frame, _) = s.encode_dsm(&bits, &state).unwrap();
                let got = detect_dsm_noncoherent(&state.block, &frame.grid, &s).unwrap();
                prop_assert_eq!(got.bits, bits);
                continue;
            }
            let frame = s.encode(&bits).unwrap();
            let y = h.apply(&frame.grid);
            let mmse = detect_mmse(&y, &h, &s, 0.0).unwrap();
            prop_assert_eq!(&mmse.bits, &bits, "{}", cfg.label());
            let ml = imsim::detection::detect_ml(&y, &h, &s).unwrap();
            prop_assert_eq!(&ml.bits, &bits, "{}", cfg.label());
        }
    }

    #[test]
    fn bits_round_trip_through_patterns(seed in any::<u64>()) {
        // the activation map and the carried bits agree with the encoder input
        let mut rng = seeded(seed);
        for cfg in common::small_configs() {
            let s = scheme(&cfg);
            let bits = s.random_bits(&mut rng);
            let f = s.encode(&bits).unwrap();
            prop_assert_eq!(f.carried_bits.bits(), &bits[..]);
            prop_assert_eq!(f.carried_bits.index_mask(), &s.frame_index_mask()[..]);
            for p in &f.active_map {
                prop_assert!(p.indices().windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn f32_encoders_agree_with_f64() {
    let mut rng = seeded(77);
    for cfg in common::small_configs() {
        let s64 = scheme(&cfg);
        let s32 = Scheme32::new(cfg.clone()).unwrap();
        let bits = s64.random_bits(&mut rng);
        let (a, b) = (s64.encode(&bits).unwrap(), s32.encode(&bits).unwrap());
        for (x, y) in a.grid.as_slice().iter().zip(b.grid.as_slice()) {
            assert!((x.re - y.re as f64).abs() < 1e-6 && (x.im - y.im as f64).abs() < 1e-6);
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        SchemeConfig::sm(3, 1, C::psk(2)),
        SchemeConfig::gsm(4, 5, 1, C::psk(2)),
        SchemeConfig::dsm(3, 1, C::psk(2)),
        SchemeConfig::dsm(2, 1, C::qam(4)),
        SchemeConfig::im_ofdm(12, 4, 2, 1, C::psk(2)),
        SchemeConfig::im_ofdm(8, 4, 5, 1, C::psk(2)),
        SchemeConfig::im_ofdm(8, 3, 2, 1, C::psk(2)),
        SchemeConfig::gsfim(4, 8, GsfimBlock { antennas: 2, subcarriers: 2, active: 1 }, 1, C::psk(2)),
        SchemeConfig::gsfim(2, 8, GsfimBlock { antennas: 2, subcarriers: 3, active: 1 }, 1, C::psk(2)),
        SchemeConfig::vblast(2, 1, C::qam(8)),
    ];
    for cfg in bad {
        assert!(matches!(Scheme64::new(cfg.clone()), Err(Error::Config(_))), "{cfg:?}");
    }
}
