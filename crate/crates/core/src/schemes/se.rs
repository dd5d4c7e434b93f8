use super::config::{SchemeConfig, SchemeKind};
use crate::error::Result;
use crate::numerics::binom;

/// Bits per channel use: `fractional` uses `log2 C(n,k)` index bits,
/// `practical` the realizable `floor(log2 C(n,k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEfficiency {
    pub fractional: f64,
    pub practical: f64,
}

fn index_terms(n: usize, k: usize) -> Result<(f64, f64)> {
    let c = binom(n as u64, k as u64)?;
    let exact = (c as f64).log2();
    Ok((exact, (63 - c.leading_zeros()) as f64))
}

/// Spectral efficiency in bps/Hz, ignoring cyclic-prefix overhead.
pub fn spectral_efficiency(cfg: &SchemeConfig) -> Result<SpectralEfficiency> {
    cfg.validate()?;
    let m = cfg.constellation.bits_per_symbol() as f64;
    let nt = cfg.nt;
    // (fractional index bits, practical index bits, symbol bits, channel uses)
    let (fi, pi, sym, uses) = match cfg.kind {
        SchemeKind::Sm | SchemeKind::SmOfdm => {
            let (f, p) = index_terms(nt, 1)?;
            (f, p, m, 1.0)
        }
        SchemeKind::Gsm => {
            let na = cfg.na.unwrap_or(1);
            let (f, p) = index_terms(nt, na)?;
            (f, p, na as f64 * m, 1.0)
        }
        SchemeKind::Vblast => (0.0, 0.0, nt as f64 * m, 1.0),
        SchemeKind::Qsm => {
            let f = 2.0 * (nt as f64).log2();
            (f, f, m, 1.0)
        }
        SchemeKind::Dsm => {
            let fact: u64 = (1..=nt as u64).product();
            let f = (fact as f64).log2();
            (f, (63 - fact.leading_zeros()) as f64, nt as f64 * m, nt as f64)
        }
        SchemeKind::Ofdm => (0.0, 0.0, m, 1.0),
        SchemeKind::ImOfdm | SchemeKind::MimoOfdmIm => {
            let (n, k) = (cfg.group_size.unwrap_or(1), cfg.active.unwrap_or(1));
            let (f, p) = index_terms(n, k)?;
            let a = nt as f64;
            (a * f, a * p, a * k as f64 * m, n as f64)
        }
        SchemeKind::Gsfim => {
            let g = cfg.gsfim.expect("validated");
            let (f, p) = index_terms(g.antennas * g.subcarriers, g.active)?;
            (f, p, g.active as f64 * m, g.subcarriers as f64)
        }
    };
    Ok(SpectralEfficiency { fractional: (fi + sym) / uses, practical: (pi + sym) / uses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ConstellationSpec;
    use crate::schemes::GsfimBlock;

    #[test]
    fn worked_values() {
        let q = ConstellationSpec::psk(4);
        let se = spectral_efficiency(&SchemeConfig::im_ofdm(128, 4, 3, 1, q)).unwrap();
        assert_eq!(se.fractional, 2.0);
        assert_eq!(se.practical, 2.0);
        let se = spectral_efficiency(&SchemeConfig::ofdm(64, 1, q)).unwrap();
        assert_eq!((se.fractional, se.practical), (2.0, 2.0));
        let se = spectral_efficiency(&SchemeConfig::sm_ofdm(4, 64, 4, q)).unwrap();
        assert_eq!(se.practical, 4.0);
        let se = spectral_efficiency(&SchemeConfig::sm_ofdm(4, 64, 4, ConstellationSpec::psk(64))).unwrap();
        assert_eq!(se.practical, 8.0);
    }

    #[test]
    fn practical_never_exceeds_fractional() {
        let b = ConstellationSpec::psk(2);
        for n in 1..=16usize {
            for k in 1..=n {
                let se = spectral_efficiency(&SchemeConfig::gsm(n, k, 1, b)).unwrap();
                assert!(se.practical <= se.fractional);
                let c = binom(n as u64, k as u64).unwrap();
                assert_eq!(se.practical == se.fractional, c.is_power_of_two(), "n={n} k={k}");
            }
        }
        for (n, k) in [(2, 1), (4, 1), (4, 2), (4, 3), (8, 3), (8, 7), (16, 15)] {
            let se = spectral_efficiency(&SchemeConfig::im_ofdm(64, n, k, 1, b)).unwrap();
            assert!(se.practical <= se.fractional);
        }
        let g = SchemeConfig::gsfim(4, 8, GsfimBlock { antennas: 4, subcarriers: 2, active: 3 }, 4, b);
        let se = spectral_efficiency(&g).unwrap();
        assert_eq!(se.practical, 4.0);
        assert!(se.fractional > 4.0);
    }
}
