use crate::error::{bail, Result};
use crate::numerics::CMat;
use crate::real::Real;

/// How the channel varies across the columns of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    /// One channel matrix for all columns (flat block fading).
    Shared,
    /// Independent channel per column (ideally interleaved subcarriers).
    IndependentColumns,
}

const QUAD_NODES: usize = 256;

/// The part of a difference matrix `D = x_i - x_j` that determines the
/// pairwise error probability over i.i.d. Rayleigh fading.
#[derive(Debug, Clone, PartialEq)]
pub enum PepProfile {
    /// Nonzero eigenvalues of the channel-weighted difference: one per
    /// independently faded column, or the single `||D||^2` of a rank-one
    /// shared-channel difference.
    Eigen(Vec<f64>),
    /// `D D^H` of a multi-column difference under a shared channel.
    Gram(CMat<f64>),
}

impl PepProfile {
    pub fn from_difference<T: Real>(delta: &CMat<T>, fading: FadingModel) -> Self {
        let col_norm =
            |c: usize| (0..delta.rows()).map(|r| delta[(r, c)].norm_sqr().as_f64()).sum::<f64>();
        match fading {
            FadingModel::IndependentColumns => {
                Self::Eigen((0..delta.cols()).map(col_norm).filter(|&v| v > 0.0).collect())
            }
            FadingModel::Shared if delta.cols() == 1 => {
                let v = col_norm(0);
                Self::Eigen(if v > 0.0 { vec![v] } else { Vec::new() })
            }
            FadingModel::Shared => {
                let d = CMat::from_fn(delta.rows(), delta.cols(), |r, c| {
                    let v = delta[(r, c)];
                    num_complex::Complex::new(v.re.as_f64(), v.im.as_f64())
                });
                Self::Gram(d.matmul(&d.adjoint()))
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Eigen(l) => l.is_empty(),
            Self::Gram(g) => g.norm_sqr() == 0.0,
        }
    }

    /// Exact PEP at linear Es/N0 `snr` with `nr` receive antennas.
    ///
    /// Uses Craig's form of the Q function and the Rayleigh moment
    /// generating function: `(1/pi) int_0^{pi/2} det(I + snr/(4 sin^2) A)^-nr`.
    /// A single eigenvalue has a closed form.
    pub fn eval(&self, snr: f64, nr: usize) -> f64 {
        if let Self::Eigen(l) = self {
            if l.len() == 1 {
                return pep_rank_one(snr * l[0] / 4.0, nr);
            }
        }
        let h = std::f64::consts::FRAC_PI_2 / QUAD_NODES as f64;
        let mut acc = crate::KahanSum::new();
        for i in 0..QUAD_NODES {
            let theta = (i as f64 + 0.5) * h;
            let s = snr / (4.0 * theta.sin().powi(2));
            acc.add(self.mgf(s, nr));
        }
        acc.value() * h / std::f64::consts::PI
    }

    fn mgf(&self, s: f64, nr: usize) -> f64 {
        let d = match self {
            Self::Eigen(l) => l.iter().map(|&v| 1.0 + s * v).product::<f64>(),
            Self::Gram(g) => {
                let mut m = g.scale(s);
                for i in 0..m.rows() {
                    m[(i, i)] += num_complex::Complex::new(1.0, 0.0);
                }
                m.det().re
            }
        };
        d.powi(-(nr as i32))
    }
}

/// `[(1-mu)/2]^nr sum_{l<nr} C(nr-1+l, l) [(1+mu)/2]^l`, `mu = sqrt(c/(1+c))`.
fn pep_rank_one(c: f64, nr: usize) -> f64 {
    let mu = (c / (1.0 + c)).sqrt();
    // (1 - mu) / 2 without cancellation at large c
    let lo = 0.5 / ((1.0 + c) * (1.0 + mu));
    let hi = 0.5 * (1.0 + mu);
    let mut sum = 0.0;
    let mut coef = 1.0;
    for l in 0..nr {
        if l > 0 {
            coef *= (nr - 1 + l) as f64 / l as f64;
        }
        sum += coef * hi.powi(l as i32);
    }
    lo.powi(nr as i32) * sum
}

/// Pairwise error probability `P(x_i -> x_j)` for ML detection over
/// i.i.d. Rayleigh fading with `nr` receive antennas at linear Es/N0 `snr`.
pub fn pep_rayleigh<T: Real>(
    x_i: &CMat<T>,
    x_j: &CMat<T>,
    nr: usize,
    snr: f64,
    fading: FadingModel,
) -> Result<f64> {
    if (x_i.rows(), x_i.cols()) != (x_j.rows(), x_j.cols()) {
        bail!(Domain, "frames differ in shape");
    }
    if nr == 0 || !(snr >= 0.0) {
        bail!(Domain, "pep requires nr >= 1 and snr >= 0");
    }
    let profile = PepProfile::from_difference(&x_i.sub(x_j), fading);
    if profile.is_zero() {
        bail!(Domain, "pairwise error probability of identical frames is undefined");
    }
    Ok(profile.eval(snr, nr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn col(v: &[(f64, f64)]) -> CMat<f64> {
        CMat::from_rows(v.len(), 1, v.iter().map(|&(a, b)| Complex::new(a, b)).collect()).unwrap()
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for nr in 1..=4 {
            for &lam in &[0.1, 1.0, 4.0] {
                for &snr in &[0.5, 10.0, 1e3, 1e5] {
                    let closed = PepProfile::Eigen(vec![lam]).eval(snr, nr);
                    // force the integral: split lam into a two-column profile with one tiny column
                    let g = CMat::from_rows(1, 1, vec![Complex::new(lam, 0.0)]).unwrap();
                    let integral = PepProfile::Gram(g).eval(snr, nr);
                    assert!(((closed - integral) / closed).abs() < 1e-9, "nr={nr} lam={lam} snr={snr}: {closed} {integral}");
                }
            }
        }
    }

    #[test]
    fn bpsk_single_antenna_textbook() {
        let a = col(&[(1.0, 0.0)]);
        let b = col(&[(-1.0, 0.0)]);
        for &g in &[0.1, 1.0, 10.0, 100.0] {
            let p = pep_rayleigh(&a, &b, 1, g, FadingModel::Shared).unwrap();
            let expect = 0.5 * (1.0 - (g / (1.0 + g)).sqrt());
            assert!((p - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetric_and_vanishing() {
        let a = col(&[(1.0, 0.0), (0.0, 0.0)]);
        let b = col(&[(0.0, 0.0), (0.0, 1.0)]);
        for fading in [FadingModel::Shared, FadingModel::IndependentColumns] {
            let p1 = pep_rayleigh(&a, &b, 2, 10.0, fading).unwrap();
            let p2 = pep_rayleigh(&b, &a, 2, 10.0, fading).unwrap();
            assert_eq!(p1, p2);
        }
        let p = pep_rayleigh(&a, &b, 2, 1e12, FadingModel::Shared).unwrap();
        assert!(p < 1e-20);
        assert!(pep_rayleigh(&a, &a, 1, 1.0, FadingModel::Shared).is_err());
    }

    #[test]
    fn high_snr_slope_equals_receive_antennas() {
        let a = col(&[(1.0, 0.0)]);
        let b = col(&[(-1.0, 0.0)]);
        for nr in 1..=4 {
            let p1 = pep_rayleigh(&a, &b, nr, 1e6, FadingModel::Shared).unwrap();
            let p2 = pep_rayleigh(&a, &b, nr, 1e7, FadingModel::Shared).unwrap();
            let slope = (p2.log10() - p1.log10()) / 1.0;
            assert!((slope + nr as f64).abs() < 0.01, "nr={nr} slope={slope}");
        }
    }

    #[test]
    fn independent_columns_multiply_diversity() {
        let a = CMat::from_rows(1, 2, vec![Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)]).unwrap();
        let b = CMat::from_rows(1, 2, vec![Complex::new(-1.0, 0.0), Complex::new(-1.0, 0.0)]).unwrap();
        let p1 = pep_rayleigh(&a, &b, 1, 1e5, FadingModel::IndependentColumns).unwrap();
        let p2 = pep_rayleigh(&a, &b, 1, 1e6, FadingModel::IndependentColumns).unwrap();
        assert!(((p2.log10() - p1.log10()) + 2.0).abs() < 0.01);
        // shared channel: rank one, diversity 1
        let s1 = pep_rayleigh(&a, &b, 1, 1e5, FadingModel::Shared).unwrap();
        let s2 = pep_rayleigh(&a, &b, 1, 1e6, FadingModel::Shared).unwrap();
        assert!(((s2.log10() - s1.log10()) + 1.0).abs() < 0.01);
    }
}
