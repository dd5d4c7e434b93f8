//! Unitary DFT (1/sqrt(N) in both directions) over power-of-two lengths.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{bail, Result};
use crate::real::Real;

fn transform<T: Real>(x: &[Complex<T>], inverse: bool) -> Result<Vec<Complex<T>>> {
    let n = x.len();
    if n == 0 || !n.is_power_of_two() {
        bail!(Domain, "FFT length {n} is not a power of two");
    }
    let mut planner = FftPlanner::<T>::new();
    let plan = if inverse { planner.plan_fft_inverse(n) } else { planner.plan_fft_forward(n) };
    let mut buf = x.to_vec();
    plan.process(&mut buf);
    let scale = T::one() / T::of_usize(n).sqrt();
    for v in buf.iter_mut() {
        *v = v.scale(scale);
    }
    Ok(buf)
}

pub fn fft_unitary<T: Real>(x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    transform(x, false)
}

pub fn ifft_unitary<T: Real>(x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    transform(x, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn energy(x: &[Complex<f64>]) -> f64 {
        x.iter().map(|v| v.norm_sqr()).sum()
    }

    #[test]
    fn zeros_and_impulse() {
        let z = vec![Complex::new(0.0, 0.0); 8];
        assert!(fft_unitary(&z).unwrap().iter().all(|v| v.norm() == 0.0));
        let mut e0 = z.clone();
        e0[0] = Complex::new(1.0, 0.0);
        let out = fft_unitary(&e0).unwrap();
        for v in out {
            assert!((v - Complex::new(1.0 / 8f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_lengths() {
        assert!(fft_unitary::<f64>(&[Complex::new(1.0, 0.0); 6]).is_err());
        assert!(fft_unitary::<f64>(&[]).is_err());
    }

    #[test]
    fn matches_direct_dft() {
        let x: Vec<Complex<f64>> =
            (0..16).map(|i| Complex::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())).collect();
        let fx = fft_unitary(&x).unwrap();
        let n = x.len() as f64;
        for (k, v) in fx.iter().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (t, xt) in x.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * (k * t) as f64 / n;
                acc += xt * Complex::from_polar(1.0, ang);
            }
            assert!((acc / n.sqrt() - v).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn round_trip_and_parseval(
            log_n in 0usize..=12,
            seed in any::<u64>(),
        ) {
            let n = 1usize << log_n;
            let mut s = seed | 1;
            let mut next = || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; (s as f64 / u64::MAX as f64) - 0.5 };
            let x: Vec<Complex<f64>> = (0..n).map(|_| Complex::new(next(), next())).collect();
            let fx = fft_unitary(&x).unwrap();
            prop_assert!((energy(&x) - energy(&fx)).abs() < 1e-10);
            let back = ifft_unitary(&fx).unwrap();
            let err = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            prop_assert!(err < 1e-10);
        }
    }
}
