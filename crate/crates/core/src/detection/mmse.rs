use num_complex::Complex;

use super::ml::best_pattern;
use super::{block_columns, DetectionResult};
use crate::channel::ChannelRealization;
use crate::error::{bail, Result};
use crate::numerics::{usize_to_bits, ActivationPattern, CMat};
use crate::real::Real;
use crate::schemes::{BlockStructure, Scheme};

/// `W y = (H^H H + N0 I)^-1 H^H y` for one channel use. With `N0 = 0` this
/// is zero forcing.
fn equalize<T: Real>(h: &CMat<T>, y: &[Complex<T>], n0: T) -> Result<Vec<Complex<T>>> {
    let hh = h.adjoint();
    let mut gram = hh.matmul(h);
    for i in 0..gram.rows() {
        gram[(i, i)] += Complex::new(n0, T::zero());
    }
    let rhs = CMat::from_rows(h.cols(), 1, hh.mul_vec(y))?;
    Ok(gram.solve(&rhs)?.column(0))
}

/// Two-stage MMSE receiver: per-channel-use linear MMSE equalization, then
/// for each IM group the legal pattern with the largest equalized energy on
/// its active cells, then minimum-distance demapping of those cells.
pub fn detect_mmse<T: Real>(
    y: &CMat<T>,
    h: &ChannelRealization<T>,
    scheme: &Scheme<T>,
    noise_variance: f64,
) -> Result<DetectionResult<T>> {
    if matches!(scheme.structure(), BlockStructure::Differential { .. }) {
        bail!(Config, "MMSE detection is not defined for D-SM");
    }
    if y.cols() != scheme.frame_cols() || y.rows() != h.nr() || h.nt() != scheme.nt() {
        bail!(Domain, "received grid does not fit the scheme");
    }
    if !(noise_variance >= 0.0) {
        bail!(Domain, "noise variance must be non-negative, got {noise_variance}");
    }
    let n0 = T::lit(noise_variance);
    let c = scheme.constellation();
    let m = c.bits_per_symbol();
    let scale = scheme.symbol_scale();
    let mut out = DetectionResult { bits: Vec::new(), detected_pattern: Vec::new(), metric: T::zero(), legal: true };
    for cols in scheme.placements() {
        let yb = block_columns(y, cols);
        let mut xhat = CMat::zeros(scheme.nt(), cols.len());
        for (j, &col) in cols.iter().enumerate() {
            let est = equalize(h.at(col), &yb.column(j), n0)?;
            xhat.set_column(j, &est);
        }
        let start = out.bits.len();
        match scheme.structure() {
            BlockStructure::Groups(groups) => {
                for g in groups {
                    let energy: Vec<T> = g.cells.iter().map(|&(r, j)| xhat[(r, j)].norm_sqr()).collect();
                    let (rank, _) = best_pattern(g, |i, on| if on { -energy[i] } else { T::zero() });
                    let pattern = g.pattern(rank);
                    usize_to_bits(rank, g.index_bits, &mut out.bits);
                    for &i in pattern.indices() {
                        let (r, j) = g.cells[i];
                        usize_to_bits(c.demap(xhat[(r, j)], scale), m, &mut out.bits);
                    }
                    out.legal &= rank < g.legal_patterns();
                    out.detected_pattern.push(pattern);
                }
            }
            BlockStructure::Quadrature { field_bits } => {
                let nt = scheme.nt();
                let argmax = |f: &dyn Fn(Complex<T>) -> T| {
                    (0..nt).fold((0, -T::one()), |best, i| {
                        let v = f(xhat[(i, 0)]);
                        if v > best.1 {
                            (i, v)
                        } else {
                            best
                        }
                    })
                    .0
                };
                let i_re = argmax(&|z| z.re.abs());
                let i_im = argmax(&|z| z.im.abs());
                let z = Complex::new(xhat[(i_re, 0)].re, xhat[(i_im, 0)].im);
                usize_to_bits(i_re, *field_bits, &mut out.bits);
                usize_to_bits(i_im, *field_bits, &mut out.bits);
                usize_to_bits(c.demap(z, T::one()), m, &mut out.bits);
                out.detected_pattern.push(ActivationPattern::new(nt, vec![i_re])?);
                out.detected_pattern.push(ActivationPattern::new(nt, vec![i_im])?);
            }
            BlockStructure::Differential { .. } => unreachable!(),
        }
        // residual of the decided block
        let (grid, _) = scheme.encode_block(&out.bits[start..])?;
        for (j, &col) in cols.iter().enumerate() {
            let hx = h.at(col).mul_vec(&grid.column(j));
            for (r, v) in hx.iter().enumerate() {
                out.metric += (yb[(r, j)] - v).norm_sqr();
            }
        }
    }
    Ok(out)
}
