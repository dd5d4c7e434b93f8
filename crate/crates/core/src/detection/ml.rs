use num_complex::Complex;

use super::{block_columns, DetectionResult};
use crate::channel::ChannelRealization;
use crate::error::{bail, Result};
use crate::numerics::{usize_to_bits, CMat};
use crate::real::Real;
use crate::schemes::{block_codebook, BlockCodebook, BlockStructure, PatternGroup, Scheme, SchemeKind};

/// Maximum-likelihood detector with perfect receiver CSI.
///
/// Single-antenna schemes (OFDM, IM-OFDM and their degenerate MIMO
/// variants) see an orthogonal channel per cell, so the ML metric splits
/// into per-cell terms and is minimized per group without enumerating the
/// block codebook. Everything else is searched exhaustively.
#[derive(Debug, Clone)]
pub struct MlDetector<T> {
    scheme: Scheme<T>,
    codebook: Option<BlockCodebook<T>>,
}

impl<T: Real> MlDetector<T> {
    pub fn new(scheme: &Scheme<T>) -> Result<Self> {
        if scheme.kind() == SchemeKind::Dsm {
            bail!(Config, "coherent ML is not defined for D-SM frames; use the noncoherent detector");
        }
        let codebook = if Self::separable(scheme) { None } else { Some(block_codebook(scheme)?) };
        Ok(Self { scheme: scheme.clone(), codebook })
    }

    /// Forces exhaustive search even when the separable path applies.
    pub fn exhaustive(scheme: &Scheme<T>) -> Result<Self> {
        if scheme.kind() == SchemeKind::Dsm {
            bail!(Config, "coherent ML is not defined for D-SM frames; use the noncoherent detector");
        }
        Ok(Self { scheme: scheme.clone(), codebook: Some(block_codebook(scheme)?) })
    }

    fn separable(scheme: &Scheme<T>) -> bool {
        scheme.nt() == 1 && matches!(scheme.structure(), BlockStructure::Groups(_))
    }

    pub fn scheme(&self) -> &Scheme<T> {
        &self.scheme
    }

    pub fn detect(&self, y: &CMat<T>, h: &ChannelRealization<T>) -> Result<DetectionResult<T>> {
        if y.cols() != self.scheme.frame_cols() || y.rows() != h.nr() || h.nt() != self.scheme.nt() {
            bail!(
                Domain,
                "received grid {}x{} / channel {}x{} do not fit the scheme",
                y.rows(),
                y.cols(),
                h.nr(),
                h.nt()
            );
        }
        let mut out = DetectionResult::empty();
        for cols in self.scheme.placements() {
            let yb = block_columns(y, cols);
            let hs: Vec<&CMat<T>> = cols.iter().map(|&c| h.at(c)).collect();
            let res = match &self.codebook {
                Some(cb) => self.search(cb, &yb, &hs),
                None => self.separable_block(&yb, &hs),
            };
            out.append(res);
        }
        Ok(out)
    }

    fn search(&self, cb: &BlockCodebook<T>, yb: &CMat<T>, hs: &[&CMat<T>]) -> DetectionResult<T> {
        let nr = yb.rows();
        let mut best = 0;
        let mut best_d = T::infinity();
        let mut col = vec![Complex::new(T::zero(), T::zero()); self.scheme.nt()];
        for (i, e) in cb.entries.iter().enumerate() {
            let mut d = T::zero();
            for (j, hj) in hs.iter().enumerate() {
                for (r, v) in col.iter_mut().enumerate() {
                    *v = e.grid[(r, j)];
                }
                let hx = hj.mul_vec(&col);
                for r in 0..nr {
                    d += (yb[(r, j)] - hx[r]).norm_sqr();
                }
                if d >= best_d {
                    break;
                }
            }
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        let e = &cb.entries[best];
        DetectionResult { bits: e.bits.clone(), detected_pattern: e.patterns.clone(), metric: best_d, legal: true }
    }

    fn separable_block(&self, yb: &CMat<T>, hs: &[&CMat<T>]) -> DetectionResult<T> {
        let BlockStructure::Groups(groups) = self.scheme.structure() else { unreachable!() };
        let c = self.scheme.constellation();
        let m = c.bits_per_symbol();
        let scale = self.scheme.symbol_scale();
        let nr = yb.rows();
        let mut out = DetectionResult::empty();
        for g in groups {
            // per-cell cost when idle and best cost/label when active
            let mut idle = Vec::with_capacity(g.n());
            let mut active = Vec::with_capacity(g.n());
            for &(_, j) in &g.cells {
                let h = hs[j];
                let y_energy: T = (0..nr).map(|r| yb[(r, j)].norm_sqr()).sum();
                idle.push(y_energy);
                let mut best = (T::infinity(), 0usize);
                for (label, p) in c.points().iter().enumerate() {
                    let s = p.scale(scale);
                    let d: T = (0..nr).map(|r| (yb[(r, j)] - h[(r, 0)] * s).norm_sqr()).sum();
                    if d < best.0 {
                        best = (d, label);
                    }
                }
                active.push(best);
            }
            let (rank, metric) = best_pattern(g, |i, on| if on { active[i].0 } else { idle[i] });
            let pattern = g.pattern(rank);
            usize_to_bits(rank, g.index_bits, &mut out.bits);
            for &i in pattern.indices() {
                usize_to_bits(active[i].1, m, &mut out.bits);
            }
            out.metric += metric;
            out.detected_pattern.push(pattern);
        }
        out
    }
}

/// Lowest-cost legal pattern; `cost(i, active)` is the cost of cell `i`.
pub(crate) fn best_pattern<T: Real>(g: &PatternGroup, cost: impl Fn(usize, bool) -> T) -> (usize, T) {
    let base: T = (0..g.n()).map(|i| cost(i, false)).sum();
    let delta: Vec<T> = (0..g.n()).map(|i| cost(i, true) - cost(i, false)).collect();
    let mut best = (0, T::infinity());
    for rank in 0..g.legal_patterns() {
        let p = g.pattern(rank);
        let v = base + p.indices().iter().map(|&i| delta[i]).sum::<T>();
        if v < best.1 {
            best = (rank, v);
        }
    }
    best
}

/// One-shot ML detection of a full frame.
pub fn detect_ml<T: Real>(y: &CMat<T>, h: &ChannelRealization<T>, scheme: &Scheme<T>) -> Result<DetectionResult<T>> {
    MlDetector::new(scheme)?.detect(y, h)
}
