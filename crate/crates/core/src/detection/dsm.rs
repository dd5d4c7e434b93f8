
use super::DetectionResult;
use crate::error::{bail, Result};
use crate::numerics::{usize_to_bits, ActivationPattern, CMat};
use crate::real::Real;
use crate::schemes::{BlockStructure, Scheme};

/// Noncoherent D-SM detection: `argmin ||Y_t - Y_{t-1} S||^2` over legal
/// symbol-weighted permutations `S`, using no channel knowledge.
///
/// Column `j` of `Y_{t-1} S` is `s_j` times column `perm[j]` of `Y_{t-1}`,
/// so for a fixed permutation each symbol is chosen independently; the
/// result equals exhaustive search over the whole codebook.
pub fn detect_dsm_noncoherent<T: Real>(
    y_prev: &CMat<T>,
    y_curr: &CMat<T>,
    scheme: &Scheme<T>,
) -> Result<DetectionResult<T>> {
    let BlockStructure::Differential { perms, index_bits } = scheme.structure() else {
        bail!(Config, "noncoherent differential detection requires a D-SM scheme, got {}", scheme.config().label());
    };
    let nt = scheme.nt();
    if y_prev.cols() != nt || y_curr.cols() != nt || y_prev.rows() != y_curr.rows() {
        bail!(Domain, "D-SM blocks must both be Nr x {nt}");
    }
    let nr = y_curr.rows();
    let c = scheme.constellation();
    let m = c.bits_per_symbol();
    // cost[a][j] = (best distance, label) for mapping previous column a onto current column j
    let mut cost = vec![vec![(T::zero(), 0usize); nt]; nt];
    for (a, row) in cost.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let mut best = (T::infinity(), 0usize);
            for (label, s) in c.points().iter().enumerate() {
                let d: T = (0..nr).map(|r| (y_curr[(r, j)] - y_prev[(r, a)] * s).norm_sqr()).sum();
                if d < best.0 {
                    best = (d, label);
                }
            }
            *slot = best;
        }
    }
    let mut best = (0usize, T::infinity());
    for (rank, perm) in perms.iter().enumerate() {
        let d: T = perm.iter().enumerate().map(|(j, &a)| cost[a][j].0).sum();
        if d < best.1 {
            best = (rank, d);
        }
    }
    let perm = &perms[best.0];
    let mut bits = Vec::with_capacity(scheme.block_bits());
    usize_to_bits(best.0, *index_bits, &mut bits);
    for (j, &a) in perm.iter().enumerate() {
        usize_to_bits(cost[a][j].1, m, &mut bits);
    }
    let detected_pattern =
        perm.iter().map(|&a| ActivationPattern::new(nt, vec![a])).collect::<Result<Vec<_>>>()?;
    Ok(DetectionResult { bits, detected_pattern, metric: best.1, legal: true })
}
