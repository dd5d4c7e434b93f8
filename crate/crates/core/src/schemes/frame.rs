use crate::numerics::{ActivationPattern, BitBlock, CMat};
use crate::real::Real;

/// Complex transmit grid plus the activation patterns and bits it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct TxFrame<T> {
    pub grid: CMat<T>,
    pub active_map: Vec<ActivationPattern>,
    pub carried_bits: BitBlock,
}

impl<T: Real> TxFrame<T> {
    /// Average transmit energy per channel use (per grid column).
    pub fn energy_per_use(&self) -> T {
        self.grid.norm_sqr() / T::of_usize(self.grid.cols())
    }
}

/// Last transmitted D-SM space-time block; starts as the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DsmState<T> {
    pub block: CMat<T>,
}

impl<T: Real> DsmState<T> {
    pub fn initial(nt: usize) -> Self {
        Self { block: CMat::identity(nt) }
    }

    /// Valid states have exactly one unit-modulus entry per row and column.
    pub fn is_valid(&self) -> bool {
        let n = self.block.rows();
        if n != self.block.cols() {
            return false;
        }
        let tol = T::lit(1e-6);
        let nonzero = |r: usize, c: usize| self.block[(r, c)].norm() > tol;
        (0..n).all(|c| {
            (0..n).filter(|&r| nonzero(r, c)).count() == 1
                && (0..n).all(|r| !nonzero(r, c) || (self.block[(r, c)].norm() - T::one()).abs() < tol)
        }) && (0..n).all(|r| (0..n).filter(|&c| nonzero(r, c)).count() == 1)
    }
}
