use super::frame::TxFrame;
use super::scheme::Scheme;
use crate::error::{bail, Result};
use crate::numerics::{usize_to_bits, ActivationPattern, CMat};
use crate::real::Real;

/// Largest bit count for which a codebook is enumerated.
pub const MAX_CODEBOOK_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry<T> {
    pub bits: Vec<u8>,
    pub grid: CMat<T>,
    pub patterns: Vec<ActivationPattern>,
}

/// Every legal block, in bit-integer order (index bits most significant).
#[derive(Debug, Clone)]
pub struct BlockCodebook<T> {
    pub entries: Vec<BlockEntry<T>>,
}

impl<T> BlockCodebook<T> {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn block_codebook<T: Real>(scheme: &Scheme<T>) -> Result<BlockCodebook<T>> {
    let b = scheme.block_bits();
    if b > MAX_CODEBOOK_BITS {
        bail!(Capacity, "{}: block of {b} bits exceeds enumeration limit {MAX_CODEBOOK_BITS}", scheme.config().label());
    }
    let mut entries = Vec::with_capacity(1 << b);
    for v in 0..1usize << b {
        let mut bits = Vec::with_capacity(b);
        usize_to_bits(v, b, &mut bits);
        let (grid, patterns) = scheme.encode_block(&bits)?;
        entries.push(BlockEntry { bits, grid, patterns });
    }
    Ok(BlockCodebook { entries })
}

/// Full-frame codebook; D-SM frames use the identity reference block.
pub fn codebook<T: Real>(scheme: &Scheme<T>) -> Result<Vec<(Vec<u8>, TxFrame<T>)>> {
    let b = scheme.frame_bits();
    if b > MAX_CODEBOOK_BITS {
        bail!(Capacity, "{}: frame of {b} bits exceeds enumeration limit {MAX_CODEBOOK_BITS}", scheme.config().label());
    }
    (0..1usize << b)
        .map(|v| {
            let mut bits = Vec::with_capacity(b);
            usize_to_bits(v, b, &mut bits);
            let frame = scheme.encode(&bits)?;
            Ok((bits, frame))
        })
        .collect()
}
