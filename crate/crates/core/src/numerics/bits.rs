use crate::error::{bail, Result};

/// Information bits for one transmit block.
///
/// Each position is either an index bit (selects an activation pattern) or a
/// constellation bit. For a single IM group the index bits come first; frames
/// made of several groups interleave the two kinds group by group, which the
/// per-position mask records.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitBlock {
    bits: Vec<u8>,
    index_mask: Vec<bool>,
}

impl BitBlock {
    /// First `index_len` bits are index bits.
    pub fn new(bits: Vec<u8>, index_len: usize) -> Result<Self> {
        if index_len > bits.len() {
            bail!(Encoding, "index split {index_len} beyond block length {}", bits.len());
        }
        let mask = (0..bits.len()).map(|i| i < index_len).collect();
        Self::with_mask(bits, mask)
    }

    pub fn with_mask(bits: Vec<u8>, index_mask: Vec<bool>) -> Result<Self> {
        if index_mask.len() != bits.len() {
            bail!(Encoding, "index mask length {} != bit count {}", index_mask.len(), bits.len());
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            bail!(Encoding, "bit value {b} is not 0 or 1");
        }
        Ok(Self { bits, index_mask })
    }

    pub fn index_mask(&self) -> &[bool] {
        &self.index_mask
    }

    pub fn index_len(&self) -> usize {
        self.index_mask.iter().filter(|&&m| m).count()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<u8> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn index_bits(&self) -> Vec<u8> {
        self.select(true)
    }

    pub fn constellation_bits(&self) -> Vec<u8> {
        self.select(false)
    }

    fn select(&self, index: bool) -> Vec<u8> {
        self.bits.iter().zip(&self.index_mask).filter(|(_, &m)| m == index).map(|(&b, _)| b).collect()
    }
}

/// Interprets `bits` as an MSB-first unsigned integer.
pub fn bits_to_usize(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b & 1))
}

/// Writes `value` as `width` MSB-first bits.
pub fn usize_to_bits(value: usize, width: usize, out: &mut Vec<u8>) {
    for i in (0..width).rev() {
        out.push(((value >> i) & 1) as u8);
    }
}
