//! Lexicographic combinatorial number system.
//!
//! Index bits are mapped to k-subsets of `0..n` by ranking the subsets in
//! lexicographic order. Only the first `2^floor(log2 C(n,k))` ranks are legal
//! transmit patterns.

use crate::error::{bail, Result};

/// Largest `n` for which [`binom`] is guaranteed exact in `u64`.
pub const MAX_BINOM_N: u64 = 64;

/// Exact binomial coefficient `C(n, k)` for `n <= 64`.
pub fn binom(n: u64, k: u64) -> Result<u64> {
    if k > n {
        bail!(Domain, "binom: k = {k} exceeds n = {n}");
    }
    if n > MAX_BINOM_N {
        bail!(Domain, "binom: n = {n} exceeds supported maximum {MAX_BINOM_N}");
    }
    Ok(binom_unchecked(n, k))
}

/// `C(n, k)`, returning 0 when `k > n`. Caller guarantees `n <= 64`.
pub(crate) fn binom_unchecked(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// `floor(log2 v)` for `v >= 1`; 0 for `v = 0`.
pub fn floor_log2(v: u64) -> u32 {
    if v == 0 {
        0
    } else {
        63 - v.leading_zeros()
    }
}

/// k active indices out of n, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActivationPattern {
    n: usize,
    indices: Vec<usize>,
}

impl ActivationPattern {
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if n as u64 > MAX_BINOM_N {
            bail!(Domain, "activation pattern group size {n} exceeds {MAX_BINOM_N}");
        }
        if indices.len() > n {
            bail!(Domain, "pattern has {} indices for group size {n}", indices.len());
        }
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                bail!(Domain, "pattern indices must be strictly increasing: {indices:?}");
            }
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                bail!(Domain, "pattern index {last} out of range for n = {n}");
            }
        }
        Ok(Self { n, indices })
    }

    /// The full pattern `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        Self { n, indices: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn rank(&self) -> u64 {
        rank_subset(self)
    }
}

/// Lexicographic rank of a pattern in `[0, C(n, k))`.
pub fn rank_subset(pattern: &ActivationPattern) -> u64 {
    let n = pattern.n as u64;
    let k = pattern.k() as u64;
    // lex rank = C(n,k) - 1 - sum_i C(n - 1 - c_i, k - i)
    let total = binom_unchecked(n, k);
    let mut co = 0u64;
    for (i, &c) in pattern.indices.iter().enumerate() {
        co += binom_unchecked(n - 1 - c as u64, k - i as u64);
    }
    total - 1 - co
}

/// Inverse of [`rank_subset`].
pub fn unrank_subset(rank: u64, n: usize, k: usize) -> Result<ActivationPattern> {
    if k > n {
        bail!(Domain, "unrank: k = {k} exceeds n = {n}");
    }
    let total = binom(n as u64, k as u64)?;
    if rank >= total {
        bail!(Domain, "unrank: rank {rank} out of range [0, {total})");
    }
    let mut rem = total - 1 - rank;
    let mut indices = Vec::with_capacity(k);
    // largest m below the previous choice with C(m, k - i) <= rem
    let mut upper = n as u64;
    for i in 0..k as u64 {
        let r = k as u64 - i;
        let mut m = upper - 1;
        while binom_unchecked(m, r) > rem {
            m -= 1;
        }
        rem -= binom_unchecked(m, r);
        indices.push(n - 1 - m as usize);
        upper = m;
    }
    Ok(ActivationPattern { n, indices })
}

/// Number of index bits carried by a k-of-n group: `floor(log2 C(n, k))`.
pub fn index_bits(n: usize, k: usize) -> Result<u32> {
    Ok(floor_log2(binom(n as u64, k as u64)?))
}
