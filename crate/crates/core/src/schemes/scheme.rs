use num_complex::Complex;
use rand::Rng;

use super::config::{group_index_bits, Grouping, SchemeConfig, SchemeKind};
use super::frame::{DsmState, TxFrame};
use crate::error::{bail, Result};
use crate::numerics::{bits_to_usize, unrank_subset, ActivationPattern, BitBlock, CMat, Constellation, ConstellationKind};
use crate::real::Real;

/// A set of cells of which `k` are activated by `index_bits` index bits,
/// followed by `k` constellation symbols on the active cells.
#[derive(Debug, Clone, PartialEq)]
pub struct PatternGroup {
    /// (row, col) positions within the block, in pattern-index order.
    pub cells: Vec<(usize, usize)>,
    pub k: usize,
    pub index_bits: usize,
}

impl PatternGroup {
    pub fn n(&self) -> usize {
        self.cells.len()
    }

    pub fn legal_patterns(&self) -> usize {
        1 << self.index_bits
    }

    pub fn pattern(&self, rank: usize) -> ActivationPattern {
        unrank_subset(rank as u64, self.cells.len(), self.k).expect("rank within legal range")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockStructure {
    /// Independent k-of-n groups laid out one after another in the bits.
    Groups(Vec<PatternGroup>),
    /// QSM: two `log2 Nt` fields pick the in-phase and quadrature antennas.
    Quadrature { field_bits: usize },
    /// D-SM: index bits pick one of `perms`, then one symbol per channel use.
    Differential { perms: Vec<Vec<usize>>, index_bits: usize },
}

/// A validated scheme together with its constellation and block layout.
#[derive(Debug, Clone)]
pub struct Scheme<T> {
    cfg: SchemeConfig,
    constellation: Constellation<T>,
    structure: BlockStructure,
    block_rows: usize,
    block_cols: usize,
    scale: T,
    block_bits: usize,
    index_mask: Vec<bool>,
    placements: Vec<Vec<usize>>,
    frame_cols: usize,
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

impl<T: Real> Scheme<T> {
    pub fn new(cfg: SchemeConfig) -> Result<Self> {
        cfg.validate()?;
        let mut constellation = Constellation::from_spec(cfg.constellation)?;
        if cfg.kind == SchemeKind::Qsm && cfg.constellation.kind == ConstellationKind::Psk && cfg.constellation.order >= 4 {
            // keep every point off the axes, otherwise one antenna index is lost
            constellation = constellation.rotated(std::f64::consts::PI / cfg.constellation.order as f64);
        }
        let m = constellation.bits_per_symbol();
        let nt = cfg.nt;
        let column = |k: usize| -> Result<PatternGroup> {
            Ok(PatternGroup { cells: (0..nt).map(|a| (a, 0)).collect(), k, index_bits: group_index_bits(nt, k)? })
        };
        let sqrt = |v: f64| T::lit(v.sqrt());
        let (structure, rows, cols, scale) = match cfg.kind {
            SchemeKind::Sm | SchemeKind::SmOfdm => (BlockStructure::Groups(vec![column(1)?]), nt, 1, T::one()),
            SchemeKind::Gsm => {
                let na = cfg.na.unwrap_or(1);
                (BlockStructure::Groups(vec![column(na)?]), nt, 1, sqrt(1.0 / na as f64))
            }
            SchemeKind::Vblast => (BlockStructure::Groups(vec![column(nt)?]), nt, 1, sqrt(1.0 / nt as f64)),
            SchemeKind::Qsm => {
                (BlockStructure::Quadrature { field_bits: nt.trailing_zeros() as usize }, nt, 1, T::one())
            }
            SchemeKind::Dsm => {
                let all = lex_permutations(nt);
                let index_bits = crate::numerics::floor_log2(all.len() as u64) as usize;
                let perms = all.into_iter().take(1 << index_bits).collect();
                (BlockStructure::Differential { perms, index_bits }, nt, nt, T::one())
            }
            SchemeKind::Ofdm => {
                let g = PatternGroup { cells: vec![(0, 0)], k: 1, index_bits: 0 };
                (BlockStructure::Groups(vec![g]), 1, 1, T::one())
            }
            SchemeKind::ImOfdm | SchemeKind::MimoOfdmIm => {
                let (n, k) = (cfg.group_size.unwrap_or(1), cfg.active.unwrap_or(1));
                let p1 = group_index_bits(n, k)?;
                let groups =
                    (0..nt).map(|a| PatternGroup { cells: (0..n).map(|c| (a, c)).collect(), k, index_bits: p1 }).collect();
                let realloc = if cfg.power_reallocation { n as f64 / k as f64 } else { 1.0 };
                (BlockStructure::Groups(groups), nt, n, sqrt(realloc / nt as f64))
            }
            SchemeKind::Gsfim => {
                let g = cfg.gsfim.expect("validated");
                let cells: Vec<(usize, usize)> =
                    (0..g.antennas).flat_map(|a| (0..g.subcarriers).map(move |s| (a, s))).collect();
                let n = cells.len();
                let p1 = group_index_bits(n, g.active)?;
                let realloc = if cfg.power_reallocation { n as f64 / g.active as f64 } else { 1.0 };
                let group = PatternGroup { cells, k: g.active, index_bits: p1 };
                (BlockStructure::Groups(vec![group]), nt, g.subcarriers, sqrt(realloc / nt as f64))
            }
        };

        let mut index_mask = Vec::new();
        match &structure {
            BlockStructure::Groups(groups) => {
                for g in groups {
                    index_mask.extend(std::iter::repeat_n(true, g.index_bits));
                    index_mask.extend(std::iter::repeat_n(false, g.k * m));
                }
            }
            BlockStructure::Quadrature { field_bits } => {
                index_mask.extend(std::iter::repeat_n(true, 2 * field_bits));
                index_mask.extend(std::iter::repeat_n(false, m));
            }
            BlockStructure::Differential { index_bits, .. } => {
                index_mask.extend(std::iter::repeat_n(true, *index_bits));
                index_mask.extend(std::iter::repeat_n(false, nt * m));
            }
        }
        let block_bits = index_mask.len();

        let (placements, frame_cols) = if cfg.kind.is_frequency() {
            let n_sub = cfg.n_subcarriers;
            let n_blocks = n_sub / cols;
            let placements = (0..n_blocks)
                .map(|g| match cfg.grouping {
                    Grouping::Interleaved => (0..cols).map(|j| g + j * n_blocks).collect(),
                    Grouping::Localized => (0..cols).map(|j| g * cols + j).collect(),
                })
                .collect();
            (placements, n_sub)
        } else {
            (vec![(0..cols).collect()], cols)
        };

        Ok(Self {
            cfg,
            constellation,
            structure,
            block_rows: rows,
            block_cols: cols,
            scale,
            block_bits,
            index_mask,
            placements,
            frame_cols,
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn kind(&self) -> SchemeKind {
        self.cfg.kind
    }

    pub fn constellation(&self) -> &Constellation<T> {
        &self.constellation
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    /// Amplitude applied to every active constellation symbol.
    pub fn symbol_scale(&self) -> T {
        self.scale
    }

    /// Transmit antennas (rows of every block and frame).
    pub fn nt(&self) -> usize {
        self.block_rows
    }

    pub fn nr(&self) -> usize {
        self.cfg.nr
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    /// Which block bit positions are index bits.
    pub fn block_index_mask(&self) -> &[bool] {
        &self.index_mask
    }

    /// Physical frame columns of each block, in bit order.
    pub fn placements(&self) -> &[Vec<usize>] {
        &self.placements
    }

    pub fn frame_cols(&self) -> usize {
        self.frame_cols
    }

    pub fn frame_bits(&self) -> usize {
        self.block_bits * self.placements.len()
    }

    pub fn frame_index_mask(&self) -> Vec<bool> {
        self.placements.iter().flat_map(|_| self.index_mask.iter().copied()).collect()
    }

    /// Channel uses per block (block columns).
    pub fn block_uses(&self) -> usize {
        self.block_cols
    }

    /// Draws a uniformly random frame worth of bits.
    pub fn random_bits<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u8> {
        (0..self.frame_bits()).map(|_| rng.random_range(0..2u8)).collect()
    }

    /// Encodes one block into a `nt x block_cols` grid.
    ///
    /// D-SM blocks are the symbol-weighted permutation matrix `S`; the
    /// transmitted block is `X_prev * S`.
    pub fn encode_block(&self, bits: &[u8]) -> Result<(CMat<T>, Vec<ActivationPattern>)> {
        if bits.len() != self.block_bits {
            bail!(Encoding, "{}: block needs {} bits, got {}", self.cfg.label(), self.block_bits, bits.len());
        }
        let m = self.constellation.bits_per_symbol();
        let mut grid = CMat::zeros(self.block_rows, self.block_cols);
        let mut patterns = Vec::new();
        let mut pos = 0;
        let mut take = |w: usize| {
            let v = bits_to_usize(&bits[pos..pos + w]);
            pos += w;
            v
        };
        match &self.structure {
            BlockStructure::Groups(groups) => {
                for g in groups {
                    let pattern = g.pattern(take(g.index_bits));
                    for &i in pattern.indices() {
                        let (r, c) = g.cells[i];
                        grid[(r, c)] = self.constellation.point(take(m)).scale(self.scale);
                    }
                    patterns.push(pattern);
                }
            }
            BlockStructure::Quadrature { field_bits } => {
                let nt = self.block_rows;
                let i_re = take(*field_bits);
                let i_im = take(*field_bits);
                let s = self.constellation.point(take(m));
                grid[(i_re, 0)] += Complex::new(s.re, T::zero());
                grid[(i_im, 0)] += Complex::new(T::zero(), s.im);
                patterns.push(ActivationPattern::new(nt, vec![i_re])?);
                patterns.push(ActivationPattern::new(nt, vec![i_im])?);
            }
            BlockStructure::Differential { perms, index_bits } => {
                let perm = &perms[take(*index_bits)];
                for (j, &a) in perm.iter().enumerate() {
                    grid[(a, j)] = self.constellation.point(take(m));
                }
                for &a in perm {
                    patterns.push(ActivationPattern::new(perm.len(), vec![a])?);
                }
            }
        }
        Ok((grid, patterns))
    }

    /// Encodes a whole frame. D-SM frames are encoded against the identity
    /// reference block; use [`Scheme::encode_dsm`] to thread state.
    pub fn encode(&self, bits: &[u8]) -> Result<TxFrame<T>> {
        if bits.len() != self.frame_bits() {
            bail!(Encoding, "{}: frame needs {} bits, got {}", self.cfg.label(), self.frame_bits(), bits.len());
        }
        if self.cfg.kind == SchemeKind::Dsm {
            return Ok(self.encode_dsm(bits, &DsmState::initial(self.block_rows))?.0);
        }
        let mut grid = CMat::zeros(self.block_rows, self.frame_cols);
        let mut active_map = Vec::new();
        for (b, cols) in self.placements.iter().enumerate() {
            let (block, patterns) = self.encode_block(&bits[b * self.block_bits..(b + 1) * self.block_bits])?;
            for (j, &col) in cols.iter().enumerate() {
                for r in 0..self.block_rows {
                    grid[(r, col)] = block[(r, j)];
                }
            }
            active_map.extend(patterns);
        }
        Ok(TxFrame { grid, active_map, carried_bits: BitBlock::with_mask(bits.to_vec(), self.frame_index_mask())? })
    }

    /// One D-SM block: `X_t = X_{t-1} S(bits)`.
    pub fn encode_dsm(&self, bits: &[u8], prev: &DsmState<T>) -> Result<(TxFrame<T>, DsmState<T>)> {
        if self.cfg.kind != SchemeKind::Dsm {
            bail!(Config, "encode_dsm called on {}", self.cfg.label());
        }
        if prev.block.rows() != self.block_rows || !prev.is_valid() {
            bail!(Encoding, "invalid D-SM reference block");
        }
        let (s, _) = self.encode_block(bits)?;
        let x = prev.block.matmul(&s);
        let nt = self.block_rows;
        let mut active_map = Vec::with_capacity(nt);
        for c in 0..nt {
            let a = (0..nt).find(|&r| x[(r, c)].norm() > T::lit(1e-6)).expect("one active antenna per use");
            active_map.push(ActivationPattern::new(nt, vec![a])?);
        }
        let frame = TxFrame {
            grid: x.clone(),
            active_map,
            carried_bits: BitBlock::with_mask(bits.to_vec(), self.index_mask.clone())?,
        };
        Ok((frame, DsmState { block: x }))
    }
}
