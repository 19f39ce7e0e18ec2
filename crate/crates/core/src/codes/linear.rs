use super::ParityCheckMatrix;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Largest code dimension for which exhaustive codeword enumeration is
/// attempted.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Binary linear code `[m, s]` with its parity-check matrix and a generator
/// that is the identity on the information set.
///
/// Messages map to codewords bit-by-bit over the information set, so a
/// codeword's message is read straight off those coordinates. Message
/// integers put message bit 0 in the most significant position, which makes
/// integer order equal to lexicographic order of the information bits.
#[derive(Clone, Debug)]
pub struct LinearCode {
    h: ParityCheckMatrix,
    g: BitMatrix,
    info_set: Vec<usize>,
}

impl LinearCode {
    /// Derives the generator from the null space of `h`. Rank-deficient
    /// matrices are accepted: the dimension is `m - rank(h)`.
    pub fn from_parity(h: ParityCheckMatrix) -> Result<Self> {
        let (g, info_set) = h.to_bit_matrix().null_space();
        if g.nrows() == 0 {
            return Err(Error::TrivialCode);
        }
        Ok(LinearCode { h, g, info_set })
    }

    #[inline]
    pub fn length(&self) -> usize {
        self.h.cols()
    }

    #[inline]
    pub fn dimension(&self) -> usize {
        self.g.nrows()
    }

    pub fn rate(&self) -> f64 {
        self.dimension() as f64 / self.length() as f64
    }

    pub fn parity_check(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.g
    }

    /// Coordinates on which the generator is the identity.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    /// `msg * G`.
    pub fn encode(&self, msg: &BitVec) -> Result<BitVec> {
        if msg.len() != self.dimension() {
            return Err(Error::LengthMismatch {
                expected: self.dimension(),
                found: msg.len(),
            });
        }
        Ok(self.g.left_mul(msg))
    }

    /// Codeword for message integer `j` (`0 <= j < 2^s`).
    pub fn encode_index(&self, j: u64) -> BitVec {
        let s = self.dimension();
        debug_assert!(s >= 64 || j >> s == 0, "message index out of range");
        let mut out = BitVec::zeros(self.length());
        for i in 0..s {
            if (j >> (s - 1 - i)) & 1 == 1 {
                out.xor_assign(self.g.row(i));
            }
        }
        out
    }

    /// Inverse of [`encode_index`](Self::encode_index); `None` when `word` is
    /// not a codeword.
    pub fn message_index(&self, word: &BitVec) -> Option<u64> {
        if !self.h.is_codeword(word) {
            return None;
        }
        let s = self.dimension();
        Some(
            self.info_set
                .iter()
                .enumerate()
                .filter(|&(_, &c)| word.get(c))
                .fold(0u64, |acc, (i, _)| acc | 1u64 << (s - 1 - i)),
        )
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        self.h.is_codeword(word)
    }

    /// True when the all-ones word is a codeword, i.e. the code contains
    /// complementary pairs whose BPSK images cancel.
    pub fn contains_all_ones(&self) -> bool {
        self.h.is_codeword(&BitVec::ones(self.length()))
    }

    /// Calls `f(j, codeword)` for every message integer in Gray-code order.
    /// The all-zero codeword (`j = 0`) comes first.
    pub fn for_each_codeword(&self, cap: usize, mut f: impl FnMut(u64, &BitVec)) -> Result<()> {
        let s = self.dimension();
        if s > cap {
            return Err(Error::DimensionTooLarge { dimension: s, cap });
        }
        let mut word = BitVec::zeros(self.length());
        let mut msg = 0u64;
        f(0, &word);
        for step in 1u64..(1u64 << s) {
            let bit = step.trailing_zeros() as usize;
            // flipping message bit `bit` from the least significant end
            word.xor_assign(self.g.row(s - 1 - bit));
            msg ^= 1 << bit;
            f(msg, &word);
        }
        Ok(())
    }
}

/// Codeword weight distribution `B_0..B_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSpectrum {
    pub counts: Vec<u64>,
    /// Smallest nonzero weight present, `None` for the zero code.
    pub min_distance: Option<usize>,
}

impl DistanceSpectrum {
    /// Nonzero weights that occur, ascending.
    pub fn weights(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, &c)| c > 0)
            .map(|(w, _)| w)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Exact weight enumeration over all `2^s` codewords. For a linear code this
/// is also the distance distribution seen from any codeword.
pub fn distance_spectrum(code: &LinearCode, cap: usize) -> Result<DistanceSpectrum> {
    let mut counts = vec![0u64; code.length() + 1];
    code.for_each_codeword(cap, |_, w| counts[w.weight()] += 1)?;
    let min_distance = counts.iter().skip(1).position(|&c| c > 0).map(|i| i + 1);
    Ok(DistanceSpectrum { counts, min_distance })
}

/// Row-reduced parity-check matrix `[I | P]`.
#[derive(Clone, Debug)]
pub struct SystematicForm {
    /// `[I | P]` in permuted coordinates: column `p` is original column
    /// `permutation[p]`.
    pub matrix: ParityCheckMatrix,
    pub permutation: Vec<usize>,
    /// Number of input rows that were linearly dependent and dropped.
    pub dropped_rows: usize,
    reduced: ParityCheckMatrix,
}

impl SystematicForm {
    /// The same reduced rows in the original column order. Its null space is
    /// the input code, so it can drive a decoder for that code directly.
    pub fn in_original_order(&self) -> &ParityCheckMatrix {
        &self.reduced
    }
}

/// Gauss-Jordan elimination visiting columns in `column_order`. Pivot
/// columns are moved to the front (in the order they were found), followed
/// by the remaining columns in `column_order` order.
pub fn systematic_form(h: &ParityCheckMatrix, column_order: &[usize]) -> Result<SystematicForm> {
    let m = h.cols();
    if column_order.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: column_order.len(),
        });
    }
    let mut seen = vec![false; m];
    for &c in column_order {
        if c >= m || core::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidParameter(format!(
                "column order is not a permutation of 0..{m}"
            )));
        }
    }
    if h.num_edges() == 0 {
        return Err(Error::InvalidParameter("parity-check matrix is zero".into()));
    }

    let ech = h.to_bit_matrix().echelon_with_order(column_order);
    let mut is_pivot = vec![false; m];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut permutation = ech.pivots.clone();
    permutation.extend(column_order.iter().copied().filter(|&c| !is_pivot[c]));

    let permuted_rows = ech.rows.rows().iter().map(|r| r.gather(&permutation)).collect();
    let matrix = ParityCheckMatrix::from_bit_matrix(&BitMatrix::from_rows(m, permuted_rows));
    Ok(SystematicForm {
        matrix,
        permutation,
        dropped_rows: h.rows() - ech.pivots.len(),
        reduced: ParityCheckMatrix::from_bit_matrix(&ech.rows),
    })
}

/// Subcode of codewords with a zero first coordinate, with that coordinate
/// deleted. Its parity-check matrix is `H` without column 0, so sparsity is
/// preserved.
pub fn expurgate_first_coordinate(code: &LinearCode) -> Result<LinearCode> {
    if code.length() < 2 {
        return Err(Error::InvalidParameter("cannot shorten a length-1 code".into()));
    }
    LinearCode::from_parity(code.parity_check().remove_column(0))
}
