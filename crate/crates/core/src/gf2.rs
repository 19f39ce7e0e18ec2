//! Bit-packed vectors and dense matrices over GF(2).
//!
//! Words are stored little-endian within `u64` limbs: bit `i` lives in limb
//! `i / 64` at position `i % 64`. Bits past `len` in the last limb are always
//! zero, so equality, hashing and popcounts work directly on the limbs.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const LIMB: usize = 64;

#[inline]
fn limbs_for(len: usize) -> usize {
    len.div_ceil(LIMB)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    limbs: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            limbs: vec![0; limbs_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec {
            limbs: vec![!0; limbs_for(len)],
            len,
        };
        v.clear_tail();
        v
    }

    /// Builds a vector from `0`/`1` bytes; any nonzero byte is a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.limbs[i / LIMB] >> (i % LIMB)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % LIMB);
        if bit {
            self.limbs[i / LIMB] |= mask;
        } else {
            self.limbs[i / LIMB] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.limbs[i / LIMB] ^= 1u64 << (i % LIMB);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in or");
        for (a, b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a |= *b;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Hamming distance without allocating.
    pub fn distance(&self, other: &BitVec) -> usize {
        assert_eq!(self.len, other.len, "length mismatch in distance");
        self.limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// True when every one of `self` is also a one of `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.limbs.iter().zip(&other.limbs).all(|(a, b)| a & !b == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.limbs.iter().enumerate().flat_map(|(k, &limb)| {
            let mut w = limb;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * LIMB + t)
                }
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Removes coordinate `i`, shifting later coordinates down by one.
    pub fn remove(&self, i: usize) -> BitVec {
        assert!(i < self.len);
        let mut out = BitVec::zeros(self.len - 1);
        for j in self.iter_ones() {
            match j.cmp(&i) {
                core::cmp::Ordering::Less => out.set(j, true),
                core::cmp::Ordering::Greater => out.set(j - 1, true),
                core::cmp::Ordering::Equal => {}
            }
        }
        out
    }

    /// Returns `out` with `out[p] = self[perm[p]]`.
    pub fn gather(&self, perm: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(perm.len());
        for (p, &src) in perm.iter().enumerate() {
            if self.get(src) {
                out.set(p, true);
            }
        }
        out
    }

    fn clear_tail(&mut self) {
        let r = self.len % LIMB;
        if r != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec(")?;
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Dense row-major matrix over GF(2); each row is a packed [`BitVec`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows of the reduced row echelon form.
    pub rows: BitMatrix,
    /// Pivot column of each reduced row, in row order.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        BitMatrix { rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit)
    }

    /// `self * v^T`, one bit per row.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            if row.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    /// `msg * self`: XOR of the rows selected by `msg`.
    pub fn left_mul(&self, msg: &BitVec) -> BitVec {
        assert_eq!(msg.len(), self.nrows(), "message length mismatch");
        let mut out = BitVec::zeros(self.cols);
        for i in msg.iter_ones() {
            out.xor_assign(&self.rows[i]);
        }
        out
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Reduced row echelon form with pivots searched in natural column order.
    pub fn echelon(&self) -> Echelon {
        let order: Vec<usize> = (0..self.cols).collect();
        self.echelon_with_order(&order)
    }

    /// Gauss-Jordan elimination visiting columns in `order`. Zero rows
    /// (rank deficiency) are dropped from the result.
    pub fn echelon_with_order(&self, order: &[usize]) -> Echelon {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for &c in order {
            if next == rows.len() {
                break;
            }
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let (head, tail) = rows.split_at_mut(next);
            let (pivot, rest) = tail.split_first_mut().expect("pivot row exists");
            for r in head.iter_mut().chain(rest.iter_mut()) {
                if r.get(c) {
                    r.xor_assign(pivot);
                }
            }
            pivots.push(c);
            next += 1;
        }
        rows.truncate(next);
        Echelon {
            rows: BitMatrix { rows, cols: self.cols },
            pivots,
        }
    }

    /// Basis of the right null space `{x : self * x^T = 0}`, one row per
    /// free column, together with the free columns. Each basis row has
    /// exactly one free-column bit set, so the basis restricted to the
    /// free columns is the identity.
    pub fn null_space(&self) -> (BitMatrix, Vec<usize>) {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (row, &p) in ech.rows.rows.iter().zip(&ech.pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        (BitMatrix::from_rows(self.cols, basis), free)
    }
}
