//! Sensing matrices whose columns are normalized BPSK images of codewords.

use crate::codes::{distance_spectrum, LinearCode};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::greedy::{CorrelationOracle, DenseColumns};
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, SymmetricEigen};

/// Largest code dimension accepted by [`SensingMatrix::new`]; column indices
/// must fit a machine word.
pub const MAX_DIMENSION: usize = 62;

/// Default size limits for exact RIP enumeration.
pub const EXACT_RIP_MAX_COLS: usize = 64;
pub const EXACT_RIP_MAX_K: usize = 3;

/// `+1` for bit 0, `-1` for bit 1.
#[inline]
pub fn bpsk(bit: bool) -> f64 {
    if bit {
        -1.0
    } else {
        1.0
    }
}

/// Unnormalized `+-1` image of a word.
pub fn bpsk_image(word: &BitVec) -> Vec<f64> {
    word.iter().map(bpsk).collect()
}

/// `m x (2^s - 1)` matrix with column `j` equal to `BPSK(encode(j)) / sqrt(m)`
/// for message integers `j = 1..=N`. Columns are computed on demand.
///
/// Through [`CorrelationOracle`] the columns are addressed 0-based: oracle
/// column `i` is message `i + 1`.
#[derive(Clone, Debug)]
pub struct SensingMatrix {
    code: LinearCode,
    scale: f64,
}

impl SensingMatrix {
    pub fn new(code: LinearCode) -> Result<Self> {
        let s = code.dimension();
        if s > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                dimension: s,
                cap: MAX_DIMENSION,
            });
        }
        let scale = 1.0 / libm::sqrt(code.length() as f64);
        Ok(SensingMatrix { code, scale })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.code.length()
    }

    /// `N = 2^s - 1`.
    #[inline]
    pub fn n_cols(&self) -> usize {
        (1usize << self.code.dimension()) - 1
    }

    /// Entry magnitude `1/sqrt(m)`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// True when the all-ones word is in the code, so some pairs of columns
    /// are negatives of each other and sum to zero.
    pub fn has_complementary_columns(&self) -> bool {
        self.code.contains_all_ones()
    }

    fn check_message(&self, j: u64) -> Result<()> {
        let n = self.n_cols() as u64;
        if j == 0 || j > n {
            return Err(Error::IndexOutOfRange { index: j, len: n + 1 });
        }
        Ok(())
    }

    /// Codeword behind column `j` (`1 <= j <= N`).
    pub fn codeword(&self, j: u64) -> Result<BitVec> {
        self.check_message(j)?;
        Ok(self.code.encode_index(j))
    }

    /// Normalized column `j` (`1 <= j <= N`).
    pub fn column_by_message(&self, j: u64) -> Result<Vec<f64>> {
        let w = self.codeword(j)?;
        Ok(w.iter().map(|b| bpsk(b) * self.scale).collect())
    }

    /// Message integer of a column given by its codeword, or `None` for a
    /// non-codeword or the zero word.
    pub fn message_of(&self, word: &BitVec) -> Option<u64> {
        self.code.message_index(word).filter(|&j| j != 0)
    }

    /// `<phi_i, phi_j> = 1 - 2 d_H(c_i, c_j) / m`, from a popcount.
    pub fn column_correlation(&self, i: u64, j: u64) -> Result<f64> {
        self.check_message(i)?;
        self.check_message(j)?;
        let d = self.code.encode_index(i).distance(&self.code.encode_index(j));
        let m = self.rows() as f64;
        Ok(1.0 - 2.0 * d as f64 / m)
    }

    /// Dense copy of all columns in oracle order. Memory is `m * N` reals.
    pub fn to_dense(&self) -> DenseColumns {
        let mut cols = vec![Vec::new(); self.n_cols()];
        self.code
            .for_each_codeword(MAX_DIMENSION, |j, w| {
                if j != 0 {
                    cols[j as usize - 1] = w.iter().map(|b| bpsk(b) * self.scale).collect();
                }
            })
            .expect("dimension bounded in constructor");
        DenseColumns::from_columns(self.rows(), cols).expect("columns have m entries")
    }

    /// `Phi x` for a sparse `x` given in oracle indexing.
    pub fn apply(&self, x: &crate::greedy::SparseSignal) -> Vec<f64> {
        let mut y = vec![0.0; self.rows()];
        for (&i, &v) in x.support().iter().zip(x.values()) {
            let w = self.code.encode_index(i as u64 + 1);
            for (b, yb) in y.iter_mut().enumerate() {
                *yb += v * bpsk(w.get(b)) * self.scale;
            }
        }
        y
    }
}

impl CorrelationOracle for SensingMatrix {
    fn rows(&self) -> usize {
        self.code.length()
    }

    fn n_cols(&self) -> usize {
        SensingMatrix::n_cols(self)
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.column_by_message(j as u64 + 1)
            .expect("oracle column index out of range")
    }

    /// Gray-code walk over all codewords: `<BPSK(c), v> = sum(v) - 2 sum_{b in c} v_b`,
    /// and each step flips one generator row, so only that row's support is
    /// touched.
    fn correlations(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows(), "observation length mismatch");
        let g: &BitMatrix = self.code.generator();
        let s = self.code.dimension();
        let rows: Vec<Vec<usize>> = g.rows().iter().map(|r| r.iter_ones().collect()).collect();
        let total: f64 = v.iter().sum();
        let mut word = BitVec::zeros(self.rows());
        let mut ones_sum = 0.0;
        let mut msg = 0usize;
        let mut out = vec![0.0; SensingMatrix::n_cols(self)];
        for step in 1usize..(1usize << s) {
            let bit = step.trailing_zeros() as usize;
            for &b in &rows[s - 1 - bit] {
                if word.get(b) {
                    ones_sum -= v[b];
                } else {
                    ones_sum += v[b];
                }
                word.flip(b);
            }
            msg ^= 1 << bit;
            out[msg - 1] = (total - 2.0 * ones_sum) * self.scale;
        }
        out
    }
}

/// Coherence summary derived from the distance spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct CoherenceReport {
    /// `max |<phi_i, phi_j>|` over distinct columns (0 when `N < 2`).
    pub mu: f64,
    /// Codeword weight attaining `mu`.
    pub achieving_weight: Option<usize>,
    /// Largest `K` with every relative distance strictly inside
    /// `(1/2 - 1/(4K), 1/2 + 1/(4K))`; `None` when unbounded.
    pub window_ok_for_k: Option<usize>,
    /// Largest `K` with `mu <= 1/(2K)`; `None` when unbounded.
    pub omp_guarantee_max_k: Option<usize>,
}

impl CoherenceReport {
    /// Whether `mu <= 1/(2K)`, the condition for exact OMP recovery of every
    /// `K`-sparse signal.
    pub fn guarantee_holds(&self, k: usize) -> bool {
        self.omp_guarantee_max_k.is_none_or(|kmax| k <= kmax)
    }
}

/// Coherence from the distance spectrum: pairwise distances between distinct
/// nonzero codewords are exactly the nonzero codeword weights (for `s >= 2`).
pub fn coherence(mat: &SensingMatrix, cap: usize) -> Result<CoherenceReport> {
    let m = mat.rows();
    if mat.code().dimension() < 2 {
        return Ok(CoherenceReport {
            mu: 0.0,
            achieving_weight: None,
            window_ok_for_k: None,
            omp_guarantee_max_k: None,
        });
    }
    let spec = distance_spectrum(mat.code(), cap)?;
    // |m - 2w| is an integer; compare integers to avoid float ties.
    let (w, dev) = spec
        .weights()
        .map(|w| (w, (m as i64 - 2 * w as i64).unsigned_abs() as usize))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let (achieving_weight, window, guarantee) = if dev == 0 {
        (spec.weights().next(), None, None)
    } else {
        // |m - 2w| / m < 1/(2K)  <=>  2 K dev < m
        // |m - 2w| / m <= 1/(2K) <=>  2 K dev <= m
        (Some(w), Some((m - 1) / (2 * dev)), Some(m / (2 * dev)))
    };
    Ok(CoherenceReport {
        mu: dev as f64 / m as f64,
        achieving_weight,
        window_ok_for_k: window,
        omp_guarantee_max_k: guarantee,
    })
}

/// Gershgorin bound on `delta_K`: the off-diagonal row sums of a `K x K`
/// Gram matrix are at most `(K - 1) mu`. Values `>= 1` are vacuous.
pub fn gershgorin_rip_bound(mu: f64, k: usize) -> f64 {
    k.saturating_sub(1) as f64 * mu
}

/// Exact `delta_k` by enumeration of every column subset of size `<= k`.
pub fn exact_rip_constant_of<O: CorrelationOracle + ?Sized>(
    oracle: &O,
    k: usize,
    max_cols: usize,
    max_k: usize,
) -> Result<f64> {
    let n = oracle.n_cols();
    if n > max_cols || k > max_k {
        return Err(Error::InvalidParameter(alloc::format!(
            "exact RIP limited to N <= {max_cols}, k <= {max_k} (got N = {n}, k = {k})"
        )));
    }
    let cols: Vec<Vec<f64>> = (0..n).map(|j| oracle.column(j)).collect();
    let gram = DMatrix::from_fn(n, n, |i, j| crate::greedy::dot(&cols[i], &cols[j]));
    let mut delta: f64 = 0.0;
    let mut subset = Vec::with_capacity(k);
    for size in 1..=k.min(n) {
        subset.clear();
        subset.extend(0..size);
        loop {
            let sub = DMatrix::from_fn(size, size, |a, b| gram[(subset[a], subset[b])]);
            let eig = SymmetricEigen::new(sub).eigenvalues;
            for &l in eig.iter() {
                delta = delta.max(l - 1.0).max(1.0 - l);
            }
            if !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(delta)
}

/// `delta_k` of a sensing matrix under the default size limits.
pub fn exact_rip_constant(mat: &SensingMatrix, k: usize) -> Result<f64> {
    exact_rip_constant_of(mat, k, EXACT_RIP_MAX_COLS, EXACT_RIP_MAX_K)
}

/// Advances a sorted index tuple to the next `n`-choose-`len` combination.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let Some(i) = (0..k).rev().find(|&i| c[i] < n - k + i) else {
        return false;
    };
    c[i] += 1;
    for j in i + 1..k {
        c[j] = c[j - 1] + 1;
    }
    true
}

/// Two disjoint sets of `2^(r-1)` columns with identical BPSK sums, so the
/// binary signals supported on them produce the same measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndistinguishablePair {
    /// Message integers of the first set, ascending.
    pub a: Vec<u64>,
    /// Message integers of the second set, ascending.
    pub b: Vec<u64>,
    /// True when one set contains message 0, the all-zero codeword, which
    /// has no column. This happens when the code has dimension exactly `r`.
    pub uses_zero_word: bool,
}

/// Node budget for the subcode search.
const PAIR_SEARCH_BUDGET: usize = 200_000;

/// Looks for an `r`-dimensional subcode `E` with a hyperplane `D` whose
/// support equals that of `E`. Then the cosets `c + D` and `c + d + D`
/// (`d` in `E \ D`) have equal BPSK sums: on `supp(D)` each coset is
/// balanced, elsewhere both are constant and agree. A translate `c` outside
/// `E` keeps the zero word out of both sets when the code is large enough.
pub fn find_indistinguishable_binary_pair(
    code: &LinearCode,
    r: usize,
    cap: usize,
) -> Result<Option<IndistinguishablePair>> {
    let s = code.dimension();
    if r < 2 || r > s || r >= 32 {
        return Ok(None);
    }
    let mut words: Vec<(u64, BitVec)> = Vec::new();
    code.for_each_codeword(cap, |j, w| {
        if j != 0 {
            words.push((j, w.clone()));
        }
    })?;
    words.sort_by(|a, b| a.1.weight().cmp(&b.1.weight()).then(a.0.cmp(&b.0)));

    let mut basis: Vec<usize> = Vec::with_capacity(r);
    let mut budget = PAIR_SEARCH_BUDGET;
    let found = search_subcode(&words, r, 0, &mut basis, &mut budget);
    let Some((basis, functional)) = found else {
        return Ok(None);
    };

    // Messages combine linearly, so work with message integers throughout.
    let gens: Vec<u64> = basis.iter().map(|&i| words[i].0).collect();
    let span = |coeffs: u32| -> u64 {
        (0..r)
            .filter(|&t| coeffs >> t & 1 == 1)
            .fold(0u64, |acc, t| acc ^ gens[t])
    };
    let translate = (0..s).map(|i| 1u64 << i).find(|&e| !in_span(&gens, e)).unwrap_or(0);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for coeffs in 0u32..(1 << r) {
        let msg = span(coeffs) ^ translate;
        if (coeffs & functional).count_ones() % 2 == 0 {
            a.push(msg);
        } else {
            b.push(msg);
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    let uses_zero_word = a.first() == Some(&0) || b.first() == Some(&0);
    let pair = IndistinguishablePair { a, b, uses_zero_word };
    debug_assert!(bpsk_sums_agree(code, &pair));
    Ok(Some(pair))
}

fn in_span(gens: &[u64], target: u64) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for &g in gens {
        let mut x = g;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|p, q| q.cmp(p));
        }
    }
    let mut x = target;
    for &b in &basis {
        x = x.min(x ^ b);
    }
    x == 0
}

/// DFS over independent `r`-tuples of codewords (low weight first). Returns
/// the tuple and a nonzero functional `a` on `F_2^r` that differs from every
/// coordinate functional of the subcode, so `ker a` keeps the full support.
fn search_subcode(
    words: &[(u64, BitVec)],
    r: usize,
    start: usize,
    basis: &mut Vec<usize>,
    budget: &mut usize,
) -> Option<(Vec<usize>, u32)> {
    if basis.len() == r {
        let m = words[basis[0]].1.len();
        let mut present = vec![false; 1 << r];
        for b in 0..m {
            let col = basis
                .iter()
                .enumerate()
                .filter(|(_, &i)| words[i].1.get(b))
                .fold(0u32, |acc, (t, _)| acc | 1 << t);
            present[col as usize] = true;
        }
        return (1u32..(1 << r))
            .find(|&a| !present[a as usize])
            .map(|a| (basis.clone(), a));
    }
    for i in start..words.len() {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let gens: Vec<u64> = basis.iter().map(|&t| words[t].0).collect();
        if in_span(&gens, words[i].0) {
            continue;
        }
        basis.push(i);
        if let Some(hit) = search_subcode(words, r, i + 1, basis, budget) {
            return Some(hit);
        }
        basis.pop();
    }
    None
}

/// Exact check, in integers, that both sets have the same `+-1` column sum.
pub fn bpsk_sums_agree(code: &LinearCode, pair: &IndistinguishablePair) -> bool {
    let sum = |set: &[u64]| -> Vec<i64> {
        let mut acc = vec![0i64; code.length()];
        for &j in set {
            let w = code.encode_index(j);
            for (b, a) in acc.iter_mut().enumerate() {
                *a += if w.get(b) { -1 } else { 1 };
            }
        }
        acc
    };
    sum(&pair.a) == sum(&pair.b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{ensemble_e, ParityCheckMatrix, DEFAULT_ENUMERATION_CAP};

    fn code_from(cols: usize, rows: Vec<Vec<usize>>) -> LinearCode {
        LinearCode::from_parity(ParityCheckMatrix::from_rows(cols, rows).unwrap()).unwrap()
    }

    fn spc3() -> SensingMatrix {
        SensingMatrix::new(code_from(3, vec![vec![0, 1, 2]])).unwrap()
    }

    fn hamming74() -> SensingMatrix {
        SensingMatrix::new(code_from(7, vec![vec![0, 2, 4, 6], vec![1, 2, 5, 6], vec![3, 4, 5, 6]])).unwrap()
    }

    fn brute_dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn bpsk_column_values() {
        // A code containing 0110: single check on the outer coordinates plus
        // a check forcing bits 1 and 2 equal.
        let code = code_from(4, vec![vec![0, 3], vec![1, 2]]);
        let mat = SensingMatrix::new(code).unwrap();
        let w = BitVec::from_bits(&[0, 1, 1, 0]);
        let j = mat.message_of(&w).unwrap();
        assert_eq!(mat.column_by_message(j).unwrap(), vec![0.5, -0.5, -0.5, 0.5]);
    }

    #[test]
    fn spc_columns() {
        let mat = spc3();
        assert_eq!(mat.n_cols(), 3);
        let r = 1.0 / libm::sqrt(3.0);
        for j in 1..=3 {
            let c = mat.column_by_message(j).unwrap();
            assert_eq!(c.iter().filter(|&&v| (v - r).abs() < 1e-15).count(), 1);
            assert_eq!(c.iter().filter(|&&v| (v + r).abs() < 1e-15).count(), 2);
        }
        assert!(mat.column_by_message(0).is_err());
        assert!(mat.column_by_message(4).is_err());
    }

    #[test]
    fn correlation_examples() {
        let mat = spc3();
        assert_eq!(mat.column_correlation(2, 2).unwrap(), 1.0);
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    assert!((mat.column_correlation(i, j).unwrap() + 1.0 / 3.0).abs() < 1e-15);
                }
            }
        }
        let rep = SensingMatrix::new(code_from(3, vec![vec![0, 1], vec![1, 2]])).unwrap();
        // s = 1: one column only, no distinct pair
        assert_eq!(rep.n_cols(), 1);
        let h = hamming74();
        let ones = h.message_of(&BitVec::ones(7)).unwrap();
        let other = if ones == 1 { 2 } else { 1 };
        let comp = h.message_of(&h.codeword(other).unwrap().xor(&BitVec::ones(7))).unwrap();
        assert_eq!(h.column_correlation(other, comp).unwrap(), -1.0);
    }

    #[test]
    fn message_lookup_inverts_enumeration() {
        let h = hamming74();
        for j in 1..=h.n_cols() as u64 {
            assert_eq!(h.message_of(&h.codeword(j).unwrap()), Some(j));
        }
        assert_eq!(h.message_of(&BitVec::zeros(7)), None);
    }

    #[test]
    fn gray_code_correlations_match_dense() {
        let h = ensemble_e(20, 14, 3, 3).unwrap();
        let mat = SensingMatrix::new(LinearCode::from_parity(h).unwrap()).unwrap();
        let dense = mat.to_dense();
        let v: Vec<f64> = (0..20).map(|i| (i as f64 * 0.37).sin()).collect();
        let a = mat.correlations(&v);
        let b = dense.correlations(&v);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        for j in 0..mat.n_cols() {
            assert_eq!(dense.column(j), CorrelationOracle::column(&mat, j));
        }
    }

    #[test]
    fn coherence_examples() {
        let c = coherence(&spc3(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert!((c.mu - 1.0 / 3.0).abs() < 1e-15);
        assert!(c.guarantee_holds(1));
        assert!(!c.guarantee_holds(2));
        let c = coherence(&hamming74(), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(c.mu, 1.0);
        assert_eq!(c.achieving_weight, Some(7));
        assert_eq!(c.window_ok_for_k, Some(0));
    }

    #[test]
    fn coherence_matches_brute_force_on_random_codes() {
        let mut tested = 0;
        for seed in 0..40 {
            let m = 8 + (seed as usize % 7);
            let checks = m - 3 - (seed as usize % 4);
            let Ok(code) = LinearCode::from_parity(ensemble_e(m, checks, 3, seed).unwrap()) else {
                continue;
            };
            if code.dimension() > 8 || code.dimension() < 2 {
                continue;
            }
            let mat = SensingMatrix::new(code).unwrap();
            let cols: Vec<Vec<f64>> = (1..=mat.n_cols() as u64)
                .map(|j| mat.column_by_message(j).unwrap())
                .collect();
            let mut mu: f64 = 0.0;
            for i in 0..cols.len() {
                for j in i + 1..cols.len() {
                    let d = brute_dot(&cols[i], &cols[j]);
                    let via = mat.column_correlation(i as u64 + 1, j as u64 + 1).unwrap();
                    assert!((d - via).abs() < 1e-12);
                    mu = mu.max(d.abs());
                }
            }
            let rep = coherence(&mat, DEFAULT_ENUMERATION_CAP).unwrap();
            assert!((rep.mu - mu).abs() < 1e-12, "seed {seed}");
            tested += 1;
        }
        assert!(tested >= 10, "only {tested} codes exercised");
    }

    #[test]
    fn window_and_guarantee_boundaries() {
        // m = 8, all nonzero weights in {3,4,5}: dev = 2, mu = 1/4.
        // Window needs 2K*2 < 8 -> K = 1; guarantee 2K*2 <= 8 -> K = 2.
        let code = code_from(
            8,
            vec![vec![0, 1, 2, 3], vec![2, 3, 4, 5], vec![4, 5, 6, 7], vec![0, 2, 4, 6]],
        );
        let mat = SensingMatrix::new(code).unwrap();
        let rep = coherence(&mat, DEFAULT_ENUMERATION_CAP).unwrap();
        let dev = (rep.mu * 8.0).round() as usize;
        if dev > 0 {
            assert_eq!(rep.window_ok_for_k, Some(7 / (2 * dev)));
            assert_eq!(rep.omp_guarantee_max_k, Some(8 / (2 * dev)));
            for k in 1..6 {
                assert_eq!(rep.guarantee_holds(k), rep.mu <= 1.0 / (2.0 * k as f64));
            }
        }
    }

    #[test]
    fn row_sign_counts() {
        for seed in 0..10 {
            let h = ensemble_e(12, 7, 3, seed).unwrap();
            let code = LinearCode::from_parity(h).unwrap();
            let s = code.dimension();
            let mat = SensingMatrix::new(code).unwrap();
            for b in 0..12 {
                let negatives = (1..=mat.n_cols() as u64)
                    .filter(|&j| mat.codeword(j).unwrap().get(b))
                    .count();
                let used = mat.code().generator().rows().iter().any(|r| r.get(b));
                assert_eq!(negatives, if used { 1 << (s - 1) } else { 0 });
            }
        }
    }

    #[test]
    fn gershgorin_examples() {
        assert!((gershgorin_rip_bound(1.0 / 3.0, 2) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(gershgorin_rip_bound(0.7, 1), 0.0);
        assert!(gershgorin_rip_bound(1.0 / 8.0, 4) < 0.5);
    }

    #[test]
    fn exact_rip_spc() {
        let mat = spc3();
        assert!(exact_rip_constant(&mat, 1).unwrap().abs() < 1e-12);
        assert!((exact_rip_constant(&mat, 2).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_rip_monotone_and_dominated() {
        let mut tested = 0;
        for seed in 0..6 {
            let h = ensemble_e(16, 11, 3, seed).unwrap();
            let code = LinearCode::from_parity(h).unwrap();
            if code.dimension() > 6 || code.dimension() < 2 {
                continue;
            }
            let mat = SensingMatrix::new(code).unwrap();
            let mu = coherence(&mat, DEFAULT_ENUMERATION_CAP).unwrap().mu;
            let d: Vec<f64> = (1..=3).map(|k| exact_rip_constant(&mat, k).unwrap()).collect();
            assert!(d[0] <= d[1] + 1e-12 && d[1] <= d[2] + 1e-12);
            for (k, &dk) in d.iter().enumerate() {
                let bound = gershgorin_rip_bound(mu, k + 1);
                if bound < 1.0 {
                    assert!(dk <= bound + 1e-10);
                }
            }
            tested += 1;
        }
        assert!(tested >= 2, "only {tested} codes exercised");
        assert!(exact_rip_constant(&spc3(), 4).is_err());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut c = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut c, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }

    #[test]
    fn indistinguishable_pair_on_example_code() {
        // {000000, 111100, 001100, 110000}
        let code = code_from(6, vec![vec![0, 1], vec![2, 3], vec![4], vec![5]]);
        assert_eq!(code.dimension(), 2);
        let pair = find_indistinguishable_binary_pair(&code, 2, 24).unwrap().unwrap();
        assert_eq!(pair.a.len(), 2);
        assert_eq!(pair.b.len(), 2);
        assert!(pair.uses_zero_word);
        assert!(bpsk_sums_agree(&code, &pair));
        let words = |set: &[u64]| {
            let mut v: Vec<Vec<u8>> = set.iter().map(|&j| code.encode_index(j).to_bits()).collect();
            v.sort();
            v
        };
        let a = words(&pair.a);
        let b = words(&pair.b);
        // One half holds the zero word and 111100, the other 001100 and 110000.
        let (z, o) = if a.contains(&vec![0; 6]) { (a, b) } else { (b, a) };
        assert_eq!(z, vec![vec![0, 0, 0, 0, 0, 0], vec![1, 1, 1, 1, 0, 0]]);
        assert_eq!(o, vec![vec![0, 0, 1, 1, 0, 0], vec![1, 1, 0, 0, 0, 0]]);
    }

    #[test]
    fn indistinguishable_pair_avoids_zero_when_possible() {
        let mut found = 0;
        for seed in 0..5 {
            let h = ensemble_e(24, 14, 3, seed).unwrap();
            let code = LinearCode::from_parity(h).unwrap();
            let Some(pair) = find_indistinguishable_binary_pair(&code, 2, 24).unwrap() else {
                continue;
            };
            assert!(!pair.uses_zero_word);
            assert!(bpsk_sums_agree(&code, &pair));
            let mat = SensingMatrix::new(code.clone()).unwrap();
            let sum = |set: &[u64]| {
                let mut acc = vec![0.0; 24];
                for &j in set {
                    for (a, v) in acc.iter_mut().zip(mat.column_by_message(j).unwrap()) {
                        *a += v;
                    }
                }
                acc
            };
            assert_eq!(sum(&pair.a), sum(&pair.b));
            found += 1;
        }
        assert!(found > 0);
    }

    #[test]
    fn indistinguishable_pair_needs_r_at_least_two() {
        assert_eq!(
            find_indistinguishable_binary_pair(hamming74().code(), 1, 24).unwrap(),
            None
        );
    }
}
