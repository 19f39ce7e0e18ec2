//! Greedy sparse recovery: OMP and subspace pursuit over a correlation
//! oracle, plus the least-squares/residual kernels they share.

use crate::error::{Error, Result};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use nalgebra::{DMatrix, DVector};

/// Safety cap on subspace-pursuit iterations.
pub const SP_MAX_ITERS: usize = 100;

/// Relative singular-value cutoff for least squares.
pub const LS_RANK_TOL: f64 = 1e-10;

/// A vector with explicit support: indices sorted ascending, one value each.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSignal {
    n: usize,
    support: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSignal {
    pub fn new(n: usize, support: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        if support.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: support.len(),
                found: values.len(),
            });
        }
        let mut pairs: Vec<(usize, f64)> = support.into_iter().zip(values).collect();
        pairs.sort_by_key(|p| p.0);
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter(format!("index {} repeated in support", w[0].0)));
            }
        }
        if let Some(&(i, _)) = pairs.last() {
            if i >= n {
                return Err(Error::IndexOutOfRange {
                    index: i as u64,
                    len: n as u64,
                });
            }
        }
        let (support, values) = pairs.into_iter().unzip();
        Ok(SparseSignal { n, support, values })
    }

    pub fn zero(n: usize) -> Self {
        SparseSignal {
            n,
            support: Vec::new(),
            values: Vec::new(),
        }
    }

    /// All-ones signal on `support`.
    pub fn binary(n: usize, support: Vec<usize>) -> Result<Self> {
        let values = vec![1.0; support.len()];
        Self::new(n, support, values)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.values)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (&i, &v) in self.support.iter().zip(&self.values) {
            out[i] = v;
        }
        out
    }

    /// `||self - other||_2` computed over the union of supports.
    pub fn distance(&self, other: &SparseSignal) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut acc = 0.0;
        while i < self.support.len() || j < other.support.len() {
            let a = self.support.get(i).copied().unwrap_or(usize::MAX);
            let b = other.support.get(j).copied().unwrap_or(usize::MAX);
            let d = match a.cmp(&b) {
                Ordering::Less => {
                    i += 1;
                    self.values[i - 1]
                }
                Ordering::Greater => {
                    j += 1;
                    -other.values[j - 1]
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    self.values[i - 1] - other.values[j - 1]
                }
            };
            acc += d * d;
        }
        libm::sqrt(acc)
    }
}

/// Output of a reconstruction.
#[derive(Clone, Debug, PartialEq)]
pub struct ReconResult {
    pub estimate: SparseSignal,
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Whether the estimated support equals the true one; left `None` by the
    /// algorithms and filled in by callers that know the truth.
    pub support_exact: Option<bool>,
    /// Support entries that came from random padding rather than a decoder.
    pub padded: Vec<usize>,
}

impl ReconResult {
    /// Compares against `truth` and records the support check.
    pub fn grade(&mut self, truth: &SparseSignal) -> bool {
        let exact = self.estimate.support() == truth.support();
        self.support_exact = Some(exact);
        exact
    }
}

/// Column access and correlation for a real `rows x n_cols` matrix.
pub trait CorrelationOracle {
    fn rows(&self) -> usize;
    fn n_cols(&self) -> usize;
    /// Column `j` as a dense vector (0-based).
    fn column(&self, j: usize) -> Vec<f64>;

    /// `<phi_j, v>` for every column.
    fn correlations(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n_cols()).map(|j| dot(&self.column(j), v)).collect()
    }

    /// The `t` columns with largest `|<phi_j, v>|`, best first, ties to the
    /// lower index.
    fn top_t(&self, v: &[f64], t: usize) -> Vec<usize> {
        top_by_magnitude(&self.correlations(v), t)
    }
}

/// Dense column-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseColumns {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseColumns {
    pub fn from_columns(rows: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in &columns {
            if c.len() != rows {
                return Err(Error::LengthMismatch {
                    expected: rows,
                    found: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        Ok(DenseColumns {
            rows,
            cols: columns.len(),
            data,
        })
    }

    pub fn column_slice(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// `Phi x` for a sparse `x`.
    pub fn apply(&self, x: &SparseSignal) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        for (&j, &v) in x.support().iter().zip(x.values()) {
            axpy(v, self.column_slice(j), &mut y);
        }
        y
    }
}

impl CorrelationOracle for DenseColumns {
    fn rows(&self) -> usize {
        self.rows
    }

    fn n_cols(&self) -> usize {
        self.cols
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.column_slice(j).to_vec()
    }

    fn correlations(&self, v: &[f64]) -> Vec<f64> {
        self.data.chunks_exact(self.rows).map(|c| dot(c, v)).collect()
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Orders by decreasing magnitude, then increasing index.
fn magnitude_order(c: &[f64], a: usize, b: usize) -> Ordering {
    libm::fabs(c[b])
        .partial_cmp(&libm::fabs(c[a]))
        .unwrap_or(Ordering::Equal)
        .then(a.cmp(&b))
}

/// Indices of the `t` largest `|c_j|`, best first, ties to the lower index.
pub fn top_by_magnitude(c: &[f64], t: usize) -> Vec<usize> {
    let t = t.min(c.len());
    let mut idx: Vec<usize> = (0..c.len()).collect();
    if t == 0 {
        return Vec::new();
    }
    if t < idx.len() {
        idx.select_nth_unstable_by(t - 1, |&a, &b| magnitude_order(c, a, b));
        idx.truncate(t);
    }
    idx.sort_unstable_by(|&a, &b| magnitude_order(c, a, b));
    idx
}

/// Minimum-norm least-squares coefficients for `columns * x ~ y`, through an
/// SVD with singular values below `LS_RANK_TOL * sigma_max` discarded.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let t = columns.len();
    if t == 0 {
        return Vec::new();
    }
    let m = y.len();
    let a = DMatrix::from_fn(m, t, |r, c| columns[c][r]);
    let svd = a.svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return vec![0.0; t];
    }
    let b = DVector::from_column_slice(y);
    let x = svd.solve(&b, LS_RANK_TOL * smax).expect("U and V were requested");
    x.iter().copied().collect()
}

/// `y - Phi_T x` for given coefficients.
pub(crate) fn residual_with(y: &[f64], columns: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut r = y.to_vec();
    for (c, &x) in columns.iter().zip(coeffs) {
        axpy(-x, c, &mut r);
    }
    r
}

/// Component of `y` orthogonal to the span of `columns`.
pub fn resid(y: &[f64], columns: &[Vec<f64>]) -> Vec<f64> {
    let coeffs = least_squares(columns, y);
    residual_with(y, columns, &coeffs)
}

fn check_len(oracle_rows: usize, y: &[f64]) -> Result<()> {
    if y.len() != oracle_rows {
        return Err(Error::LengthMismatch {
            expected: oracle_rows,
            found: y.len(),
        });
    }
    Ok(())
}

/// Residual small enough to count as exact recovery.
pub(crate) fn negligible(r: f64, y_norm: f64) -> bool {
    r <= 1e-9 * y_norm.max(1.0)
}

/// Orthogonal matching pursuit. `k` caps the number of selected columns
/// (0 means no cap beyond the matrix size) and the loop exits early once
/// the residual norm falls below `eps0`.
pub fn omp<O: CorrelationOracle + ?Sized>(oracle: &O, y: &[f64], k: usize, eps0: f64) -> Result<ReconResult> {
    check_len(oracle.rows(), y)?;
    if k == 0 && eps0 <= 0.0 {
        return Err(Error::InvalidParameter("omp needs k >= 1 or eps0 > 0".into()));
    }
    let n = oracle.n_cols();
    let cap = if k == 0 { n.min(oracle.rows()) } else { k.min(n) };
    let y_norm = norm(y);

    let mut support: Vec<usize> = Vec::new();
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut coeffs: Vec<f64> = Vec::new();
    let mut r = y.to_vec();
    let mut r_norm = y_norm;
    while support.len() < cap && r_norm >= eps0 {
        let c = oracle.correlations(&r);
        let mut best: Option<usize> = None;
        for j in 0..n {
            if support.contains(&j) {
                continue;
            }
            if best.is_none_or(|b| magnitude_order(&c, j, b) == Ordering::Less) {
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        support.push(j);
        columns.push(oracle.column(j));
        coeffs = least_squares(&columns, y);
        r = residual_with(y, &columns, &coeffs);
        r_norm = norm(&r);
    }
    let iterations = support.len();
    Ok(ReconResult {
        estimate: SparseSignal::new(n, support, coeffs)?,
        residual_norm: r_norm,
        iterations,
        converged: r_norm < eps0 || negligible(r_norm, y_norm),
        support_exact: None,
        padded: Vec::new(),
    })
}

/// Subspace pursuit over an arbitrary candidate generator.
///
/// `select(residual, k)` proposes up to `k` column indices for the residual
/// and `column(j)` returns column `j`. Both the initial support and each
/// expansion step use `select`; the pruning and stopping rule are the
/// standard ones.
pub(crate) fn subspace_pursuit<S, C>(n: usize, y: &[f64], k: usize, mut select: S, column: C) -> Result<ReconResult>
where
    S: FnMut(&[f64], usize) -> Result<Vec<usize>>,
    C: Fn(usize) -> Vec<f64>,
{
    if k == 0 {
        return Err(Error::InvalidParameter("subspace pursuit needs k >= 1".into()));
    }
    let y_norm = norm(y);
    let fit = |support: &[usize]| {
        let cols: Vec<Vec<f64>> = support.iter().map(|&j| column(j)).collect();
        let coeffs = least_squares(&cols, y);
        let r = residual_with(y, &cols, &coeffs);
        (coeffs, r)
    };

    let mut t_prev = dedup_first(select(y, k)?, k);
    let (mut x_prev, mut r_prev) = fit(&t_prev);
    let mut r_prev_norm = norm(&r_prev);
    let mut iterations = 1;

    while iterations <= SP_MAX_ITERS && !negligible(r_prev_norm, y_norm) {
        let mut merged = t_prev.clone();
        for j in select(&r_prev, k)? {
            if !merged.contains(&j) {
                merged.push(j);
            }
        }
        let (xp, _) = fit(&merged);
        let keep = top_by_magnitude(&xp, k);
        let t_new: Vec<usize> = keep.iter().map(|&p| merged[p]).collect();
        let (x_new, r_new) = fit(&t_new);
        let r_new_norm = norm(&r_new);
        iterations += 1;
        if r_new_norm > r_prev_norm {
            break;
        }
        let stalled = r_new_norm >= r_prev_norm;
        t_prev = t_new;
        x_prev = x_new;
        r_prev = r_new;
        r_prev_norm = r_new_norm;
        if stalled {
            break;
        }
    }
    Ok(ReconResult {
        estimate: SparseSignal::new(n, t_prev, x_prev)?,
        residual_norm: r_prev_norm,
        iterations,
        converged: negligible(r_prev_norm, y_norm),
        support_exact: None,
        padded: Vec::new(),
    })
}

fn dedup_first(v: Vec<usize>, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    for j in v {
        if out.len() == k {
            break;
        }
        if !out.contains(&j) {
            out.push(j);
        }
    }
    out
}

/// Subspace pursuit with exhaustive correlation.
pub fn sp<O: CorrelationOracle + ?Sized>(oracle: &O, y: &[f64], k: usize) -> Result<ReconResult> {
    check_len(oracle.rows(), y)?;
    subspace_pursuit(
        oracle.n_cols(),
        y,
        k.min(oracle.n_cols()),
        |r, t| Ok(oracle.top_t(r, t)),
        |j| oracle.column(j),
    )
}
