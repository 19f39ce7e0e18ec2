//! Binary linear codes described by sparse parity-check matrices.

mod construct;
mod linear;

pub use construct::{column_regular, ensemble_e, peg};
pub use linear::{
    distance_spectrum, expurgate_first_coordinate, systematic_form, DistanceSpectrum, LinearCode, SystematicForm,
    DEFAULT_ENUMERATION_CAP,
};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

/// Sparse parity-check matrix `H`, stored as both row and column adjacency
/// so it doubles as the Tanner graph of the code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Builds `H` from per-check variable lists. Lists are sorted; duplicate
    /// or out-of-range entries are rejected.
    pub fn from_rows(cols: usize, mut rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut col_adj = vec![Vec::new(); cols];
        for (a, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "check {a} lists variable {} twice",
                    w[0]
                )));
            }
            for &b in row.iter() {
                if b >= cols {
                    return Err(Error::IndexOutOfRange {
                        index: b as u64,
                        len: cols as u64,
                    });
                }
                col_adj[b].push(a);
            }
        }
        Ok(ParityCheckMatrix {
            cols,
            row_adj: rows,
            col_adj,
        })
    }

    pub fn from_bit_matrix(m: &BitMatrix) -> Self {
        let rows = m.rows().iter().map(|r| r.iter_ones().collect()).collect();
        Self::from_rows(m.ncols(), rows).expect("bit matrix rows are valid adjacency")
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        let rows = self
            .row_adj
            .iter()
            .map(|r| BitVec::from_indices(self.cols, r))
            .collect();
        BitMatrix::from_rows(self.cols, rows)
    }

    /// Number of checks (rows).
    #[inline]
    pub fn rows(&self) -> usize {
        self.row_adj.len()
    }

    /// Code length (columns).
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Variables in check `a`, sorted.
    #[inline]
    pub fn row(&self, a: usize) -> &[usize] {
        &self.row_adj[a]
    }

    /// Checks on variable `b`, sorted.
    #[inline]
    pub fn col(&self, b: usize) -> &[usize] {
        &self.col_adj[b]
    }

    pub fn row_adjacency(&self) -> &[Vec<usize>] {
        &self.row_adj
    }

    pub fn col_adjacency(&self) -> &[Vec<usize>] {
        &self.col_adj
    }

    pub fn num_edges(&self) -> usize {
        self.row_adj.iter().map(Vec::len).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_adj.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        self.col_adj.iter().map(Vec::len).collect()
    }

    pub fn rank(&self) -> usize {
        self.to_bit_matrix().rank()
    }

    pub fn syndrome(&self, word: &BitVec) -> BitVec {
        assert_eq!(word.len(), self.cols, "word length mismatch");
        let mut s = BitVec::zeros(self.rows());
        for (a, row) in self.row_adj.iter().enumerate() {
            let parity = row.iter().fold(false, |acc, &b| acc ^ word.get(b));
            if parity {
                s.set(a, true);
            }
        }
        s
    }

    pub fn is_codeword(&self, word: &BitVec) -> bool {
        word.len() == self.cols
            && self
                .row_adj
                .iter()
                .all(|row| !row.iter().fold(false, |acc, &b| acc ^ word.get(b)))
    }

    /// Drops column `j` (the shortening step of expurgation).
    pub fn remove_column(&self, j: usize) -> Self {
        assert!(j < self.cols);
        let rows = self
            .row_adj
            .iter()
            .map(|r| {
                r.iter()
                    .filter(|&&b| b != j)
                    .map(|&b| if b > j { b - 1 } else { b })
                    .collect()
            })
            .collect();
        Self::from_rows(self.cols - 1, rows).expect("column removal keeps adjacency valid")
    }

    /// Length of the shortest cycle in the Tanner graph, or `None` if it is
    /// a forest.
    pub fn girth(&self) -> Option<usize> {
        let n = self.cols;
        let total = n + self.rows();
        let neighbors = |u: usize| -> &[usize] {
            if u < n {
                &self.col_adj[u]
            } else {
                &self.row_adj[u - n]
            }
        };
        let node = |u: usize, x: usize| if u < n { x + n } else { x };

        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; total];
        let mut parent = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        for root in 0..total {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(g) = best {
                    if 2 * dist[u] >= g {
                        break 'bfs;
                    }
                }
                for &x in neighbors(u) {
                    let w = node(u, x);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |g| g.min(len)));
                    }
                }
            }
        }
        best
    }
}
