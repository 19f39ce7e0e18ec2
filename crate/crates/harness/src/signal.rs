//! Random sparse signals, the Bernoulli baseline matrix and measurement.

use crate::error::Result;
use ldpc_cs::cs_bp::{CodeGraph, SignalKind};
use ldpc_cs::greedy::{CorrelationOracle, DenseColumns, SparseSignal};
use ldpc_cs::sensing::SensingMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Uniform random `k`-subset support with unit (binary) or standard normal
/// (gaussian) values.
pub fn gen_signal(n: usize, k: usize, kind: SignalKind, seed: u64) -> Result<SparseSignal> {
    if k > n {
        return Err(ldpc_cs::Error::InvalidParameter(format!("sparsity {k} exceeds dimension {n}")).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let support = rand::seq::index::sample(&mut rng, n, k).into_vec();
    let values = match kind {
        SignalKind::Binary => vec![1.0; k],
        SignalKind::Gaussian => (0..k).map(|_| rng.sample(StandardNormal)).collect(),
    };
    Ok(SparseSignal::new(n, support, values)?)
}

/// I.i.d. equiprobable `+-1` entries; as an oracle its columns are scaled
/// by `1/sqrt(m)`.
#[derive(Clone, Debug)]
pub struct BernoulliMatrix {
    signs: Vec<Vec<f64>>,
    normalized: DenseColumns,
}

impl BernoulliMatrix {
    pub fn generate(m: usize, n: usize, seed: u64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(ldpc_cs::Error::InvalidParameter("Bernoulli matrix needs m, n >= 1".into()).into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let signs: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect())
            .collect();
        let scale = 1.0 / (m as f64).sqrt();
        let normalized =
            DenseColumns::from_columns(m, signs.iter().map(|c| c.iter().map(|x| x * scale).collect()).collect())?;
        Ok(BernoulliMatrix { signs, normalized })
    }

    pub fn sign(&self, row: usize, col: usize) -> f64 {
        self.signs[col][row]
    }
}

impl CorrelationOracle for BernoulliMatrix {
    fn rows(&self) -> usize {
        self.normalized.rows()
    }

    fn n_cols(&self) -> usize {
        self.normalized.n_cols()
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.normalized.column(j)
    }

    fn correlations(&self, v: &[f64]) -> Vec<f64> {
        self.normalized.correlations(v)
    }
}

/// Matrices whose entries are `+-1` before normalization.
pub trait PmOneColumns {
    fn n_rows(&self) -> usize;
    fn n_columns(&self) -> usize;
    fn pm_one_column(&self, j: usize) -> Vec<f64>;
}

impl PmOneColumns for BernoulliMatrix {
    fn n_rows(&self) -> usize {
        self.normalized.rows()
    }

    fn n_columns(&self) -> usize {
        self.signs.len()
    }

    fn pm_one_column(&self, j: usize) -> Vec<f64> {
        self.signs[j].clone()
    }
}

impl PmOneColumns for SensingMatrix {
    fn n_rows(&self) -> usize {
        self.rows()
    }

    fn n_columns(&self) -> usize {
        self.n_cols()
    }

    fn pm_one_column(&self, j: usize) -> Vec<f64> {
        ldpc_cs::sensing::bpsk_image(&self.code().encode_index(j as u64 + 1))
    }
}

impl PmOneColumns for CodeGraph {
    fn n_rows(&self) -> usize {
        self.rows()
    }

    fn n_columns(&self) -> usize {
        self.n_cols()
    }

    fn pm_one_column(&self, j: usize) -> Vec<f64> {
        self.column(j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scaling {
    /// Unit-norm columns.
    #[default]
    Normalized,
    /// Raw `+-1` columns.
    PmOne,
}

/// `y = Phi x`. The `+-1` superposition is formed first, so binary signals
/// give exact integers under `PmOne`.
pub fn measure<M: PmOneColumns + ?Sized>(mat: &M, x: &SparseSignal, scaling: Scaling) -> Result<Vec<f64>> {
    if x.dim() != mat.n_columns() {
        return Err(ldpc_cs::Error::LengthMismatch {
            expected: mat.n_columns(),
            found: x.dim(),
        }
        .into());
    }
    let m = mat.n_rows();
    let mut y = vec![0.0; m];
    for (&j, &v) in x.support().iter().zip(x.values()) {
        for (yi, c) in y.iter_mut().zip(mat.pm_one_column(j)) {
            *yi += v * c;
        }
    }
    if scaling == Scaling::Normalized {
        let s = 1.0 / (m as f64).sqrt();
        y.iter_mut().for_each(|v| *v *= s);
    }
    Ok(y)
}
