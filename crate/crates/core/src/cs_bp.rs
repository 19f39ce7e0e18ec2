//! Greedy reconstruction whose correlation step is a BP-family decoder.
//!
//! Observations are in unnormalized units: column `i` is the `+-1` image
//! of the codeword with message `i + 1`, so a binary `K`-sparse signal
//! produces integer observations and least-squares coefficients come out in
//! signal units.

use crate::bp::{
    biased_list_bp, mbbp, mmpc, pad_with_random_columns, rank_codewords, BlbpParams, BpConfig, Candidate, DecoderKind,
    MmpcParams, MultiBasis, PriorsMode, TannerGraph, DEFAULT_BIAS, DEFAULT_LIST_SIZE, DEFAULT_SIGMA_FLOOR,
};
use crate::codes::LinearCode;
use crate::error::{Error, Result};
use crate::greedy::{least_squares, negligible, norm, residual_with, subspace_pursuit, ReconResult, SparseSignal};
use crate::sensing::{bpsk_image, MAX_DIMENSION};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SignalKind {
    /// Nonzero entries equal to 1.
    #[default]
    Binary,
    /// Nonzero entries drawn from a continuous distribution.
    Gaussian,
}

/// Residual update after a binary pick.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ResidualUpdate {
    /// `rx <- rx - BPSK(v)`.
    #[default]
    Cumulative,
    /// `rx <- y - BPSK(v)`, discarding earlier subtractions.
    Literal,
}

/// Shared parameters of the decoder-driven greedy loops.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CsBpParams {
    pub signal: SignalKind,
    pub list_size: usize,
    pub bias: f64,
    pub sigma_floor: f64,
    pub bp: BpConfig,
    pub decoder: DecoderKind,
    pub update: ResidualUpdate,
    /// Configurations requested from MMPC per step.
    pub m_configs: usize,
}

impl Default for CsBpParams {
    fn default() -> Self {
        CsBpParams {
            signal: SignalKind::Binary,
            list_size: DEFAULT_LIST_SIZE,
            bias: DEFAULT_BIAS,
            sigma_floor: DEFAULT_SIGMA_FLOOR,
            bp: BpConfig::default(),
            decoder: DecoderKind::Bp,
            update: ResidualUpdate::Cumulative,
            m_configs: DEFAULT_LIST_SIZE,
        }
    }
}

impl CsBpParams {
    fn blbp(&self) -> BlbpParams {
        BlbpParams {
            list_size: self.list_size,
            bias: self.bias,
            sigma_floor: self.sigma_floor,
            bp: self.bp,
            decoder: self.decoder,
        }
    }

    fn priors_mode(&self) -> PriorsMode {
        match self.signal {
            SignalKind::Binary => PriorsMode::Interference {
                sigma_floor: self.sigma_floor,
            },
            SignalKind::Gaussian => PriorsMode::BothSigns {
                sigma_floor: self.sigma_floor,
            },
        }
    }
}

/// A code together with the Tanner graph of its parity-check matrix.
#[derive(Clone, Debug)]
pub struct CodeGraph {
    code: LinearCode,
    graph: TannerGraph,
}

impl CodeGraph {
    pub fn new(code: LinearCode) -> Result<Self> {
        if code.dimension() > MAX_DIMENSION {
            return Err(Error::DimensionTooLarge {
                dimension: code.dimension(),
                cap: MAX_DIMENSION,
            });
        }
        let graph = TannerGraph::new(code.parity_check());
        Ok(CodeGraph { code, graph })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn rows(&self) -> usize {
        self.code.length()
    }

    pub fn n_cols(&self) -> usize {
        ((1u64 << self.code.dimension()) - 1) as usize
    }

    /// Unnormalized column `i` (message `i + 1`).
    pub fn column(&self, i: usize) -> Vec<f64> {
        bpsk_image(&self.code.encode_index(i as u64 + 1))
    }

    /// `sum_i x_i column(i)`.
    pub fn apply(&self, x: &SparseSignal) -> Vec<f64> {
        let mut y = alloc::vec![0.0; self.rows()];
        for (&i, &v) in x.support().iter().zip(x.values()) {
            for (yi, c) in y.iter_mut().zip(self.column(i)) {
                *yi += v * c;
            }
        }
        y
    }
}

fn check_inputs(rows: usize, y: &[f64], k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if y.len() != rows {
        return Err(Error::LengthMismatch {
            expected: rows,
            found: y.len(),
        });
    }
    Ok(())
}

/// OMP loop over a candidate generator. `candidates(rx, remaining)` returns
/// a ranked list for the current residual with `remaining` columns still to
/// find.
fn list_omp<F>(
    cg: &CodeGraph,
    y: &[f64],
    k: usize,
    params: &CsBpParams,
    rng: &mut ChaCha8Rng,
    mut candidates: F,
) -> Result<ReconResult>
where
    F: FnMut(&[f64], usize, &mut ChaCha8Rng) -> Result<Vec<Candidate>>,
{
    check_inputs(cg.rows(), y, k)?;
    let n = cg.n_cols();
    let k = k.min(n);
    let y_norm = norm(y);
    let mut support: Vec<usize> = Vec::with_capacity(k);
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut padded = Vec::new();
    let mut rx = y.to_vec();
    let mut iterations = 0;
    while support.len() < k {
        iterations += 1;
        let remaining = k - support.len();
        let mut list = candidates(&rx, remaining, rng)?;
        list.retain(|c| !support.contains(&((c.message - 1) as usize)));
        if list.is_empty() {
            let mut fill = support
                .iter()
                .map(|&i| Candidate {
                    word: cg.code.encode_index(i as u64 + 1),
                    message: i as u64 + 1,
                    correlation: 0.0,
                    padded: true,
                })
                .collect::<Vec<_>>();
            pad_with_random_columns(&cg.code, &mut fill, support.len() + 1, &rx, rng);
            list.push(fill.pop().expect("one column was added"));
        }
        let pick = &list[0];
        let j = (pick.message - 1) as usize;
        let col = bpsk_image(&pick.word);
        support.push(j);
        if pick.padded {
            padded.push(j);
        }
        match params.signal {
            SignalKind::Binary => match params.update {
                ResidualUpdate::Cumulative => {
                    for (r, c) in rx.iter_mut().zip(&col) {
                        *r -= c;
                    }
                }
                ResidualUpdate::Literal => {
                    for ((r, &yi), c) in rx.iter_mut().zip(y).zip(&col) {
                        *r = yi - c;
                    }
                }
            },
            SignalKind::Gaussian => {
                columns.push(col);
                let coeffs = least_squares(&columns, y);
                rx = residual_with(y, &columns, &coeffs);
                continue;
            }
        }
        columns.push(col);
        if negligible(norm(&rx), y_norm) {
            break;
        }
    }
    let coeffs = least_squares(&columns, y);
    let r = residual_with(y, &columns, &coeffs);
    let residual_norm = norm(&r);
    padded.sort_unstable();
    Ok(ReconResult {
        estimate: SparseSignal::new(n, support, coeffs)?,
        residual_norm,
        iterations,
        converged: negligible(residual_norm, y_norm),
        support_exact: None,
        padded,
    })
}

/// OMP whose column choice is the best entry of the biased list BP output.
pub fn bp_omp(cg: &CodeGraph, y: &[f64], k: usize, params: &CsBpParams, seed: u64) -> Result<ReconResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blbp = params.blbp();
    list_omp(cg, y, k, params, &mut rng, |rx, remaining, rng| {
        biased_list_bp(&cg.code, &cg.graph, rx, remaining, &blbp, rng)
    })
}

/// Subspace pursuit whose top-`k` selections come from biased list BP.
pub fn bp_sp(cg: &CodeGraph, y: &[f64], k: usize, params: &CsBpParams, seed: u64) -> Result<ReconResult> {
    check_inputs(cg.rows(), y, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blbp = params.blbp();
    let mut decoded: BTreeSet<usize> = BTreeSet::new();
    let mut res = subspace_pursuit(
        cg.n_cols(),
        y,
        k.min(cg.n_cols()),
        |r, t| {
            let list = biased_list_bp(&cg.code, &cg.graph, r, t, &blbp, &mut rng)?;
            Ok(list
                .into_iter()
                .map(|c| {
                    let j = (c.message - 1) as usize;
                    if !c.padded {
                        decoded.insert(j);
                    }
                    j
                })
                .collect())
        },
        |j| cg.column(j),
    )?;
    res.padded = res
        .estimate
        .support()
        .iter()
        .copied()
        .filter(|j| !decoded.contains(j))
        .collect();
    Ok(res)
}

/// OMP over the codeword-valid configurations of MMPC.
pub fn mmpc_omp(cg: &CodeGraph, y: &[f64], k: usize, params: &CsBpParams, seed: u64) -> Result<ReconResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mp = MmpcParams {
        max_iters: params.bp.max_iters,
    };
    let signs: &[f64] = match params.signal {
        SignalKind::Binary => &[1.0],
        SignalKind::Gaussian => &[1.0, -1.0],
    };
    list_omp(cg, y, k, params, &mut rng, |rx, remaining, rng| {
        let mut words = Vec::new();
        for &sign in signs {
            let v: Vec<f64> = rx.iter().map(|x| sign * x).collect();
            let priors = crate::bp::interference_priors(&v, remaining, params.sigma_floor);
            for c in mmpc(&cg.graph, &priors, params.m_configs.max(1), &mp)? {
                if c.is_codeword {
                    words.push(c.word);
                }
            }
        }
        let mut list = rank_codewords(&cg.code, words, rx);
        list.truncate(remaining);
        pad_with_random_columns(&cg.code, &mut list, remaining, rx, rng);
        Ok(list)
    })
}

/// OMP over the multiple-basis BP candidate list.
pub fn mbbp_omp(
    cg: &CodeGraph,
    bases: &MultiBasis,
    y: &[f64],
    k: usize,
    params: &CsBpParams,
    seed: u64,
) -> Result<ReconResult> {
    if bases.graphs().first().map(|g| g.n_vars()) != Some(cg.rows()) {
        return Err(Error::CodeMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    list_omp(cg, y, k, params, &mut rng, |rx, remaining, rng| {
        let mut list = mbbp(
            &cg.code,
            bases,
            rx,
            remaining,
            params.priors_mode(),
            params.decoder,
            params.bp,
        )?;
        pad_with_random_columns(&cg.code, &mut list, remaining, rx, rng);
        Ok(list)
    })
}
