//! Monte-Carlo reconstruction experiments.

use crate::error::{HarnessError, Result};
use crate::signal::{gen_signal, measure, BernoulliMatrix, Scaling};
use ldpc_cs::bp::{BpConfig, DecoderKind, MultiBasis, DEFAULT_PSI0, DEFAULT_PSI1};
use ldpc_cs::codes::{column_regular, ensemble_e, expurgate_first_coordinate, peg, LinearCode, ParityCheckMatrix};
use ldpc_cs::cs_bp::{bp_omp, bp_sp, mbbp_omp, mmpc_omp, CodeGraph, CsBpParams, ResidualUpdate, SignalKind};
use ldpc_cs::greedy::{omp, sp, ReconResult, SparseSignal};
use ldpc_cs::sensing::SensingMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_CUTOFF_THRESHOLD: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Omp,
    Sp,
    BpOmp,
    BpSp,
    MmpcOmp,
    MbbpOmp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Omp,
        Algorithm::Sp,
        Algorithm::BpOmp,
        Algorithm::BpSp,
        Algorithm::MmpcOmp,
        Algorithm::MbbpOmp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Omp => "omp",
            Algorithm::Sp => "sp",
            Algorithm::BpOmp => "bp-omp",
            Algorithm::BpSp => "bp-sp",
            Algorithm::MmpcOmp => "mmpc-omp",
            Algorithm::MbbpOmp => "mbbp-omp",
        }
    }

    pub fn needs_code(self) -> bool {
        !matches!(self, Algorithm::Omp | Algorithm::Sp)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Serializable mirror of [`SignalKind`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SignalChoice {
    #[default]
    Binary,
    Gaussian,
}

impl SignalChoice {
    pub fn kind(self) -> SignalKind {
        match self {
            SignalChoice::Binary => SignalKind::Binary,
            SignalChoice::Gaussian => SignalKind::Gaussian,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignalChoice::Binary => "binary",
            SignalChoice::Gaussian => "gaussian",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatrixSpec {
    /// Parity-check matrix from an alist file.
    LdpcFile {
        path: PathBuf,
        #[serde(default)]
        expurgate: bool,
    },
    Peg {
        m: usize,
        checks: usize,
        col_degree: usize,
        seed: u64,
    },
    ColRegular {
        m: usize,
        checks: usize,
        wc: usize,
        seed: u64,
    },
    EnsembleE {
        m: usize,
        checks: usize,
        wr: usize,
        seed: u64,
    },
    Bernoulli {
        m: usize,
        n: usize,
        seed: u64,
    },
}

impl MatrixSpec {
    pub fn matrix_type(&self) -> &'static str {
        match self {
            MatrixSpec::Bernoulli { .. } => "bernoulli",
            _ => "ldpc",
        }
    }

    /// The parity-check matrix, for code-based sources.
    pub fn parity_check(&self) -> Result<Option<ParityCheckMatrix>> {
        Ok(Some(match self {
            MatrixSpec::LdpcFile { path, .. } => crate::alist::read_alist(path)?,
            MatrixSpec::Peg {
                m,
                checks,
                col_degree,
                seed,
            } => peg(*m, *checks, &vec![*col_degree; *m], *seed)?,
            MatrixSpec::ColRegular { m, checks, wc, seed } => column_regular(*m, *checks, *wc, *seed)?,
            MatrixSpec::EnsembleE { m, checks, wr, seed } => ensemble_e(*m, *checks, *wr, *seed)?,
            MatrixSpec::Bernoulli { .. } => return Ok(None),
        }))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderChoice {
    #[default]
    Bp,
    Rbp,
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}
fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}
fn default_true() -> bool {
    true
}
fn default_list_size() -> usize {
    ldpc_cs::bp::DEFAULT_LIST_SIZE
}
fn default_bias() -> f64 {
    ldpc_cs::bp::DEFAULT_BIAS
}
fn default_sigma_floor() -> f64 {
    ldpc_cs::bp::DEFAULT_SIGMA_FLOOR
}
fn default_max_iters() -> usize {
    ldpc_cs::bp::DEFAULT_MAX_ITERS
}
fn default_psi0() -> f64 {
    DEFAULT_PSI0
}
fn default_psi1() -> f64 {
    DEFAULT_PSI1
}
fn default_extra_bases() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub signal: SignalChoice,
    pub k_min: usize,
    pub k_max: usize,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub seed: u64,
    /// Relative tolerance on `||x_hat - x||`.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Record wall time; off keeps the output reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default = "default_true")]
    pub parallel: bool,
    #[serde(default)]
    pub decoder: DecoderChoice,
    #[serde(default = "default_psi0")]
    pub psi0: f64,
    #[serde(default = "default_psi1")]
    pub psi1: f64,
    #[serde(default = "default_list_size")]
    pub list_size: usize,
    #[serde(default = "default_bias")]
    pub bias: f64,
    #[serde(default = "default_sigma_floor")]
    pub sigma_floor: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "default_list_size")]
    pub m_configs: usize,
    /// Systematic forms added to the original matrix for MBBP.
    #[serde(default = "default_extra_bases")]
    pub extra_bases: usize,
    /// Use `rx = y - BPSK(v)` instead of the cumulative update.
    #[serde(default)]
    pub literal_update: bool,
    #[serde(default)]
    pub output: OutputPaths,
    pub matrix: MatrixSpec,
}

impl ExperimentConfig {
    pub fn new(
        algorithm: Algorithm,
        signal: SignalChoice,
        matrix: MatrixSpec,
        k_min: usize,
        k_max: usize,
        seed: u64,
    ) -> Self {
        ExperimentConfig {
            algorithm,
            signal,
            k_min,
            k_max,
            trials: DEFAULT_TRIALS,
            seed,
            tolerance: DEFAULT_TOLERANCE,
            timing: false,
            parallel: true,
            decoder: DecoderChoice::Bp,
            psi0: DEFAULT_PSI0,
            psi1: DEFAULT_PSI1,
            list_size: default_list_size(),
            bias: default_bias(),
            sigma_floor: default_sigma_floor(),
            max_iters: default_max_iters(),
            m_configs: default_list_size(),
            extra_bases: default_extra_bases(),
            literal_update: false,
            output: OutputPaths::default(),
            matrix,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        // Relative matrix paths are resolved against the config file.
        if let MatrixSpec::LdpcFile { path: p, .. } = &mut cfg.matrix {
            if p.is_relative() {
                if let Some(dir) = path.parent() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn params(&self) -> CsBpParams {
        CsBpParams {
            signal: self.signal.kind(),
            list_size: self.list_size,
            bias: self.bias,
            sigma_floor: self.sigma_floor,
            bp: BpConfig {
                max_iters: self.max_iters,
                early_stop: true,
            },
            decoder: match self.decoder {
                DecoderChoice::Bp => DecoderKind::Bp,
                DecoderChoice::Rbp => DecoderKind::Rbp {
                    psi0: self.psi0,
                    psi1: self.psi1,
                },
            },
            update: if self.literal_update {
                ResidualUpdate::Literal
            } else {
                ResidualUpdate::Cumulative
            },
            m_configs: self.m_configs,
        }
    }
}

/// One aggregated line of results.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub matrix_type: String,
    pub signal_kind: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    pub error_rate: f64,
    pub mean_runtime_ms: f64,
    pub seed: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stable per-trial seed from `(base, K, trial)`.
pub fn trial_seed(base: u64, k: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(base) ^ k as u64) ^ trial as u64)
}

enum Built {
    Code {
        mat: SensingMatrix,
        cg: CodeGraph,
        bases: Option<MultiBasis>,
    },
    Bernoulli(BernoulliMatrix),
}

/// A validated configuration with its matrix built.
pub struct Experiment {
    cfg: ExperimentConfig,
    built: Built,
    params: CsBpParams,
}

/// Outcome of a single trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    pub runtime_ms: f64,
}

/// Exact recovery: equal supports and `||x_hat - x|| <= tol max(1, ||x||)`.
pub fn is_success(estimate: &SparseSignal, truth: &SparseSignal, tol: f64) -> bool {
    estimate.support() == truth.support() && estimate.distance(truth) <= tol * truth.norm().max(1.0)
}

impl Experiment {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        if cfg.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if cfg.k_min > cfg.k_max {
            return Err(HarnessError::Config("k_min exceeds k_max".into()));
        }
        if !(cfg.tolerance > 0.0) {
            return Err(HarnessError::Config("tolerance must be positive".into()));
        }
        let built = match cfg.matrix.parity_check()? {
            Some(h) => {
                let mut code = LinearCode::from_parity(h)?;
                if let MatrixSpec::LdpcFile { expurgate: true, .. } = cfg.matrix {
                    code = expurgate_first_coordinate(&code)?;
                }
                let bases = if cfg.algorithm == Algorithm::MbbpOmp {
                    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(cfg.seed ^ 0x6d62_6270));
                    Some(MultiBasis::with_systematic_forms(
                        code.parity_check(),
                        cfg.extra_bases,
                        &mut rng,
                    )?)
                } else {
                    None
                };
                Built::Code {
                    mat: SensingMatrix::new(code.clone())?,
                    cg: CodeGraph::new(code)?,
                    bases,
                }
            }
            None => {
                if cfg.algorithm.needs_code() {
                    return Err(HarnessError::Config(format!(
                        "{} needs a code-based matrix",
                        cfg.algorithm.name()
                    )));
                }
                let MatrixSpec::Bernoulli { m, n, seed } = cfg.matrix else {
                    unreachable!("only Bernoulli sources have no code")
                };
                Built::Bernoulli(BernoulliMatrix::generate(m, n, seed)?)
            }
        };
        let exp = Experiment {
            params: cfg.params(),
            cfg,
            built,
        };
        if exp.cfg.k_max > exp.rows() {
            return Err(HarnessError::Config(format!(
                "k_max {} exceeds the number of measurements {}",
                exp.cfg.k_max,
                exp.rows()
            )));
        }
        Ok(exp)
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn rows(&self) -> usize {
        match &self.built {
            Built::Code { mat, .. } => mat.rows(),
            Built::Bernoulli(b) => ldpc_cs::greedy::CorrelationOracle::rows(b),
        }
    }

    pub fn n_cols(&self) -> usize {
        match &self.built {
            Built::Code { mat, .. } => mat.n_cols(),
            Built::Bernoulli(b) => ldpc_cs::greedy::CorrelationOracle::n_cols(b),
        }
    }

    fn reconstruct(&self, y_norm: &[f64], y_pm: &[f64], k: usize, seed: u64) -> ldpc_cs::Result<ReconResult> {
        let p = &self.params;
        match (&self.built, self.cfg.algorithm) {
            (Built::Code { mat, .. }, Algorithm::Omp) => omp(mat, y_norm, k, 0.0),
            (Built::Code { mat, .. }, Algorithm::Sp) => sp(mat, y_norm, k),
            (Built::Bernoulli(b), Algorithm::Omp) => omp(b, y_norm, k, 0.0),
            (Built::Bernoulli(b), Algorithm::Sp) => sp(b, y_norm, k),
            (Built::Code { cg, .. }, Algorithm::BpOmp) => bp_omp(cg, y_pm, k, p, seed),
            (Built::Code { cg, .. }, Algorithm::BpSp) => bp_sp(cg, y_pm, k, p, seed),
            (Built::Code { cg, .. }, Algorithm::MmpcOmp) => mmpc_omp(cg, y_pm, k, p, seed),
            (Built::Code { cg, bases, .. }, Algorithm::MbbpOmp) => {
                mbbp_omp(cg, bases.as_ref().expect("built for mbbp"), y_pm, k, p, seed)
            }
            (Built::Bernoulli(_), _) => unreachable!("rejected at construction"),
        }
    }

    /// Runs trial `t` at sparsity `k`.
    pub fn trial(&self, k: usize, t: usize) -> TrialOutcome {
        let seed = trial_seed(self.cfg.seed, k, t);
        if k == 0 {
            return TrialOutcome {
                success: true,
                runtime_ms: 0.0,
            };
        }
        let run = || -> Result<bool> {
            let x = gen_signal(self.n_cols(), k, self.cfg.signal.kind(), seed)?;
            let (y_norm, y_pm) = match &self.built {
                Built::Code { mat, .. } => (
                    measure(mat, &x, Scaling::Normalized)?,
                    measure(mat, &x, Scaling::PmOne)?,
                ),
                Built::Bernoulli(b) => (measure(b, &x, Scaling::Normalized)?, Vec::new()),
            };
            let res = self.reconstruct(&y_norm, &y_pm, k, splitmix64(seed ^ 0xdec0de))?;
            Ok(is_success(&res.estimate, &x, self.cfg.tolerance))
        };
        let start = self.cfg.timing.then(Instant::now);
        let success = match run() {
            Ok(ok) => ok,
            Err(e) => {
                log::warn!("K = {k}, trial {t}: {e}");
                false
            }
        };
        TrialOutcome {
            success,
            runtime_ms: start.map_or(0.0, |s| s.elapsed().as_secs_f64() * 1e3),
        }
    }

    /// Aggregates all trials at sparsity `k`.
    pub fn run_k(&self, k: usize) -> SummaryRow {
        let trials = self.cfg.trials;
        let outcomes: Vec<TrialOutcome> = if self.cfg.parallel {
            (0..trials).into_par_iter().map(|t| self.trial(k, t)).collect()
        } else {
            (0..trials).map(|t| self.trial(k, t)).collect()
        };
        let failures = outcomes.iter().filter(|o| !o.success).count();
        let total_ms: f64 = outcomes.iter().map(|o| o.runtime_ms).sum();
        SummaryRow {
            algorithm: self.cfg.algorithm.name().into(),
            matrix_type: self.cfg.matrix.matrix_type().into(),
            signal_kind: self.cfg.signal.name().into(),
            k,
            trials,
            failures,
            error_rate: failures as f64 / trials as f64,
            mean_runtime_ms: total_ms / trials as f64,
            seed: self.cfg.seed,
        }
    }

    pub fn run(&self) -> Vec<SummaryRow> {
        (self.cfg.k_min..=self.cfg.k_max).map(|k| self.run_k(k)).collect()
    }
}

/// Builds and runs a whole configuration.
pub fn run_trials(cfg: ExperimentConfig) -> Result<Vec<SummaryRow>> {
    Ok(Experiment::new(cfg)?.run())
}

/// Largest `K` such that every row with `K' <= K` has error rate at most
/// `threshold`; 0 when none qualifies. Rows must cover contiguous `K`.
pub fn cutoff_density(rows: &[SummaryRow], threshold: f64) -> Result<usize> {
    let mut sorted: Vec<&SummaryRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.k);
    for w in sorted.windows(2) {
        if w[1].k != w[0].k + 1 {
            return Err(HarnessError::Config(format!(
                "rows are not contiguous in K ({} then {})",
                w[0].k, w[1].k
            )));
        }
    }
    let mut best = 0;
    for r in sorted {
        if r.error_rate > threshold {
            break;
        }
        best = r.k;
    }
    Ok(best)
}
