//! Belief propagation on Tanner graphs under the interference prior model:
//! sum-product, reinforced BP, biased list BP, M most probable
//! configurations and multiple-basis BP.

use crate::codes::{systematic_form, LinearCode, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// Probability clip applied to priors and messages.
pub const EPS_CLIP: f64 = 1e-12;
/// Below this `|delta q|` the fast division is replaced by an explicit
/// exclusion product.
pub const DIVISION_GUARD: f64 = 1e-12;
pub const DEFAULT_MAX_ITERS: usize = 50;
pub const DEFAULT_BIAS: f64 = 100.0;
pub const DEFAULT_SIGMA_FLOOR: f64 = 1e-3;
pub const DEFAULT_LIST_SIZE: usize = 20;
/// Operating point for reinforced BP.
pub const DEFAULT_PSI0: f64 = 0.8;
pub const DEFAULT_PSI1: f64 = 0.99;
/// Tolerance for recognising integer-valued observation entries.
const LEVEL_TOL: f64 = 1e-9;

#[inline]
fn clip(p: f64) -> f64 {
    p.clamp(EPS_CLIP, 1.0 - EPS_CLIP)
}

#[inline]
fn sigmoid(l: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-l))
}

/// Bipartite graph of a parity-check matrix with edges numbered check-major.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    h: ParityCheckMatrix,
    check_ptr: Vec<usize>,
    edge_var: Vec<usize>,
    var_ptr: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(h: &ParityCheckMatrix) -> Self {
        let mut check_ptr = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.num_edges());
        check_ptr.push(0);
        for a in 0..h.rows() {
            edge_var.extend_from_slice(h.row(a));
            check_ptr.push(edge_var.len());
        }
        let mut per_var: Vec<Vec<usize>> = vec![Vec::new(); h.cols()];
        for (e, &b) in edge_var.iter().enumerate() {
            per_var[b].push(e);
        }
        let mut var_ptr = Vec::with_capacity(h.cols() + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for list in per_var {
            var_edges.extend(list);
            var_ptr.push(var_edges.len());
        }
        TannerGraph {
            h: h.clone(),
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
        }
    }

    pub fn parity_check(&self) -> &ParityCheckMatrix {
        &self.h
    }

    #[inline]
    pub fn n_vars(&self) -> usize {
        self.h.cols()
    }

    #[inline]
    pub fn n_checks(&self) -> usize {
        self.h.rows()
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// `N(a)`: variables of check `a`.
    pub fn check_vars(&self, a: usize) -> &[usize] {
        &self.edge_var[self.check_ptr[a]..self.check_ptr[a + 1]]
    }

    /// `M(b)`: checks of variable `b`.
    pub fn var_checks(&self, b: usize) -> &[usize] {
        self.h.col(b)
    }

    /// Edge ids incident to check `a` (contiguous).
    pub fn check_edges(&self, a: usize) -> core::ops::Range<usize> {
        self.check_ptr[a]..self.check_ptr[a + 1]
    }

    /// Edge ids incident to variable `b`.
    pub fn var_edges(&self, b: usize) -> &[usize] {
        &self.var_edges[self.var_ptr[b]..self.var_ptr[b + 1]]
    }

    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    pub fn is_codeword(&self, w: &BitVec) -> bool {
        self.h.is_codeword(w)
    }
}

/// Per-variable prior probabilities `P(x_b = 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelPriors {
    p0: Vec<f64>,
}

impl ChannelPriors {
    /// Clips each probability into `[EPS_CLIP, 1 - EPS_CLIP]`.
    pub fn new(p0: Vec<f64>) -> Self {
        ChannelPriors {
            p0: p0.into_iter().map(clip).collect(),
        }
    }

    pub fn from_llr(llr: &[f64]) -> Self {
        Self::new(llr.iter().map(|&l| sigmoid(l)).collect())
    }

    pub fn uniform(m: usize) -> Self {
        Self::new(vec![0.5; m])
    }

    pub fn len(&self) -> usize {
        self.p0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p0.is_empty()
    }

    pub fn p0(&self, b: usize) -> f64 {
        self.p0[b]
    }

    pub fn p1(&self, b: usize) -> f64 {
        1.0 - self.p0[b]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p0
    }

    /// `ln(p0 / p1)`.
    pub fn llr(&self, b: usize) -> f64 {
        libm::log(self.p0[b] / (1.0 - self.p0[b]))
    }

    pub fn llrs(&self) -> Vec<f64> {
        (0..self.len()).map(|b| self.llr(b)).collect()
    }

    /// `sum_b ln p_b(x_b)`.
    pub fn log_weight(&self, x: &BitVec) -> f64 {
        (0..self.len())
            .map(|b| libm::log(if x.get(b) { self.p1(b) } else { self.p0(b) }))
            .sum()
    }
}

/// `max(floor, max|v| (K-1)/K)`: the variance of the interference from the
/// other `K - 1` columns.
pub fn interference_variance(v: &[f64], k: usize, sigma_floor: f64) -> f64 {
    let kk = k.max(1) as f64;
    let peak = v.iter().fold(0.0f64, |a, &x| a.max(libm::fabs(x)));
    sigma_floor.max(peak * (kk - 1.0) / kk)
}

/// Priors for `v_b = BPSK(x_b) + N(0, sigma^2)`: `LLR_b = 2 v_b / sigma^2`.
pub fn interference_priors(v: &[f64], k: usize, sigma_floor: f64) -> ChannelPriors {
    let var = interference_variance(v, k, sigma_floor);
    priors_with_variance(v, var)
}

pub fn priors_with_variance(v: &[f64], var: f64) -> ChannelPriors {
    ChannelPriors::new(v.iter().map(|&x| sigmoid(2.0 * x / var)).collect())
}

/// Message state: per-edge `q` and `r` pairs and per-variable
/// pseudoposteriors, each as `[P(0), P(1)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BpMessages {
    pub q: Vec<[f64; 2]>,
    pub r: Vec<[f64; 2]>,
    pub posterior: Vec<[f64; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Converged,
    Diverged,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    /// Hard decision of the final pseudoposteriors; a codeword when
    /// converged.
    pub word: BitVec,
    pub iterations: usize,
    /// Final `P(x_b = 0)`.
    pub posterior0: Vec<f64>,
}

impl DecodeOutcome {
    pub fn converged(&self) -> bool {
        self.status == DecodeStatus::Converged
    }

    pub fn codeword(&self) -> Option<&BitVec> {
        self.converged().then_some(&self.word)
    }
}

/// Iteration control for the sum-product family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BpConfig {
    pub max_iters: usize,
    /// Stop as soon as the hard decision satisfies every check.
    pub early_stop: bool,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            max_iters: DEFAULT_MAX_ITERS,
            early_stop: true,
        }
    }
}

/// Which member of the sum-product family to run.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum DecoderKind {
    #[default]
    Bp,
    /// Memory-one reinforcement with `psi(l) = 1 - psi0 psi1^l`.
    Rbp { psi0: f64, psi1: f64 },
}

/// Flooding-schedule sum-product decoder state.
#[derive(Clone, Debug)]
pub struct SumProduct<'g> {
    graph: &'g TannerGraph,
    prior_llr: Vec<f64>,
    q: Vec<[f64; 2]>,
    r: Vec<[f64; 2]>,
    post: Vec<[f64; 2]>,
    /// `ln(g0/g1)` of the reinforcement marginal and `(psi0, psi1)`.
    reinforcement: Option<(Vec<f64>, f64, f64)>,
    iteration: usize,
    scratch: Vec<f64>,
}

impl<'g> SumProduct<'g> {
    pub fn new(graph: &'g TannerGraph, priors: &ChannelPriors) -> Result<Self> {
        if priors.len() != graph.n_vars() {
            return Err(Error::LengthMismatch {
                expected: graph.n_vars(),
                found: priors.len(),
            });
        }
        let q = (0..graph.n_edges())
            .map(|e| {
                let p = priors.p0(graph.edge_var(e));
                [p, 1.0 - p]
            })
            .collect();
        let post = (0..graph.n_vars()).map(|b| [priors.p0(b), priors.p1(b)]).collect();
        Ok(SumProduct {
            graph,
            prior_llr: priors.llrs(),
            q,
            r: vec![[0.5, 0.5]; graph.n_edges()],
            post,
            reinforcement: None,
            iteration: 0,
            scratch: Vec::new(),
        })
    }

    /// Enables reinforcement; the first marginal is the prior.
    pub fn reinforced(mut self, psi0: f64, psi1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&psi0) || !(0.0..=1.0).contains(&psi1) {
            return Err(Error::InvalidParameter("psi0, psi1 must lie in [0, 1]".into()));
        }
        self.reinforcement = Some((self.prior_llr.clone(), psi0, psi1));
        Ok(self)
    }

    pub fn with_kind(self, kind: DecoderKind) -> Result<Self> {
        match kind {
            DecoderKind::Bp => Ok(self),
            DecoderKind::Rbp { psi0, psi1 } => self.reinforced(psi0, psi1),
        }
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// One horizontal plus vertical sweep.
    pub fn step(&mut self) {
        self.iteration += 1;
        let g = self.graph;

        // Horizontal: delta r_ab = prod_{b' != b} delta q_ab'.
        for a in 0..g.n_checks() {
            let edges = g.check_edges(a);
            self.scratch.clear();
            self.scratch.extend(edges.clone().map(|e| self.q[e][0] - self.q[e][1]));
            let dq = &self.scratch;
            let full: f64 = dq.iter().product();
            for (t, e) in edges.enumerate() {
                let dr = if libm::fabs(dq[t]) > DIVISION_GUARD {
                    full / dq[t]
                } else {
                    dq.iter()
                        .enumerate()
                        .filter(|&(u, _)| u != t)
                        .map(|(_, &d)| d)
                        .product()
                };
                let r0 = clip(0.5 * (1.0 + dr));
                self.r[e] = [r0, 1.0 - r0];
            }
        }

        // Vertical, in log-ratio form: q_ab ~ p_b prod_{a' != a} r_a'b.
        let psi = self
            .reinforcement
            .as_ref()
            .map(|&(_, p0, p1)| 1.0 - p0 * libm::pow(p1, self.iteration as f64));
        for b in 0..g.n_vars() {
            let mut total = self.prior_llr[b];
            if let (Some(psi), Some((gl, _, _))) = (psi, self.reinforcement.as_ref()) {
                total += psi * gl[b];
            }
            let mut incoming = 0.0;
            for &e in g.var_edges(b) {
                incoming += libm::log(self.r[e][0] / self.r[e][1]);
            }
            total += incoming;
            let p = sigmoid(total);
            self.post[b] = [p, 1.0 - p];
            for &e in g.var_edges(b) {
                let q0 = clip(sigmoid(total - libm::log(self.r[e][0] / self.r[e][1])));
                self.q[e] = [q0, 1.0 - q0];
            }
            if let Some((gl, _, _)) = self.reinforcement.as_mut() {
                gl[b] = incoming;
            }
        }
    }

    pub fn hard_decision(&self) -> BitVec {
        let mut w = BitVec::zeros(self.graph.n_vars());
        for (b, p) in self.post.iter().enumerate() {
            if p[1] > p[0] {
                w.set(b, true);
            }
        }
        w
    }

    pub fn posterior0(&self) -> Vec<f64> {
        self.post.iter().map(|p| p[0]).collect()
    }

    pub fn messages(&self) -> BpMessages {
        BpMessages {
            q: self.q.clone(),
            r: self.r.clone(),
            posterior: self.post.clone(),
        }
    }

    /// Runs until the hard decision is a codeword (when `early_stop`) or
    /// the iteration budget is spent. `observe` sees the pseudoposteriors
    /// `P(x_b = 0)` after every iteration.
    pub fn run(mut self, cfg: BpConfig, mut observe: impl FnMut(usize, &[[f64; 2]])) -> DecodeOutcome {
        let mut word = self.hard_decision();
        for _ in 0..cfg.max_iters {
            self.step();
            observe(self.iteration, &self.post);
            word = self.hard_decision();
            if cfg.early_stop && self.graph.is_codeword(&word) {
                break;
            }
        }
        let status = if self.iteration > 0 && self.graph.is_codeword(&word) {
            DecodeStatus::Converged
        } else {
            DecodeStatus::Diverged
        };
        DecodeOutcome {
            status,
            word,
            iterations: self.iteration,
            posterior0: self.posterior0(),
        }
    }
}

/// Sum-product decoding.
pub fn bp_decode(graph: &TannerGraph, priors: &ChannelPriors, cfg: BpConfig) -> Result<DecodeOutcome> {
    Ok(SumProduct::new(graph, priors)?.run(cfg, |_, _| {}))
}

/// Reinforced BP.
pub fn rbp_decode(
    graph: &TannerGraph,
    priors: &ChannelPriors,
    cfg: BpConfig,
    psi0: f64,
    psi1: f64,
) -> Result<DecodeOutcome> {
    Ok(SumProduct::new(graph, priors)?
        .reinforced(psi0, psi1)?
        .run(cfg, |_, _| {}))
}

/// Either decoder, by kind.
pub fn decode(graph: &TannerGraph, priors: &ChannelPriors, kind: DecoderKind, cfg: BpConfig) -> Result<DecodeOutcome> {
    Ok(SumProduct::new(graph, priors)?.with_kind(kind)?.run(cfg, |_, _| {}))
}

/// Per-iteration pseudoposterior trace row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub variable: usize,
    pub p0: f64,
}

/// Like [`decode`] but records every pseudoposterior of every iteration.
pub fn decode_traced(
    graph: &TannerGraph,
    priors: &ChannelPriors,
    kind: DecoderKind,
    cfg: BpConfig,
) -> Result<(DecodeOutcome, Vec<TraceRow>)> {
    let mut trace = Vec::new();
    let out = SumProduct::new(graph, priors)?.with_kind(kind)?.run(cfg, |it, post| {
        trace.extend(post.iter().enumerate().map(|(b, p)| TraceRow {
            iteration: it,
            variable: b,
            p0: p[0],
        }));
    });
    Ok((out, trace))
}

/// A candidate column proposed by a list decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub word: BitVec,
    /// Message integer of the column (`>= 1`).
    pub message: u64,
    /// `<BPSK(word), v>` against the observation the list was built for.
    pub correlation: f64,
    /// Drawn at random to fill the list rather than decoded.
    pub padded: bool,
}

pub(crate) fn bpsk_correlation(word: &BitVec, v: &[f64]) -> f64 {
    v.iter()
        .enumerate()
        .map(|(b, &x)| if word.get(b) { -x } else { x })
        .sum()
}

/// Deduplicates decoded words, drops the zero word and non-codewords, and
/// ranks by `|<BPSK(c), v>|` (ties to the lower message index).
pub fn rank_codewords(code: &LinearCode, words: Vec<BitVec>, v: &[f64]) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    for w in words {
        let Some(message) = code.message_index(&w).filter(|&j| j != 0) else {
            continue;
        };
        if out.iter().any(|c| c.message == message) {
            continue;
        }
        out.push(Candidate {
            correlation: bpsk_correlation(&w, v),
            word: w,
            message,
            padded: false,
        });
    }
    out.sort_by(|a, b| {
        libm::fabs(b.correlation)
            .partial_cmp(&libm::fabs(a.correlation))
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.message.cmp(&b.message))
    });
    out
}

/// Appends uniformly random distinct columns until the list has `k`
/// entries (or every column is present).
pub fn pad_with_random_columns<R: Rng + ?Sized>(
    code: &LinearCode,
    list: &mut Vec<Candidate>,
    k: usize,
    v: &[f64],
    rng: &mut R,
) {
    let s = code.dimension();
    let n = if s >= 63 { u64::MAX } else { (1u64 << s) - 1 };
    let target = (k as u64).min(n) as usize;
    while list.len() < target {
        let j = rng.random_range(1..=n);
        if list.iter().any(|c| c.message == j) {
            continue;
        }
        let word = code.encode_index(j);
        list.push(Candidate {
            correlation: bpsk_correlation(&word, v),
            word,
            message: j,
            padded: true,
        });
    }
}

/// Parameters of the biased list decoder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlbpParams {
    /// Nominal list size `L`; the run count is `2 + 2|J|`.
    pub list_size: usize,
    /// Bias magnitude `B`.
    pub bias: f64,
    pub sigma_floor: f64,
    pub bp: BpConfig,
    pub decoder: DecoderKind,
}

impl Default for BlbpParams {
    fn default() -> Self {
        BlbpParams {
            list_size: DEFAULT_LIST_SIZE,
            bias: DEFAULT_BIAS,
            sigma_floor: DEFAULT_SIGMA_FLOOR,
            bp: BpConfig::default(),
            decoder: DecoderKind::Bp,
        }
    }
}

/// The observation copies decoded by the biased list decoder: `v` itself,
/// `v` with `+-K` entries pushed to `+-B`, and for each sampled coordinate
/// of magnitude `K - 1` (or `K - 2` when there are none) that vector with
/// the coordinate pushed to `+B` and to `-B`.
pub fn biased_observations<R: Rng + ?Sized>(
    v: &[f64],
    k: usize,
    list_size: usize,
    bias: f64,
    rng: &mut R,
) -> Vec<Vec<f64>> {
    let kk = k as f64;
    let mut rx2 = v.to_vec();
    for x in rx2.iter_mut() {
        if libm::fabs(libm::fabs(*x) - kk) <= LEVEL_TOL {
            *x = if *x > 0.0 { bias } else { -bias };
        }
    }
    let level = |target: f64| -> Vec<usize> {
        (0..v.len())
            .filter(|&j| libm::fabs(libm::fabs(v[j]) - target) <= LEVEL_TOL)
            .collect()
    };
    // A sum of K signs only takes the values K, K - 2, ..., so when no
    // entry sits at K - 1 the next level down is used.
    let mut pool = if k >= 1 { level(kk - 1.0) } else { Vec::new() };
    if pool.is_empty() && k >= 2 {
        pool = level(kk - 2.0);
    }
    let want = list_size.saturating_sub(2) / 2;
    let chosen: Vec<usize> = pool.choose_multiple(rng, want.min(pool.len())).copied().collect();
    let mut out = Vec::with_capacity(2 + 2 * chosen.len());
    out.push(v.to_vec());
    out.push(rx2.clone());
    for j in chosen {
        for sign in [1.0, -1.0] {
            let mut rx = rx2.clone();
            rx[j] = sign * bias;
            out.push(rx);
        }
    }
    out
}

/// Biased list BP: decodes every biased copy of `v`, keeps distinct
/// nonzero codewords, ranks them by correlation with `v`, truncates to `k`
/// and pads with random columns up to exactly `k`.
///
/// All copies share the prior variance computed from the unbiased `v`, so
/// the bias saturates its own coordinate without flattening the others.
pub fn biased_list_bp<R: Rng + ?Sized>(
    code: &LinearCode,
    graph: &TannerGraph,
    v: &[f64],
    k: usize,
    params: &BlbpParams,
    rng: &mut R,
) -> Result<Vec<Candidate>> {
    if v.len() != graph.n_vars() {
        return Err(Error::LengthMismatch {
            expected: graph.n_vars(),
            found: v.len(),
        });
    }
    let var = interference_variance(v, k, params.sigma_floor);
    let mut words = Vec::new();
    for rx in biased_observations(v, k, params.list_size, params.bias, rng) {
        let priors = priors_with_variance(&rx, var);
        let out = decode(graph, &priors, params.decoder, params.bp)?;
        if out.converged() {
            words.push(out.word);
        }
    }
    let mut list = rank_codewords(code, words, v);
    list.truncate(k);
    pad_with_random_columns(code, &mut list, k, v, rng);
    Ok(list)
}

/// One configuration returned by [`mmpc`].
#[derive(Clone, Debug, PartialEq)]
pub struct MmpcConfig {
    pub word: BitVec,
    /// `sum_b ln p_b(x_b)` under the unconstrained priors.
    pub log_weight: f64,
    pub is_codeword: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MmpcParams {
    pub max_iters: usize,
}

impl Default for MmpcParams {
    fn default() -> Self {
        MmpcParams {
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

/// Max-product in the log-ratio domain (min-sum). Returns the beliefs
/// `max_{x_b = 0} W - max_{x_b = 1} W`, exact on cycle-free graphs.
pub fn max_product_beliefs(graph: &TannerGraph, llr: &[f64], max_iters: usize) -> Vec<f64> {
    let n_edges = graph.n_edges();
    let mut to_check: Vec<f64> = (0..n_edges).map(|e| llr[graph.edge_var(e)]).collect();
    let mut to_var = vec![0.0; n_edges];
    let mut beliefs = llr.to_vec();
    for _ in 0..max_iters.max(1) {
        let mut change: f64 = 0.0;
        for a in 0..graph.n_checks() {
            let edges = graph.check_edges(a);
            let mut sign = 1.0;
            let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
            for e in edges.clone() {
                let x = to_check[e];
                if x < 0.0 {
                    sign = -sign;
                }
                let mag = libm::fabs(x);
                if mag < min1 {
                    min2 = min1;
                    min1 = mag;
                    arg = e;
                } else if mag < min2 {
                    min2 = mag;
                }
            }
            for e in edges {
                let own = if to_check[e] < 0.0 { -1.0 } else { 1.0 };
                let mag = if e == arg { min2 } else { min1 };
                let msg = if mag.is_finite() { sign * own * mag } else { 0.0 };
                change = change.max(libm::fabs(msg - to_var[e]));
                to_var[e] = msg;
            }
        }
        for (b, belief) in beliefs.iter_mut().enumerate() {
            let total: f64 = llr[b] + graph.var_edges(b).iter().map(|&e| to_var[e]).sum::<f64>();
            *belief = total;
            for &e in graph.var_edges(b) {
                to_check[e] = total - to_var[e];
            }
        }
        if change <= 1e-9 {
            break;
        }
    }
    beliefs
}

struct Branch {
    constraints: Vec<(usize, bool)>,
    config: BitVec,
    beliefs: Vec<f64>,
    log_weight: f64,
}

/// The `M` most probable configurations by best max-marginal first search.
///
/// Each found configuration owns a region of the search space described by
/// clamped coordinates. The next configuration is the best single-coordinate
/// deviation from any owned configuration, scored by its max-marginal
/// `log w(x_s) - |belief_i|`. Picking `(s, i)` splits region `s` into
/// "`x_i` as in `x_s`" (kept by `s`) and "`x_i` flipped" (a new region).
/// Clamps are encoded as saturated priors of magnitude `C`, larger than any
/// unclamped weight difference, so scores that would need a clamp flipped
/// fall below `log w - C/2` and are discarded.
pub fn mmpc(
    graph: &TannerGraph,
    priors: &ChannelPriors,
    m_configs: usize,
    params: &MmpcParams,
) -> Result<Vec<MmpcConfig>> {
    if priors.len() != graph.n_vars() {
        return Err(Error::LengthMismatch {
            expected: graph.n_vars(),
            found: priors.len(),
        });
    }
    if m_configs == 0 {
        return Err(Error::InvalidParameter("m_configs must be at least 1".into()));
    }
    let base = priors.llrs();
    let clamp = 4.0 * (base.iter().map(|l| libm::fabs(*l)).sum::<f64>() + 1.0);

    let solve = |constraints: &[(usize, bool)]| -> Option<Branch> {
        let mut llr = base.clone();
        for &(i, bit) in constraints {
            llr[i] = if bit { -clamp } else { clamp };
        }
        let beliefs = max_product_beliefs(graph, &llr, params.max_iters);
        let mut config = BitVec::zeros(graph.n_vars());
        for (b, &l) in beliefs.iter().enumerate() {
            if l < 0.0 {
                config.set(b, true);
            }
        }
        if constraints.iter().any(|&(i, bit)| config.get(i) != bit) {
            return None;
        }
        Some(Branch {
            constraints: constraints.to_vec(),
            log_weight: priors.log_weight(&config),
            config,
            beliefs,
        })
    };
    let score = |br: &Branch, i: usize| -> f64 {
        if br.constraints.iter().any(|&(c, _)| c == i) {
            return f64::NEG_INFINITY;
        }
        let drop = libm::fabs(br.beliefs[i]);
        if drop >= clamp / 2.0 {
            f64::NEG_INFINITY
        } else {
            br.log_weight - drop
        }
    };

    let Some(first) = solve(&[]) else {
        return Ok(Vec::new());
    };
    let mut out = vec![MmpcConfig {
        is_codeword: graph.is_codeword(&first.config),
        word: first.config.clone(),
        log_weight: first.log_weight,
    }];
    let mut branches = vec![first];
    let mut used: Vec<(usize, usize)> = Vec::new();
    let max_rounds = 4 * m_configs + graph.n_vars();
    let mut rounds = 0;
    while out.len() < m_configs && rounds < max_rounds {
        rounds += 1;
        let mut best: Option<(f64, usize, usize)> = None;
        for (s, br) in branches.iter().enumerate() {
            for i in 0..graph.n_vars() {
                if used.contains(&(s, i)) {
                    continue;
                }
                let sc = score(br, i);
                if sc == f64::NEG_INFINITY {
                    continue;
                }
                if best.is_none_or(|(b, _, _)| sc > b) {
                    best = Some((sc, s, i));
                }
            }
        }
        let Some((_, s, i)) = best else { break };
        used.push((s, i));
        let keep = branches[s].config.get(i);
        let mut flipped = branches[s].constraints.clone();
        flipped.push((i, !keep));
        let mut narrowed = branches[s].constraints.clone();
        narrowed.push((i, keep));
        match solve(&narrowed) {
            Some(mut br) => {
                // The region's optimum is unchanged by a constraint it meets.
                br.config = branches[s].config.clone();
                br.log_weight = branches[s].log_weight;
                branches[s] = br;
            }
            None => {
                branches[s].constraints = narrowed;
                branches[s].beliefs.fill(f64::INFINITY);
            }
        }
        if let Some(br) = solve(&flipped) {
            if out.iter().all(|c| c.word != br.config) {
                out.push(MmpcConfig {
                    is_codeword: graph.is_codeword(&br.config),
                    word: br.config.clone(),
                    log_weight: br.log_weight,
                });
                branches.push(br);
            }
        }
    }
    Ok(out)
}

/// Several parity-check matrices of one code, decoded side by side.
#[derive(Clone, Debug)]
pub struct MultiBasis {
    graphs: Vec<TannerGraph>,
}

impl MultiBasis {
    /// Verifies that all matrices have the same null space: equal rank, and
    /// every generator row of the first code satisfies every matrix.
    pub fn new(matrices: &[ParityCheckMatrix]) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidParameter("need at least one matrix".into()))?;
        let code = LinearCode::from_parity(first.clone())?;
        let rank = first.rank();
        for h in &matrices[1..] {
            if h.cols() != first.cols() || h.rank() != rank {
                return Err(Error::CodeMismatch);
            }
            if !code.generator().rows().iter().all(|g| h.is_codeword(g)) {
                return Err(Error::CodeMismatch);
            }
        }
        Ok(MultiBasis {
            graphs: matrices.iter().map(TannerGraph::new).collect(),
        })
    }

    /// The original matrix plus `extra` reduced forms obtained by
    /// elimination along random column orders, expressed in the original
    /// coordinates.
    pub fn with_systematic_forms<R: Rng + ?Sized>(h: &ParityCheckMatrix, extra: usize, rng: &mut R) -> Result<Self> {
        let mut mats = vec![h.clone()];
        let mut order: Vec<usize> = (0..h.cols()).collect();
        for _ in 0..extra {
            order.shuffle(rng);
            mats.push(systematic_form(h, &order)?.in_original_order().clone());
        }
        Self::new(&mats)
    }

    pub fn graphs(&self) -> &[TannerGraph] {
        &self.graphs
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

/// How MBBP turns an observation into priors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PriorsMode {
    /// Interference priors from `v`.
    Interference { sigma_floor: f64 },
    /// Interference priors from both `v` and `-v`, for signals whose
    /// amplitudes may be negative.
    BothSigns { sigma_floor: f64 },
}

impl Default for PriorsMode {
    fn default() -> Self {
        PriorsMode::Interference {
            sigma_floor: DEFAULT_SIGMA_FLOOR,
        }
    }
}

/// Multiple-basis BP: one decoder per matrix, converged distinct codewords
/// ranked by correlation with `v`, at most `k` returned.
pub fn mbbp(
    code: &LinearCode,
    bases: &MultiBasis,
    v: &[f64],
    k: usize,
    mode: PriorsMode,
    kind: DecoderKind,
    cfg: BpConfig,
) -> Result<Vec<Candidate>> {
    let (floor, signs): (f64, &[f64]) = match mode {
        PriorsMode::Interference { sigma_floor } => (sigma_floor, &[1.0]),
        PriorsMode::BothSigns { sigma_floor } => (sigma_floor, &[1.0, -1.0]),
    };
    let mut words = Vec::new();
    for &sign in signs {
        let rx: Vec<f64> = v.iter().map(|x| sign * x).collect();
        let priors = interference_priors(&rx, k, floor);
        for g in bases.graphs() {
            let out = decode(g, &priors, kind, cfg)?;
            if out.converged() {
                words.push(out.word);
            }
        }
    }
    let mut list = rank_codewords(code, words, v);
    list.truncate(k);
    Ok(list)
}
