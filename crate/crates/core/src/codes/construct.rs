//! Random and greedy parity-check matrix generators.

use super::ParityCheckMatrix;
use crate::error::{Error, Result};
use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SOCKET_RETRIES: usize = 100;
const MAX_RESTARTS: usize = 1000;

/// Row-regular ensemble: every check is an independent uniformly random
/// `w_r`-subset of the `m` variables. Column weights are left free.
pub fn ensemble_e(m: usize, checks: usize, w_r: usize, seed: u64) -> Result<ParityCheckMatrix> {
    if checks == 0 {
        return Err(Error::InvalidParameter("ensemble E needs at least one check".into()));
    }
    if w_r < 3 || w_r > m {
        return Err(Error::InvalidParameter(format!(
            "row weight {w_r} must satisfy 3 <= w_r <= m = {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..checks)
        .map(|_| index::sample(&mut rng, m, w_r).into_vec())
        .collect();
    ParityCheckMatrix::from_rows(m, rows)
}

/// Column-regular matrix built by a configuration model: check sockets are
/// dealt at random to variables (`w_c` each), row degrees differ by at most
/// one, and duplicate edges inside a column are resolved by swapping the
/// offending socket with a random socket of another column.
pub fn column_regular(m: usize, checks: usize, w_c: usize, seed: u64) -> Result<ParityCheckMatrix> {
    if m == 0 || w_c == 0 {
        return Err(Error::InvalidParameter(
            "length and column weight must be positive".into(),
        ));
    }
    if w_c > checks {
        return Err(Error::Infeasible(format!(
            "column weight {w_c} exceeds number of checks {checks}"
        )));
    }
    let total = m * w_c;
    let base = total / checks;
    let extra = total % checks;
    if base + usize::from(extra > 0) > m {
        return Err(Error::Infeasible(format!(
            "{total} edges do not fit in {checks} checks of length {m}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut heavy: Vec<usize> = (0..checks).collect();
    heavy.shuffle(&mut rng);
    let mut sockets = Vec::with_capacity(total);
    for a in 0..checks {
        sockets.extend(core::iter::repeat_n(a, base));
    }
    sockets.extend(heavy.iter().take(extra).copied());

    let column_has = |sockets: &[usize], col: usize, check: usize, skip: usize| {
        (col * w_c..(col + 1) * w_c).any(|s| s != skip && sockets[s] == check)
    };

    'restart: for _ in 0..MAX_RESTARTS {
        sockets.shuffle(&mut rng);
        for v in 0..m {
            for s in v * w_c..(v + 1) * w_c {
                if !(v * w_c..s).any(|t| sockets[t] == sockets[s]) {
                    continue;
                }
                let mut fixed = false;
                for _ in 0..SOCKET_RETRIES {
                    let q = rng.random_range(0..total);
                    let u = q / w_c;
                    if u == v {
                        continue;
                    }
                    if column_has(&sockets, v, sockets[q], s) || column_has(&sockets, u, sockets[s], q) {
                        continue;
                    }
                    sockets.swap(s, q);
                    fixed = true;
                    break;
                }
                if !fixed {
                    continue 'restart;
                }
            }
        }
        let mut rows = vec![Vec::new(); checks];
        for (s, &a) in sockets.iter().enumerate() {
            rows[a].push(s / w_c);
        }
        return ParityCheckMatrix::from_rows(m, rows);
    }
    Err(Error::Infeasible(format!(
        "no duplicate-free placement found after {MAX_RESTARTS} restarts"
    )))
}

/// Progressive edge growth. Variables are processed in index order; each new
/// edge of a variable goes to the check farthest from it in the current
/// graph (unreachable counts as farthest), ties broken by lowest current
/// check degree and then lowest index. The seed draws a random relabelling
/// of the checks that defines "lowest index", so different seeds give
/// different but equally valid PEG graphs.
pub fn peg(m: usize, checks: usize, col_degrees: &[usize], seed: u64) -> Result<ParityCheckMatrix> {
    if col_degrees.len() != m {
        return Err(Error::LengthMismatch {
            expected: m,
            found: col_degrees.len(),
        });
    }
    if checks == 0 {
        return Err(Error::InvalidParameter("PEG needs at least one check".into()));
    }
    if let Some((b, &d)) = col_degrees.iter().enumerate().find(|(_, &d)| d > checks) {
        return Err(Error::Infeasible(format!(
            "variable {b} asks for degree {d} with only {checks} checks"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut label: Vec<usize> = (0..checks).collect();
    label.shuffle(&mut rng);

    let mut var_adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut chk_adj: Vec<Vec<usize>> = vec![Vec::new(); checks];
    let mut var_dist = vec![usize::MAX; m];
    let mut chk_dist = vec![usize::MAX; checks];
    let mut queue = VecDeque::new();

    for v in 0..m {
        for _ in 0..col_degrees[v] {
            // BFS over the current Tanner graph from v; depths count edges.
            var_dist.fill(usize::MAX);
            chk_dist.fill(usize::MAX);
            var_dist[v] = 0;
            queue.clear();
            queue.push_back((true, v));
            while let Some((is_var, x)) = queue.pop_front() {
                if is_var {
                    for &a in &var_adj[x] {
                        if chk_dist[a] == usize::MAX {
                            chk_dist[a] = var_dist[x] + 1;
                            queue.push_back((false, a));
                        }
                    }
                } else {
                    for &b in &chk_adj[x] {
                        if var_dist[b] == usize::MAX {
                            var_dist[b] = chk_dist[x] + 1;
                            queue.push_back((true, b));
                        }
                    }
                }
            }
            let choice = (0..checks)
                .filter(|&a| !var_adj[v].contains(&a))
                .max_by(|&a, &b| {
                    chk_dist[a]
                        .cmp(&chk_dist[b])
                        .then(chk_adj[b].len().cmp(&chk_adj[a].len()))
                        .then(label[b].cmp(&label[a]))
                })
                .ok_or_else(|| Error::Infeasible(format!("no free check for variable {v}")))?;
            var_adj[v].push(choice);
            chk_adj[choice].push(v);
        }
    }
    ParityCheckMatrix::from_rows(m, chk_adj)
}
