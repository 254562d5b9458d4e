//! Deterministic instance generators, all seeded through ChaCha8.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::verify::verify_restricted;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` edges with uniform endpoints and weights in `[wmin, wmax]`.
pub fn random_graph(n: usize, m: usize, wmin: i64, wmax: i64, seed: u64, self_loops: bool) -> Result<Graph> {
    if wmin > wmax {
        return Err(Error::Param(format!("empty weight range [{wmin}, {wmax}]")));
    }
    if m > 0 && (n == 0 || (n == 1 && !self_loops)) {
        return Err(Error::Param(format!("cannot place {m} edges on {n} vertices")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
        if u == v && !self_loops {
            continue;
        }
        edges.push(Edge::new(u, v, r.gen_range(wmin..=wmax)));
    }
    Graph::new(n, edges)
}

/// Unit-weight directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Param("a cycle needs at least one vertex".into()));
    }
    Graph::new(n, (0..n).map(|v| Edge::new(v, (v + 1) % n, 1)).collect())
}

#[derive(Clone, Debug)]
pub struct RestrictedSample {
    pub graph: Graph,
    pub source: usize,
    /// Samples discarded by the cycle-mean check.
    pub rejected: usize,
}

/// A restricted instance with source 0: weights `b + p(u) - p(v)` with
/// `b >= 1` and a small hidden potential `p`, so every cycle has mean at
/// least 1. `neg_bias` is the chance of taking the lightest admissible
/// weight, which is -1 whenever the potential allows it.
pub fn restricted_instance(n: usize, m: usize, neg_bias: f64, seed: u64) -> Result<RestrictedSample> {
    if n < 2 {
        return Err(Error::Param("a restricted instance needs at least two vertices".into()));
    }
    let mut rejected = 0;
    for attempt in 0..64u64 {
        let mut r = rng(seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let top = 3i64;
        let p: Vec<i64> = (0..n).map(|v| if v == 0 { -1 } else { r.gen_range(0..=top) }).collect();
        let cap = n as i64;
        let mut edges: Vec<Edge> = (1..n).map(|v| Edge::new(0, v, 0)).collect();
        let mut tries = 0usize;
        while edges.len() < n - 1 + m && tries < 64 * (m + 1) {
            tries += 1;
            let (u, v) = (r.gen_range(1..n), r.gen_range(1..n));
            let lo = (1 + p[u] - p[v]).max(-1);
            if u == v || lo > cap {
                continue;
            }
            let w = if r.gen_bool(neg_bias.clamp(0.0, 1.0)) { lo } else { r.gen_range(lo..=cap) };
            edges.push(Edge::new(u, v, w));
        }
        let g = Graph::new(n, edges)?;
        if verify_restricted(&g, 0).pass {
            return Ok(RestrictedSample { graph: g, source: 0, rejected });
        }
        rejected += 1;
    }
    Err(Error::Param("could not sample a restricted instance".into()))
}
