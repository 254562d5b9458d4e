//! General integer weights: scale down to restricted instances, tighten a
//! potential scale by scale, then finish on the reweighted graph.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ceil_div, Dist, Edge, Graph};
use crate::restricted::{ksssp, LevelStats, RestrictedInstance, SolverParams};
use crate::sssp::{extract_negative_cycle, few_neg_layers, Cycle, ShortestPathResult};
use crate::verify::verify_sssp;

/// `v_j(e) = ceil(w(e) / 2^j) + 2`.
pub fn scale_round_weights(g: &Graph, j: u32) -> Graph {
    let div = 1i64 << j.min(62);
    g.map_weights(|_, e| scaled(e.weight, div))
        .expect("scaled weights never exceed the input magnitude plus two")
}

fn scaled(w: i64, div: i64) -> i64 {
    ceil_div(w, div) + 2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundStats {
    /// Scale index `j`.
    pub scale: u32,
    /// 1 lifts the reweighted scale to `>= 0`, 2 lifts it to `>= 1`.
    pub call: u8,
    pub n: usize,
    pub m: usize,
    pub heavy_removed: usize,
    pub depth: u32,
    pub max_growth: f64,
    pub levels: Vec<LevelStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Distances { result: ShortestPathResult },
    NegativeCycle { cycle: Cycle },
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub verdict: Verdict,
    pub rounds: Vec<RoundStats>,
    /// Layers used by the finishing few-negative-edges pass.
    pub finish_layers: usize,
    /// Set when a restricted call rejected its instance; only possible with
    /// a reachable negative cycle.
    pub promise_failed: bool,
}

/// Distances from `s` or a negative cycle reachable from it.
pub fn solve_sssp(g: &Graph, s: usize, params: &SolverParams) -> Result<SolveReport> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    let reach = g.reachable_from(s);
    let keep: Vec<usize> = (0..g.n()).filter(|&v| reach[v]).collect();
    let (sub, map) = g.induced_subgraph(&keep);
    let ls = map[s].expect("source reaches itself");
    let mut rounds = Vec::new();
    let mut promise_failed = false;

    let phi = match tighten(&sub, params, &mut rounds) {
        Ok(phi) => Some(phi),
        Err(Error::NotRestricted(_)) | Err(Error::IntraSccNegative { .. }) | Err(Error::Invariant(_)) => {
            promise_failed = true;
            None
        }
        Err(e) => return Err(e),
    };

    let mut finish_layers = 0;
    let candidate = phi.map(|phi| {
        // w_phi >= -1 here; shortest paths may still use many negative
        // edges, so the finishing pass gets the full budget.
        let reduced = sub
            .map_weights(|_, e| e.weight + phi[e.tail] - phi[e.head])
            .expect("potentials stay within the overflow guard");
        let (r, used) = few_neg_layers(&reduced, ls, sub.n());
        finish_layers = used;
        let dist: Vec<i64> = r
            .dist
            .iter()
            .enumerate()
            .map(|(v, d)| d.finite().map_or(crate::sssp::INF, |x| x - phi[ls] + phi[v]))
            .collect();
        ShortestPathResult::from_raw(ls, &dist, r.parent)
    });

    let verdict = match candidate.filter(|r| verify_sssp(&sub, ls, r).pass) {
        Some(r) => Verdict::Distances { result: lift_result(g, s, &keep, &sub, r) },
        None => {
            let c = extract_negative_cycle(&sub, ls).map_err(|_| {
                Error::Invariant("distances failed certification but no negative cycle exists".into())
            })?;
            let cycle = lift_cycle(g, &keep, &sub, &c)?;
            Verdict::NegativeCycle { cycle }
        }
    };
    Ok(SolveReport {
        verdict,
        rounds,
        finish_layers,
        promise_failed,
    })
}

/// A potential with `w_phi >= -1` on every edge, built from the top scale
/// down with two restricted calls per scale.
fn tighten(g: &Graph, params: &SolverParams, rounds: &mut Vec<RoundStats>) -> Result<Vec<i64>> {
    let n = g.n();
    let w = g.max_abs_weight().max(1);
    let top = 64 - (w - 1).leading_zeros();
    let mut phi = vec![0i64; n];
    // Invariant: (v_j)_phi >= 1 on every edge; holds at the top scale with
    // phi = 0 because v_top is in {1, 2, 3}.
    for j in (0..top).rev() {
        let div = 1i64 << j;
        phi.iter_mut().for_each(|p| *p *= 2);
        // Doubling gives (v_j)_phi >= -1.
        for (call, shift) in [(1u8, 0i64), (2, -1)] {
            let y: Vec<Edge> = g
                .edges()
                .iter()
                .map(|e| Edge::new(e.tail, e.head, scaled(e.weight, div) + shift + phi[e.tail] - phi[e.head]))
                .collect();
            let delta = restricted_call(n, y, params, j, call, rounds)?;
            phi.iter_mut().zip(&delta).for_each(|(p, d)| *p += d);
        }
    }
    Ok(phi)
}

/// Adds a dummy source with zero edges to every vertex, solves the
/// restricted instance and returns its distances on the original vertices.
fn restricted_call(
    n: usize,
    mut edges: Vec<Edge>,
    params: &SolverParams,
    scale: u32,
    call: u8,
    rounds: &mut Vec<RoundStats>,
) -> Result<Vec<i64>> {
    // Weights far above the cap are dropped by the instance anyway; clamp
    // them first so the overflow guard sees a small magnitude.
    let cap = (n + 1) as i64;
    for e in edges.iter_mut() {
        if e.weight < -1 {
            return Err(Error::NotRestricted(format!("edge {}->{} has weight {}", e.tail, e.head, e.weight)));
        }
        e.weight = e.weight.min(cap + 1);
    }
    edges.extend((0..n).map(|v| Edge::new(n, v, 0)));
    let h = Graph::new(n + 1, edges)?;
    let inst = if params.check_invariants {
        RestrictedInstance::new(&h, n)?
    } else {
        RestrictedInstance::trusted(&h, n)?
    };
    let out = ksssp(&inst, (n + 1) as u64, params)?;
    rounds.push(RoundStats {
        scale,
        call,
        n: n + 1,
        m: inst.graph().m(),
        heavy_removed: inst.heavy_removed(),
        depth: out.depth(),
        max_growth: out.levels.iter().map(|l| l.growth).fold(0.0, f64::max),
        levels: out.levels,
    });
    out.result.dist[..n]
        .iter()
        .map(|d| d.finite().ok_or_else(|| Error::Invariant("dummy source misses a vertex".into())))
        .collect()
}

fn lift_result(g: &Graph, s: usize, keep: &[usize], sub: &Graph, r: ShortestPathResult) -> ShortestPathResult {
    let mut dist = vec![Dist::PosInf; g.n()];
    let mut parent = vec![None; g.n()];
    let ids = sub_edge_ids(g, keep);
    for (i, &v) in keep.iter().enumerate() {
        dist[v] = r.dist[i];
        parent[v] = r.parent[i].map(|e| ids[e]);
    }
    debug_assert_eq!(sub.m(), ids.len());
    ShortestPathResult { source: s, dist, parent }
}

fn lift_cycle(g: &Graph, keep: &[usize], sub: &Graph, c: &Cycle) -> Result<Cycle> {
    let ids = sub_edge_ids(g, keep);
    debug_assert_eq!(sub.m(), ids.len());
    let cycle = Cycle::from_edges(g, c.edges.iter().map(|&e| ids[e]).collect());
    if cycle.weight >= 0 || !cycle.is_valid_in(g) {
        return Err(Error::Invariant("extracted cycle is not negative".into()));
    }
    Ok(cycle)
}

/// Original edge ids in the order `induced_subgraph` emits them.
fn sub_edge_ids(g: &Graph, keep: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.n()];
    keep.iter().for_each(|&v| inside[v] = true);
    keep.iter().flat_map(|&v| g.out_edges(v).iter().copied()).filter(|&id| inside[g.edge(id).head]).collect()
}
