//! Restricted SSSP by recursion on path covers: cover the truncated graph,
//! recurse on the SCC-restricted carrier, then finish on the layered product
//! with a DAG-potential Dijkstra.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::cover::{path_cover, PathCoverParams, Preset, Projection, NO_ORIGIN, PRACTICAL_LAMBDA};
use crate::error::{Error, Result};
use crate::graph::{log2_ceil, Dist, Edge, Graph, Potential};
use crate::sssp::{dag_potential_sssp, few_neg_layers, few_neg_probe, scc, ShortestPathResult, INF};
use crate::verify::{verify_restricted, VerifyReport};

/// A validated restricted instance. Edges heavier than `n` are dropped on
/// construction; `kept` maps instance edges back to the input's edge ids.
#[derive(Clone, Debug)]
pub struct RestrictedInstance {
    graph: Graph,
    source: usize,
    kept: Vec<usize>,
    heavy_removed: usize,
    verdict: Option<VerifyReport>,
}

impl RestrictedInstance {
    /// Drops heavy edges and checks every restricted-graph condition,
    /// including the cycle-mean bound.
    pub fn new(g: &Graph, s: usize) -> Result<RestrictedInstance> {
        let mut inst = RestrictedInstance::trusted(g, s)?;
        let report = verify_restricted(&inst.graph, s);
        if !report.pass {
            let why = serde_json::to_string(&report.counterexample).unwrap_or_default();
            return Err(Error::NotRestricted(why));
        }
        inst.verdict = Some(report);
        Ok(inst)
    }

    /// Drops heavy edges but skips the cycle-mean check; for callers that
    /// guarantee validity by construction.
    pub fn trusted(g: &Graph, s: usize) -> Result<RestrictedInstance> {
        if s >= g.n() {
            return Err(Error::VertexOutOfRange(s));
        }
        let cap = g.n() as i64;
        let kept: Vec<usize> = (0..g.m()).filter(|&id| g.edge(id).weight <= cap).collect();
        let heavy_removed = g.m() - kept.len();
        let graph = if heavy_removed == 0 {
            g.clone()
        } else {
            Graph::new(g.n(), kept.iter().map(|&id| g.edge(id)).collect())?
        };
        Ok(RestrictedInstance { graph, source: s, kept, heavy_removed, verdict: None })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn heavy_removed(&self) -> usize {
        self.heavy_removed
    }

    pub fn verdict(&self) -> Option<&VerifyReport> {
        self.verdict.as_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// Materialise the layered product as a graph.
    Explicit,
    /// Generate product edges on the fly inside Dijkstra.
    Implicit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverParams {
    pub preset: Preset,
    pub lambda: Option<u64>,
    pub k0: Option<u64>,
    /// Double the slack when the realized cluster bound exceeds `k/2`.
    pub adaptive: bool,
    pub max_retries: u32,
    /// Validate every recursive instance and log the checks in the stats.
    pub check_invariants: bool,
    pub product: ProductMode,
    /// Before building a cover, run up to `k0` layers of the base case and
    /// keep the result if the scan goes quiet.
    pub probe: bool,
}

pub const PRACTICAL_K0: u64 = 32;

impl SolverParams {
    pub fn practical() -> SolverParams {
        SolverParams {
            preset: Preset::Practical,
            lambda: None,
            k0: None,
            adaptive: true,
            max_retries: 6,
            check_invariants: false,
            product: ProductMode::Implicit,
            probe: true,
        }
    }

    pub fn paper() -> SolverParams {
        SolverParams { preset: Preset::Paper, adaptive: false, probe: false, ..SolverParams::practical() }
    }

    pub fn lambda_for(&self, n: usize) -> u64 {
        self.lambda.unwrap_or(match self.preset {
            Preset::Paper => 10_000 * (log2_ceil(n.max(2)) as u64).pow(6),
            Preset::Practical => PRACTICAL_LAMBDA,
        })
    }

    pub fn k0_for(&self, n: usize) -> u64 {
        self.k0.unwrap_or(match self.preset {
            Preset::Paper => 2 * self.lambda_for(n),
            Preset::Practical => PRACTICAL_K0,
        })
    }
}

/// Radius of the path cover for promise `k`.
pub fn cover_radius(k: u64, lambda: u64) -> u64 {
    (k / (2 * lambda)).max(1)
}

/// Layer count: at least `2*lambda`, and enough that `x * d_cov >= k`.
pub fn copy_count(k: u64, lambda: u64, d_cov: u64) -> u64 {
    (2 * lambda).max(k.div_ceil(d_cov))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LevelStats {
    pub depth: u32,
    pub n: usize,
    pub m: usize,
    pub k: u64,
    pub negative_edges: usize,
    pub base_case: bool,
    /// Layers the base case actually used.
    pub base_layers: usize,
    /// The base case was reached through a quiet probe.
    pub probed: bool,
    pub lambda: u64,
    pub d_cov: u64,
    pub copies: u64,
    pub retries: u32,
    pub carrier_vertices: usize,
    pub carrier_edges: usize,
    /// Carrier edges over instance edges.
    pub growth: f64,
    pub sum_proj_deg: u64,
    pub realized_bound: i64,
    pub case1: u64,
    pub case2: u64,
    pub scc_edges: usize,
    pub product_edges: u64,
    /// `Some(true)` when the recursive instance passed validation.
    pub restricted_ok: Option<bool>,
    pub intra_scc_checked: usize,
}

#[derive(Clone, Debug)]
pub struct KssspOutput {
    pub result: ShortestPathResult,
    pub levels: Vec<LevelStats>,
}

impl KssspOutput {
    pub fn depth(&self) -> u32 {
        self.levels.iter().map(|l| l.depth).max().unwrap_or(0)
    }
}

/// Carrier edges whose base edge is negative get the base weight back.
pub fn restore_negative_weights(cover: &Projection, h: &Graph) -> Result<Projection> {
    let mut out = cover.clone();
    if out.origin.contains(&NO_ORIGIN) {
        out.resolve_origins(&h.truncate_nonneg());
    }
    let mut changed = false;
    let mut edges = Vec::with_capacity(out.carrier.m());
    for (i, e) in out.carrier.edges().iter().enumerate() {
        let o = out.origin[i];
        if o == NO_ORIGIN || o >= h.m() {
            return Err(Error::Invariant(format!("carrier edge {i} has no base edge")));
        }
        let w = h.edge(o).weight;
        if w < 0 {
            changed = true;
            edges.push(Edge::new(e.tail, e.head, w));
        } else {
            edges.push(*e);
        }
    }
    if changed {
        out.carrier = Graph::new(out.carrier.n(), edges)?;
    }
    Ok(out)
}

/// The layered product `G''` materialised.
#[derive(Clone, Debug)]
pub struct LayeredProduct {
    pub graph: Graph,
    /// `(layer, carrier vertex)` per product vertex except the source.
    pub copy: Vec<(usize, usize)>,
    pub source: usize,
    /// Base edge of `h` behind each product edge; `None` for source edges.
    pub base_edge: Vec<Option<usize>>,
}

/// `x` copies of the carrier, edges from each copy of a tail in layer `i`
/// to the representative of the head in layer `i+1`, and a source with
/// zero edges to every copy of every preimage of `s`.
pub fn build_layered_product(cover: &Projection, h: &Graph, s: usize, x: usize) -> Result<LayeredProduct> {
    if x == 0 {
        return Err(Error::Param("copy count must be positive".into()));
    }
    let c = &cover.carrier;
    let nc = c.n();
    let total = nc
        .checked_mul(x)
        .and_then(|t| t.checked_add(1))
        .ok_or_else(|| Error::Param("layered product too large".into()))?;
    let source = total - 1;
    let mut edges = Vec::new();
    let mut base_edge = Vec::new();
    for i in 0..x {
        for (id, e) in c.edges().iter().enumerate() {
            edges.push(Edge::new(i * nc + e.tail, i * nc + e.head, e.weight));
            base_edge.push(Some(cover.origin[id]).filter(|&o| o != NO_ORIGIN));
        }
        if i + 1 < x {
            for u in 0..nc {
                for &id in h.out_edges(cover.pi[u]) {
                    let e = h.edge(id);
                    if let Some(r) = cover.rep[e.head] {
                        edges.push(Edge::new(i * nc + u, (i + 1) * nc + r, e.weight));
                        base_edge.push(Some(id));
                    }
                }
            }
        }
    }
    for i in 0..x {
        for u in (0..nc).filter(|&u| cover.pi[u] == s) {
            edges.push(Edge::new(source, i * nc + u, 0));
            base_edge.push(None);
        }
    }
    let copy = (0..total - 1).map(|v| (v / nc, v % nc)).collect();
    Ok(LayeredProduct { graph: Graph::new(total, edges)?, copy, source, base_edge })
}

/// Solves a restricted instance under the promise that shortest paths from
/// the source use at most `k` negative edges.
pub fn ksssp(inst: &RestrictedInstance, k: u64, params: &SolverParams) -> Result<KssspOutput> {
    let mut levels = Vec::new();
    let mut r = solve_level(&inst.graph, inst.source, k, params, 0, &mut levels)?;
    for p in r.parent.iter_mut().flatten() {
        *p = inst.kept[*p];
    }
    Ok(KssspOutput { result: r, levels })
}

fn base_case(h: &Graph, s: usize, k: u64, stats: &mut LevelStats) -> ShortestPathResult {
    stats.base_case = true;
    let (r, used) = few_neg_layers(h, s, k as usize);
    stats.base_layers = used;
    r
}

fn solve_level(
    h: &Graph,
    s: usize,
    k: u64,
    params: &SolverParams,
    depth: u32,
    levels: &mut Vec<LevelStats>,
) -> Result<ShortestPathResult> {
    let n = h.n();
    let neg = h.negative_edge_count();
    let k = k.min(neg as u64);
    let mut stats = LevelStats { depth, n, m: h.m(), k, negative_edges: neg, ..Default::default() };
    let k0 = params.k0_for(n);
    if k <= k0 {
        let r = base_case(h, s, k, &mut stats);
        levels.push(stats);
        return Ok(r);
    }
    if params.probe {
        if let Some((r, used)) = few_neg_probe(h, s, k0 as usize) {
            stats.base_case = true;
            stats.probed = true;
            stats.base_layers = used;
            levels.push(stats);
            return Ok(r);
        }
    }

    // Path cover of the truncated graph, with the slack doubled until the
    // realized cluster diameter fits in k/2.
    let h0 = h.truncate_nonneg();
    let mut lambda = params.lambda_for(n);
    let found = loop {
        if 2 * lambda > k {
            break None;
        }
        let d_cov = cover_radius(k, lambda);
        let cp = PathCoverParams { d: d_cov as i64, lambda, preset: params.preset };
        let (cover, cs) = path_cover(&h0, &cp)?;
        let bound = cs.realized_bound(d_cov as i64);
        if 2 * bound <= k as i64 {
            stats.carrier_vertices = cs.carrier_vertices;
            stats.carrier_edges = cs.carrier_edges;
            stats.sum_proj_deg = cs.sum_proj_deg;
            stats.case1 = cs.case1;
            stats.case2 = cs.case2;
            stats.realized_bound = bound;
            break Some((cover, d_cov));
        }
        if !params.adaptive {
            return Err(Error::Budget(format!(
                "realized cluster bound {bound} exceeds k/2 = {} at slack {lambda}",
                k / 2
            )));
        }
        if stats.retries >= params.max_retries {
            break None;
        }
        stats.retries += 1;
        lambda *= 2;
    };
    stats.lambda = lambda;
    let Some((cover, d_cov)) = found else {
        // Slack exhausted: the layered base case is exact for any k.
        let r = base_case(h, s, k, &mut stats);
        levels.push(stats);
        return Ok(r);
    };
    stats.d_cov = d_cov;
    stats.growth = if h.m() == 0 { 1.0 } else { cover.carrier.m() as f64 / h.m() as f64 };

    let cover = restore_negative_weights(&cover, h)?;
    let c = &cover.carrier;
    let nc = c.n();
    let sccs = scc(c);

    // Recursive instance: intra-SCC carrier edges plus a super-source.
    let mut sub_edges: Vec<Edge> =
        c.edges().iter().copied().filter(|e| sccs.comp[e.tail] == sccs.comp[e.head]).collect();
    stats.scc_edges = sub_edges.len();
    sub_edges.extend((0..nc).map(|v| Edge::new(nc, v, 0)));
    let sub = Graph::new(nc + 1, sub_edges)?;
    if params.check_invariants {
        let ok = verify_restricted(&sub, nc).pass;
        stats.restricted_ok = Some(ok);
        if !ok {
            return Err(Error::Invariant(format!("recursive instance at depth {depth} is not restricted")));
        }
    }
    let slot = levels.len();
    levels.push(stats);
    let sub_r = solve_level(&sub, nc, k / 2, params, depth + 1, levels)?;
    let phi: Vec<i64> = (0..nc)
        .map(|v| sub_r.dist[v].finite().ok_or_else(|| Error::Invariant("super-source misses a vertex".into())))
        .collect::<Result<_>>()?;

    // Intra-SCC product edges are copies of intra-SCC carrier edges.
    let mut checked = 0;
    for (id, e) in c.edges().iter().enumerate() {
        if sccs.comp[e.tail] == sccs.comp[e.head] {
            checked += 1;
            if e.weight + phi[e.tail] - phi[e.head] < 0 {
                return Err(Error::IntraSccNegative { edge: id, tail: e.tail, head: e.head, weight: e.weight });
            }
        }
    }
    levels[slot].intra_scc_checked = checked;

    let x = copy_count(k, lambda, d_cov) as usize;
    levels[slot].copies = x as u64;
    let (best, parent, product_edges) = match params.product {
        ProductMode::Implicit => implicit_product(h, s, &cover, &sccs.comp, sccs.count(), &phi, x)?,
        ProductMode::Explicit => explicit_product(h, s, &cover, &phi, x)?,
    };
    levels[slot].product_edges = product_edges;
    Ok(ShortestPathResult::from_raw(s, &best, parent))
}

type Finish = (Vec<i64>, Vec<Option<usize>>, u64);

/// Per base vertex, the minimum over copies, and the base edge into the
/// copy achieving it (lowest layer, then lowest carrier index on ties).
fn collapse(
    h: &Graph,
    cover: &Projection,
    x: usize,
    dist_of: impl Fn(usize, usize) -> Option<i64>,
    edge_of: impl Fn(usize, usize) -> Option<usize>,
) -> (Vec<i64>, Vec<Option<usize>>) {
    let nc = cover.carrier.n();
    let mut best = vec![INF; h.n()];
    let mut parent = vec![None; h.n()];
    for i in 0..x {
        for u in 0..nc {
            if let Some(d) = dist_of(i, u) {
                let b = cover.pi[u];
                if d < best[b] {
                    best[b] = d;
                    parent[b] = edge_of(i, u);
                }
            }
        }
    }
    (best, parent)
}

fn explicit_product(h: &Graph, s: usize, cover: &Projection, phi: &[i64], x: usize) -> Result<Finish> {
    let lp = build_layered_product(cover, h, s, x)?;
    let mut pot = vec![0i64; lp.graph.n()];
    for (v, &(_, u)) in lp.copy.iter().enumerate() {
        pot[v] = phi[u];
    }
    let adjusted = lp.graph.apply_potential(&Potential(pot.clone()))?;
    let r = dag_potential_sssp(&adjusted, lp.source)?;
    let nc = cover.carrier.n();
    let (best, parent) = collapse(
        h,
        cover,
        x,
        |i, u| r.dist[i * nc + u].finite().map(|d| d + pot[i * nc + u]),
        |i, u| r.parent[i * nc + u].and_then(|e| lp.base_edge[e]),
    );
    Ok((best, parent, lp.graph.m() as u64))
}

/// The same computation without building the product: product vertex
/// `i*nc + u` is copy `i` of carrier vertex `u`, and the source is `x*nc`.
fn implicit_product(
    h: &Graph,
    s: usize,
    cover: &Projection,
    comp: &[usize],
    comps: usize,
    phi: &[i64],
    x: usize,
) -> Result<Finish> {
    let c = &cover.carrier;
    let nc = c.n();
    let total = nc.checked_mul(x).ok_or_else(|| Error::Param("layered product too large".into()))?;
    // Topological index of each product SCC: the source first, then layer
    // by layer in carrier SCC order.
    let idx = |i: usize, u: usize| 1 + (i * comps + comp[u]) as i64;

    // Largest negative reduced weight on any cross-SCC product edge.
    let mut big_w = 0i64;
    for e in c.edges() {
        if comp[e.tail] != comp[e.head] {
            big_w = big_w.max(-(e.weight + phi[e.tail] - phi[e.head]));
        }
    }
    let mut product_edges = (c.m() * x) as u64;
    if x > 1 {
        for u in 0..nc {
            for &id in h.out_edges(cover.pi[u]) {
                let e = h.edge(id);
                if let Some(r) = cover.rep[e.head] {
                    big_w = big_w.max(-(e.weight + phi[u] - phi[r]));
                    product_edges += (x - 1) as u64;
                }
            }
        }
    }
    let starts: Vec<usize> = (0..nc).filter(|&u| cover.pi[u] == s).collect();
    for &u in &starts {
        big_w = big_w.max(phi[u]);
    }
    product_edges += (starts.len() * x) as u64;

    // Dijkstra on keys reduced by both potentials; every key step is >= 0.
    let mut key = vec![INF; total];
    let mut via = vec![usize::MAX; total];
    let mut heap = BinaryHeap::new();
    for i in 0..x {
        for &u in &starts {
            let k = -phi[u] + big_w * idx(i, u);
            let v = i * nc + u;
            if k < key[v] {
                key[v] = k;
                heap.push(Reverse((k, v)));
            }
        }
    }
    while let Some(Reverse((kv, v))) = heap.pop() {
        if kv > key[v] {
            continue;
        }
        let (i, u) = (v / nc, v % nc);
        let base = kv - big_w * idx(i, u);
        for &id in c.out_edges(u) {
            let e = c.edge(id);
            let to = i * nc + e.head;
            let nk = base + e.weight + phi[u] - phi[e.head] + big_w * idx(i, e.head);
            if nk < key[to] {
                key[to] = nk;
                via[to] = cover.origin[id];
                heap.push(Reverse((nk, to)));
            }
        }
        if i + 1 < x {
            for &id in h.out_edges(cover.pi[u]) {
                let e = h.edge(id);
                let Some(r) = cover.rep[e.head] else { continue };
                let to = (i + 1) * nc + r;
                let nk = base + e.weight + phi[u] - phi[r] + big_w * idx(i + 1, r);
                if nk < key[to] {
                    key[to] = nk;
                    via[to] = id;
                    heap.push(Reverse((nk, to)));
                }
            }
        }
    }
    let (best, parent) = collapse(
        h,
        cover,
        x,
        |i, u| {
            let v = i * nc + u;
            (key[v] != INF).then(|| key[v] - big_w * idx(i, u) + phi[u])
        },
        |i, u| Some(via[i * nc + u]).filter(|&e| e != usize::MAX),
    );
    Ok((best, parent, product_edges))
}

/// Distances as plain integers; every vertex of a restricted instance is
/// reachable.
pub fn finite_distances(r: &ShortestPathResult) -> Option<Vec<i64>> {
    r.dist.iter().map(|d| if let Dist::Finite(x) = d { Some(*x) } else { None }).collect()
}
