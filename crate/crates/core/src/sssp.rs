//! Dijkstra, Bellman-Ford, SCC decomposition and the two solvers for
//! graphs that are "almost" nonnegative: acyclic across components, or
//! with few negative edges on shortest paths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Dist, Graph};

pub(crate) const INF: i64 = i64::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortestPathResult {
    pub source: usize,
    pub dist: Vec<Dist>,
    /// Edge id of the tree edge entering each vertex.
    pub parent: Vec<Option<usize>>,
}

impl ShortestPathResult {
    pub(crate) fn from_raw(source: usize, dist: &[i64], parent: Vec<Option<usize>>) -> Self {
        let dist = dist
            .iter()
            .map(|&d| if d == INF { Dist::PosInf } else { Dist::Finite(d) })
            .collect();
        ShortestPathResult { source, dist, parent }
    }

    /// Tree path from the source to `v` as edge ids, if `v` is reachable.
    pub fn path_to(&self, g: &Graph, v: usize) -> Option<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut path = Vec::new();
        let mut x = v;
        while let Some(e) = self.parent[x] {
            path.push(e);
            x = g.edge(e).tail;
            if path.len() > g.n() {
                return None;
            }
        }
        path.reverse();
        Some(path)
    }
}

/// A closed walk given both as vertices and as edge ids; `edges[i]` leaves
/// `vertices[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub weight: i64,
}

impl Cycle {
    pub(crate) fn from_edges(g: &Graph, edges: Vec<usize>) -> Cycle {
        let vertices = edges.iter().map(|&e| g.edge(e).tail).collect();
        let weight = g.path_weight(&edges);
        Cycle { vertices, edges, weight }
    }

    /// True when the edges form a closed walk in `g` with the stated weight.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let k = self.edges.len();
        if k == 0 || self.vertices.len() != k {
            return false;
        }
        for i in 0..k {
            let Some(&id) = self.edges.get(i) else { return false };
            if id >= g.m() {
                return false;
            }
            let e = g.edge(id);
            if e.tail != self.vertices[i] || e.head != self.vertices[(i + 1) % k] {
                return false;
            }
        }
        g.path_weight(&self.edges) == self.weight
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BfOutcome {
    Distances(ShortestPathResult),
    NegativeCycle(Cycle),
}

/// Multi-source Dijkstra with a weight function over edge ids. Only vertices
/// with `allow(v)` are settled. Distances are written into `dist`/`parent`,
/// which the caller initialises.
pub(crate) fn dijkstra_core(
    g: &Graph,
    seeds: &[(usize, i64, Option<usize>)],
    weight: impl Fn(usize) -> i64,
    allow: impl Fn(usize) -> bool,
    dist: &mut [i64],
    parent: &mut [Option<usize>],
) {
    let mut heap = BinaryHeap::new();
    for &(v, d, p) in seeds {
        if allow(v) && d < dist[v] {
            dist[v] = d;
            parent[v] = p;
            heap.push(Reverse((d, v)));
        }
    }
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &id in g.out_edges(u) {
            let v = g.edge(id).head;
            if !allow(v) {
                continue;
            }
            let nd = d + weight(id);
            if nd < dist[v] {
                dist[v] = nd;
                parent[v] = Some(id);
                heap.push(Reverse((nd, v)));
            }
        }
    }
}

pub fn dijkstra(g: &Graph, s: usize) -> Result<ShortestPathResult> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    g.require_nonnegative()?;
    let mut dist = vec![INF; g.n()];
    let mut parent = vec![None; g.n()];
    dijkstra_core(g, &[(s, 0, None)], |id| g.edge(id).weight, |_| true, &mut dist, &mut parent);
    Ok(ShortestPathResult::from_raw(s, &dist, parent))
}

/// Looks for a cycle in the parent graph through any vertex of `starts`.
fn parent_cycle(
    g: &Graph,
    parent: &[Option<usize>],
    starts: &[usize],
    mark: &mut [u64],
    stamp: &mut u64,
) -> Option<Vec<usize>> {
    let base = *stamp + 1;
    for &x0 in starts {
        *stamp += 1;
        let st = *stamp;
        let mut x = x0;
        loop {
            if mark[x] == st {
                let mut edges = Vec::new();
                let mut y = x;
                loop {
                    let e = parent[y].expect("cycle vertices have parents");
                    edges.push(e);
                    y = g.edge(e).tail;
                    if y == x {
                        break;
                    }
                }
                edges.reverse();
                return Some(edges);
            }
            if mark[x] >= base {
                // Already walked from an earlier start without closing a cycle.
                break;
            }
            mark[x] = st;
            match parent[x] {
                Some(e) => x = g.edge(e).tail,
                None => break,
            }
        }
    }
    None
}

struct BfRun {
    dist: Vec<i64>,
    parent: Vec<Option<usize>>,
    /// Vertices still improvable after the final round.
    active: Vec<usize>,
    cycle: Option<Cycle>,
}

/// Round-based Bellman-Ford that only rescans vertices improved in the
/// previous round. Stops at the first negative cycle found in the parent
/// graph when `stop_on_cycle` is set.
fn bf_run(g: &Graph, s: usize, stop_on_cycle: bool) -> BfRun {
    let n = g.n();
    let mut dist = vec![INF; n];
    let mut parent = vec![None; n];
    let mut in_next = vec![false; n];
    let mut mark = vec![0u64; n];
    let mut stamp = 0u64;
    dist[s] = 0;
    let mut active = vec![s];
    let mut round = 0;
    // With `stop_on_cycle` the loop may run past n rounds: while a negative
    // cycle is reachable distances keep falling, and an acyclic parent graph
    // would bound them, so a parent cycle must eventually appear.
    while !active.is_empty() && (stop_on_cycle || round < n) {
        round += 1;
        let mut next = Vec::new();
        for &u in &active {
            let du = dist[u];
            for &id in g.out_edges(u) {
                let e = g.edge(id);
                let nd = du + e.weight;
                if nd < dist[e.head] {
                    dist[e.head] = nd;
                    parent[e.head] = Some(id);
                    if !in_next[e.head] {
                        in_next[e.head] = true;
                        next.push(e.head);
                    }
                }
            }
        }
        for &v in &next {
            in_next[v] = false;
        }
        if stop_on_cycle && !next.is_empty() {
            if let Some(edges) = parent_cycle(g, &parent, &next, &mut mark, &mut stamp) {
                let c = Cycle::from_edges(g, edges);
                if c.weight < 0 {
                    return BfRun { dist, parent, active: next, cycle: Some(c) };
                }
            }
        }
        active = next;
    }
    BfRun { dist, parent, active, cycle: None }
}

/// Exact distances, or a verified negative cycle reachable from `s`.
pub fn bellman_ford(g: &Graph, s: usize) -> Result<BfOutcome> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    let run = bf_run(g, s, true);
    if let Some(c) = run.cycle {
        debug_assert!(c.is_valid_in(g) && c.weight < 0);
        return Ok(BfOutcome::NegativeCycle(c));
    }
    Ok(BfOutcome::Distances(ShortestPathResult::from_raw(s, &run.dist, run.parent)))
}

/// Bellman-Ford that never stops early: vertices reachable from a negative
/// cycle get `NegInf` and no parent.
pub fn bellman_ford_neg_inf(g: &Graph, s: usize) -> Result<ShortestPathResult> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    let run = bf_run(g, s, false);
    let mut r = ShortestPathResult::from_raw(s, &run.dist, run.parent);
    if !run.active.is_empty() {
        let mut stack = run.active.clone();
        let mut bad = vec![false; g.n()];
        for &v in &stack {
            bad[v] = true;
        }
        while let Some(u) = stack.pop() {
            for &id in g.out_edges(u) {
                let h = g.edge(id).head;
                if !bad[h] {
                    bad[h] = true;
                    stack.push(h);
                }
            }
        }
        for v in 0..g.n() {
            if bad[v] {
                r.dist[v] = Dist::NegInf;
                r.parent[v] = None;
            }
        }
    }
    Ok(r)
}

/// A negative cycle reachable from `s`.
pub fn extract_negative_cycle(g: &Graph, s: usize) -> Result<Cycle> {
    match bellman_ford(g, s)? {
        BfOutcome::NegativeCycle(c) => Ok(c),
        BfOutcome::Distances(_) => Err(Error::NoNegativeCycle),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Component of each vertex; ids follow a topological order of the
    /// condensation.
    pub comp: Vec<usize>,
    pub components: Vec<Vec<usize>>,
}

impl SccDecomposition {
    pub fn count(&self) -> usize {
        self.components.len()
    }
}

/// Iterative Tarjan.
pub fn scc(g: &Graph) -> SccDecomposition {
    let n = g.n();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next = 0usize;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let out = g.out_edges(v);
            if *pos < out.len() {
                let w = g.edge(out[*pos]).head;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let mut c = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    c.push(w);
                    if w == v {
                        break;
                    }
                }
                c.sort_unstable();
                comps.push(c);
            }
        }
    }
    // Tarjan finishes components in reverse topological order.
    comps.reverse();
    let mut comp = vec![0; n];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp[v] = i;
        }
    }
    SccDecomposition { comp, components: comps }
}

/// Exact distances when every negative edge runs between different SCCs:
/// shift each component by `-W * topo_index`, run Dijkstra, shift back.
pub fn dag_potential_sssp(g: &Graph, s: usize) -> Result<ShortestPathResult> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    let d = scc(g);
    dag_potential_sssp_with(g, s, &d)
}

pub(crate) fn dag_potential_sssp_with(
    g: &Graph,
    s: usize,
    d: &SccDecomposition,
) -> Result<ShortestPathResult> {
    let mut big_w = 0i64;
    for (id, e) in g.edges().iter().enumerate() {
        if e.weight < 0 {
            if d.comp[e.tail] == d.comp[e.head] {
                return Err(Error::IntraSccNegative {
                    edge: id,
                    tail: e.tail,
                    head: e.head,
                    weight: e.weight,
                });
            }
            big_w = big_w.max(-e.weight);
        }
    }
    let phi = |v: usize| -big_w * d.comp[v] as i64;
    let mut dist = vec![INF; g.n()];
    let mut parent = vec![None; g.n()];
    dijkstra_core(
        g,
        &[(s, 0, None)],
        |id| {
            let e = g.edge(id);
            e.weight + phi(e.tail) - phi(e.head)
        },
        |_| true,
        &mut dist,
        &mut parent,
    );
    for v in 0..g.n() {
        if dist[v] != INF {
            dist[v] = dist[v] - phi(s) + phi(v);
        }
    }
    Ok(ShortestPathResult::from_raw(s, &dist, parent))
}

/// Distances when every shortest path from `s` uses at most `k` negative
/// edges. Runs one pruned Dijkstra per layer over the nonnegative edges;
/// layer `t+1` is seeded through negative edges leaving layer `t`. A layer
/// only keeps labels that beat every earlier layer, so the scan stops as soon
/// as a layer improves nothing.
pub fn few_neg_sssp(g: &Graph, s: usize, k: usize) -> Result<ShortestPathResult> {
    if s >= g.n() {
        return Err(Error::VertexOutOfRange(s));
    }
    let (r, _) = few_neg_layers(g, s, k);
    Ok(r)
}

/// As `few_neg_sssp`, also returning how many layers produced improvements.
pub(crate) fn few_neg_layers(g: &Graph, s: usize, k: usize) -> (ShortestPathResult, usize) {
    let (r, used, _) = layered_scan(g, s, k);
    (r, used)
}

/// Runs at most `budget` layers and returns the result only if the scan
/// went quiet, in which case no edge is relaxable and the labels are exact.
pub(crate) fn few_neg_probe(g: &Graph, s: usize, budget: usize) -> Option<(ShortestPathResult, usize)> {
    let (r, used, quiet) = layered_scan(g, s, budget.saturating_sub(1));
    quiet.then_some((r, used))
}

fn layered_scan(g: &Graph, s: usize, k: usize) -> (ShortestPathResult, usize, bool) {
    let n = g.n();
    let neg: Vec<usize> = (0..g.m()).filter(|&id| g.edge(id).weight < 0).collect();
    let mut best = vec![INF; n];
    let mut parent = vec![None; n];
    let mut layer = vec![INF; n];
    let mut touched: Vec<usize> = Vec::new();
    let mut seeds = vec![(s, 0i64, None)];
    let mut used = 0;
    let mut quiet = false;
    for _ in 0..=k {
        // Labels of this layer live in `layer`; they are copied into `best`
        // only where they improve it.
        let mut heap = BinaryHeap::new();
        for &(v, d, p) in &seeds {
            if d < best[v] && d < layer[v] {
                if layer[v] == INF {
                    touched.push(v);
                }
                layer[v] = d;
                best[v] = d;
                parent[v] = p;
                heap.push(Reverse((d, v)));
            }
        }
        if heap.is_empty() {
            quiet = true;
            break;
        }
        used += 1;
        let mut settled = Vec::new();
        while let Some(Reverse((d, u))) = heap.pop() {
            if d > layer[u] {
                continue;
            }
            settled.push(u);
            for &id in g.out_edges(u) {
                let e = g.edge(id);
                if e.weight < 0 {
                    continue;
                }
                let nd = d + e.weight;
                if nd < best[e.head] {
                    if layer[e.head] == INF {
                        touched.push(e.head);
                    }
                    layer[e.head] = nd;
                    best[e.head] = nd;
                    parent[e.head] = Some(id);
                    heap.push(Reverse((nd, e.head)));
                }
            }
        }
        seeds.clear();
        if !neg.is_empty() {
            for &u in &settled {
                for &id in g.out_edges(u) {
                    let e = g.edge(id);
                    if e.weight < 0 {
                        seeds.push((e.head, layer[u] + e.weight, Some(id)));
                    }
                }
            }
        }
        for &v in &touched {
            layer[v] = INF;
        }
        touched.clear();
        if seeds.is_empty() {
            quiet = true;
            break;
        }
    }
    (ShortestPathResult::from_raw(s, &best, parent), used, quiet)
}
