//! Karp's minimum mean cycle, exact over the rationals.

use num_rational::Ratio;

use crate::graph::Graph;
use crate::sssp::{scc, Cycle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeanCycle {
    pub value: Ratio<i64>,
    pub cycle: Cycle,
}

const NONE: i128 = i128::MAX;

/// Minimum of `w(C)/|C|` over all cycles, with a witness; `None` when the
/// graph is acyclic. Each SCC is handled on its own.
pub fn karp_min_mean_cycle(g: &Graph) -> Option<MeanCycle> {
    let d = scc(g);
    let mut best: Option<(Ratio<i128>, Vec<usize>)> = None;
    let mut local = vec![usize::MAX; g.n()];
    for comp in &d.components {
        for (i, &v) in comp.iter().enumerate() {
            local[v] = i;
        }
        let cid = d.comp[comp[0]];
        // Edges of the component, as (local tail, local head, weight, id).
        let mut edges = Vec::new();
        for &v in comp {
            for &id in g.out_edges(v) {
                let e = g.edge(id);
                if d.comp[e.head] == cid {
                    edges.push((local[v], local[e.head], e.weight as i128, id));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let mu = component_mean(comp.len(), &edges);
        if best.as_ref().is_none_or(|(b, _)| mu < *b) {
            let witness = witness_cycle(comp.len(), &edges, mu);
            best = Some((mu, witness));
        }
    }
    best.map(|(mu, edges)| {
        let value = Ratio::new(*mu.numer() as i64, *mu.denom() as i64);
        MeanCycle { value, cycle: Cycle::from_edges(g, edges) }
    })
}

/// Karp's formula with walks starting anywhere (all `D_0 = 0`), in two
/// passes so memory stays linear: first `D_n`, then the inner maximum.
fn component_mean(n: usize, edges: &[(usize, usize, i128, usize)]) -> Ratio<i128> {
    let step = |prev: &[i128], next: &mut [i128]| {
        next.iter_mut().for_each(|x| *x = NONE);
        for &(u, v, w, _) in edges {
            if prev[u] != NONE && prev[u] + w < next[v] {
                next[v] = prev[u] + w;
            }
        }
    };
    let mut cur = vec![0i128; n];
    let mut nxt = vec![NONE; n];
    for _ in 0..n {
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }
    let dn = cur.clone();
    // max over k of (D_n - D_k)/(n - k), per vertex.
    let mut inner: Vec<Option<Ratio<i128>>> = vec![None; n];
    let mut cur = vec![0i128; n];
    for k in 0..n {
        for v in 0..n {
            if dn[v] != NONE && cur[v] != NONE {
                let r = Ratio::new(dn[v] - cur[v], (n - k) as i128);
                if inner[v].is_none_or(|x| r > x) {
                    inner[v] = Some(r);
                }
            }
        }
        step(&cur, &mut nxt);
        std::mem::swap(&mut cur, &mut nxt);
    }
    inner
        .into_iter()
        .flatten()
        .min()
        .expect("a strongly connected component with an edge has a cycle")
}

/// A cycle of mean exactly `mu`: under `q*w - p` there is no negative cycle
/// and every zero cycle consists of tight edges after Bellman-Ford.
fn witness_cycle(n: usize, edges: &[(usize, usize, i128, usize)], mu: Ratio<i128>) -> Vec<usize> {
    let (p, q) = (*mu.numer(), *mu.denom());
    let wt = |w: i128| q * w - p;
    let mut dist = vec![0i128; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w, _) in edges {
            if dist[u] + wt(w) < dist[v] {
                dist[v] = dist[u] + wt(w);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    // Tight-edge subgraph: out-lists by local vertex.
    let mut tight: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &(u, v, w, id) in edges {
        if dist[u] + wt(w) == dist[v] {
            tight[u].push((v, id));
        }
    }
    // Iterative DFS for a cycle in the tight subgraph.
    let mut color = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    let mut via_edge = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            if *pos < tight[u].len() {
                let (v, id) = tight[u][*pos];
                *pos += 1;
                if color[v] == 1 {
                    let mut cyc = vec![id];
                    let mut x = u;
                    while x != v {
                        cyc.push(via_edge[x]);
                        x = via[x];
                    }
                    cyc.reverse();
                    return cyc;
                }
                if color[v] == 0 {
                    color[v] = 1;
                    via[v] = u;
                    via_edge[v] = id;
                    stack.push((v, 0));
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    unreachable!("the minimum mean cycle is tight under the shifted weights")
}
