//! Brute-force oracles and the mutation harness shared by the test targets.
#![allow(dead_code)]

use negpath::cover::{path_cover, PathCoverParams, Projection};
use negpath::generate::random_graph;
use negpath::sssp::ShortestPathResult;
use negpath::verify::{verify_clustered, verify_path_covering, verify_projection, verify_sssp, CoverCheck};
use negpath::{Dist, Edge, Graph};

const BIG: i64 = i64::MAX / 4;

/// The structural corpus: seeded digraphs with n <= 12, m <= 30, weights in
/// {0, 1, 2} and d in 0..=6.
pub fn structural_case(seed: u64) -> (Graph, i64) {
    let n = 1 + (seed.wrapping_mul(7919) % 12) as usize;
    let m = (seed.wrapping_mul(104_729) % 31) as usize;
    let d = (seed % 7) as i64;
    (random_graph(n, m, 0, 2, seed, true).unwrap(), d)
}

/// All-pairs distances by Floyd-Warshall; `BIG` means unreachable.
pub fn all_pairs(g: &Graph) -> Vec<Vec<i64>> {
    let n = g.n();
    let mut dist = vec![vec![BIG; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in g.edges() {
        dist[e.tail][e.head] = dist[e.tail][e.head].min(e.weight);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][k] < BIG && dist[k][j] < BIG && dist[i][k] + dist[k][j] < dist[i][j] {
                    dist[i][j] = dist[i][k] + dist[k][j];
                }
            }
        }
    }
    dist
}

/// Largest distance between two mutually reachable vertices, for graphs
/// with nonnegative weights.
pub fn scc_diameter(g: &Graph) -> i64 {
    let dist = all_pairs(g);
    let mut worst = 0;
    for i in 0..g.n() {
        for j in 0..g.n() {
            if dist[i][j] < BIG && dist[j][i] < BIG {
                worst = worst.max(dist[i][j]);
            }
        }
    }
    worst
}

fn homomorphic(p: &Projection, base: &Graph) -> bool {
    p.pi.len() == p.carrier.n()
        && p.rep.len() == base.n()
        && p.pi.iter().all(|&v| v < base.n())
        && p.carrier.edges().iter().all(|e| {
            base.edges().iter().any(|f| f.tail == p.pi[e.tail] && f.head == p.pi[e.head] && f.weight == e.weight)
        })
        && (0..base.n()).all(|v| {
            let present = p.pi.contains(&v);
            match p.rep[v] {
                Some(r) => present && r < p.pi.len() && p.pi[r] == v,
                None => !present,
            }
        })
}

/// Whether the vertex sequence lifts to a carrier walk from the rep of its
/// first vertex.
fn lifts(p: &Projection, path: &[usize]) -> bool {
    let Some(r) = p.rep[path[0]] else { return false };
    let mut frontier = vec![r];
    for &v in &path[1..] {
        let mut next: Vec<usize> = p
            .carrier
            .edges()
            .iter()
            .filter(|e| frontier.contains(&e.tail) && p.pi[e.head] == v)
            .map(|e| e.head)
            .collect();
        next.sort();
        next.dedup();
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    true
}

fn lightest(base: &Graph, a: usize, b: usize) -> Option<i64> {
    base.edges().iter().filter(|e| e.tail == a && e.head == b).map(|e| e.weight).min()
}

fn all_paths_lift(base: &Graph, p: &Projection, d: i64, path: &mut Vec<usize>, w: i64) -> bool {
    if !lifts(p, path) {
        return false;
    }
    let last = *path.last().unwrap();
    for v in 0..base.n() {
        if path.contains(&v) {
            continue;
        }
        if let Some(we) = lightest(base, last, v).filter(|&we| w + we <= d) {
            path.push(v);
            let ok = all_paths_lift(base, p, d, path, w + we);
            path.pop();
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Independent verdict on a cover: homomorphism, rep-start lifts of every
/// simple path of weight at most `d`, and SCC diameter at most `bound`.
pub fn oracle_cover_ok(base: &Graph, p: &Projection, d: i64, bound: i64) -> bool {
    homomorphic(p, base)
        && (0..base.n()).all(|s| all_paths_lift(base, p, d, &mut vec![s], 0))
        && scc_diameter(&p.carrier) <= bound
}

pub fn suite_cover_ok(base: &Graph, p: &Projection, d: i64, bound: i64) -> bool {
    verify_projection(p, base).pass
        && verify_path_covering(base, p, d, CoverCheck::Exhaustive { budget: 10_000_000 }, true).unwrap().pass
        && verify_clustered(&p.carrier, bound).pass
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KillCount {
    pub mutants: u64,
    /// Mutants the oracle still accepts.
    pub equivalent: u64,
    pub killed: u64,
    /// Invalid mutants the suite accepted.
    pub survivors: u64,
    /// Equivalent mutants the suite rejected.
    pub false_alarms: u64,
}

impl KillCount {
    pub fn add(&mut self, oracle_ok: bool, suite_ok: bool) {
        self.mutants += 1;
        match (oracle_ok, suite_ok) {
            (true, true) => self.equivalent += 1,
            (true, false) => {
                self.equivalent += 1;
                self.false_alarms += 1
            }
            (false, false) => self.killed += 1,
            (false, true) => self.survivors += 1,
        }
    }

    pub fn merge(&mut self, o: KillCount) {
        self.mutants += o.mutants;
        self.equivalent += o.equivalent;
        self.killed += o.killed;
        self.survivors += o.survivors;
        self.false_alarms += o.false_alarms;
    }

    pub fn perfect(&self) -> bool {
        self.survivors == 0 && self.false_alarms == 0
    }
}

fn with_edges(p: &Projection, edges: Vec<Edge>) -> Projection {
    Projection { carrier: Graph::new(p.carrier.n(), edges).unwrap(), ..p.clone() }
}

/// Dropped edges, re-weighted edges and re-pointed reps of one cover.
pub fn mutate_cover(base: &Graph, p: &Projection, d: i64, bound: i64) -> [KillCount; 3] {
    let mut out = [KillCount::default(); 3];
    let edges = p.carrier.edges().to_vec();
    for i in 0..edges.len() {
        let mut es = edges.clone();
        es.remove(i);
        let mut q = with_edges(p, es);
        q.origin.remove(i);
        out[0].add(oracle_cover_ok(base, &q, d, bound), suite_cover_ok(base, &q, d, bound));
        for delta in [1, -1] {
            let mut es = edges.clone();
            es[i].weight += delta;
            if es[i].weight < 0 {
                continue;
            }
            let q = with_edges(p, es);
            out[1].add(oracle_cover_ok(base, &q, d, bound), suite_cover_ok(base, &q, d, bound));
        }
    }
    for v in 0..base.n() {
        for x in 0..p.carrier.n() {
            if p.rep[v] == Some(x) {
                continue;
            }
            let mut q = p.clone();
            q.rep[v] = Some(x);
            out[2].add(oracle_cover_ok(base, &q, d, bound), suite_cover_ok(base, &q, d, bound));
        }
    }
    out
}

/// Cover mutants over `seeds` of the structural corpus at slack `lambda`.
pub fn cover_mutation_run(seeds: std::ops::Range<u64>, lambda: u64) -> [KillCount; 3] {
    let mut total = [KillCount::default(); 3];
    for seed in seeds {
        let (g, d) = structural_case(seed);
        let (p, st) = path_cover(&g, &PathCoverParams::practical(d, lambda)).unwrap();
        let bound = st.realized_bound(d);
        assert!(oracle_cover_ok(&g, &p, d, bound) && suite_cover_ok(&g, &p, d, bound), "seed {seed}");
        for (t, k) in total.iter_mut().zip(mutate_cover(&g, &p, d, bound)) {
            t.merge(k);
        }
    }
    total
}

/// Exact distances by plain relaxation, or `None` on a reachable negative
/// cycle.
pub fn oracle_distances(g: &Graph, s: usize) -> Option<Vec<Dist>> {
    let n = g.n();
    let mut dist = vec![BIG; n];
    dist[s] = 0;
    for round in 0..=n {
        let mut changed = false;
        for e in g.edges() {
            if dist[e.tail] < BIG && dist[e.tail] + e.weight < dist[e.head] {
                dist[e.head] = dist[e.tail] + e.weight;
                changed = true;
            }
        }
        if !changed {
            return Some(dist.iter().map(|&x| if x == BIG { Dist::PosInf } else { Dist::Finite(x) }).collect());
        }
        if round == n {
            return None;
        }
    }
    unreachable!()
}

/// Every finite distance moved by one in each direction.
pub fn mutate_distances(g: &Graph, s: usize, r: &ShortestPathResult) -> KillCount {
    let mut k = KillCount::default();
    let truth = oracle_distances(g, s).expect("no negative cycle");
    for v in 0..g.n() {
        let Dist::Finite(x) = r.dist[v] else { continue };
        for delta in [1, -1] {
            let mut q = r.clone();
            q.dist[v] = Dist::Finite(x + delta);
            k.add(q.dist == truth, verify_sssp(g, s, &q).pass);
        }
    }
    k
}
