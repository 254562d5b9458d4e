//! Independent validators. Each returns a report with a concrete
//! counterexample on failure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::Projection;
use crate::error::{Error, Result};
use crate::graph::{Dist, Graph};
use crate::karp::karp_min_mean_cycle;
use crate::sssp::{dijkstra_core, scc, ShortestPathResult, INF};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A carrier edge whose image is not a base edge of the same weight.
    BadEdge { edge: usize, tail: usize, head: usize, weight: i64 },
    /// A carrier vertex mapping outside the base graph.
    BadImage { vertex: usize, image: usize },
    /// A present base vertex without a valid representative.
    BadRep { base_vertex: usize },
    /// Two vertices of one SCC farther apart than allowed.
    Diameter { from: usize, to: usize, dist: Option<i64>, bound: i64 },
    /// A base path of weight at most `d` without a lift.
    Uncovered { path: Vec<usize> },
    WeightOutOfRange { edge: usize, weight: i64 },
    MissingSourceEdge { vertex: usize },
    LowMeanCycle { cycle: Vec<usize>, mean: String },
    SourceDistance { dist: Dist },
    Relaxable { edge: usize },
    ParentNotTight { vertex: usize, edge: Option<usize> },
    Unrooted { vertex: usize },
    Size { vertex: usize, expected: usize, found: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measured {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_scc_diameter: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_mean_cycle: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths_checked: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub measured: Measured,
}

impl VerifyReport {
    fn ok(measured: Measured) -> Self {
        VerifyReport { pass: true, counterexample: None, measured }
    }

    fn fail(c: Counterexample, measured: Measured) -> Self {
        VerifyReport { pass: false, counterexample: Some(c), measured }
    }
}

/// Homomorphism and representative checks.
pub fn verify_projection(p: &Projection, base: &Graph) -> VerifyReport {
    let m = Measured::default();
    let c = &p.carrier;
    if p.pi.len() != c.n() {
        return VerifyReport::fail(Counterexample::Size { vertex: 0, expected: c.n(), found: p.pi.len() }, m);
    }
    if p.base_n != base.n() || p.rep.len() != base.n() {
        return VerifyReport::fail(
            Counterexample::Size { vertex: 0, expected: base.n(), found: p.rep.len() },
            m,
        );
    }
    for (x, &v) in p.pi.iter().enumerate() {
        if v >= base.n() {
            return VerifyReport::fail(Counterexample::BadImage { vertex: x, image: v }, m);
        }
    }
    for (id, e) in c.edges().iter().enumerate() {
        let (a, b) = (p.pi[e.tail], p.pi[e.head]);
        let ok = base.out_edges(a).iter().any(|&f| {
            let f = base.edge(f);
            f.head == b && f.weight == e.weight
        });
        if !ok {
            return VerifyReport::fail(
                Counterexample::BadEdge { edge: id, tail: e.tail, head: e.head, weight: e.weight },
                m,
            );
        }
    }
    let mut present = vec![false; base.n()];
    p.pi.iter().for_each(|&v| present[v] = true);
    for v in 0..base.n() {
        let good = match p.rep[v] {
            Some(r) => present[v] && r < c.n() && p.pi[r] == v,
            None => !present[v],
        };
        if !good {
            return VerifyReport::fail(Counterexample::BadRep { base_vertex: v }, m);
        }
    }
    VerifyReport::ok(m)
}

/// Largest intra-SCC distance, with the pair realising it. Distances are
/// measured inside each SCC's induced subgraph; weights must be nonnegative
/// there.
pub fn max_scc_diameter(g: &Graph) -> (i64, Option<(usize, usize)>) {
    let d = scc(g);
    let mut best = (0i64, None);
    let mut dist = vec![INF; g.n()];
    let mut parent = vec![None; g.n()];
    for comp in d.components.iter().filter(|c| c.len() > 1) {
        let cid = d.comp[comp[0]];
        for &src in comp {
            for &v in comp {
                dist[v] = INF;
            }
            dijkstra_core(
                g,
                &[(src, 0, None)],
                |id| g.edge(id).weight,
                |v| d.comp[v] == cid,
                &mut dist,
                &mut parent,
            );
            for &v in comp {
                if dist[v] > best.0 {
                    best = (dist[v], Some((src, v)));
                }
            }
        }
    }
    best
}

/// Every SCC has diameter at most `bound`.
pub fn verify_clustered(g: &Graph, bound: i64) -> VerifyReport {
    let (diam, pair) = max_scc_diameter(g);
    let m = Measured { max_scc_diameter: Some(diam), ..Default::default() };
    if diam > bound {
        let (from, to) = pair.unwrap();
        return VerifyReport::fail(Counterexample::Diameter { from, to, dist: Some(diam), bound }, m);
    }
    VerifyReport::ok(m)
}

/// Weak variant: distances between the images of each carrier SCC,
/// measured in the base graph.
pub fn verify_clustered_weak(p: &Projection, base: &Graph, bound: i64) -> VerifyReport {
    let d = scc(&p.carrier);
    let mut worst = 0i64;
    let mut dist = vec![INF; base.n()];
    let mut parent = vec![None; base.n()];
    for comp in d.components.iter().filter(|c| c.len() > 1) {
        let mut images: Vec<usize> = comp.iter().map(|&x| p.pi[x]).collect();
        images.sort_unstable();
        images.dedup();
        for &a in &images {
            dist.iter_mut().for_each(|x| *x = INF);
            dijkstra_core(base, &[(a, 0, None)], |id| base.edge(id).weight, |_| true, &mut dist, &mut parent);
            for &b in &images {
                let dv = (dist[b] != INF).then_some(dist[b]);
                if dv.is_none_or(|x| x > bound) {
                    let m = Measured { max_scc_diameter: dv, ..Default::default() };
                    return VerifyReport::fail(Counterexample::Diameter { from: a, to: b, dist: dv, bound }, m);
                }
                worst = worst.max(dist[b]);
            }
        }
    }
    VerifyReport::ok(Measured { max_scc_diameter: Some(worst), ..Default::default() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverCheck {
    /// All simple paths of weight at most `d`, up to a path budget.
    Exhaustive { budget: u64 },
    /// Random bounded walks plus every single edge.
    Sampled { walks: u64, seed: u64 },
}

pub const DEFAULT_PATH_BUDGET: u64 = 2_000_000;

/// Lift-existence check for simple base paths of weight at most `d`.
pub fn verify_path_covering(
    base: &Graph,
    p: &Projection,
    d: i64,
    mode: CoverCheck,
    require_rep_start: bool,
) -> Result<VerifyReport> {
    let mut lifter = Lifter::new(base, p);
    match mode {
        CoverCheck::Exhaustive { budget } => lifter.exhaustive(d, budget, require_rep_start),
        CoverCheck::Sampled { walks, seed } => Ok(lifter.sampled(d, walks, seed, require_rep_start)),
    }
}

struct Lifter<'a> {
    p: &'a Projection,
    /// Base successors without self-loops; parallel edges collapsed to the
    /// lightest.
    succ: Vec<Vec<(usize, i64)>>,
    copies: Vec<Vec<usize>>,
    checked: u64,
}

impl<'a> Lifter<'a> {
    fn new(base: &Graph, p: &'a Projection) -> Self {
        let mut succ = vec![Vec::new(); base.n()];
        for (v, out) in succ.iter_mut().enumerate() {
            let mut s: Vec<(usize, i64)> = base
                .out_edges(v)
                .iter()
                .map(|&id| base.edge(id))
                .filter(|e| e.head != v)
                .map(|e| (e.head, e.weight))
                .collect();
            s.sort_unstable();
            s.dedup_by_key(|x| x.0);
            *out = s;
        }
        let mut copies = vec![Vec::new(); base.n()];
        for (x, &v) in p.pi.iter().enumerate() {
            if v < base.n() {
                copies[v].push(x);
            }
        }
        Lifter { p, succ, copies, checked: 0 }
    }

    fn start(&self, v: usize, rep_start: bool) -> Vec<usize> {
        if rep_start {
            self.p.rep[v].into_iter().filter(|&r| r < self.p.pi.len() && self.p.pi[r] == v).collect()
        } else {
            self.copies[v].clone()
        }
    }

    fn advance(&self, from: &[usize], w: usize) -> Vec<usize> {
        let mut next: Vec<usize> = Vec::new();
        for &x in from {
            for &id in self.p.carrier.out_edges(x) {
                let y = self.p.carrier.edge(id).head;
                if self.p.pi[y] == w {
                    next.push(y);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        next
    }

    fn exhaustive(&mut self, d: i64, budget: u64, rep_start: bool) -> Result<VerifyReport> {
        let n = self.succ.len();
        let mut on_path = vec![false; n];
        for s in 0..n {
            let lift = self.start(s, rep_start);
            self.count(budget)?;
            if lift.is_empty() {
                return Ok(self.uncovered(vec![s]));
            }
            // Explicit DFS: (vertex, weight so far, lift set, next successor).
            let mut path = vec![s];
            let mut stack: Vec<(usize, i64, Vec<usize>, usize)> = vec![(s, 0, lift, 0)];
            on_path[s] = true;
            while let Some(top) = stack.last_mut() {
                let (v, wsum) = (top.0, top.1);
                if top.3 >= self.succ[v].len() {
                    on_path[v] = false;
                    path.pop();
                    stack.pop();
                    continue;
                }
                let (w, we) = self.succ[v][top.3];
                top.3 += 1;
                if on_path[w] || wsum + we > d {
                    continue;
                }
                let next = self.advance(&stack.last().unwrap().2, w);
                path.push(w);
                self.count(budget)?;
                if next.is_empty() {
                    return Ok(self.uncovered(path));
                }
                on_path[w] = true;
                stack.push((w, wsum + we, next, 0));
            }
        }
        Ok(VerifyReport::ok(self.measured()))
    }

    fn sampled(&mut self, d: i64, walks: u64, seed: u64, rep_start: bool) -> VerifyReport {
        let n = self.succ.len();
        for s in 0..n {
            let lift = self.start(s, rep_start);
            self.checked += 1;
            if lift.is_empty() {
                return self.uncovered(vec![s]);
            }
            for &(w, we) in &self.succ[s] {
                if we <= d {
                    self.checked += 1;
                    if self.advance(&lift, w).is_empty() {
                        return self.uncovered(vec![s, w]);
                    }
                }
            }
        }
        if n == 0 {
            return VerifyReport::ok(self.measured());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut on_path = vec![false; n];
        for _ in 0..walks {
            let s = rng.gen_range(0..n);
            let mut path = vec![s];
            let mut lift = self.start(s, rep_start);
            let mut wsum = 0;
            on_path[s] = true;
            loop {
                let v = *path.last().unwrap();
                let options: Vec<(usize, i64)> = self.succ[v]
                    .iter()
                    .copied()
                    .filter(|&(w, we)| !on_path[w] && wsum + we <= d)
                    .collect();
                if options.is_empty() {
                    break;
                }
                let (w, we) = options[rng.gen_range(0..options.len())];
                lift = self.advance(&lift, w);
                path.push(w);
                on_path[w] = true;
                wsum += we;
                self.checked += 1;
                if lift.is_empty() {
                    return self.uncovered(path);
                }
            }
            path.iter().for_each(|&v| on_path[v] = false);
        }
        VerifyReport::ok(self.measured())
    }

    fn count(&mut self, budget: u64) -> Result<()> {
        self.checked += 1;
        if self.checked > budget {
            return Err(Error::Budget(format!("more than {budget} simple paths to enumerate")));
        }
        Ok(())
    }

    fn measured(&self) -> Measured {
        Measured { paths_checked: Some(self.checked), ..Default::default() }
    }

    fn uncovered(&self, path: Vec<usize>) -> VerifyReport {
        VerifyReport::fail(Counterexample::Uncovered { path }, self.measured())
    }
}

/// Weight range `{-1..n}`, zero edges from `s` to every other vertex, and
/// minimum cycle mean at least 1.
pub fn verify_restricted(g: &Graph, s: usize) -> VerifyReport {
    let mut m = Measured::default();
    let n = g.n() as i64;
    for (id, e) in g.edges().iter().enumerate() {
        if e.weight < -1 || e.weight > n {
            return VerifyReport::fail(Counterexample::WeightOutOfRange { edge: id, weight: e.weight }, m);
        }
    }
    if s >= g.n() {
        return VerifyReport::fail(Counterexample::MissingSourceEdge { vertex: s }, m);
    }
    let mut has = vec![false; g.n()];
    for &id in g.out_edges(s) {
        let e = g.edge(id);
        if e.weight == 0 {
            has[e.head] = true;
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| v != s && !has[v]) {
        return VerifyReport::fail(Counterexample::MissingSourceEdge { vertex: v }, m);
    }
    if let Some(mc) = karp_min_mean_cycle(g) {
        m.min_mean_cycle = Some(mc.value.to_string());
        if mc.value < 1.into() {
            return VerifyReport::fail(
                Counterexample::LowMeanCycle { cycle: mc.cycle.vertices, mean: mc.value.to_string() },
                m,
            );
        }
    }
    VerifyReport::ok(m)
}

/// Certifies distances and the parent tree.
pub fn verify_sssp(g: &Graph, s: usize, r: &ShortestPathResult) -> VerifyReport {
    let m = Measured::default();
    let n = g.n();
    if r.dist.len() != n || r.parent.len() != n {
        return VerifyReport::fail(Counterexample::Size { vertex: 0, expected: n, found: r.dist.len() }, m);
    }
    if s >= n || r.dist[s] != Dist::Finite(0) {
        let dist = r.dist.get(s).copied().unwrap_or(Dist::PosInf);
        return VerifyReport::fail(Counterexample::SourceDistance { dist }, m);
    }
    for (id, e) in g.edges().iter().enumerate() {
        let ok = match (r.dist[e.tail], r.dist[e.head]) {
            (Dist::PosInf, _) => true,
            (Dist::NegInf, h) => h == Dist::NegInf,
            (Dist::Finite(_), Dist::NegInf) => true,
            (Dist::Finite(_), Dist::PosInf) => false,
            (Dist::Finite(a), Dist::Finite(b)) => b <= a + e.weight,
        };
        if !ok {
            return VerifyReport::fail(Counterexample::Relaxable { edge: id }, m);
        }
    }
    for v in 0..n {
        let Dist::Finite(dv) = r.dist[v] else { continue };
        if v == s {
            continue;
        }
        let tight = r.parent[v].is_some_and(|id| {
            id < g.m() && {
                let e = g.edge(id);
                e.head == v && r.dist[e.tail] == Dist::Finite(dv - e.weight)
            }
        });
        if !tight {
            return VerifyReport::fail(Counterexample::ParentNotTight { vertex: v, edge: r.parent[v] }, m);
        }
    }
    // Every finite vertex must reach the source through parent links.
    let mut state = vec![0u8; n]; // 0 unknown, 1 on walk, 2 rooted
    state[s] = 2;
    for v in 0..n {
        if !r.dist[v].is_finite() || state[v] == 2 {
            continue;
        }
        let mut walk = Vec::new();
        let mut x = v;
        loop {
            if state[x] == 2 {
                break;
            }
            if state[x] == 1 {
                return VerifyReport::fail(Counterexample::Unrooted { vertex: v }, m);
            }
            state[x] = 1;
            walk.push(x);
            x = g.edge(r.parent[x].unwrap()).tail;
        }
        walk.iter().for_each(|&y| state[y] = 2);
    }
    VerifyReport::ok(m)
}
