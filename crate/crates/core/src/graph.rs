//! Directed integer-weighted multigraph with CSR adjacency in both directions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: i64,
}

impl Edge {
    pub fn new(tail: usize, head: usize, weight: i64) -> Self {
        Edge { tail, head, weight }
    }
}

/// Immutable graph. Edge ids are positions in the edge array and stay stable
/// under every weight transform and under `reversed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    out_off: Vec<usize>,
    out_ids: Vec<usize>,
    in_off: Vec<usize>,
    in_ids: Vec<usize>,
    max_abs: u64,
}

const GUARD: u128 = 1 << 60;

pub(crate) fn check_guard(n: usize, w: u64) -> Result<()> {
    if (n as u128 + 2) * (w as u128 + 3) >= GUARD {
        return Err(Error::Overflow { n, w });
    }
    Ok(())
}

fn csr(n: usize, edges: &[Edge], key: impl Fn(&Edge) -> usize) -> (Vec<usize>, Vec<usize>) {
    let mut off = vec![0usize; n + 1];
    for e in edges {
        off[key(e) + 1] += 1;
    }
    for v in 0..n {
        off[v + 1] += off[v];
    }
    let mut fill = off.clone();
    let mut ids = vec![0usize; edges.len()];
    for (i, e) in edges.iter().enumerate() {
        let k = key(e);
        ids[fill[k]] = i;
        fill[k] += 1;
    }
    (off, ids)
}

impl Graph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Graph> {
        let mut max_abs = 0u64;
        for e in &edges {
            if e.tail >= n {
                return Err(Error::VertexOutOfRange(e.tail));
            }
            if e.head >= n {
                return Err(Error::VertexOutOfRange(e.head));
            }
            max_abs = max_abs.max(e.weight.unsigned_abs());
        }
        check_guard(n, max_abs)?;
        let (out_off, out_ids) = csr(n, &edges, |e| e.tail);
        let (in_off, in_ids) = csr(n, &edges, |e| e.head);
        Ok(Graph { n, edges, out_off, out_ids, in_off, in_ids, max_abs })
    }

    pub fn from_triples(n: usize, triples: &[(usize, usize, i64)]) -> Result<Graph> {
        Graph::new(n, triples.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect())
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, Vec::new()).expect("edgeless graph is always valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    /// Largest absolute weight, the `W` of the overflow guard.
    pub fn max_abs_weight(&self) -> u64 {
        self.max_abs
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_ids[self.out_off[v]..self.out_off[v + 1]]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_ids[self.in_off[v]..self.in_off[v + 1]]
    }

    pub fn deg_out(&self, v: usize) -> usize {
        self.out_off[v + 1] - self.out_off[v]
    }

    pub fn deg_in(&self, v: usize) -> usize {
        self.in_off[v + 1] - self.in_off[v]
    }

    pub fn deg_total(&self, v: usize) -> usize {
        self.deg_out(v) + self.deg_in(v)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.edges.iter().all(|e| e.weight >= 0)
    }

    pub fn first_negative_edge(&self) -> Option<usize> {
        self.edges.iter().position(|e| e.weight < 0)
    }

    pub fn negative_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.weight < 0).count()
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        match self.first_negative_edge() {
            None => Ok(()),
            Some(id) => {
                let e = self.edges[id];
                Err(Error::NegativeWeight { edge: id, tail: e.tail, head: e.head, weight: e.weight })
            }
        }
    }

    /// Same structure, every weight replaced by `f(edge_id, edge)`.
    pub fn map_weights(&self, mut f: impl FnMut(usize, &Edge) -> i64) -> Result<Graph> {
        let mut g = self.clone();
        let mut max_abs = 0u64;
        for (i, e) in g.edges.iter_mut().enumerate() {
            e.weight = f(i, &self.edges[i]);
            max_abs = max_abs.max(e.weight.unsigned_abs());
        }
        check_guard(g.n, max_abs)?;
        g.max_abs = max_abs;
        Ok(g)
    }

    /// `w_{>=0}(e) = max(0, w(e))`.
    pub fn truncate_nonneg(&self) -> Graph {
        self.map_weights(|_, e| e.weight.max(0))
            .expect("clamping never raises the weight bound")
    }

    /// `w_phi(u,v) = w(u,v) + phi(u) - phi(v)`.
    pub fn apply_potential(&self, phi: &Potential) -> Result<Graph> {
        if phi.0.len() != self.n {
            return Err(Error::Param(format!(
                "potential has {} entries for {} vertices",
                phi.0.len(),
                self.n
            )));
        }
        let mut bad = false;
        let g = self.map_weights(|_, e| {
            let r = e
                .weight
                .checked_add(phi.0[e.tail])
                .and_then(|x| x.checked_sub(phi.0[e.head]));
            r.unwrap_or_else(|| {
                bad = true;
                0
            })
        })?;
        if bad {
            return Err(Error::Overflow { n: self.n, w: u64::MAX });
        }
        Ok(g)
    }

    /// Edges with both endpoints in `vertices`, renumbered densely in the
    /// order given. The second value maps old ids to new ids.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut map = vec![None; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            map[v] = Some(i);
        }
        let mut edges = Vec::new();
        for &v in vertices {
            for &id in self.out_edges(v) {
                let e = self.edges[id];
                if let Some(h) = map[e.head] {
                    edges.push(Edge::new(map[v].unwrap(), h, e.weight));
                }
            }
        }
        let g = Graph::new(vertices.len(), edges).expect("subgraph of a valid graph");
        (g, map)
    }

    /// Every edge flipped; edge ids are preserved.
    pub fn reversed(&self) -> Graph {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge::new(e.head, e.tail, e.weight)).collect(),
            out_off: self.in_off.clone(),
            out_ids: self.in_ids.clone(),
            in_off: self.out_off.clone(),
            in_ids: self.out_ids.clone(),
            max_abs: self.max_abs,
        }
    }

    /// Vertices reachable from `s`, as a membership table.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            for &id in self.out_edges(u) {
                let h = self.edges[id].head;
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        seen
    }

    pub fn path_weight(&self, edge_ids: &[usize]) -> i64 {
        edge_ids.iter().map(|&id| self.edges[id].weight).sum()
    }
}

/// Per-vertex potential.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Potential(pub Vec<i64>);

impl Potential {
    pub fn zero(n: usize) -> Potential {
        Potential(vec![0; n])
    }

    pub fn negated(&self) -> Potential {
        Potential(self.0.iter().map(|x| -x).collect())
    }
}

/// Distance with infinite sentinels. The derived order puts
/// `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dist {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Dist {
    pub fn finite(self) -> Option<i64> {
        match self {
            Dist::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Dist::Finite(_))
    }

    pub fn add(self, w: i64) -> Dist {
        match self {
            Dist::Finite(x) => Dist::Finite(x + w),
            other => other,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::NegInf => f.write_str("-inf"),
            Dist::Finite(x) => write!(f, "{x}"),
            Dist::PosInf => f.write_str("inf"),
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dist::Finite(x) => s.serialize_i64(*x),
            Dist::PosInf => s.serialize_str("inf"),
            Dist::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Dist, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(x) => Ok(Dist::Finite(x)),
            Raw::Text(t) if t == "inf" => Ok(Dist::PosInf),
            Raw::Text(t) if t == "-inf" => Ok(Dist::NegInf),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad distance {t:?}"))),
        }
    }
}

/// Floor division by a positive divisor.
pub fn floor_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b)
}

/// Ceiling division, defined as `-floor_div(-a, b)`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// `ceil(log2(max(n, 2)))`.
pub fn log2_ceil(n: usize) -> u32 {
    let n = n.max(2) as u64;
    64 - (n - 1).leading_zeros()
}
