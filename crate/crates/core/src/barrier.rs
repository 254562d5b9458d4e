//! The ladder-plus-star lower-bound gadget: generation, its length-`d`
//! "snakes", a diagonalization adversary against subgraph families, and an
//! incidence audit.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::verify::verify_clustered;

/// Optional replacements for the derived parameters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierOverrides {
    pub l: Option<usize>,
    pub r: Option<usize>,
    pub m_star: Option<usize>,
    pub d: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierMeta {
    pub m_target: usize,
    pub lambda: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub d: usize,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "M")]
    pub m_star: usize,
    pub n: usize,
    pub m: usize,
}

/// Vertex numbering: spine `a_1..a_{L+1}`, then the layer cycles, then the
/// star center, then the leaves. Edge numbering: per layer the `R` cycle
/// edges, `R` entries and `R` exits, then the center edge, then the star.
#[derive(Clone, Debug)]
pub struct BarrierInstance {
    pub graph: Graph,
    pub meta: BarrierMeta,
}

pub fn gen_barrier(m: usize, lambda: usize, ov: BarrierOverrides) -> Result<BarrierInstance> {
    if lambda == 0 {
        return Err(Error::Param("lambda must be positive".into()));
    }
    let l = ov.l.unwrap_or_else(|| ((m / lambda) as f64).sqrt().floor() as usize);
    // Guard the float square root against rounding at perfect squares.
    let l = if ov.l.is_none() { fix_isqrt(m / lambda, l) } else { l };
    let d = ov.d.unwrap_or(2 + 3 * l);
    let r = ov.r.unwrap_or(2 * d * lambda);
    let m_star = ov.m_star.unwrap_or(m / 20);
    if l == 0 || r < 2 {
        return Err(Error::Param(format!("degenerate barrier: L = {l}, R = {r}")));
    }
    if ov.r.is_none() && ov.d.is_none() && r <= d * lambda {
        return Err(Error::Invariant("cycle length must exceed d * lambda".into()));
    }
    let n = (l + 1) + l * r + 1 + m_star;
    let mut edges = Vec::with_capacity(3 * r * l + m_star + 1);
    let a = |j: usize| j;
    let w = |j: usize, q: usize| l + 1 + j * r + q;
    let center = l + 1 + l * r;
    for j in 0..l {
        for q in 0..r {
            edges.push(Edge::new(w(j, q), w(j, (q + 1) % r), 1));
        }
        for q in 0..r {
            edges.push(Edge::new(a(j), w(j, q), 1));
        }
        for q in 0..r {
            edges.push(Edge::new(w(j, q), a(j + 1), 1));
        }
    }
    edges.push(Edge::new(center, a(0), 1));
    for t in 0..m_star {
        edges.push(Edge::new(center + 1 + t, center, 1));
    }
    let graph = Graph::new(n, edges)?;
    let meta = BarrierMeta { m_target: m, lambda, l, d, r, m_star, n, m: graph.m() };
    Ok(BarrierInstance { graph, meta })
}

fn fix_isqrt(x: usize, mut s: usize) -> usize {
    while s * s > x {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= x {
        s += 1;
    }
    s
}

impl BarrierInstance {
    pub fn cycle_edge(&self, layer: usize, q: usize) -> usize {
        3 * self.meta.r * layer + q
    }

    pub fn entry_edge(&self, layer: usize, q: usize) -> usize {
        3 * self.meta.r * layer + self.meta.r + q
    }

    pub fn exit_edge(&self, layer: usize, q: usize) -> usize {
        3 * self.meta.r * layer + 2 * self.meta.r + q
    }

    pub fn center_edge(&self) -> usize {
        3 * self.meta.r * self.meta.l
    }

    pub fn star_edge(&self, t: usize) -> usize {
        self.center_edge() + 1 + t
    }

    /// Edge ids of layer `layer`'s cycle.
    pub fn layer_cycle(&self, layer: usize) -> Vec<usize> {
        (0..self.meta.r).map(|q| self.cycle_edge(layer, q)).collect()
    }

    /// Edge sequence of the snake using star leaf `t` and cycle position
    /// `pos[j]` in layer `j`.
    pub fn snake_edges(&self, snake: &Snake) -> Vec<usize> {
        let r = self.meta.r;
        let mut out = vec![self.star_edge(snake.leaf), self.center_edge()];
        for (j, &q) in snake.positions.iter().enumerate() {
            out.push(self.entry_edge(j, q));
            out.push(self.cycle_edge(j, q));
            out.push(self.exit_edge(j, (q + 1) % r));
        }
        out
    }

    /// Number of snakes, `M * R^L`.
    pub fn snake_count(&self) -> BigUint {
        BigUint::from(self.meta.m_star) * BigUint::from(self.meta.r).pow(self.meta.l as u32)
    }

    /// Snakes in lexicographic order of (leaf, positions).
    pub fn snakes(&self) -> SnakeIter {
        SnakeIter {
            m_star: self.meta.m_star,
            r: self.meta.r,
            next: (self.meta.m_star > 0).then(|| Snake { leaf: 0, positions: vec![0; self.meta.l] }),
        }
    }
}

/// A snake by its choices: the star leaf and one cycle position per layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Snake {
    pub leaf: usize,
    pub positions: Vec<usize>,
}

pub struct SnakeIter {
    m_star: usize,
    r: usize,
    next: Option<Snake>,
}

impl Iterator for SnakeIter {
    type Item = Snake;

    fn next(&mut self) -> Option<Snake> {
        let cur = self.next.take()?;
        let mut nxt = cur.clone();
        let mut carried = true;
        for p in nxt.positions.iter_mut().rev() {
            *p += 1;
            if *p < self.r {
                carried = false;
                break;
            }
            *p = 0;
        }
        if carried {
            nxt.leaf += 1;
        }
        if nxt.leaf < self.m_star {
            self.next = Some(nxt);
        }
        Some(cur)
    }
}

/// Candidate clustered subgraphs, as edge-id sets of the instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFamily {
    pub members: Vec<Vec<usize>>,
}

impl CoverFamily {
    pub fn validate(&self, b: &BarrierInstance) -> Result<()> {
        for (i, mem) in self.members.iter().enumerate() {
            if let Some(&e) = mem.iter().find(|&&e| e >= b.graph.m()) {
                return Err(Error::Param(format!("member {i} names edge {e} outside the instance")));
            }
        }
        Ok(())
    }

    fn tables(&self, m: usize) -> Vec<Vec<bool>> {
        self.members
            .iter()
            .map(|mem| {
                let mut t = vec![false; m];
                mem.iter().for_each(|&e| t[e] = true);
                t
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SnakeSearch {
    /// A snake lying in no member. `constructed` marks the diagonal
    /// construction, as opposed to a scan.
    Uncovered { snake: Snake, edges: Vec<usize>, constructed: bool },
    /// Every snake lies in some member (exhaustive scan).
    Covered,
    /// A member holds the whole cycle of a layer, which no `d*lambda`-
    /// clustered subgraph can, and the scan was over budget.
    ClusteringViolation { member: usize, layer: usize },
}

pub const DEFAULT_SNAKE_BUDGET: u64 = 2_000_000;

pub fn find_uncovered_snake(b: &BarrierInstance, fam: &CoverFamily, budget: u64) -> Result<SnakeSearch> {
    fam.validate(b)?;
    let tables = fam.tables(b.graph.m());
    let (l, r) = (b.meta.l, b.meta.r);
    let mut blocked: Option<(usize, usize)> = None;
    for t in 0..b.meta.m_star {
        let star = b.star_edge(t);
        let i_t: Vec<usize> = (0..tables.len()).filter(|&i| tables[i][star]).collect();
        if i_t.len() >= l {
            continue;
        }
        // Members of I_t against layers where they miss a cycle edge.
        let omitted: Vec<Vec<(usize, usize)>> = i_t
            .iter()
            .map(|&i| {
                (0..l)
                    .filter_map(|j| (0..r).find(|&q| !tables[i][b.cycle_edge(j, q)]).map(|q| (j, q)))
                    .collect()
            })
            .collect();
        match assign_layers(&omitted, l) {
            Some(layer_of) => {
                let mut positions = vec![0; l];
                for (k, &j) in layer_of.iter().enumerate() {
                    positions[j] = omitted[k].iter().find(|&&(jj, _)| jj == j).unwrap().1;
                }
                let snake = Snake { leaf: t, positions };
                let edges = b.snake_edges(&snake);
                debug_assert!(!tables.iter().any(|tb| edges.iter().all(|&e| tb[e])));
                return Ok(SnakeSearch::Uncovered { snake, edges, constructed: true });
            }
            None => {
                if blocked.is_none() {
                    let (k, _) = omitted.iter().enumerate().min_by_key(|(_, o)| o.len()).unwrap();
                    let j = (0..l).find(|&j| omitted[k].iter().all(|&(jj, _)| jj != j)).unwrap_or(0);
                    blocked = Some((i_t[k], j));
                }
            }
        }
    }
    let count = b.snake_count();
    if count > BigUint::from(budget) {
        if let Some((member, layer)) = blocked {
            return Ok(SnakeSearch::ClusteringViolation { member, layer });
        }
        return Err(Error::Budget(format!("{count} snakes exceed the scan budget of {budget}")));
    }
    for snake in b.snakes() {
        let edges = b.snake_edges(&snake);
        if !tables.iter().any(|tb| edges.iter().all(|&e| tb[e])) {
            return Ok(SnakeSearch::Uncovered { snake, edges, constructed: false });
        }
    }
    Ok(SnakeSearch::Covered)
}

/// Distinct layers for every member, each a layer where that member misses
/// a cycle edge; augmenting-path bipartite matching.
fn assign_layers(omitted: &[Vec<(usize, usize)>], layers: usize) -> Option<Vec<usize>> {
    fn augment(
        k: usize,
        omitted: &[Vec<(usize, usize)>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &(j, _) in &omitted[k] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, omitted, owner, seen)) {
                owner[j] = Some(k);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; layers];
    for k in 0..omitted.len() {
        let mut seen = vec![false; layers];
        if !augment(k, omitted, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut layer_of = vec![0; omitted.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(k) = o {
            layer_of[*k] = j;
        }
    }
    Some(layer_of)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberAudit {
    pub edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustered: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_scc_diameter: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyAudit {
    pub members: Vec<MemberAudit>,
    pub coverage: SnakeSearch,
    pub incidence: usize,
    /// `M * L`.
    pub lower_bound: usize,
    /// Whether every member is clustered and every snake is covered.
    pub premise: bool,
    /// The incidence inequality; only asserted under the premise.
    pub bound_holds: Option<bool>,
}

pub fn audit_family(b: &BarrierInstance, fam: &CoverFamily, check_clustering: bool, budget: u64) -> Result<FamilyAudit> {
    fam.validate(b)?;
    let bound = (b.meta.d * b.meta.lambda) as i64;
    let members: Vec<MemberAudit> = fam
        .members
        .iter()
        .map(|mem| {
            let mut ids = mem.clone();
            ids.sort_unstable();
            ids.dedup();
            if !check_clustering {
                return MemberAudit { edges: ids.len(), clustered: None, max_scc_diameter: None };
            }
            let sub = Graph::new(b.graph.n(), ids.iter().map(|&e| b.graph.edge(e)).collect())
                .expect("subgraph of a valid graph");
            let rep = verify_clustered(&sub, bound);
            MemberAudit { edges: ids.len(), clustered: Some(rep.pass), max_scc_diameter: rep.measured.max_scc_diameter }
        })
        .collect();
    let coverage = find_uncovered_snake(b, fam, budget)?;
    let incidence = members.iter().map(|m| m.edges).sum();
    let lower_bound = b.meta.m_star * b.meta.l;
    let premise =
        coverage == SnakeSearch::Covered && members.iter().all(|m| m.clustered.unwrap_or(true)) && check_clustering;
    Ok(FamilyAudit {
        members,
        coverage,
        incidence,
        lower_bound,
        premise,
        bound_holds: premise.then_some(incidence >= lower_bound),
    })
}
