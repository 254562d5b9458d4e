//! Projections, layered gluing of projections, and the recursive path cover.

use serde::{Deserialize, Serialize};

use crate::ball::{BallGrower, Direction, GrowScratch, GrowState, Region, Slack};
use crate::error::{Error, Result};
use crate::graph::{log2_ceil, Edge, Graph};

pub const NO_ORIGIN: usize = usize::MAX;

/// A carrier graph with a weight-preserving map `pi` onto a base graph and
/// a representative copy for every present base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub carrier: Graph,
    pub base_n: usize,
    pub pi: Vec<usize>,
    pub rep: Vec<Option<usize>>,
    /// Base edge id each carrier edge was copied from, or `NO_ORIGIN`.
    pub origin: Vec<usize>,
}

impl Projection {
    /// The base graph mapped onto itself.
    pub fn identity(g: &Graph) -> Projection {
        Projection {
            carrier: g.clone(),
            base_n: g.n(),
            pi: (0..g.n()).collect(),
            rep: (0..g.n()).map(Some).collect(),
            origin: (0..g.m()).collect(),
        }
    }

    /// `G[vertices]` as a projection, each copy being its own representative.
    pub fn induced(g: &Graph, vertices: &[usize]) -> Projection {
        let mut local = vec![usize::MAX; g.n()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for &v in vertices {
            for &id in g.out_edges(v) {
                let e = g.edge(id);
                if local[e.head] != usize::MAX {
                    edges.push(Edge::new(local[v], local[e.head], e.weight));
                    origin.push(id);
                }
            }
        }
        let mut rep = vec![None; g.n()];
        for (i, &v) in vertices.iter().enumerate() {
            rep[v] = Some(i);
        }
        Projection {
            carrier: Graph::new(vertices.len(), edges).expect("subgraph of a valid graph"),
            base_n: g.n(),
            pi: vertices.to_vec(),
            rep,
            origin,
        }
    }

    pub fn is_rep(&self, x: usize) -> bool {
        self.rep[self.pi[x]] == Some(x)
    }

    /// Fills unknown origins by looking up a base edge with the same
    /// endpoints and weight.
    pub fn resolve_origins(&mut self, base: &Graph) {
        for (i, e) in self.carrier.edges().iter().enumerate() {
            if self.origin[i] != NO_ORIGIN {
                continue;
            }
            let (a, b) = (self.pi[e.tail], self.pi[e.head]);
            if a >= base.n() {
                continue;
            }
            let found = base.out_edges(a).iter().copied().find(|&id| {
                let f = base.edge(id);
                f.head == b && f.weight == e.weight
            });
            if let Some(id) = found {
                self.origin[i] = id;
            }
        }
    }

    pub fn to_json(&self) -> ProjectionJson {
        ProjectionJson {
            base_n: self.base_n,
            nodes: (0..self.carrier.n())
                .map(|x| NodeJson { id: x, pi: self.pi[x], rep: self.is_rep(x) })
                .collect(),
            edges: self.carrier.edges().iter().map(|e| (e.tail, e.head, e.weight)).collect(),
        }
    }

    pub fn from_json(j: &ProjectionJson) -> Result<Projection> {
        let n = j.nodes.len();
        let mut pi = vec![0; n];
        let mut seen = vec![false; n];
        let mut rep = vec![None; j.base_n];
        for node in &j.nodes {
            if node.id >= n || seen[node.id] {
                return Err(Error::Json(format!("node id {} is out of range or repeated", node.id)));
            }
            if node.pi >= j.base_n {
                return Err(Error::Json(format!("node {} maps to {} outside the base", node.id, node.pi)));
            }
            seen[node.id] = true;
            pi[node.id] = node.pi;
            if node.rep {
                if rep[node.pi].is_some() {
                    return Err(Error::Json(format!("base vertex {} has two representatives", node.pi)));
                }
                rep[node.pi] = Some(node.id);
            }
        }
        let carrier = Graph::from_triples(n, &j.edges)?;
        let origin = vec![NO_ORIGIN; carrier.m()];
        Ok(Projection { carrier, base_n: j.base_n, pi, rep, origin })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub pi: usize,
    pub rep: bool,
}

/// The projection interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionJson {
    pub base_n: usize,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<(usize, usize, i64)>,
}

/// Glues `parts` in order: disjoint union, representatives taken from the
/// earliest part where a vertex is present, plus an edge from every copy
/// `a'` in part `i` to `rep(b)` whenever `(pi(a'), b)` is a base edge and
/// `rep(b)` lies in a later part.
pub fn layer_projections(base: &Graph, parts: &[Projection]) -> Result<Projection> {
    let mut offset = Vec::with_capacity(parts.len());
    let mut total = 0;
    for (i, p) in parts.iter().enumerate() {
        if p.base_n != base.n() {
            return Err(Error::Param(format!("part {i} projects onto {} vertices, base has {}", p.base_n, base.n())));
        }
        for x in 0..p.carrier.n() {
            let v = p.pi[x];
            if v >= base.n() || p.rep[v].is_none_or(|r| p.pi[r] != v) {
                return Err(Error::Invariant(format!("part {i} has no valid representative for base vertex {v}")));
            }
        }
        offset.push(total);
        total += p.carrier.n();
    }
    let mut pi = Vec::with_capacity(total);
    let mut rep: Vec<Option<usize>> = vec![None; base.n()];
    let mut part_of = Vec::with_capacity(total);
    let mut edges = Vec::new();
    let mut origin = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        pi.extend_from_slice(&p.pi);
        part_of.extend(std::iter::repeat_n(i, p.carrier.n()));
        for (v, r) in p.rep.iter().enumerate() {
            if let (None, Some(r)) = (rep[v], r) {
                rep[v] = Some(offset[i] + r);
            }
        }
        for (k, e) in p.carrier.edges().iter().enumerate() {
            edges.push(Edge::new(offset[i] + e.tail, offset[i] + e.head, e.weight));
            origin.push(p.origin[k]);
        }
    }
    for x in 0..total {
        for &id in base.out_edges(pi[x]) {
            let e = base.edge(id);
            if let Some(r) = rep[e.head] {
                if part_of[r] > part_of[x] {
                    edges.push(Edge::new(x, r, e.weight));
                    origin.push(id);
                }
            }
        }
    }
    Ok(Projection { carrier: Graph::new(total, edges)?, base_n: base.n(), pi, rep, origin })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Paper,
    Practical,
}

impl std::str::FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Preset, String> {
        match s {
            "paper" => Ok(Preset::Paper),
            "practical" => Ok(Preset::Practical),
            _ => Err(format!("unknown preset {s:?} (expected paper or practical)")),
        }
    }
}

pub const PRACTICAL_LAMBDA: u64 = 16;

/// Smallest slack the paper preset accepts for an `n`-vertex graph.
pub fn paper_cover_lambda(n: usize) -> u64 {
    10_000 * (log2_ceil(n) as u64).pow(4)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCoverParams {
    pub d: i64,
    pub lambda: u64,
    pub preset: Preset,
}

impl PathCoverParams {
    pub fn paper(n: usize, d: i64) -> PathCoverParams {
        PathCoverParams { d, lambda: paper_cover_lambda(n), preset: Preset::Paper }
    }

    pub fn practical(d: i64, lambda: u64) -> PathCoverParams {
        PathCoverParams { d, lambda, preset: Preset::Practical }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.d < 0 {
            return Err(Error::Param(format!("d must be nonnegative, got {}", self.d)));
        }
        if self.lambda == 0 {
            return Err(Error::Param("lambda must be positive".into()));
        }
        if self.preset == Preset::Paper && self.lambda < paper_cover_lambda(n) {
            return Err(Error::Param(format!(
                "paper preset needs lambda >= {} for n = {n}, got {}",
                paper_cover_lambda(n),
                self.lambda
            )));
        }
        Ok(())
    }

    /// `eps' = 9 log n / lambda` as an exact ratio.
    pub fn epsilon_prime(&self, n: usize) -> Slack {
        Slack::new(9 * log2_ceil(n) as u64, self.lambda)
    }

    /// `eps = 1/sqrt(lambda)`, for display only.
    pub fn epsilon(&self) -> f64 {
        1.0 / (self.lambda as f64).sqrt()
    }

    /// `deg_b < (1 - 1/sqrt(lambda)) deg_a`, in integers.
    pub fn shrinks(&self, deg_b: u64, deg_a: u64) -> bool {
        if deg_b >= deg_a {
            return false;
        }
        let gap = (deg_a - deg_b) as u128;
        (self.lambda as u128) * gap * gap > (deg_a as u128) * (deg_a as u128)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStats {
    pub base_n: usize,
    pub base_m: usize,
    pub carrier_vertices: usize,
    pub carrier_edges: usize,
    /// Sum over carrier vertices of the total degree of their image.
    pub sum_proj_deg: u64,
    /// Same sum with out-degrees only.
    pub sum_proj_deg_out: u64,
    pub max_i_out: u64,
    pub max_i_in: u64,
    pub case1: u64,
    pub case2: u64,
    /// Case-2 nodes whose ball intersection came out empty.
    pub empty_middle_fallbacks: u64,
    /// Largest `2(i_out + i_in)` over Case-2 nodes; SCC diameters of the
    /// carrier are at most this times `d`.
    pub realized_slack: u64,
    pub nodes: u64,
    pub max_depth: u64,
    /// Exact maximum SCC diameter of the carrier when it was computed.
    pub max_scc_diameter: Option<i64>,
}

impl CoverStats {
    pub fn realized_bound(&self, d: i64) -> i64 {
        (self.realized_slack as i64).saturating_mul(d)
    }
}

/// A region that shrinks in place: a sorted vertex list, the mark tag its
/// members carry, and a cursor past vertices known to have left.
struct Lineage {
    list: Vec<usize>,
    cursor: usize,
    tag: u32,
}

enum Frame {
    /// Fresh region from a sorted vertex list.
    New(Vec<usize>, u32),
    /// The next node of an existing lineage. `restore` re-enters vertices a
    /// sibling subtree relabelled; `exclude` drops vertices for good.
    Shrink { lin: usize, size: usize, deg: u64, depth: u32, restore: Vec<usize>, exclude: Vec<usize> },
    Leaf(Vec<usize>, u32),
    Finish(usize, u32),
}

/// Carrier id range of a finished node.
#[derive(Clone, Copy)]
struct NodeOut {
    lo: usize,
    hi: usize,
}

struct Builder<'a> {
    g: &'a Graph,
    params: PathCoverParams,
    slack: Slack,
    pi: Vec<usize>,
    edges: Vec<(usize, usize, usize)>,
    leaf_id: Vec<usize>,
    /// Depth of the deepest node holding carrier ids `i` and `i + 1`.
    join_depth: Vec<u32>,
    leaf_lo: Vec<usize>,
    mark: Vec<u32>,
    next_tag: u32,
    lineages: Vec<Lineage>,
    tree_mark: Vec<u32>,
    tree_tag: u32,
    tree_mark_in: Vec<u32>,
    tree_tag_in: u32,
    scratch_out: GrowScratch,
    scratch_in: GrowScratch,
    stats: CoverStats,
}

const DEAD: u32 = 0;

impl Builder<'_> {
    fn fresh_tag(&mut self) -> Result<u32> {
        self.next_tag = self.next_tag.checked_add(1).ok_or_else(|| Error::Param("too many regions".into()))?;
        Ok(self.next_tag)
    }

    fn leaf(&mut self, vertices: &[usize], depth: u32) -> NodeOut {
        let lo = self.pi.len();
        for &v in vertices {
            let x = self.pi.len();
            self.pi.push(v);
            self.leaf_id[v] = x;
            self.leaf_lo.push(lo);
            self.join_depth.push(depth);
        }
        let hi = self.pi.len();
        for &v in vertices {
            let x = self.leaf_id[v];
            for &id in self.g.out_edges(v) {
                let y = self.leaf_id[self.g.edge(id).head];
                if (lo..hi).contains(&y) {
                    self.edges.push((x, y, id));
                }
            }
        }
        NodeOut { lo, hi }
    }

    fn finish(&mut self, children: &[NodeOut], depth: u32) -> NodeOut {
        let lo = children.iter().map(|c| c.lo).min().unwrap_or(self.pi.len());
        let hi = children.iter().map(|c| c.hi).max().unwrap_or(self.pi.len());
        for c in children {
            if c.lo > lo && c.lo < c.hi {
                self.join_depth[c.lo - 1] = depth;
            }
        }
        NodeOut { lo, hi }
    }

    /// Pivot of a lineage node: its smallest member.
    fn pivot(&mut self, lin: usize) -> Option<usize> {
        let l = &mut self.lineages[lin];
        while l.cursor < l.list.len() && self.mark[l.list[l.cursor]] != l.tag {
            l.cursor += 1;
        }
        l.list.get(l.cursor).copied()
    }

    /// Decides the split of the current node of `lin` and returns its
    /// children in layer order.
    fn split(&mut self, lin: usize, size: usize, deg_a: u64, depth: u32) -> Result<Vec<Frame>> {
        let g = self.g;
        let tag = self.lineages[lin].tag;
        let u = self.pivot(lin).expect("nonempty region");
        let t_out = bump(&mut self.tree_tag, &mut self.tree_mark);
        let t_in = bump(&mut self.tree_tag_in, &mut self.tree_mark_in);
        let reg = Region { mark: &self.mark, tag };
        let d = self.params.d;
        let mut fwd = BallGrower::new(g, reg, u, Direction::Out, d, self.slack, &mut self.scratch_out)?;
        let mut bwd = BallGrower::new(g, reg, u, Direction::In, d, self.slack, &mut self.scratch_in)?;
        let first = loop {
            if fwd.step() == GrowState::Done {
                break Direction::Out;
            }
            if bwd.step() == GrowState::Done {
                break Direction::In;
            }
        };
        let done = if first == Direction::Out { &fwd } else { &bwd };
        let stats = &mut self.stats;
        let child = depth + 1;
        if self.params.shrinks(done.deg_ball(), deg_a) {
            stats.case1 += 1;
            return Ok(case1_parts(lin, size, deg_a, child, done, first, stats));
        }
        match first {
            Direction::Out => bwd.run_to_end(),
            Direction::In => fwd.run_to_end(),
        }
        let (sout, sin) = (fwd.scratch(), bwd.scratch());
        let members: Vec<usize> = fwd.ball().iter().copied().filter(|&v| sin.is_settled(v)).collect();
        if members.is_empty() {
            let done = if first == Direction::Out { &fwd } else { &bwd };
            stats.empty_middle_fallbacks += 1;
            stats.case1 += 1;
            return Ok(case1_parts(lin, size, deg_a, child, done, first, stats));
        }
        // Forward-tree ancestors and backward-tree descendants of the
        // intersection; both trees are rooted at the pivot.
        let mut mid = Vec::new();
        for &m in &members {
            let mut x = m;
            while self.tree_mark[x] != t_out {
                self.tree_mark[x] = t_out;
                mid.push(x);
                match sout.parent(x) {
                    Some(e) => x = g.edge(e).tail,
                    None => break,
                }
            }
        }
        for &m in &members {
            let mut x = m;
            while self.tree_mark_in[x] != t_in {
                self.tree_mark_in[x] = t_in;
                if self.tree_mark[x] != t_out {
                    mid.push(x);
                }
                match sin.parent(x) {
                    Some(e) => x = g.edge(e).head,
                    None => break,
                }
            }
        }
        mid.sort_unstable();
        // B_in minus the inner forward ball; the tree marks are reused as
        // scratch for inner-ball membership.
        let t_inner = bump(&mut self.tree_tag, &mut self.tree_mark);
        for &v in fwd.inner_ball() {
            self.tree_mark[v] = t_inner;
        }
        let mut htilde: Vec<usize> = bwd.ball().iter().copied().filter(|&v| self.tree_mark[v] != t_inner).collect();
        htilde.sort_unstable();
        let inner_in = bwd.inner_ball().to_vec();
        let hbar = Frame::Shrink {
            lin,
            size: size - inner_in.len(),
            deg: deg_a - bwd.deg_inner(),
            depth: child,
            restore: Vec::new(),
            exclude: inner_in,
        };
        let (i_out, i_in) = (fwd.layer(), bwd.layer());
        stats.case2 += 1;
        stats.max_i_out = stats.max_i_out.max(i_out);
        stats.max_i_in = stats.max_i_in.max(i_in);
        stats.realized_slack = stats.realized_slack.max(2 * (i_out + i_in));
        Ok(vec![Frame::New(htilde, child), Frame::Leaf(mid, child), hbar])
    }

    /// Cross-part edges. For a copy `x` and a base edge to `b` outside its
    /// leaf, the deepest node holding `x` and a copy of `b` decides: the
    /// edge goes to `b`'s representative in the nearest later part there.
    /// That node has a later part holding `b` exactly when the nearest copy
    /// of `b` built before `x` shares a node with `x` at least as deep as
    /// the nearest copy built after it does.
    fn cross_edges(&mut self) {
        let g = self.g;
        let total = self.pi.len();
        let mut start = vec![0usize; g.n() + 1];
        for &v in &self.pi {
            start[v + 1] += 1;
        }
        for v in 0..g.n() {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut copies = vec![0usize; total];
        for (x, &v) in self.pi.iter().enumerate() {
            copies[fill[v]] = x;
            fill[v] += 1;
        }
        let rmq = MinTable::new(&self.join_depth[..total.saturating_sub(1)]);
        for x in 0..total {
            let leaf = self.leaf_lo[x];
            for &id in g.out_edges(self.pi[x]) {
                let b = g.edge(id).head;
                let list = &copies[start[b]..start[b + 1]];
                let p = list.partition_point(|&y| y < x);
                let pred = p.checked_sub(1).map(|i| list[i]);
                let succ = list.get(p).copied();
                let in_leaf = |y: Option<usize>| y.is_some_and(|y| self.leaf_lo[y] == leaf);
                if in_leaf(pred) || in_leaf(succ) {
                    continue;
                }
                let Some(pred) = pred else { continue };
                let dp = rmq.min(pred, x - 1) as i64;
                let ds = succ.map_or(-1, |s| rmq.min(x, s - 1) as i64);
                if dp >= ds {
                    self.edges.push((x, pred, id));
                }
            }
        }
    }
}

/// Sparse table for range minima.
struct MinTable {
    levels: Vec<Vec<u32>>,
}

impl MinTable {
    fn new(a: &[u32]) -> MinTable {
        let mut levels = vec![a.to_vec()];
        let mut w = 1;
        while 2 * w <= a.len() {
            let prev = levels.last().unwrap();
            let next = (0..=a.len() - 2 * w).map(|i| prev[i].min(prev[i + w])).collect();
            levels.push(next);
            w *= 2;
        }
        MinTable { levels }
    }

    /// Minimum over `a[i..=j]`, `i <= j`.
    fn min(&self, i: usize, j: usize) -> u32 {
        let k = (usize::BITS - 1 - (j - i + 1).leading_zeros()) as usize;
        self.levels[k][i].min(self.levels[k][j + 1 - (1 << k)])
    }
}

fn bump(tag: &mut u32, mark: &mut [u32]) -> u32 {
    *tag = tag.wrapping_add(1);
    if *tag == 0 {
        mark.iter_mut().for_each(|x| *x = 0);
        *tag = 1;
    }
    *tag
}

/// Split along the ball of whichever grower stopped first. Forward: the
/// outside goes first, then the ball. Backward: the ball goes first, so
/// the first exit from it lands on a representative in the later part.
fn case1_parts(
    lin: usize,
    size: usize,
    deg_a: u64,
    depth: u32,
    done: &BallGrower,
    first: Direction,
    stats: &mut CoverStats,
) -> Vec<Frame> {
    let mut ball = done.ball().to_vec();
    let inner = done.inner_ball().to_vec();
    let boundary = ball[inner.len()..].to_vec();
    ball.sort_unstable();
    let (size, deg) = (size - inner.len(), deg_a - done.deg_inner());
    match first {
        Direction::Out => {
            stats.max_i_out = stats.max_i_out.max(done.layer());
            // The ball subtree relabels the boundary; it returns on entry.
            let outer = Frame::Shrink { lin, size, deg, depth, restore: boundary, exclude: inner };
            vec![outer, Frame::New(ball, depth)]
        }
        Direction::In => {
            stats.max_i_in = stats.max_i_in.max(done.layer());
            let outer = Frame::Shrink { lin, size, deg, depth, restore: Vec::new(), exclude: inner };
            vec![Frame::New(ball, depth), outer]
        }
    }
}

/// Builds a `d`-path cover of a nonnegative graph.
pub fn path_cover(g: &Graph, params: &PathCoverParams) -> Result<(Projection, CoverStats)> {
    g.require_nonnegative()?;
    params.validate(g.n())?;
    let n = g.n();
    let mut b = Builder {
        g,
        params: *params,
        slack: params.epsilon_prime(n),
        pi: Vec::new(),
        edges: Vec::new(),
        leaf_id: vec![usize::MAX; n],
        join_depth: Vec::new(),
        leaf_lo: Vec::new(),
        mark: vec![DEAD; n],
        next_tag: DEAD,
        lineages: Vec::new(),
        tree_mark: vec![0; n],
        tree_tag: 0,
        tree_mark_in: vec![0; n],
        tree_tag_in: 0,
        scratch_out: GrowScratch::new(n),
        scratch_in: GrowScratch::new(n),
        stats: CoverStats::default(),
    };
    let mut frames = vec![Frame::New((0..n).collect(), 0)];
    let mut done: Vec<NodeOut> = Vec::new();
    while let Some(f) = frames.pop() {
        let (lin, size, deg, depth) = match f {
            Frame::New(list, depth) => {
                let tag = b.fresh_tag()?;
                for &v in &list {
                    b.mark[v] = tag;
                }
                let deg = list.iter().map(|&v| g.deg_total(v) as u64).sum();
                let size = list.len();
                b.lineages.push(Lineage { list, cursor: 0, tag });
                (b.lineages.len() - 1, size, deg, depth)
            }
            Frame::Shrink { lin, size, deg, depth, restore, exclude } => {
                let tag = b.lineages[lin].tag;
                for v in restore {
                    b.mark[v] = tag;
                }
                for v in exclude {
                    b.mark[v] = DEAD;
                }
                (lin, size, deg, depth)
            }
            Frame::Leaf(vertices, depth) => {
                b.stats.nodes += 1;
                b.stats.max_depth = b.stats.max_depth.max(depth as u64);
                let out = b.leaf(&vertices, depth);
                done.push(out);
                continue;
            }
            Frame::Finish(z, depth) => {
                let children: Vec<NodeOut> = (0..z).map(|_| done.pop().unwrap()).collect();
                let out = b.finish(&children, depth);
                done.push(out);
                continue;
            }
        };
        b.stats.nodes += 1;
        b.stats.max_depth = b.stats.max_depth.max(depth as u64);
        if size <= 1 {
            let v: Vec<usize> = b.pivot(lin).into_iter().collect();
            let out = b.leaf(&v, depth);
            done.push(out);
            continue;
        }
        let children = b.split(lin, size, deg, depth)?;
        frames.push(Frame::Finish(children.len(), depth));
        // Push in layer order so the last layer is built first.
        frames.extend(children);
    }
    let root = done.pop().expect("root result");
    debug_assert!(root.lo == 0 && root.hi == b.pi.len() && done.is_empty());
    b.cross_edges();
    let total = b.pi.len();
    let relabel = |x: usize| total - 1 - x;
    let mut pi = vec![0; total];
    for (x, &v) in b.pi.iter().enumerate() {
        pi[relabel(x)] = v;
    }
    let mut edges: Vec<(usize, usize, usize)> =
        b.edges.iter().map(|&(x, y, id)| (relabel(x), relabel(y), id)).collect();
    edges.sort_unstable();
    let origin: Vec<usize> = edges.iter().map(|e| e.2).collect();
    let carrier = Graph::new(
        total,
        edges.iter().map(|&(x, y, id)| Edge::new(x, y, g.edge(id).weight)).collect(),
    )?;
    // The newest copy of each vertex is its representative.
    let mut rep = vec![None; n];
    for (x, &v) in b.pi.iter().enumerate() {
        rep[v] = Some(relabel(x));
    }
    let mut stats = b.stats;
    stats.base_n = n;
    stats.base_m = g.m();
    stats.carrier_vertices = total;
    stats.carrier_edges = carrier.m();
    stats.sum_proj_deg = pi.iter().map(|&v| g.deg_total(v) as u64).sum();
    stats.sum_proj_deg_out = pi.iter().map(|&v| g.deg_out(v) as u64).sum();
    Ok((Projection { carrier, base_n: n, pi, rep, origin }, stats))
}
