//! Resumable ball growing with unit-budget steps, and the middle-part
//! construction built from two finished balls.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sssp::{ShortestPathResult, INF};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Out,
    In,
}

/// Slack `num/den` of the thin-layer test `deg_i <= (1 + num/den) deg_{i-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slack {
    pub num: u64,
    pub den: u64,
}

impl Slack {
    pub fn new(num: u64, den: u64) -> Slack {
        assert!(den > 0, "slack denominator must be positive");
        Slack { num, den }
    }

    /// `cur <= (1 + num/den) * prev`, exactly. Both zero counts as thin.
    pub fn thin(self, cur: u64, prev: u64) -> bool {
        (self.den as u128) * (cur as u128) <= (self.den as u128 + self.num as u128) * (prev as u128)
    }
}

/// Scratch arrays reused across growers; a generation counter makes reset
/// O(1).
#[derive(Clone, Debug)]
pub struct GrowScratch {
    gen: u32,
    seen: Vec<u32>,
    settled: Vec<u32>,
    dist: Vec<i64>,
    parent: Vec<usize>,
}

pub(crate) const NO_EDGE: usize = usize::MAX;

impl GrowScratch {
    pub fn new(n: usize) -> GrowScratch {
        GrowScratch {
            gen: 0,
            seen: vec![0; n],
            settled: vec![0; n],
            dist: vec![INF; n],
            parent: vec![NO_EDGE; n],
        }
    }

    fn reset(&mut self) {
        self.gen = self.gen.wrapping_add(1);
        if self.gen == 0 {
            self.seen.iter_mut().for_each(|x| *x = 0);
            self.settled.iter_mut().for_each(|x| *x = 0);
            self.gen = 1;
        }
    }

    fn dist(&self, v: usize) -> i64 {
        if self.seen[v] == self.gen {
            self.dist[v]
        } else {
            INF
        }
    }

    pub(crate) fn is_settled(&self, v: usize) -> bool {
        self.settled[v] == self.gen
    }

    /// Tree edge into `v` (towards the center for backward balls).
    pub(crate) fn parent(&self, v: usize) -> Option<usize> {
        if self.seen[v] == self.gen && self.parent[v] != NO_EDGE {
            Some(self.parent[v])
        } else {
            None
        }
    }
}

/// Region membership: `mark[v] == tag`.
#[derive(Clone, Copy)]
pub struct Region<'a> {
    pub mark: &'a [u32],
    pub tag: u32,
}

impl Region<'_> {
    pub fn contains(&self, v: usize) -> bool {
        self.mark[v] == self.tag
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowState {
    Running,
    Done,
}

/// Dijkstra from `center` inside a region, one memory access per step.
/// Settling a vertex charges its total degree in the top-level graph.
pub struct BallGrower<'a> {
    g: &'a Graph,
    region: Region<'a>,
    dir: Direction,
    d: i64,
    slack: Slack,
    scratch: &'a mut GrowScratch,
    heap: BinaryHeap<Reverse<(i64, usize)>>,
    settled: Vec<usize>,
    prev_count: usize,
    deg_prev: u64,
    deg_cur: u64,
    layer: u64,
    pending: u64,
    consumed: u64,
    steps: u64,
    done: bool,
}

impl<'a> BallGrower<'a> {
    pub fn new(
        g: &'a Graph,
        region: Region<'a>,
        center: usize,
        dir: Direction,
        d: i64,
        slack: Slack,
        scratch: &'a mut GrowScratch,
    ) -> Result<BallGrower<'a>> {
        if !region.contains(center) {
            return Err(Error::NotInRegion(center));
        }
        if d < 0 {
            return Err(Error::Param(format!("radius step must be nonnegative, got {d}")));
        }
        scratch.reset();
        let gen = scratch.gen;
        scratch.seen[center] = gen;
        scratch.dist[center] = 0;
        scratch.parent[center] = NO_EDGE;
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0, center)));
        Ok(BallGrower {
            g,
            region,
            dir,
            d,
            slack,
            scratch,
            heap,
            settled: Vec::new(),
            prev_count: 0,
            deg_prev: 0,
            deg_cur: 0,
            layer: 0,
            pending: 0,
            consumed: 0,
            steps: 0,
            done: false,
        })
    }

    fn radius(&self) -> i64 {
        (self.layer as i64).saturating_mul(self.d)
    }

    /// Pops stale heap entries and returns the smallest live key.
    fn peek(&mut self) -> Option<(i64, usize)> {
        while let Some(&Reverse((k, v))) = self.heap.peek() {
            if self.scratch.is_settled(v) || k > self.scratch.dist(v) {
                self.heap.pop();
            } else {
                return Some((k, v));
            }
        }
        None
    }

    fn settle(&mut self, v: usize, dv: i64) {
        self.heap.pop();
        let gen = self.scratch.gen;
        self.scratch.settled[v] = gen;
        self.settled.push(v);
        let ids = match self.dir {
            Direction::Out => self.g.out_edges(v),
            Direction::In => self.g.in_edges(v),
        };
        for &id in ids {
            let e = self.g.edge(id);
            let x = if self.dir == Direction::Out { e.head } else { e.tail };
            if !self.region.contains(x) || self.scratch.is_settled(x) {
                continue;
            }
            let nd = dv + e.weight;
            if nd < self.scratch.dist(x) {
                self.scratch.seen[x] = gen;
                self.scratch.dist[x] = nd;
                self.scratch.parent[x] = id;
                self.heap.push(Reverse((nd, x)));
            }
        }
        let deg = self.g.deg_total(v) as u64;
        self.deg_cur += deg;
        self.pending = deg;
    }

    /// Advances by at most one unit of budget.
    pub fn step(&mut self) -> GrowState {
        if self.done {
            return GrowState::Done;
        }
        self.steps += 1;
        loop {
            if self.pending > 0 {
                self.pending -= 1;
                self.consumed += 1;
                return GrowState::Running;
            }
            match self.peek() {
                Some((k, v)) if k <= self.radius() => self.settle(v, k),
                _ => {
                    if self.layer > 0 && self.slack.thin(self.deg_cur, self.deg_prev) {
                        self.done = true;
                        return GrowState::Done;
                    }
                    self.deg_prev = self.deg_cur;
                    self.prev_count = self.settled.len();
                    self.layer += 1;
                }
            }
        }
    }

    pub fn run_to_end(&mut self) {
        while self.step() == GrowState::Running {}
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// The index `i` of the thin layer, once done.
    pub fn layer(&self) -> u64 {
        self.layer
    }

    /// `Ball(center, i*d)` in settle order.
    pub fn ball(&self) -> &[usize] {
        &self.settled
    }

    /// `Ball(center, (i-1)*d)`, a prefix of `ball()`.
    pub fn inner_ball(&self) -> &[usize] {
        &self.settled[..self.prev_count]
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn deg_ball(&self) -> u64 {
        self.deg_cur
    }

    pub fn deg_inner(&self) -> u64 {
        self.deg_prev
    }

    pub fn scratch(&self) -> &GrowScratch {
        self.scratch
    }
}

/// Convenience wrapper: grow to completion over the region `vertices`.
pub fn grow_thin_layer(
    g: &Graph,
    vertices: &[usize],
    u: usize,
    dir: Direction,
    d: i64,
    slack: Slack,
) -> Result<GrownBall> {
    let mut mark = vec![0u32; g.n()];
    for &v in vertices {
        mark[v] = 1;
    }
    let mut scratch = GrowScratch::new(g.n());
    let mut gr = BallGrower::new(g, Region { mark: &mark, tag: 1 }, u, dir, d, slack, &mut scratch)?;
    gr.run_to_end();
    let mut inner = gr.inner_ball().to_vec();
    let mut ball = gr.ball().to_vec();
    inner.sort_unstable();
    ball.sort_unstable();
    Ok(GrownBall { layer: gr.layer(), inner, ball, consumed: gr.consumed(), steps: gr.steps() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrownBall {
    pub layer: u64,
    pub inner: Vec<usize>,
    pub ball: Vec<usize>,
    pub consumed: u64,
    pub steps: u64,
}

/// Vertices of the middle part: every tree path from the center to a member
/// of `B_out ∩ B_in` in the forward tree, plus every tree path from such a
/// member back to the center in the backward tree.
///
/// `t_out` holds parent edges of `g`; `t_in` holds parent edges of `g` as
/// well, each pointing from a vertex towards the center.
pub fn build_middle_graph(
    g: &Graph,
    b_out: &[usize],
    b_in: &[usize],
    t_out: &ShortestPathResult,
    t_in: &ShortestPathResult,
) -> Result<Vec<usize>> {
    let n = g.n();
    let mut in_out = vec![false; n];
    let mut in_in = vec![false; n];
    b_out.iter().for_each(|&v| in_out[v] = true);
    b_in.iter().for_each(|&v| in_in[v] = true);
    let mut mark = vec![false; n];
    let mut result = Vec::new();
    let bad = |why: &str| Error::Invariant(format!("middle graph: {why}"));
    for &m in b_out.iter().filter(|&&v| in_in[v]) {
        for (tree, forward, members) in [(t_out, true, &in_out), (t_in, false, &in_in)] {
            let mut x = m;
            let mut hops = 0;
            loop {
                if !members[x] {
                    return Err(bad("tree leaves its ball"));
                }
                if !mark[x] {
                    mark[x] = true;
                    result.push(x);
                }
                let Some(e) = tree.parent[x] else {
                    if x != tree.source {
                        return Err(bad("tree path does not reach the center"));
                    }
                    break;
                };
                let e = g.edge(e);
                let (from, to) = if forward { (e.tail, e.head) } else { (e.head, e.tail) };
                if to != x {
                    return Err(bad("parent edge does not enter its vertex"));
                }
                x = from;
                hops += 1;
                if hops > n {
                    return Err(bad("parent links form a cycle"));
                }
            }
        }
    }
    result.sort_unstable();
    Ok(result)
}
