//! Browser bindings for the demo page in `www/`. Each export takes plain
//! values, returns a JSON string, and throws the error text on bad input.
//! The `*_json` functions are the same operations without the JS types.

use negpath::barrier::{find_uncovered_snake, gen_barrier, BarrierOverrides, CoverFamily, SnakeSearch};
use negpath::cover::{path_cover, PathCoverParams};
use negpath::dimacs::{dump_dimacs, load_dimacs};
use negpath::generate::random_graph;
use negpath::restricted::SolverParams;
use negpath::scaling::{solve_sssp, Verdict};
use negpath::verify::{verify_clustered, verify_path_covering, verify_projection, verify_sssp, CoverCheck};
use negpath::Dist;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Covering checks beyond this many paths are skipped in the page.
const PATH_BUDGET: u64 = 200_000;
const MAX_BARRIER_M: usize = 200_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn dist_json(d: Dist) -> Value {
    match d {
        Dist::Finite(x) => json!(x),
        Dist::PosInf => json!("inf"),
        Dist::NegInf => json!("-inf"),
    }
}

/// Random `.gr` text for the input box.
pub fn random_gr(n: usize, m: usize, wmin: i64, wmax: i64, seed: u64) -> Result<String, String> {
    random_graph(n, m, wmin, wmax, seed, false).map(|g| dump_dimacs(&g)).map_err(err)
}

/// Distances (1-indexed vertices) or a negative cycle.
pub fn solve_json(gr: &str, source: usize) -> Result<String, String> {
    let g = load_dimacs(gr).map_err(err)?;
    if source == 0 || source > g.n() {
        return Err(format!("source must be in 1..={}", g.n()));
    }
    let s = source - 1;
    let rep = solve_sssp(&g, s, &SolverParams::practical()).map_err(err)?;
    let scales = rep.rounds.iter().map(|r| r.scale).max().map_or(0, |j| j + 1);
    let out = match &rep.verdict {
        Verdict::Distances { result } => json!({
            "verdict": "distances",
            "certified": verify_sssp(&g, s, result).pass,
            "dist": result.dist.iter().map(|&d| dist_json(d)).collect::<Vec<_>>(),
            "scales": scales,
        }),
        Verdict::NegativeCycle { cycle } => json!({
            "verdict": "negative_cycle",
            "weight": cycle.weight,
            "cycle": cycle.vertices.iter().map(|v| v + 1).collect::<Vec<_>>(),
            "scales": scales,
        }),
    };
    Ok(out.to_string())
}

/// Builds a cover of a nonnegative graph and checks it.
pub fn cover_json(gr: &str, d: i64, lambda: u64) -> Result<String, String> {
    let g = load_dimacs(gr).map_err(err)?;
    let (p, st) = path_cover(&g, &PathCoverParams::practical(d, lambda)).map_err(err)?;
    let bound = st.realized_bound(d);
    let covering = match verify_path_covering(&g, &p, d, CoverCheck::Exhaustive { budget: PATH_BUDGET }, true) {
        Ok(r) => json!(r.pass),
        Err(_) => json!("skipped"),
    };
    let out = json!({
        "carrier_vertices": st.carrier_vertices,
        "carrier_edges": st.carrier_edges,
        "base_edges": g.m(),
        "sum_proj_deg": st.sum_proj_deg,
        "case1": st.case1,
        "case2": st.case2,
        "bound": bound,
        "copies": (0..g.n()).map(|v| p.pi.iter().filter(|&&x| x == v).count()).collect::<Vec<_>>(),
        "projection": verify_projection(&p, &g).pass,
        "clustered": verify_clustered(&p.carrier, bound).pass,
        "covering": covering,
    });
    Ok(out.to_string())
}

/// Barrier parameters, and the snake the adversary finds against `members`
/// subgraphs that each skip one cycle edge per layer.
pub fn barrier_json(m: usize, lambda: usize, members: usize) -> Result<String, String> {
    if m > MAX_BARRIER_M {
        return Err(format!("m is capped at {MAX_BARRIER_M} in the page"));
    }
    let b = gen_barrier(m, lambda, BarrierOverrides::default()).map_err(err)?;
    let (l, r) = (b.meta.l, b.meta.r);
    let family = CoverFamily {
        members: (0..members)
            .map(|i| {
                let skip: Vec<usize> = (0..l).map(|j| b.cycle_edge(j, (i + j) % r)).collect();
                (0..b.graph.m()).filter(|e| !skip.contains(e)).collect()
            })
            .collect(),
    };
    let adversary = match find_uncovered_snake(&b, &family, 100_000) {
        Ok(SnakeSearch::Uncovered { snake, constructed, .. }) => {
            json!({ "outcome": "uncovered", "leaf": snake.leaf, "positions": snake.positions, "constructed": constructed })
        }
        Ok(SnakeSearch::Covered) => json!({ "outcome": "covered" }),
        Ok(SnakeSearch::ClusteringViolation { member, layer }) => {
            json!({ "outcome": "clustering_violation", "member": member, "layer": layer })
        }
        Err(e) => json!({ "outcome": "error", "message": e.to_string() }),
    };
    let out = json!({
        "meta": b.meta,
        "snakes": b.snake_count().to_string(),
        "lower_bound": b.meta.m_star * l,
        "incidence": family.members.iter().map(Vec::len).sum::<usize>(),
        "adversary": adversary,
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn random(n: usize, m: usize, wmin: i32, wmax: i32, seed: u32) -> Result<String, JsValue> {
    random_gr(n, m, wmin.into(), wmax.into(), seed.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve(gr: &str, source: usize) -> Result<String, JsValue> {
    solve_json(gr, source).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn cover(gr: &str, d: i32, lambda: u32) -> Result<String, JsValue> {
    cover_json(gr, d.into(), lambda.into()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn barrier(m: usize, lambda: usize, members: usize) -> Result<String, JsValue> {
    barrier_json(m, lambda, members).map_err(|e| JsValue::from_str(&e))
}
