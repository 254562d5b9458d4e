use negpath::cover::{
    layer_projections, paper_cover_lambda, path_cover, PathCoverParams, Preset, Projection, NO_ORIGIN,
};
use negpath::generate::{cycle_graph, random_graph};
use negpath::graph::log2_ceil;
use negpath::verify::{verify_clustered, verify_path_covering, verify_projection, CoverCheck, Counterexample};
use negpath::{Edge, Graph};
use proptest::prelude::*;

const EXHAUSTIVE: CoverCheck = CoverCheck::Exhaustive { budget: 2_000_000 };

/// a=0, b=1, c=2, d=3: two unit 2-cycles joined by b->c and d->a.
fn two_cycles() -> Graph {
    Graph::from_triples(4, &[(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1), (1, 2, 1), (3, 0, 1)]).unwrap()
}

/// The 7-vertex projection a' b' c' d' a'' b'' c'' that covers every
/// 3-path of `two_cycles` with SCC diameter 1.
fn chained_copies(with_last_edge: bool) -> Projection {
    let pi = vec![0, 1, 2, 3, 0, 1, 2];
    let mut t = vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 2, 1), (3, 4, 1), (4, 5, 1), (5, 4, 1)];
    if with_last_edge {
        t.push((5, 6, 1));
    }
    let carrier = Graph::from_triples(7, &t).unwrap();
    let origin = vec![NO_ORIGIN; carrier.m()];
    let mut p = Projection { carrier, base_n: 4, pi, rep: vec![Some(0), Some(1), Some(2), Some(3)], origin };
    p.resolve_origins(&two_cycles());
    p
}

#[test]
fn chained_copies_cover_three_paths() {
    let g = two_cycles();
    let p = chained_copies(true);
    assert!(verify_projection(&p, &g).pass);
    assert!(verify_clustered(&p.carrier, 1).pass);
    assert!(verify_path_covering(&g, &p, 3, EXHAUSTIVE, false).unwrap().pass);
}

#[test]
fn chained_copies_have_no_valid_start_copy_for_b() {
    // (b, a) lifts only from b'' while (b, c, d) lifts only from b', so no
    // single representative of b starts every lift.
    let g = two_cycles();
    let mut p = chained_copies(true);
    for rep_b in [1, 5] {
        p.rep[1] = Some(rep_b);
        let r = verify_path_covering(&g, &p, 3, EXHAUSTIVE, true).unwrap();
        assert!(!r.pass);
        let Some(Counterexample::Uncovered { path }) = r.counterexample else { panic!() };
        assert_eq!(path[0], 1);
    }
}

#[test]
fn dropping_the_last_edge_uncovers_a_path() {
    let g = two_cycles();
    let p = chained_copies(false);
    let r = verify_path_covering(&g, &p, 3, EXHAUSTIVE, false).unwrap();
    assert!(!r.pass);
    assert!(matches!(r.counterexample, Some(Counterexample::Uncovered { .. })));
}

#[test]
fn layering_the_two_cycle_parts() {
    let g = two_cycles();
    let parts = [
        Projection::induced(&g, &[0, 1]),
        Projection::induced(&g, &[2, 3]),
        Projection::induced(&g, &[0, 1]),
        Projection::induced(&g, &[2]),
    ];
    let p = layer_projections(&g, &parts).unwrap();
    assert_eq!(p.carrier.n(), 7);
    assert_eq!(p.pi, vec![0, 1, 2, 3, 0, 1, 2]);
    assert_eq!(p.rep, vec![Some(0), Some(1), Some(2), Some(3)]);
    assert!(verify_projection(&p, &g).pass);
    // Internal edges: 2 + 2 + 2 + 0. Cross edges go only to later
    // representatives, which leaves b' -> c'.
    let cross: Vec<(usize, usize)> =
        p.carrier.edges()[6..].iter().map(|e| (e.tail, e.head)).collect();
    assert_eq!(cross, vec![(1, 2)]);
}

#[test]
fn layering_one_part_is_identity() {
    let g = random_graph(8, 20, 0, 3, 1, true).unwrap();
    let p = Projection::identity(&g);
    assert_eq!(layer_projections(&g, std::slice::from_ref(&p)).unwrap(), p);
}

#[test]
fn layering_disconnected_parts_is_a_disjoint_union() {
    let g = Graph::from_triples(4, &[(0, 1, 1), (1, 0, 1), (2, 3, 2)]).unwrap();
    let p = layer_projections(&g, &[Projection::induced(&g, &[0, 1]), Projection::induced(&g, &[2, 3])]).unwrap();
    assert_eq!(p.carrier.m(), 3);
    assert!(verify_projection(&p, &g).pass);
}

#[test]
fn single_vertex_cover() {
    let g = Graph::empty(1);
    for d in [0, 5] {
        let (p, st) = path_cover(&g, &PathCoverParams::practical(d, 16)).unwrap();
        assert_eq!(p.carrier.n(), 1);
        assert_eq!(p.rep, vec![Some(0)]);
        assert_eq!(st.nodes, 1);
    }
}

#[test]
fn cycle_cover_with_full_radius() {
    for n in [2, 5, 9] {
        let g = cycle_graph(n).unwrap();
        let d = n as i64;
        let (p, st) = path_cover(&g, &PathCoverParams::practical(d, 16)).unwrap();
        assert!(verify_projection(&p, &g).pass);
        assert!(verify_path_covering(&g, &p, d, EXHAUSTIVE, true).unwrap().pass);
        assert!(verify_clustered(&p.carrier, st.realized_bound(d)).pass);
        assert!(st.sum_proj_deg >= 2 * n as u64);
    }
}

#[test]
fn middle_leaf_links_to_the_later_part_on_ties() {
    // A copy in a middle leaf whose exit vertex has copies in both the
    // earlier and the later sibling part.
    let seed: u64 = 11437194147717285218;
    let (n, m) = (1 + (seed.wrapping_mul(7919) % 12) as usize, (seed.wrapping_mul(104_729) % 31) as usize);
    let g = random_graph(n, m, 0, 2, seed, true).unwrap();
    let d = (seed % 7) as i64;
    let (p, _) = path_cover(&g, &PathCoverParams::practical(d, 1)).unwrap();
    let r = verify_path_covering(&g, &p, d, EXHAUSTIVE, true).unwrap();
    assert!(r.pass, "{:?}", r.counterexample);
}

#[test]
fn negative_input_is_rejected() {
    let g = Graph::from_triples(2, &[(0, 1, -1)]).unwrap();
    assert!(path_cover(&g, &PathCoverParams::practical(1, 16)).is_err());
    assert!(path_cover(&Graph::empty(2), &PathCoverParams::practical(-1, 16)).is_err());
    assert!(path_cover(&Graph::empty(2), &PathCoverParams::practical(1, 0)).is_err());
    assert!(path_cover(&Graph::empty(300), &PathCoverParams { d: 1, lambda: 16, preset: Preset::Paper }).is_err());
}

#[test]
fn cover_is_deterministic() {
    let g = random_graph(200, 900, 0, 4, 77, true).unwrap();
    let params = PathCoverParams::practical(6, 4);
    assert_eq!(path_cover(&g, &params).unwrap(), path_cover(&g, &params).unwrap());
}

#[test]
fn large_cover_is_valid_under_sampling() {
    let g = random_graph(2000, 8000, 0, 6, 3, false).unwrap();
    let d = 9;
    let (p, st) = path_cover(&g, &PathCoverParams::practical(d, 16)).unwrap();
    assert!(verify_projection(&p, &g).pass);
    let r = verify_path_covering(&g, &p, d, CoverCheck::Sampled { walks: 5000, seed: 1 }, true).unwrap();
    assert!(r.pass, "{:?}", r.counterexample);
    assert!(p.carrier.m() as u64 <= st.sum_proj_deg_out);
}

/// Exact form of `sum <= (1 + 100 L^2 / sqrt(lambda)) m`.
fn size_bound_holds(sum: u64, m: u64, l: u64, lambda: u64) -> bool {
    if sum <= m {
        return true;
    }
    let lhs = ((sum - m) as u128).pow(2) * lambda as u128;
    let rhs = (100 * l as u128 * l as u128 * m as u128).pow(2);
    lhs <= rhs
}

#[test]
fn paper_preset_bounds() {
    for seed in 0..40u64 {
        let n = 2 + (seed * 37 % 255) as usize;
        let m = (seed * 101 % 1000) as usize;
        let g = random_graph(n, m, 0, 3, seed, true).unwrap();
        let lambda = paper_cover_lambda(n);
        let d = 1 + (seed % 12) as i64;
        let (p, st) = path_cover(&g, &PathCoverParams::paper(n, d)).unwrap();
        assert!(st.max_i_out <= lambda / 4 && st.max_i_in <= lambda / 4);
        let l = log2_ceil(n) as u64;
        assert!(size_bound_holds(st.sum_proj_deg, g.m() as u64, l, lambda), "seed {seed}");
        assert!(verify_projection(&p, &g).pass);
        assert!(verify_clustered(&p.carrier, lambda as i64 * d).pass);
    }
}

fn small_graph() -> impl Strategy<Value = (Graph, i64, u64)> {
    (1usize..=12, 0usize..=30, any::<u64>(), 0i64..=6, prop::sample::select(vec![1u64, 2, 4, 16, 64]))
        .prop_map(|(n, m, seed, d, lambda)| (random_graph(n, m, 0, 2, seed, true).unwrap(), d, lambda))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn covers_are_valid((g, d, lambda) in small_graph()) {
        let (p, st) = path_cover(&g, &PathCoverParams::practical(d, lambda)).unwrap();
        prop_assert!(verify_projection(&p, &g).pass);
        let cov = verify_path_covering(&g, &p, d, EXHAUSTIVE, true).unwrap();
        prop_assert!(cov.pass, "{:?}", cov.counterexample);
        prop_assert!(verify_clustered(&p.carrier, st.realized_bound(d)).pass);
        prop_assert!(p.carrier.m() as u64 <= st.sum_proj_deg);
        prop_assert_eq!(st.carrier_vertices, p.carrier.n());
        let origins_match = p.origin.iter().enumerate().all(|(i, &o)| {
            let (e, f) = (p.carrier.edge(i), g.edge(o));
            f.tail == p.pi[e.tail] && f.head == p.pi[e.head] && f.weight == e.weight
        });
        prop_assert!(origins_match);
    }

    #[test]
    fn every_vertex_has_a_copy((g, d, lambda) in small_graph()) {
        let (p, _) = path_cover(&g, &PathCoverParams::practical(d, lambda)).unwrap();
        for v in 0..g.n() {
            let r = p.rep[v].expect("every base vertex is present");
            prop_assert_eq!(p.pi[r], v);
        }
    }
}

#[test]
fn union_of_edge_copies_is_homomorphic() {
    let g = random_graph(30, 100, 0, 5, 9, true).unwrap();
    let (p, _) = path_cover(&g, &PathCoverParams::practical(4, 2)).unwrap();
    let bad: Vec<&Edge> = p
        .carrier
        .edges()
        .iter()
        .filter(|e| !g.out_edges(p.pi[e.tail]).iter().any(|&id| g.edge(id).head == p.pi[e.head]))
        .collect();
    assert!(bad.is_empty());
}
