use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use negpath::barrier::{audit_family, gen_barrier, BarrierMeta, BarrierOverrides, CoverFamily};
use negpath::cover::{paper_cover_lambda, path_cover, PathCoverParams, Preset, Projection, ProjectionJson, PRACTICAL_LAMBDA};
use negpath::dimacs::{dump_dimacs, load_dimacs};
use negpath::generate::{cycle_graph, random_graph, restricted_instance};
use negpath::restricted::SolverParams;
use negpath::scaling::{solve_sssp, Verdict};
use negpath::sssp::{bellman_ford, bellman_ford_neg_inf, BfOutcome, Cycle, ShortestPathResult};
use negpath::verify::{verify_clustered, verify_path_covering, verify_projection, verify_sssp, CoverCheck, VerifyReport};
use negpath::{Dist, Graph};
use serde::Serialize;

use crate::{
    CoverArgs, Engine, GenArgs, Generator, PresetArg, SolveArgs, SolverArgs, VerifyArgs, EXIT_CYCLE, EXIT_INPUT, EXIT_OK,
    EXIT_VERIFY,
};

pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    let text = read_text(path)?;
    load_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

/// 1-indexed vertex flag to an internal id.
fn vertex_arg(v: usize, n: usize) -> Result<usize> {
    if v == 0 || v > n {
        bail!("vertex {v} out of range 1..={n}");
    }
    Ok(v - 1)
}

impl SolverArgs {
    pub fn params(&self) -> SolverParams {
        let mut p = match self.preset {
            PresetArg::Paper => SolverParams::paper(),
            PresetArg::Practical => SolverParams::practical(),
        };
        p.lambda = self.lambda;
        p.k0 = self.k0;
        p.probe &= !self.no_probe;
        p.check_invariants = self.check_invariants;
        p
    }
}

#[derive(Serialize)]
struct SolveJson<'a> {
    engine: &'a str,
    #[serde(flatten)]
    verdict: &'a Verdict,
    /// Distances with `-inf` below a negative cycle; bf engine only.
    #[serde(skip_serializing_if = "Option::is_none")]
    dist: Option<Vec<Dist>>,
}

pub fn solve(a: SolveArgs) -> Result<u8> {
    let g = load_graph(&a.input)?;
    let s = vertex_arg(a.source, g.n())?;
    let (verdict, dist) = match a.engine {
        Engine::Scaling => (solve_sssp(&g, s, &a.solver.params())?.verdict, None),
        Engine::Bf => match bellman_ford(&g, s)? {
            BfOutcome::Distances(result) => (Verdict::Distances { result }, None),
            BfOutcome::NegativeCycle(cycle) => (Verdict::NegativeCycle { cycle }, Some(bellman_ford_neg_inf(&g, s)?.dist)),
        },
    };
    if let (true, Verdict::Distances { result }) = (a.verify, &verdict) {
        let report = verify_sssp(&g, s, result);
        if !report.pass {
            eprint!("certification failed\n{}", to_json(&report));
            return Ok(EXIT_VERIFY);
        }
    }
    let engine = match a.engine {
        Engine::Scaling => "scaling",
        Engine::Bf => "bf",
    };
    if a.json {
        print!("{}", to_json(&SolveJson { engine, verdict: &verdict, dist }));
    } else {
        match &verdict {
            Verdict::Distances { result } => print!("{}", distance_lines(&result.dist)),
            Verdict::NegativeCycle { cycle } => {
                print!("{}", cycle_lines(cycle));
                if let Some(d) = &dist {
                    print!("{}", distance_lines(d));
                }
            }
        }
    }
    Ok(match verdict {
        Verdict::Distances { .. } => EXIT_OK,
        Verdict::NegativeCycle { .. } => EXIT_CYCLE,
    })
}

pub fn distance_lines(dist: &[Dist]) -> String {
    let mut s = String::new();
    for (v, d) in dist.iter().enumerate() {
        writeln!(s, "d {} {d}", v + 1).unwrap();
    }
    s
}

fn cycle_lines(c: &Cycle) -> String {
    let vs: Vec<String> = c.vertices.iter().map(|v| (v + 1).to_string()).collect();
    format!("c negative cycle of weight {}\ncycle {}\n", c.weight, vs.join(" "))
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<VerifyReport>,
    /// Set when the check did not run.
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<String>,
}

impl Check {
    fn ran(name: &'static str, report: VerifyReport) -> Check {
        Check { name, report: Some(report), skipped: None }
    }

    fn failed(&self) -> bool {
        self.report.as_ref().is_some_and(|r| !r.pass)
    }
}

fn check_lines(checks: &[Check]) -> String {
    let mut s = String::new();
    for c in checks {
        match (&c.report, &c.skipped) {
            (Some(r), _) if r.pass => writeln!(s, "verify {} pass", c.name).unwrap(),
            (Some(r), _) => {
                let cx = serde_json::to_string(&r.counterexample).unwrap();
                writeln!(s, "verify {} FAIL {cx}", c.name).unwrap()
            }
            (None, Some(why)) => writeln!(s, "verify {} skipped: {why}", c.name).unwrap(),
            (None, None) => {}
        }
    }
    s
}

/// Projection, clustering and covering checks, run on up to `jobs` threads.
fn projection_checks(g: &Graph, p: &Projection, d: i64, bound: i64, budget: u64, rep_start: bool, jobs: usize) -> Vec<Check> {
    let proj = || Check::ran("projection", verify_projection(p, g));
    let clus = || Check::ran("clustered", verify_clustered(&p.carrier, bound));
    let cov = || match verify_path_covering(g, p, d, CoverCheck::Exhaustive { budget }, rep_start) {
        Ok(r) => Check::ran("covering", r),
        Err(e) => Check { name: "covering", report: None, skipped: Some(e.to_string()) },
    };
    if jobs <= 1 {
        return vec![proj(), clus(), cov()];
    }
    std::thread::scope(|sc| {
        let a = sc.spawn(proj);
        let b = sc.spawn(clus);
        let c = cov();
        vec![a.join().expect("check thread"), b.join().expect("check thread"), c]
    })
}

pub fn pathcover(a: CoverArgs) -> Result<u8> {
    let mut g = load_graph(&a.input)?;
    if let Some(id) = g.first_negative_edge() {
        if !a.truncate {
            let e = g.edge(id);
            eprintln!(
                "error: arc {} ({} -> {}) has weight {}; path covers need nonnegative weights (use --truncate)",
                id + 1,
                e.tail + 1,
                e.head + 1,
                e.weight
            );
            return Ok(EXIT_INPUT);
        }
        g = g.truncate_nonneg();
    }
    let preset: Preset = a.preset.into();
    let lambda = a.lambda.unwrap_or(match preset {
        Preset::Paper => paper_cover_lambda(g.n()),
        Preset::Practical => PRACTICAL_LAMBDA,
    });
    let params = PathCoverParams { d: a.d, lambda, preset };
    let (p, mut stats) = path_cover(&g, &params)?;
    let mut checks = Vec::new();
    if a.verify {
        let bound = match preset {
            Preset::Paper => (lambda as i64).saturating_mul(a.d),
            Preset::Practical => stats.realized_bound(a.d),
        };
        checks = projection_checks(&g, &p, a.d, bound, a.budget, true, 1);
        stats.max_scc_diameter = checks[1].report.as_ref().and_then(|r| r.measured.max_scc_diameter);
    }
    let pj = p.to_json();
    if let Some(path) = &a.out {
        write_text(path, &to_json(&pj))?;
    }
    if let Some(path) = &a.stats {
        write_text(path, &to_json(&stats))?;
    }
    if a.json {
        #[derive(Serialize)]
        struct Out<'a> {
            params: PathCoverParams,
            stats: &'a negpath::cover::CoverStats,
            #[serde(skip_serializing_if = "Option::is_none")]
            projection: Option<&'a ProjectionJson>,
            #[serde(skip_serializing_if = "Vec::is_empty")]
            verification: &'a Vec<Check>,
        }
        let projection = a.out.is_none().then_some(&pj);
        print!("{}", to_json(&Out { params, stats: &stats, projection, verification: &checks }));
    } else {
        let mut s = String::new();
        writeln!(s, "base {} vertices {} edges", stats.base_n, stats.base_m).unwrap();
        writeln!(s, "carrier {} vertices {} edges", stats.carrier_vertices, stats.carrier_edges).unwrap();
        writeln!(s, "sum_proj_deg {}", stats.sum_proj_deg).unwrap();
        writeln!(s, "case1 {} case2 {}", stats.case1, stats.case2).unwrap();
        writeln!(s, "realized_slack {} bound {}", stats.realized_slack, stats.realized_bound(a.d)).unwrap();
        s.push_str(&check_lines(&checks));
        print!("{s}");
    }
    Ok(if checks.iter().any(Check::failed) { EXIT_VERIFY } else { EXIT_OK })
}

pub fn verify(a: VerifyArgs) -> Result<u8> {
    let g = load_graph(&a.graph)?;
    let checks = if let Some(path) = &a.projection {
        let d = a.d.ok_or_else(|| anyhow!("--projection needs --d"))?;
        let pj: ProjectionJson = serde_json::from_str(&read_text(path)?).context("projection JSON")?;
        let mut p = Projection::from_json(&pj)?;
        if p.base_n != g.n() {
            bail!("projection base has {} vertices, graph has {}", p.base_n, g.n());
        }
        p.resolve_origins(&g);
        let bound = a.bound.unwrap_or_else(|| (a.lambda.unwrap_or(PRACTICAL_LAMBDA) as i64).saturating_mul(d));
        projection_checks(&g, &p, d, bound, a.budget, !a.any_start, a.jobs)
    } else if let Some(path) = &a.distances {
        let r = read_distances(&read_text(path)?)?;
        let s = match a.source {
            Some(v) => vertex_arg(v, g.n())?,
            None => r.source,
        };
        if r.dist.len() != g.n() || r.parent.len() != g.n() {
            bail!("distance file covers {} vertices, graph has {}", r.dist.len(), g.n());
        }
        vec![Check::ran("distances", verify_sssp(&g, s, &r))]
    } else {
        let fam_path = a.family.as_ref().expect("clap requires one artifact");
        let meta_path = a.meta.as_ref().expect("clap requires --meta with --family");
        let meta: BarrierMeta = serde_json::from_str(&read_text(meta_path)?).context("barrier metadata JSON")?;
        let ov = BarrierOverrides { l: Some(meta.l), r: Some(meta.r), m_star: Some(meta.m_star), d: Some(meta.d) };
        let b = gen_barrier(meta.m_target, meta.lambda, ov)?;
        if b.graph != g {
            bail!("graph does not match the barrier described by the metadata");
        }
        let fam: CoverFamily = serde_json::from_str(&read_text(fam_path)?).context("family JSON")?;
        let audit = audit_family(&b, &fam, true, a.budget)?;
        let pass = audit.bound_holds != Some(false);
        if a.json {
            print!("{}", to_json(&audit));
        } else {
            println!("premise {} incidence {} lower_bound {}", audit.premise, audit.incidence, audit.lower_bound);
            println!("coverage {}", serde_json::to_string(&audit.coverage).unwrap());
            println!("verify incidence {}", if pass { "pass" } else { "FAIL" });
        }
        return Ok(if pass { EXIT_OK } else { EXIT_VERIFY });
    };
    if a.json {
        print!("{}", to_json(&checks));
    } else {
        print!("{}", check_lines(&checks));
    }
    Ok(if checks.iter().any(Check::failed) { EXIT_VERIFY } else { EXIT_OK })
}

/// Accepts `solve --json` output or a bare result object.
fn read_distances(text: &str) -> Result<ShortestPathResult> {
    let v: serde_json::Value = serde_json::from_str(text).context("distances JSON")?;
    let inner = match v.get("result") {
        Some(r) => r.clone(),
        None if v.get("verdict").is_some() => bail!("the file holds no distances (verdict {})", v["verdict"]),
        None => v,
    };
    serde_json::from_value(inner).context("distances JSON")
}

pub fn gen(a: GenArgs) -> Result<u8> {
    let need = |x: Option<usize>, flag: &str| x.ok_or_else(|| anyhow!("`gen {:?}` needs --{flag}", a.kind));
    let (g, meta) = match a.kind {
        Generator::Random => {
            let g = random_graph(need(a.n, "n")?, need(a.m, "m")?, a.wmin, a.wmax, a.seed, a.self_loops)?;
            (g, None)
        }
        Generator::Restricted => {
            let smp = restricted_instance(need(a.n, "n")?, need(a.m, "m")?, a.neg_bias, a.seed)?;
            let meta = serde_json::json!({ "source": smp.source + 1, "rejected": smp.rejected });
            (smp.graph, Some(to_json(&meta)))
        }
        Generator::Cycle => (cycle_graph(need(a.n, "n")?)?, None),
        Generator::Barrier => {
            let ov = BarrierOverrides { l: a.l, r: a.r, m_star: a.m_star, d: a.d };
            let b = gen_barrier(need(a.m, "m")?, a.lambda, ov)?;
            (b.graph, Some(to_json(&b.meta)))
        }
    };
    let text = dump_dimacs(&g);
    match &a.out {
        Some(p) => write_text(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(m) = meta {
        match &a.meta {
            Some(p) => write_text(p, &m)?,
            None => eprint!("{m}"),
        }
    }
    Ok(EXIT_OK)
}
