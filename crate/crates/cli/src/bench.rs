use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use negpath::generate::random_graph;
use negpath::restricted::SolverParams;
use negpath::scaling::{solve_sssp, Verdict};
use negpath::sssp::{bellman_ford, BfOutcome};
use negpath::Graph;
use serde::Serialize;

use crate::commands::load_graph;
use crate::{BenchArgs, BenchEngine, EXIT_OK};

#[derive(Serialize)]
pub struct Level {
    /// Scale index and call number of the restricted call.
    pub round: String,
    pub depth: u32,
    pub m: usize,
    pub k: u64,
    pub growth: f64,
    pub case1: u64,
    pub case2: u64,
}

#[derive(Serialize)]
pub struct Timing {
    pub wall_ms: f64,
}

#[derive(Serialize)]
pub struct Row {
    pub instance: String,
    pub engine: &'static str,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "W")]
    pub w: u64,
    pub verdict: &'static str,
    pub depth: u32,
    /// Recursion levels that built a cover, in solve order.
    pub levels: Vec<Level>,
    pub case1: u64,
    pub case2: u64,
    /// The only field that varies between runs.
    pub nondeterministic: Timing,
}

enum Source {
    File(PathBuf),
    Random { n: usize, m: usize, wmin: i64, wmax: i64, seed: u64 },
}

impl Source {
    fn name(&self) -> String {
        match self {
            Source::File(p) => p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
            Source::Random { n, m, seed, .. } => format!("random-n{n}-m{m}-s{seed}"),
        }
    }

    fn load(&self) -> Result<Graph> {
        match *self {
            Source::File(ref p) => load_graph(p),
            Source::Random { n, m, wmin, wmax, seed } => Ok(random_graph(n, m, wmin, wmax, seed, false)?),
        }
    }
}

fn sources(a: &BenchArgs) -> Result<Vec<Source>> {
    if let Some(dir) = &a.corpus {
        let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
            .with_context(|| format!("reading corpus {}", dir.display()))?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()
            .with_context(|| format!("reading corpus {}", dir.display()))?;
        files.retain(|p| p.extension().is_some_and(|x| x == "gr"));
        files.sort();
        return Ok(files.into_iter().map(Source::File).collect());
    }
    let Some(n) = a.n else { bail!("bench needs --corpus or --n") };
    let m = a.m.unwrap_or(4 * n);
    Ok((0..a.count as u64)
        .map(|i| Source::Random { n, m, wmin: a.wmin, wmax: a.wmax, seed: a.seed + i })
        .collect())
}

fn run_one(name: &str, g: &Graph, s: usize, engine: BenchEngine, params: &SolverParams) -> Result<Row> {
    let mut row = Row {
        instance: name.to_string(),
        engine: "bf",
        n: g.n(),
        m: g.m(),
        w: g.max_abs_weight(),
        verdict: "distances",
        depth: 0,
        levels: Vec::new(),
        case1: 0,
        case2: 0,
        nondeterministic: Timing { wall_ms: 0.0 },
    };
    let t = Instant::now();
    match engine {
        BenchEngine::Bf => {
            if let BfOutcome::NegativeCycle(_) = bellman_ford(g, s)? {
                row.verdict = "negative_cycle";
            }
        }
        _ => {
            let rep = solve_sssp(g, s, params)?;
            row.engine = "scaling";
            if let Verdict::NegativeCycle { .. } = rep.verdict {
                row.verdict = "negative_cycle";
            }
            for r in &rep.rounds {
                row.depth = row.depth.max(r.depth);
                for l in r.levels.iter().filter(|l| !l.base_case) {
                    row.case1 += l.case1;
                    row.case2 += l.case2;
                    row.levels.push(Level {
                        round: format!("j{}c{}", r.scale, r.call),
                        depth: l.depth,
                        m: l.m,
                        k: l.k,
                        growth: l.growth,
                        case1: l.case1,
                        case2: l.case2,
                    });
                }
            }
        }
    }
    row.nondeterministic.wall_ms = t.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

pub fn run(a: BenchArgs) -> Result<u8> {
    let srcs = sources(&a)?;
    let engines: &[BenchEngine] = match a.engine {
        BenchEngine::Both => &[BenchEngine::Scaling, BenchEngine::Bf],
        BenchEngine::Scaling => &[BenchEngine::Scaling],
        BenchEngine::Bf => &[BenchEngine::Bf],
    };
    let params = a.solver.params();
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Vec<Row>>>>> = Mutex::new((0..srcs.len()).map(|_| None).collect());
    let work = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        let Some(src) = srcs.get(i) else { break };
        let rows = src.load().and_then(|g| {
            if a.source == 0 || a.source > g.n() {
                bail!("source {} out of range for {}", a.source, src.name());
            }
            engines.iter().map(|&e| run_one(&src.name(), &g, a.source - 1, e, &params)).collect()
        });
        slots.lock().expect("bench slots")[i] = Some(rows);
    };
    std::thread::scope(|sc| {
        for _ in 1..a.jobs.max(1) {
            sc.spawn(work);
        }
        work();
    });
    let mut rows = Vec::new();
    for r in slots.into_inner().expect("bench slots") {
        rows.extend(r.expect("every slot filled")?);
    }
    let mut s = serde_json::to_string_pretty(&rows)?;
    s.push('\n');
    print!("{s}");
    Ok(EXIT_OK)
}
