//! DIMACS shortest-path `.gr` text format.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{check_guard, Edge, Graph};

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} {tok:?}")))
}

/// Parses `c` comments, one `p sp n m` header and `m` arc lines with
/// 1-indexed endpoints.
pub fn load_dimacs(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let mut toks = raw.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some(t) if t.starts_with('c') => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(perr(line, "duplicate problem line"));
                }
                let kind: String = field(toks.next(), line, "problem kind")?;
                if kind != "sp" {
                    return Err(perr(line, format!("expected 'sp', found {kind:?}")));
                }
                let n = field(toks.next(), line, "vertex count")?;
                let m = field(toks.next(), line, "arc count")?;
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
                header = Some((n, m));
                edges.reserve(m);
            }
            Some("a") => {
                let (n, m) = header.ok_or_else(|| perr(line, "arc before problem line"))?;
                let u: usize = field(toks.next(), line, "tail")?;
                let v: usize = field(toks.next(), line, "head")?;
                let w: i64 = field(toks.next(), line, "weight")?;
                if toks.next().is_some() {
                    return Err(perr(line, "trailing tokens"));
                }
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(perr(line, format!("vertex {x} out of range 1..={n}")));
                    }
                }
                if check_guard(n, w.unsigned_abs()).is_err() {
                    return Err(perr(line, format!("weight {w} exceeds the magnitude bound for n={n}")));
                }
                if edges.len() == m {
                    return Err(perr(line, format!("more than the declared {m} arcs")));
                }
                edges.push(Edge::new(u - 1, v - 1, w));
            }
            Some(t) => return Err(perr(line, format!("unknown line type {t:?}"))),
        }
    }
    let (n, m) = header.ok_or_else(|| perr(last.max(1), "missing problem line"))?;
    if edges.len() != m {
        return Err(perr(last.max(1), format!("declared {m} arcs, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

/// Writes the graph back with edges in storage order.
pub fn dump_dimacs(g: &Graph) -> String {
    let mut s = String::with_capacity(16 + g.m() * 16);
    writeln!(s, "p sp {} {}", g.n(), g.m()).unwrap();
    for e in g.edges() {
        writeln!(s, "a {} {} {}", e.tail + 1, e.head + 1, e.weight).unwrap();
    }
    s
}
