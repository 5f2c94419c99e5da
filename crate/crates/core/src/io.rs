//! Line-oriented text formats with versioned headers: oriented labelings,
//! Skolem systems, nested-construction records, plain edge lists, and DOT
//! drawings. Serialization round-trips bit-exactly.

use crate::error::{Error, Result};
use crate::graph::{Graph, Snowflake, TwoNestedGraph};
use crate::labeling::{Arc, OrientedLabeling};
use crate::nested::NestedLabeling;
use crate::skolem::{SkolemSystem, ZeroSumSystem};
use crate::snowflake::Provenance;
use std::fmt::Write as _;

fn parse_kv<'a>(token: &'a str, key: &str) -> Result<&'a str> {
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| Error::Parse(format!("expected {key}=..., got {token}")))
}

// ---------------------------------------------------------------------------
// Oriented labelings
// ---------------------------------------------------------------------------

/// Header line plus one `tail head label` record per edge; the optional
/// provenance line names the construction path.
pub fn write_labeling(
    l: &OrientedLabeling,
    k: u64,
    t: u8,
    r: u64,
    provenance: Option<Provenance>,
) -> String {
    let mut out = String::new();
    writeln!(out, "labeling v1 M={} k={k} t={t} r={r}", l.size()).unwrap();
    if let Some(p) = provenance {
        writeln!(out, "provenance {p}").unwrap();
    }
    for a in &l.arcs {
        writeln!(out, "{} {} {}", a.tail, a.head, a.label).unwrap();
    }
    out
}

/// A parsed labeling file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelingFile {
    pub labeling: OrientedLabeling,
    pub k: u64,
    pub t: u8,
    pub r: u64,
    pub provenance: Option<String>,
}

pub fn read_labeling(text: &str) -> Result<LabelingFile> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty labeling file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 6 || tokens[0] != "labeling" || tokens[1] != "v1" {
        return Err(Error::Parse(format!("bad labeling header: {header}")));
    }
    let m: usize = parse_kv(tokens[2], "M")?.parse().map_err(|_| bad(header))?;
    let k: u64 = parse_kv(tokens[3], "k")?.parse().map_err(|_| bad(header))?;
    let t: u8 = parse_kv(tokens[4], "t")?.parse().map_err(|_| bad(header))?;
    let r: u64 = parse_kv(tokens[5], "r")?.parse().map_err(|_| bad(header))?;

    let mut provenance = None;
    let mut arcs = Vec::with_capacity(m);
    for line in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(p) = line.strip_prefix("provenance ") {
            provenance = Some(p.to_string());
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("bad arc record: {line}")));
        }
        arcs.push(Arc {
            tail: f[0].parse().map_err(|_| bad(line))?,
            head: f[1].parse().map_err(|_| bad(line))?,
            label: f[2].parse().map_err(|_| bad(line))?,
        });
    }
    if arcs.len() != m {
        return Err(Error::Parse(format!("header said M={m}, found {} arcs", arcs.len())));
    }
    Ok(LabelingFile {
        labeling: OrientedLabeling::new(arcs),
        k,
        t,
        r,
        provenance,
    })
}

fn bad(line: &str) -> Error {
    Error::Parse(format!("bad field in: {line}"))
}

// ---------------------------------------------------------------------------
// Skolem systems
// ---------------------------------------------------------------------------

/// Header plus one block per line of signed integers; distinguished
/// elements carry a trailing asterisk.
pub fn write_system(s: &SkolemSystem, distinguished: Option<&[i64]>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "skolem-system v1 n={} k={} t={} r={} M={}",
        s.order(),
        s.k,
        s.t,
        s.r,
        s.size()
    )
    .unwrap();
    for (i, block) in s.blocks.iter().enumerate() {
        let mut marked = false;
        let line: Vec<String> = block
            .iter()
            .map(|&d| {
                if !marked && distinguished.is_some_and(|z| z[i] == d) {
                    marked = true;
                    format!("{d}*")
                } else {
                    d.to_string()
                }
            })
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

pub fn write_zero_sum_system(z: &ZeroSumSystem) -> String {
    write_system(&z.system, Some(&z.distinguished))
}

/// A parsed system file; distinguished elements are present when every
/// block carried a starred entry.
pub fn read_system(text: &str) -> Result<(SkolemSystem, Option<Vec<i64>>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty system file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 7 || tokens[0] != "skolem-system" || tokens[1] != "v1" {
        return Err(Error::Parse(format!("bad system header: {header}")));
    }
    let n: usize = parse_kv(tokens[2], "n")?.parse().map_err(|_| bad(header))?;
    let k: u64 = parse_kv(tokens[3], "k")?.parse().map_err(|_| bad(header))?;
    let t: u8 = parse_kv(tokens[4], "t")?.parse().map_err(|_| bad(header))?;
    let r: u64 = parse_kv(tokens[5], "r")?.parse().map_err(|_| bad(header))?;
    let m: usize = parse_kv(tokens[6], "M")?.parse().map_err(|_| bad(header))?;

    let mut blocks = Vec::with_capacity(n);
    let mut distinguished: Vec<Option<i64>> = Vec::with_capacity(n);
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let mut block = Vec::new();
        let mut mark = None;
        for tok in line.split_whitespace() {
            let (body, starred) = match tok.strip_suffix('*') {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let v: i64 = body.parse().map_err(|_| bad(line))?;
            if starred {
                mark = Some(v);
            }
            block.push(v);
        }
        blocks.push(block);
        distinguished.push(mark);
    }
    if blocks.len() != n {
        return Err(Error::Parse(format!("header said n={n}, found {} blocks", blocks.len())));
    }
    let system = SkolemSystem { blocks, k, t, r };
    if system.size() != m {
        return Err(Error::Parse(format!("header said M={m}, blocks hold {}", system.size())));
    }
    let z: Option<Vec<i64>> = distinguished.into_iter().collect();
    Ok((system, z))
}

// ---------------------------------------------------------------------------
// Nested-construction records
// ---------------------------------------------------------------------------

/// Machine form of a constructed two-nested instance: parameters, chord
/// positions, the φ-sequence, and the base edge labels.
pub fn write_nested(n: &NestedLabeling) -> String {
    let p = &n.params;
    let mut out = String::new();
    writeln!(
        out,
        "nested v1 m1={} m2={} m={} t={} case={} cw={} fw={}",
        p.m1, p.m2, p.m, p.t, p.case, p.c_w, p.f_w
    )
    .unwrap();
    writeln!(out, "positions {}", join(n.graph.chord_positions())).unwrap();
    writeln!(out, "phi {}", join(n.phi_sequence())).unwrap();
    writeln!(out, "f {}", join(&n.edge_labels)).unwrap();
    out
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// A parsed nested record, sufficient to rebuild the graph and labeling.
#[derive(Debug, Clone)]
pub struct NestedFile {
    pub m1: usize,
    pub m2: usize,
    pub t: u8,
    pub positions: Vec<usize>,
    pub phi: Vec<u64>,
    pub f: Vec<u64>,
}

pub fn read_nested(text: &str) -> Result<NestedFile> {
    let mut m1 = None;
    let mut m2 = None;
    let mut t = None;
    let mut positions = Vec::new();
    let mut phi = Vec::new();
    let mut f = Vec::new();
    for line in text.lines() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.first() {
            Some(&"nested") => {
                if tokens.get(1) != Some(&"v1") {
                    return Err(Error::Parse(format!("bad nested header: {line}")));
                }
                for tok in &tokens[2..] {
                    if let Ok(v) = parse_kv(tok, "m1") {
                        m1 = Some(v.parse().map_err(|_| bad(line))?);
                    } else if let Ok(v) = parse_kv(tok, "m2") {
                        m2 = Some(v.parse().map_err(|_| bad(line))?);
                    } else if let Ok(v) = parse_kv(tok, "t") {
                        t = Some(v.parse().map_err(|_| bad(line))?);
                    }
                }
            }
            Some(&"positions") => {
                positions = tokens[1..]
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
            }
            Some(&"phi") => {
                phi = tokens[1..]
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
            }
            Some(&"f") => {
                f = tokens[1..]
                    .iter()
                    .map(|s| s.parse().map_err(|_| bad(line)))
                    .collect::<Result<_>>()?;
            }
            _ => {}
        }
    }
    match (m1, m2, t) {
        (Some(m1), Some(m2), Some(t)) if !positions.is_empty() && !phi.is_empty() => Ok(NestedFile {
            m1,
            m2,
            t,
            positions,
            phi,
            f,
        }),
        _ => Err(Error::Parse("incomplete nested record".into())),
    }
}

// ---------------------------------------------------------------------------
// Graphs: edge list and DOT
// ---------------------------------------------------------------------------

/// Plain edge list: `graph v1 vertices=<n> edges=<m>` then `u v` lines.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "graph v1 vertices={} edges={}", g.vertex_count(), g.size()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "graph" || tokens[1] != "v1" {
        return Err(Error::Parse(format!("bad graph header: {header}")));
    }
    let n: usize = parse_kv(tokens[2], "vertices")?.parse().map_err(|_| bad(header))?;
    let mut edges = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::Parse(format!("bad edge record: {line}")));
        }
        edges.push((
            f[0].parse().map_err(|_| bad(line))?,
            f[1].parse().map_err(|_| bad(line))?,
        ));
    }
    Graph::new(n, edges)
}

/// DOT drawing of a two-nested instance: base edges solid, chords dashed,
/// vertex labels from the φ-sequence when given.
pub fn write_nested_dot(g: &TwoNestedGraph, phi: Option<&[u64]>) -> String {
    let mut out = String::new();
    writeln!(out, "graph two_nested {{").unwrap();
    writeln!(out, "  layout=circo;").unwrap();
    for i in 0..g.m2() {
        match phi {
            Some(phi) => writeln!(out, "  v{} [label=\"{}\"];", i + 1, phi[i]).unwrap(),
            None => writeln!(out, "  v{};", i + 1).unwrap(),
        }
    }
    for i in 0..g.m2() {
        let j = (i + 1) % g.m2();
        writeln!(out, "  v{} -- v{};", i + 1, j + 1).unwrap();
    }
    for j in 0..g.m1() {
        let a = g.chord_positions()[j];
        let b = g.chord_positions()[(j + 1) % g.m1()];
        writeln!(out, "  v{a} -- v{b} [style=dashed];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// DOT drawing of a labeled snowflake as a digraph; center edges solid,
/// pendant edges dashed.
pub fn write_snowflake_dot(flake: &Snowflake, l: &OrientedLabeling) -> String {
    let g = flake.graph();
    let p = flake.star_count();
    let mut out = String::new();
    writeln!(out, "digraph snowflake {{").unwrap();
    writeln!(out, "  n0 [label=\"z\"];").unwrap();
    for i in 1..=p {
        writeln!(out, "  n{i} [label=\"v{i}\"];").unwrap();
    }
    for v in p + 1..g.vertex_count() {
        writeln!(out, "  n{v} [shape=point];").unwrap();
    }
    for a in &l.arcs {
        let pendant = a.tail > p || a.head > p;
        let style = if pendant { " style=dashed" } else { "" };
        writeln!(
            out,
            "  n{} -> n{} [label=\"{}\"{}];",
            a.tail, a.head, a.label, style
        )
        .unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Campaign result record: id, tri-state, witness path, nodes, millis.
pub fn write_campaign_record(
    id: &str,
    outcome: &str,
    witness_path: Option<&str>,
    nodes: u64,
    millis: u64,
) -> String {
    format!(
        "{id} {outcome} {} {nodes} {millis}\n",
        witness_path.unwrap_or("-")
    )
}
