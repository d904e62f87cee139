//! Text format for decompositions.
//!
//! ```text
//! TKD <num_nodes> <width>
//! ROOT <node_id>
//! B <node_id> <bag_size> <v1> ... <vb>
//! TE <parent_id> <child_id>
//! L <count> <v1> ... <vc>
//! ```
//!
//! The header `TFD` marks a triangle-free decomposition of the hat graph.
//! Node ids are arbitrary non-negative integers; they are renumbered in
//! increasing order on read.

use std::collections::BTreeMap;

use crate::decomposition::tree::{NodeId, TreeKFreeDecomposition, TriangleFreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{Vertex, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    KFree,
    TriangleFree,
}

impl DecompositionKind {
    fn tag(self) -> &'static str {
        match self {
            DecompositionKind::KFree => "TKD",
            DecompositionKind::TriangleFree => "TFD",
        }
    }
}

pub fn write_decomposition(kind: DecompositionKind, d: &TreeKFreeDecomposition) -> String {
    let mut out = format!("{} {} {}\nROOT {}\n", kind.tag(), d.num_nodes(), d.width(), d.root() + 1);
    for (x, bag) in d.bags().iter().enumerate() {
        out.push_str(&format!("B {} {}", x + 1, bag.len()));
        for v in bag {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for (p, c) in d.tree_edges() {
        out.push_str(&format!("TE {} {}\n", p + 1, c + 1));
    }
    out.push_str(&format!("L {}", d.leafset().len()));
    for v in d.leafset() {
        out.push_str(&format!(" {v}"));
    }
    out.push('\n');
    out
}

pub fn write_tkd(d: &TreeKFreeDecomposition) -> String {
    write_decomposition(DecompositionKind::KFree, d)
}

pub fn write_tfd(d: &TriangleFreeDecomposition) -> String {
    write_decomposition(DecompositionKind::TriangleFree, &d.0)
}

fn number<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, got `{tok}`")))
}

fn vertex_list<'a>(
    line: usize,
    tok: &mut impl Iterator<Item = &'a str>,
) -> Result<VertexSet> {
    let count: usize = number(line, tok.next(), "a count")?;
    let mut out = VertexSet::new();
    for _ in 0..count {
        out.insert(number::<Vertex>(line, tok.next(), "a vertex id")?);
    }
    if out.len() != count {
        return Err(Error::parse(line, "repeated vertex in list"));
    }
    if tok.next().is_some() {
        return Err(Error::parse(line, "more vertices than announced"));
    }
    Ok(out)
}

/// Parses either format and reports which header it carried.
pub fn parse_decomposition(text: &str) -> Result<(DecompositionKind, TreeKFreeDecomposition)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let mut tok = header.split_whitespace();
    let kind = match tok.next() {
        Some("TKD") => DecompositionKind::KFree,
        Some("TFD") => DecompositionKind::TriangleFree,
        _ => return Err(Error::parse(hl, "expected `TKD` or `TFD` header")),
    };
    let nodes: usize = number(hl, tok.next(), "the node count")?;
    let width: usize = number(hl, tok.next(), "the width")?;
    if tok.next().is_some() {
        return Err(Error::parse(hl, "trailing tokens after header"));
    }

    let mut root = None;
    let mut bags: BTreeMap<usize, VertexSet> = BTreeMap::new();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut leafset = None;
    for (ln, line) in lines {
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("ROOT") => {
                if root.is_some() {
                    return Err(Error::parse(ln, "second ROOT line"));
                }
                root = Some((ln, number::<usize>(ln, tok.next(), "a node id")?));
                if tok.next().is_some() {
                    return Err(Error::parse(ln, "trailing tokens after ROOT"));
                }
            }
            Some("B") => {
                let id: usize = number(ln, tok.next(), "a node id")?;
                let bag = vertex_list(ln, &mut tok)?;
                if bags.insert(id, bag).is_some() {
                    return Err(Error::parse(ln, format!("node {id} has two bags")));
                }
            }
            Some("TE") => {
                let p: usize = number(ln, tok.next(), "a parent id")?;
                let c: usize = number(ln, tok.next(), "a child id")?;
                if tok.next().is_some() {
                    return Err(Error::parse(ln, "trailing tokens after tree edge"));
                }
                edges.push((ln, p, c));
            }
            Some("L") => {
                if leafset.is_some() {
                    return Err(Error::parse(ln, "second L line"));
                }
                leafset = Some(vertex_list(ln, &mut tok)?);
            }
            Some(other) => return Err(Error::parse(ln, format!("unknown line type `{other}`"))),
            None => unreachable!("blank lines are filtered"),
        }
    }
    if bags.len() != nodes {
        return Err(Error::Validation(format!(
            "header announces {nodes} nodes but {} bags are given",
            bags.len()
        )));
    }
    let index: BTreeMap<usize, NodeId> = bags.keys().enumerate().map(|(i, &id)| (id, i)).collect();
    let (rl, root) = root.ok_or_else(|| Error::parse(hl, "missing ROOT line"))?;
    let root = *index
        .get(&root)
        .ok_or_else(|| Error::parse(rl, format!("root {root} has no bag")))?;
    let mut tree_edges = Vec::with_capacity(edges.len());
    for (ln, p, c) in edges {
        match (index.get(&p), index.get(&c)) {
            (Some(&p), Some(&c)) => tree_edges.push((p, c)),
            _ => return Err(Error::parse(ln, "tree edge names a node without a bag")),
        }
    }
    let d = TreeKFreeDecomposition::new(
        bags.into_values().collect(),
        root,
        &tree_edges,
        leafset.unwrap_or_default(),
    )?;
    if d.width() != width {
        return Err(Error::parse(
            hl,
            format!("header width {width} but the decomposition has width {}", d.width()),
        ));
    }
    Ok((kind, d))
}

pub fn parse_tkd(text: &str) -> Result<TreeKFreeDecomposition> {
    match parse_decomposition(text)? {
        (DecompositionKind::KFree, d) => Ok(d),
        _ => Err(Error::parse(1, "expected a TKD file")),
    }
}

pub fn parse_tfd(text: &str) -> Result<TriangleFreeDecomposition> {
    match parse_decomposition(text)? {
        (DecompositionKind::TriangleFree, d) => Ok(TriangleFreeDecomposition(d)),
        _ => Err(Error::parse(1, "expected a TFD file")),
    }
}
