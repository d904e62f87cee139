//! PACE-style instance files, solution output, and a seeded generator.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{Cost, EdgeWeight};
use crate::error::{Error, Result};
use crate::graph::{edge_key, EdgeKey, Graph, Subgraph, TerminalSet, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub graph: Graph,
    pub terminals: TerminalSet,
}

#[derive(PartialEq)]
enum Section {
    None,
    Comment,
    Graph,
    Terminals,
    Other,
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, got `{tok}`")))
}

/// Parses the PACE 2018 Steiner format.
///
/// Vertices are `1..=Nodes`. Blank lines and lines starting with `#` are
/// skipped, as is an optional `STP File` magic line. Sections other than
/// `Comment`, `Graph` and `Terminals` are skipped up to their `END`.
pub fn parse_pace(text: &str) -> Result<Instance> {
    let mut section = Section::None;
    let mut name = String::new();
    let mut nodes: Option<u32> = None;
    let mut announced_edges: Option<usize> = None;
    let mut announced_terminals: Option<usize> = None;
    let mut edges: Vec<(Vertex, Vertex, EdgeWeight)> = Vec::new();
    let mut terminals: Vec<(usize, Vertex)> = Vec::new();
    let mut seen_graph = false;
    let mut seen_terminals = false;
    let mut last = 0;

    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        last = ln;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if section == Section::None && line.contains("STP File") {
            continue;
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().expect("nonempty line");
        if section == Section::None {
            match head.to_ascii_uppercase().as_str() {
                "SECTION" => {
                    let which: String = tok.collect::<Vec<_>>().join(" ");
                    section = match which.to_ascii_lowercase().as_str() {
                        "comment" => Section::Comment,
                        "graph" if !seen_graph => Section::Graph,
                        "terminals" if !seen_terminals => Section::Terminals,
                        "graph" | "terminals" => {
                            return Err(Error::parse(ln, format!("repeated section `{which}`")))
                        }
                        _ => Section::Other,
                    };
                    seen_graph |= section == Section::Graph;
                    seen_terminals |= section == Section::Terminals;
                }
                "EOF" => break,
                _ => return Err(Error::parse(ln, format!("expected SECTION or EOF, got `{line}`"))),
            }
            continue;
        }
        if head.eq_ignore_ascii_case("END") {
            section = Section::None;
            continue;
        }
        match section {
            Section::Comment => {
                if head.eq_ignore_ascii_case("Name") {
                    name = line[head.len()..].trim().trim_matches('"').to_string();
                }
            }
            Section::Other => {}
            Section::Graph => match head {
                "Nodes" => nodes = Some(field(ln, tok.next(), "a node count")?),
                "Edges" | "Arcs" => announced_edges = Some(field(ln, tok.next(), "an edge count")?),
                "E" | "A" => {
                    let u: Vertex = field(ln, tok.next(), "an endpoint")?;
                    let v: Vertex = field(ln, tok.next(), "an endpoint")?;
                    let w: EdgeWeight = field(ln, tok.next(), "a non-negative integer weight")?;
                    if tok.next().is_some() {
                        return Err(Error::parse(ln, "trailing tokens after edge"));
                    }
                    let n = nodes.ok_or_else(|| Error::parse(ln, "edge before `Nodes`"))?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(Error::parse(ln, format!("edge endpoint outside 1..={n}")));
                    }
                    edges.push((u, v, w));
                }
                _ => return Err(Error::parse(ln, format!("unexpected line in Graph section: `{line}`"))),
            },
            Section::Terminals => match head {
                "Terminals" => announced_terminals = Some(field(ln, tok.next(), "a terminal count")?),
                "T" => {
                    let v: Vertex = field(ln, tok.next(), "a terminal id")?;
                    if tok.next().is_some() {
                        return Err(Error::parse(ln, "trailing tokens after terminal"));
                    }
                    terminals.push((ln, v));
                }
                _ => {
                    return Err(Error::parse(
                        ln,
                        format!("unexpected line in Terminals section: `{line}`"),
                    ))
                }
            },
            Section::None => unreachable!(),
        }
    }
    if section != Section::None {
        return Err(Error::parse(last.max(1), "section not closed by END"));
    }
    let n = nodes.ok_or_else(|| Error::parse(last.max(1), "missing Graph section with `Nodes`"))?;
    if let Some(m) = announced_edges {
        if m != edges.len() {
            return Err(Error::Validation(format!(
                "`Edges {m}` announced but {} edge lines given",
                edges.len()
            )));
        }
    }
    let mut set = TerminalSet::new();
    for &(ln, v) in &terminals {
        if v == 0 || v > n {
            return Err(Error::parse(ln, format!("terminal {v} outside 1..={n}")));
        }
        set.insert(v);
    }
    if let Some(t) = announced_terminals {
        if t != terminals.len() {
            return Err(Error::Validation(format!(
                "`Terminals {t}` announced but {} terminal lines given",
                terminals.len()
            )));
        }
    }
    Ok(Instance {
        name,
        graph: Graph::new(1..=n, edges)?,
        terminals: set,
    })
}

/// Writes an instance in the format [`parse_pace`] reads. Vertex ids are
/// assumed to be `1..=n`.
pub fn emit_pace(inst: &Instance) -> String {
    let g = &inst.graph;
    let n = g.vertices().last().copied().unwrap_or(0);
    let mut s = String::from("33D32945 STP File, STP Format Version 1.0\n\n");
    if !inst.name.is_empty() {
        let _ = writeln!(s, "SECTION Comment\nName \"{}\"\nEND\n", inst.name);
    }
    let _ = writeln!(s, "SECTION Graph\nNodes {n}\nEdges {}", g.num_edges());
    for e in g.edges() {
        let _ = writeln!(s, "E {} {} {}", e.u, e.v, e.weight);
    }
    let _ = writeln!(s, "END\n\nSECTION Terminals\nTerminals {}", inst.terminals.len());
    for t in &inst.terminals {
        let _ = writeln!(s, "T {t}");
    }
    s.push_str("END\n\nEOF\n");
    s
}

/// `VALUE <cost>` followed by one `<u> <v>` line per tree edge.
pub fn format_solution(cost: Cost, tree: Option<&Subgraph>) -> String {
    let mut s = format!("VALUE {cost}\n");
    if let Some(t) = tree {
        for (u, v) in t.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
    }
    s
}

/// A random connected graph on `1..=n` with `m` edges, `k` terminals and
/// weights uniform in `1..=wmax`, fully determined by `seed`.
///
/// A random spanning tree is drawn first, then the remaining edges are
/// sampled without replacement from the missing pairs.
pub fn generate(seed: u64, n: u32, m: usize, k: usize, wmax: EdgeWeight) -> Result<Instance> {
    let pairs = n as usize * (n as usize).saturating_sub(1) / 2;
    if n > 0 && m + 1 < n as usize {
        return Err(Error::invalid(format!("{m} edges cannot connect {n} vertices")));
    }
    if m > pairs {
        return Err(Error::invalid(format!("{n} vertices admit at most {pairs} edges")));
    }
    if k > n as usize {
        return Err(Error::invalid(format!("{k} terminals requested from {n} vertices")));
    }
    if wmax == 0 && m > 0 {
        return Err(Error::invalid("weights are drawn from 1..=wmax, so wmax must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<Vertex> = (1..=n).collect();
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let mut chosen: BTreeSet<EdgeKey> = BTreeSet::new();
    let mut edges = Vec::with_capacity(m);
    for i in 1..order.len() {
        let j = rng.random_range(0..i);
        chosen.insert(edge_key(order[i], order[j]));
        edges.push((order[i], order[j]));
    }
    let missing: Vec<EdgeKey> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| (a, b)))
        .filter(|e| !chosen.contains(e))
        .collect();
    let extra = m - edges.len();
    let mut picks: Vec<usize> = sample(&mut rng, missing.len(), extra).into_vec();
    picks.sort_unstable();
    edges.extend(picks.into_iter().map(|i| missing[i]));
    let weighted: Vec<(Vertex, Vertex, EdgeWeight)> = edges
        .into_iter()
        .map(|(u, v)| (u, v, rng.random_range(1..=wmax.max(1))))
        .collect();
    let terminals: TerminalSet = sample(&mut rng, n as usize, k)
        .into_iter()
        .map(|i| i as Vertex + 1)
        .collect();
    Ok(Instance {
        name: format!("random-{seed}-{n}-{m}-{k}-{wmax}"),
        graph: Graph::new(1..=n, weighted)?,
        terminals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::connected_components;
    use proptest::prelude::*;

    const PATH: &str = "\
33D32945 STP File, STP Format Version 1.0

SECTION Comment
Name \"path\"
END

SECTION Graph
Nodes 3
Edges 2
E 1 2 1
E 2 3 2
END

SECTION Terminals
Terminals 2
T 1
T 3
END

EOF
";

    #[test]
    fn parse_path() {
        let inst = parse_pace(PATH).unwrap();
        assert_eq!(inst.name, "path");
        assert_eq!(inst.graph.num_edges(), 2);
        assert_eq!(inst.terminals, [1, 3].into());
        assert_eq!(emit_pace(&inst), PATH);
    }

    #[test]
    fn parse_errors() {
        let missing_end = PATH.replacen("END\n\nSECTION Terminals", "\nSECTION Terminals", 1);
        assert!(matches!(parse_pace(&missing_end), Err(Error::Parse { .. })));
        let bad_count = PATH.replace("Edges 2", "Edges 3");
        assert!(matches!(parse_pace(&bad_count), Err(Error::Validation(_))));
        let bad_terms = PATH.replace("Terminals 2", "Terminals 1");
        assert!(matches!(parse_pace(&bad_terms), Err(Error::Validation(_))));
        let bad_line = PATH.replace("E 2 3 2", "E 2 x 2");
        assert_eq!(
            parse_pace(&bad_line).unwrap_err(),
            Error::parse(11, "expected an endpoint, got `x`")
        );
        let out_of_range = PATH.replace("T 3", "T 4");
        assert!(matches!(parse_pace(&out_of_range), Err(Error::Parse { line: 17, .. })));
        let unclosed = PATH.replace("END\n\nEOF", "");
        assert!(parse_pace(&unclosed).is_err());
    }

    #[test]
    fn duplicate_edges_collapse() {
        let text = PATH.replace("Edges 2\nE 1 2 1", "Edges 3\nE 1 2 5\nE 2 1 1");
        let inst = parse_pace(&text).unwrap();
        assert_eq!(inst.graph.num_edges(), 2);
        assert_eq!(inst.graph.edge_weight(1, 2), Some(1));
    }

    #[test]
    fn generate_examples() {
        let a = generate(7, 8, 12, 3, 10).unwrap();
        let b = generate(7, 8, 12, 3, 10).unwrap();
        assert_eq!(emit_pace(&a), emit_pace(&b));
        assert_ne!(emit_pace(&a), emit_pace(&generate(8, 8, 12, 3, 10).unwrap()));
        let tree = generate(1, 5, 4, 2, 3).unwrap();
        assert_eq!(tree.graph.num_edges(), 4);
        assert_eq!(connected_components(&tree.graph).len(), 1);
        assert!(generate(1, 5, 0, 0, 3).is_err());
        assert!(generate(1, 5, 4, 0, 3).unwrap().terminals.is_empty());
        assert!(generate(1, 3, 4, 0, 3).is_err());
        assert!(generate(1, 3, 2, 4, 3).is_err());
        assert!(generate(1, 3, 2, 1, 0).is_err());
    }

    proptest! {
        #[test]
        fn generated_instances_round_trip(seed in any::<u64>(), n in 1u32..=12, extra in 0usize..=10, k in 0usize..=5, wmax in 1u64..=10) {
            let pairs = (n * (n - 1) / 2) as usize;
            let m = (n as usize - 1 + extra).min(pairs);
            let inst = generate(seed, n, m, k.min(n as usize), wmax).unwrap();
            prop_assert_eq!(inst.graph.num_edges(), m);
            prop_assert_eq!(connected_components(&inst.graph).len(), 1);
            prop_assert!(inst.graph.edges().iter().all(|e| (1..=wmax).contains(&e.weight)));
            let again = parse_pace(&emit_pace(&inst)).unwrap();
            prop_assert_eq!(&again, &inst);
            prop_assert_eq!(parse_pace(&emit_pace(&again)).unwrap(), again);
        }
    }
}
