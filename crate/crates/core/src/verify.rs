//! Checks solver output text against an instance, without going through
//! the solver-side subgraph code.

use std::collections::{BTreeSet, HashMap};

use crate::cost::{Cost, Weight};
use crate::error::{Error, Result};
use crate::graph::{Graph, TerminalSet, Vertex};

/// Parses `VALUE <cost>` plus edge lines and checks that the edges exist,
/// form a tree that contains every terminal, and weigh exactly the stated
/// value. `VALUE INF` must come without edges, for terminals that really
/// are disconnected. With `require_edges` unset, a bare finite `VALUE` line
/// is accepted for two or more terminals.
pub fn verify_solution(g: &Graph, k: &TerminalSet, text: &str, require_edges: bool) -> Result<Cost> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing VALUE line"))?;
    let value = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["VALUE", "INF"] => Cost::Infinite,
        ["VALUE", v] => Cost::Finite(
            v.parse::<Weight>()
                .map_err(|_| Error::parse(hl, format!("bad value `{v}`")))?,
        ),
        _ => return Err(Error::parse(hl, "expected `VALUE <cost>`")),
    };
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            return Err(Error::parse(ln, "expected `<u> <v>`"));
        };
        let a: Vertex = a.parse().map_err(|_| Error::parse(ln, "bad vertex id"))?;
        let b: Vertex = b.parse().map_err(|_| Error::parse(ln, "bad vertex id"))?;
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(Error::Validation(format!("edge {a}-{b} listed twice")));
        }
        edges.push((a, b));
    }

    let reachable = reachable_terminals(g, k);
    let value = match value {
        Cost::Infinite => {
            if !edges.is_empty() {
                return Err(Error::Validation("VALUE INF with edges".into()));
            }
            if reachable {
                return Err(Error::Validation("VALUE INF but the terminals are connected".into()));
            }
            return Ok(Cost::Infinite);
        }
        Cost::Finite(v) => v,
    };
    if !reachable {
        return Err(Error::Validation("finite VALUE but the terminals are disconnected".into()));
    }
    if edges.is_empty() {
        if k.len() > 1 && require_edges {
            return Err(Error::Validation("no edges given for two or more terminals".into()));
        }
        if value != 0 && k.len() <= 1 {
            return Err(Error::Validation(format!("VALUE {value} for at most one terminal")));
        }
        return Ok(Cost::Finite(value));
    }

    let mut total: Weight = 0;
    let mut index: HashMap<Vertex, usize> = HashMap::new();
    for &(a, b) in &edges {
        let w = g
            .edge_weight(a, b)
            .ok_or_else(|| Error::Validation(format!("{a}-{b} is not an edge of the graph")))?;
        total += Weight::from(w);
        for v in [a, b] {
            let next = index.len();
            index.entry(v).or_insert(next);
        }
    }
    if total != value {
        return Err(Error::Validation(format!("edges weigh {total} but VALUE is {value}")));
    }
    if let Some(t) = k.iter().find(|t| !index.contains_key(t)) {
        if k.len() > 1 {
            return Err(Error::Validation(format!("terminal {t} is not covered")));
        }
    }
    if edges.len() + 1 != index.len() {
        return Err(Error::Validation("edges do not form a tree".into()));
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &edges {
        let (ra, rb) = (root(&mut parent, index[&a]), root(&mut parent, index[&b]));
        if ra == rb {
            return Err(Error::Validation(format!("edge {a}-{b} closes a cycle")));
        }
        parent[ra] = rb;
    }
    Ok(Cost::Finite(value))
}

fn reachable_terminals(g: &Graph, k: &TerminalSet) -> bool {
    let Some(&start) = k.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for (u, _) in g.neighbors(v) {
            if seen.insert(u) {
                stack.push(u);
            }
        }
    }
    k.iter().all(|t| seen.contains(t))
}
