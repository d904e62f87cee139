#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use steiner_core::decomposition::TreeKFreeDecomposition;
use steiner_core::instance::{generate, Instance};
use steiner_core::{Cost, Graph, Subgraph, TerminalSet, Vertex, VertexSet};

/// A connected instance with `|V| <= nmax`, `|E| <= mmax` (when the
/// spanning tree fits) and `1 <= |K| <= kmax`.
pub fn random_instance(rng: &mut ChaCha8Rng, nmax: u32, mmax: usize, kmax: usize, wmax: u64) -> Instance {
    random_instance_in(rng, 1..=nmax, mmax, 1..=kmax, wmax)
}

/// As [`random_instance`], with `|K|` clamped to `|V|` from above.
pub fn random_instance_in(
    rng: &mut ChaCha8Rng,
    n: RangeInclusive<u32>,
    mmax: usize,
    k: RangeInclusive<usize>,
    wmax: u64,
) -> Instance {
    let n = rng.random_range(n);
    let lo = n as usize - 1;
    let hi = ((n * (n - 1) / 2) as usize).min(mmax).max(lo);
    let m = rng.random_range(lo..=hi);
    let hi = (*k.end()).min(n as usize);
    let k = rng.random_range((*k.start()).min(hi)..=hi);
    generate(rng.random(), n, m, k, wmax).unwrap()
}

/// `G(n, p)` on vertices `1..=n`, possibly disconnected.
pub fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64, wmax: u64) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(p) {
                edges.push((u, v, rng.random_range(1..=wmax)));
            }
        }
    }
    Graph::new(1..=n, edges).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, from: &[Vertex], size: usize) -> VertexSet {
    let mut v = from.to_vec();
    v.shuffle(rng);
    v.into_iter().take(size).collect()
}

pub fn set(vs: &[Vertex]) -> VertexSet {
    vs.iter().copied().collect()
}

pub fn adjacency(g: &Graph) -> BTreeMap<Vertex, BTreeSet<Vertex>> {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g.vertices().iter().map(|&v| (v, BTreeSet::new())).collect();
    for e in g.edges() {
        adj.get_mut(&e.u).unwrap().insert(e.v);
        adj.get_mut(&e.v).unwrap().insert(e.u);
    }
    adj
}

/// Vertices reachable from `start` using only `edges`.
pub fn reach(edges: &BTreeSet<(Vertex, Vertex)>, start: Vertex) -> BTreeSet<Vertex> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &(a, b) in edges {
            let other = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if seen.insert(other) {
                queue.push_back(other);
            }
        }
    }
    seen
}

/// Independent witness check: connected, acyclic, spans `k`, uses only
/// graph edges, and weighs exactly `cost`.
pub fn check_witness(g: &Graph, k: &TerminalSet, cost: Cost, tree: &Subgraph) -> Result<(), String> {
    let Cost::Finite(c) = cost else {
        return if tree.edges().is_empty() {
            Ok(())
        } else {
            Err("infinite cost with edges".into())
        };
    };
    let mut total = 0u128;
    for &(a, b) in tree.edges() {
        total += g.edge_weight(a, b).ok_or(format!("{a}-{b} not an edge"))? as u128;
    }
    if total != c {
        return Err(format!("edges weigh {total}, reported {c}"));
    }
    if k.len() <= 1 {
        return Ok(());
    }
    let mut verts: BTreeSet<Vertex> = tree.vertices().clone();
    for &(a, b) in tree.edges() {
        verts.insert(a);
        verts.insert(b);
    }
    if !k.is_subset(&verts) {
        return Err("a terminal is missing".into());
    }
    let start = *k.iter().next().unwrap();
    let r = reach(tree.edges(), start);
    if r != verts {
        return Err("tree is disconnected".into());
    }
    if tree.edges().len() + 1 != verts.len() {
        return Err("tree has a cycle".into());
    }
    Ok(())
}

/// A plain tree decomposition (empty leafset) from eliminating the vertices
/// in `order`. Node `i` holds `order[i]` and its later neighbours in the
/// fill-in graph.
pub fn elimination_decomposition(g: &Graph, order: &[Vertex]) -> TreeKFreeDecomposition {
    let pos: BTreeMap<Vertex, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = adjacency(g);
    let mut bags = Vec::new();
    let mut edges = Vec::new();
    let n = order.len();
    for (i, &v) in order.iter().enumerate() {
        let later: Vec<Vertex> = adj[&v].iter().copied().collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
            adj.get_mut(&a).unwrap().remove(&v);
        }
        adj.remove(&v);
        let mut bag = set(&later);
        bag.insert(v);
        bags.push(bag);
        match later.iter().map(|u| pos[u]).min() {
            Some(p) => edges.push((p, i)),
            None if i + 1 < n => edges.push((n - 1, i)),
            None => {}
        }
    }
    TreeKFreeDecomposition::new(bags, n - 1, &edges, VertexSet::new()).unwrap()
}

pub fn shuffled_vertices(rng: &mut ChaCha8Rng, g: &Graph) -> Vec<Vertex> {
    let mut order = g.vertices().to_vec();
    order.shuffle(rng);
    order
}

/// Every subgraph of `G[keep]`, one per edge subset.
pub fn all_subgraphs(g: &Graph, keep: &VertexSet) -> Vec<Subgraph> {
    let h = g.induced(keep);
    let edges: Vec<_> = h.edges().iter().map(|e| e.key()).collect();
    (0u64..(1 << edges.len()))
        .map(|m| Subgraph::from_edges((0..edges.len()).filter(|i| m & (1 << i) != 0).map(|i| edges[i])))
        .collect()
}
