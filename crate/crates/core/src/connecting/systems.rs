//! S-connecting systems and their exhaustive enumeration.

use std::collections::BTreeSet;

use crate::graph::{edge_key, EdgeKey, Graph, Subgraph, Vertex, VertexSet};

/// A node of the system tree: a vertex of `S` or the hub `u_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemNode {
    Base(Vertex),
    Hub(usize),
}

/// A pair `(𝒮, 𝒯)`. The tree is stored implicitly: hub `u_i` is adjacent to
/// exactly the vertices of `subsets[i]`, and `base_edges` lists the tree
/// edges between two vertices of `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SConnectingSystem {
    pub base: VertexSet,
    /// Sorted, so the hub numbering is canonical.
    pub subsets: Vec<VertexSet>,
    /// Sorted edges of `𝒯[S]`.
    pub base_edges: Vec<EdgeKey>,
}

impl SConnectingSystem {
    pub fn num_hubs(&self) -> usize {
        self.subsets.len()
    }

    pub fn tree_edges(&self) -> Vec<(SystemNode, SystemNode)> {
        let mut out: Vec<(SystemNode, SystemNode)> = self
            .base_edges
            .iter()
            .map(|&(a, b)| (SystemNode::Base(a), SystemNode::Base(b)))
            .collect();
        for (i, s) in self.subsets.iter().enumerate() {
            for &v in s {
                out.push((SystemNode::Hub(i), SystemNode::Base(v)));
            }
        }
        out
    }

    /// `𝒯[S]` as a subgraph on all of `S`.
    pub fn base_subgraph(&self) -> Subgraph {
        let mut s = Subgraph::new();
        for &v in &self.base {
            s.add_vertex(v);
        }
        for &(a, b) in &self.base_edges {
            s.add_edge(a, b);
        }
        s
    }

    /// Checks the defining conditions against `g`, including that the
    /// implicit edge set forms a tree.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let hubs_ok = self
            .subsets
            .iter()
            .all(|s| s.len() > 1 && s.is_subset(&self.base));
        let edges_ok = self
            .base_edges
            .iter()
            .all(|&(a, b)| a != b && self.base.contains(&a) && self.base.contains(&b) && g.has_edge(a, b));
        if !hubs_ok || !edges_ok {
            return false;
        }
        let nodes = self.base.len() + self.subsets.len();
        let edges = self.tree_edges();
        if edges.len() + 1 != nodes {
            return false;
        }
        let index = |n: SystemNode| match n {
            SystemNode::Base(v) => self.base.iter().position(|&b| b == v).unwrap(),
            SystemNode::Hub(i) => self.base.len() + i,
        };
        let mut dsu = crate::graph::DisjointSets::new(nodes);
        edges.iter().all(|&(a, b)| dsu.union(index(a), index(b)))
    }
}

/// True iff all of `s` lies in one component of `h`.
pub fn is_self_reachable(h: &Subgraph, s: &VertexSet) -> bool {
    h.connects(s)
}

/// Decodes a Prüfer sequence into the edge list of a tree on `n` labels.
pub(crate) fn prufer_decode(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for &x in seq {
        let leaf = (0..n).find(|&i| degree[i] == 1).expect("a leaf exists");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| degree[i] == 1).collect();
    if rest.len() == 2 {
        edges.push((rest[0], rest[1]));
    }
    edges
}

/// Every S-connecting system of `g`, each exactly once, in canonical order.
///
/// Trees on `S` plus `m` hubs are generated from Prüfer sequences for
/// `m = 0..|S|-1` and filtered: every hub has degree at least two and only
/// neighbours in `S`, and every tree edge inside `S` is a graph edge.
pub fn enumerate_systems(g: &Graph, s: &VertexSet) -> Vec<SConnectingSystem> {
    let base: Vec<Vertex> = s.iter().copied().collect();
    let b = base.len();
    let mut found: BTreeSet<SConnectingSystem> = BTreeSet::new();
    if b == 0 {
        return Vec::new();
    }
    for m in 0..b {
        let n = b + m;
        if n == 1 {
            found.insert(SConnectingSystem {
                base: s.clone(),
                subsets: Vec::new(),
                base_edges: Vec::new(),
            });
            continue;
        }
        let len = n - 2;
        let mut seq = vec![0usize; len];
        loop {
            if let Some(sys) = system_from_sequence(g, &base, s, m, &seq) {
                found.insert(sys);
            }
            // odometer increment
            let mut i = 0;
            while i < len {
                seq[i] += 1;
                if seq[i] < n {
                    break;
                }
                seq[i] = 0;
                i += 1;
            }
            if i == len {
                break;
            }
        }
    }
    found.into_iter().collect()
}

fn system_from_sequence(
    g: &Graph,
    base: &[Vertex],
    s: &VertexSet,
    m: usize,
    seq: &[usize],
) -> Option<SConnectingSystem> {
    let b = base.len();
    // a hub missing from the sequence is a leaf
    for h in b..b + m {
        if !seq.contains(&h) {
            return None;
        }
    }
    let mut subsets = vec![VertexSet::new(); m];
    let mut base_edges = Vec::new();
    for (x, y) in prufer_decode(seq, b + m) {
        match (x < b, y < b) {
            (true, true) => {
                if !g.has_edge(base[x], base[y]) {
                    return None;
                }
                base_edges.push(edge_key(base[x], base[y]));
            }
            (false, false) => return None,
            (true, false) => {
                subsets[y - b].insert(base[x]);
            }
            (false, true) => {
                subsets[x - b].insert(base[y]);
            }
        }
    }
    subsets.sort();
    base_edges.sort();
    Some(SConnectingSystem {
        base: s.clone(),
        subsets,
        base_edges,
    })
}
