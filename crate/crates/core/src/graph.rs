//! Undirected edge-weighted graphs, subgraphs, and the classical
//! subroutines every solver builds on.
//!
//! Vertices are arbitrary `u32` identifiers (PACE instances use `1..=n`).
//! All iteration orders are sorted by vertex id, so every routine here is
//! deterministic.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use crate::cost::{EdgeWeight, Weight};
use crate::error::{Error, Result};

pub type Vertex = u32;
pub type VertexSet = BTreeSet<Vertex>;
pub type TerminalSet = BTreeSet<Vertex>;

/// Unordered vertex pair, stored with the smaller id first.
pub type EdgeKey = (Vertex, Vertex);

pub fn edge_key(a: Vertex, b: Vertex) -> EdgeKey {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub weight: EdgeWeight,
}

impl Edge {
    pub fn key(&self) -> EdgeKey {
        (self.u, self.v)
    }
}

/// Immutable simple graph. Edges keep the order of their first occurrence
/// in the input; that order doubles as the edge id.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    edges: Vec<Edge>,
    edge_index: HashMap<EdgeKey, usize>,
    // (neighbour position, edge id), sorted by neighbour id
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph. Self-loops are dropped and parallel edges collapse to
    /// their minimum weight; an endpoint that is not a declared vertex is an
    /// error.
    pub fn new(
        vertices: impl IntoIterator<Item = Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex, EdgeWeight)>,
    ) -> Result<Graph> {
        let set: VertexSet = vertices.into_iter().collect();
        let vertices: Vec<Vertex> = set.into_iter().collect();
        let index: HashMap<Vertex, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut out: Vec<Edge> = Vec::new();
        let mut edge_index: HashMap<EdgeKey, usize> = HashMap::new();
        for (a, b, w) in edges {
            for x in [a, b] {
                if !index.contains_key(&x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            if a == b {
                continue;
            }
            let key = edge_key(a, b);
            match edge_index.get(&key) {
                Some(&id) => {
                    if w < out[id].weight {
                        out[id].weight = w;
                    }
                }
                None => {
                    edge_index.insert(key, out.len());
                    out.push(Edge {
                        u: key.0,
                        v: key.1,
                        weight: w,
                    });
                }
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (id, e) in out.iter().enumerate() {
            let (iu, iv) = (index[&e.u], index[&e.v]);
            adjacency[iu].push((iv, id));
            adjacency[iv].push((iu, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            vertices,
            index,
            edges: out,
            edge_index,
            adjacency,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    pub fn edge_id(&self, a: Vertex, b: Vertex) -> Option<usize> {
        self.edge_index.get(&edge_key(a, b)).copied()
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn edge_weight(&self, a: Vertex, b: Vertex) -> Option<EdgeWeight> {
        self.edge_id(a, b).map(|id| self.edges[id].weight)
    }

    /// Neighbours of `v` in increasing id order together with the connecting
    /// edge weight.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (Vertex, EdgeWeight)> + '_ {
        let list = self
            .index
            .get(&v)
            .map(|&i| self.adjacency[i].as_slice())
            .unwrap_or(&[]);
        list.iter()
            .map(move |&(j, e)| (self.vertices[j], self.edges[e].weight))
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.index.get(&v).map_or(0, |&i| self.adjacency[i].len())
    }

    /// The subgraph induced by `keep` (vertices outside the graph are ignored).
    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let vertices = keep.iter().copied().filter(|v| self.contains(*v));
        let edges = self
            .edges
            .iter()
            .filter(|e| keep.contains(&e.u) && keep.contains(&e.v))
            .map(|e| (e.u, e.v, e.weight));
        Graph::new(vertices, edges).expect("induced subgraph of a valid graph")
    }

    /// `self - removed`.
    pub fn without(&self, removed: &VertexSet) -> Graph {
        let keep: VertexSet = self
            .vertices
            .iter()
            .copied()
            .filter(|v| !removed.contains(v))
            .collect();
        self.induced(&keep)
    }

    /// Materializes a subgraph as a standalone graph, taking weights from `self`.
    pub fn restricted_to(&self, sub: &Subgraph) -> Result<Graph> {
        let mut edges = Vec::with_capacity(sub.edges.len());
        for &(a, b) in &sub.edges {
            let w = self
                .edge_weight(a, b)
                .ok_or_else(|| Error::invalid(format!("edge {a}-{b} is not in the graph")))?;
            edges.push((a, b, w));
        }
        for &v in &sub.vertices {
            if !self.contains(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        Graph::new(sub.vertices.iter().copied(), edges)
    }

    /// The whole graph viewed as a subgraph of itself.
    pub fn as_subgraph(&self) -> Subgraph {
        let mut s = Subgraph::new();
        for &v in &self.vertices {
            s.add_vertex(v);
        }
        for e in &self.edges {
            s.add_edge(e.u, e.v);
        }
        s
    }
}

/// A subgraph of some parent graph, stored by vertex ids.
///
/// Every edge has both endpoints among the vertices; `add_edge` maintains
/// that. Costs are evaluated against a parent graph on demand.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgraph {
    vertices: BTreeSet<Vertex>,
    edges: BTreeSet<EdgeKey>,
}

impl Subgraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(v: Vertex) -> Self {
        let mut s = Self::new();
        s.add_vertex(v);
        s
    }

    pub fn from_edges(edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut s = Self::new();
        for (a, b) in edges {
            s.add_edge(a, b);
        }
        s
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.insert(v);
    }

    pub fn add_edge(&mut self, a: Vertex, b: Vertex) {
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert(edge_key(a, b));
    }

    pub fn extend(&mut self, other: &Subgraph) {
        self.vertices.extend(other.vertices.iter().copied());
        self.edges.extend(other.edges.iter().copied());
    }

    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut s = self.clone();
        s.extend(other);
        s
    }

    pub fn vertices(&self) -> &BTreeSet<Vertex> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<EdgeKey> {
        &self.edges
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Sum of the parent-graph weights of the included edges.
    pub fn cost(&self, parent: &Graph) -> Result<Weight> {
        let mut total: Weight = 0;
        for &(a, b) in &self.edges {
            let w = parent
                .edge_weight(a, b)
                .ok_or_else(|| Error::invalid(format!("edge {a}-{b} is not in the graph")))?;
            total += w as Weight;
        }
        Ok(total)
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VertexSet> {
        let verts: Vec<Vertex> = self.vertices.iter().copied().collect();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = DisjointSets::new(verts.len());
        for &(a, b) in &self.edges {
            dsu.union(pos[&a], pos[&b]);
        }
        group_by_root(&verts, &mut dsu)
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_acyclic(&self) -> bool {
        self.edges.len() + self.components().len() == self.vertices.len()
    }

    /// True iff all of `set` lies in a single component of this subgraph.
    pub fn connects(&self, set: &VertexSet) -> bool {
        if set.len() <= 1 {
            return set.iter().all(|v| self.contains_vertex(*v));
        }
        self.components().iter().any(|c| set.is_subset(c))
    }
}

/// Union–find over `0..n` with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

fn group_by_root(verts: &[Vertex], dsu: &mut DisjointSets) -> Vec<VertexSet> {
    let mut slot: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<VertexSet> = Vec::new();
    // verts is sorted, so groups come out ordered by smallest member
    for (i, &v) in verts.iter().enumerate() {
        let r = dsu.find(i);
        let at = *slot.entry(r).or_insert_with(|| {
            groups.push(VertexSet::new());
            groups.len() - 1
        });
        groups[at].insert(v);
    }
    groups
}

/// Maximal connected vertex sets, ordered by smallest vertex id.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let mut dsu = DisjointSets::new(g.num_vertices());
    for e in g.edges() {
        dsu.union(g.index[&e.u], g.index[&e.v]);
    }
    group_by_root(g.vertices(), &mut dsu)
}

/// Multi-source Dijkstra on lexicographic (cost, hops) labels.
fn distances_from(g: &Graph, sources: &VertexSet) -> Vec<Option<(Weight, usize)>> {
    let mut dist: Vec<Option<(Weight, usize)>> = vec![None; g.num_vertices()];
    let mut heap = BinaryHeap::new();
    for s in sources {
        if let Some(&i) = g.index.get(s) {
            dist[i] = Some((0, 0));
            heap.push(Reverse((0 as Weight, 0usize, i)));
        }
    }
    while let Some(Reverse((d, h, i))) = heap.pop() {
        if dist[i] != Some((d, h)) {
            continue;
        }
        for &(j, e) in &g.adjacency[i] {
            let cand = (d + g.edges[e].weight as Weight, h + 1);
            if dist[j].is_none_or(|cur| cand < cur) {
                dist[j] = Some(cand);
                heap.push(Reverse((cand.0, cand.1, j)));
            }
        }
    }
    dist
}

/// A minimum-cost path from `source` to the nearest vertex of `targets`.
///
/// Among minimum-cost paths those with the fewest edges are preferred, and
/// among those the lexicographically smallest vertex sequence wins. When
/// `source` is itself a target the path is the lone source vertex at cost 0.
/// Returns `Ok(None)` when no target is reachable.
pub fn shortest_path(
    g: &Graph,
    targets: &VertexSet,
    source: Vertex,
) -> Result<Option<(Subgraph, Weight)>> {
    if !g.contains(source) {
        return Err(Error::UnknownVertex(source));
    }
    let to_target = distances_from(g, targets);
    let mut at = g.index[&source];
    let Some((total, _)) = to_target[at] else {
        return Ok(None);
    };
    let mut path = Subgraph::single(source);
    while let Some((d, h)) = to_target[at] {
        if h == 0 {
            break;
        }
        let next = g.adjacency[at]
            .iter()
            .find(|&&(j, e)| {
                to_target[j].is_some_and(|(dj, hj)| {
                    hj + 1 == h && dj + g.edges[e].weight as Weight == d
                })
            })
            .map(|&(j, _)| j)
            .expect("Dijkstra labels are consistent");
        path.add_edge(g.vertices[at], g.vertices[next]);
        at = next;
    }
    Ok(Some((path, total)))
}

/// Kruskal on the edges of `sub`, ordered by (weight, edge id in `g`).
pub fn minimum_spanning_tree(g: &Graph, sub: &Subgraph) -> Result<Subgraph> {
    let verts: Vec<Vertex> = sub.vertices().iter().copied().collect();
    let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut order: Vec<(EdgeWeight, usize)> = Vec::with_capacity(sub.edges().len());
    for &(a, b) in sub.edges() {
        let id = g
            .edge_id(a, b)
            .ok_or_else(|| Error::invalid(format!("edge {a}-{b} is not in the graph")))?;
        order.push((g.edges[id].weight, id));
    }
    order.sort_unstable();
    let mut dsu = DisjointSets::new(verts.len());
    let mut tree = Subgraph::new();
    for &v in &verts {
        tree.add_vertex(v);
    }
    let mut joined = 0;
    for (_, id) in order {
        let e = g.edges[id];
        if dsu.union(pos[&e.u], pos[&e.v]) {
            tree.add_edge(e.u, e.v);
            joined += 1;
        }
    }
    if !verts.is_empty() && joined + 1 != verts.len() {
        return Err(Error::invalid("spanning tree requested for a disconnected subgraph"));
    }
    Ok(tree)
}

/// `G[C_p] ∪ δ(C_p)`: the component `C_p` of `g - s` together with its
/// boundary edges into `s` and their endpoints. Edges inside `s` are left out.
pub fn component_graph(g: &Graph, s: &VertexSet, p: usize) -> Result<Graph> {
    let comps = connected_components(&g.without(s));
    let comp = comps.get(p).ok_or_else(|| {
        Error::invalid(format!("component index {p} out of range ({} components)", comps.len()))
    })?;
    Ok(graph_around(g, comp))
}

/// The graph on `comp` plus all edges leaving it, which must end in the cut.
pub(crate) fn graph_around(g: &Graph, comp: &VertexSet) -> Graph {
    let mut verts = comp.clone();
    let mut edges = Vec::new();
    for e in g.edges() {
        let (iu, iv) = (comp.contains(&e.u), comp.contains(&e.v));
        if iu || iv {
            verts.insert(e.u);
            verts.insert(e.v);
            edges.push((e.u, e.v, e.weight));
        }
    }
    Graph::new(verts, edges).expect("component graph of a valid graph")
}

/// True iff every component of `g - s` holds at most one terminal.
pub fn is_multiway_cut(g: &Graph, k: &TerminalSet, s: &VertexSet) -> bool {
    connected_components(&g.without(s))
        .iter()
        .all(|c| c.iter().filter(|v| k.contains(v)).count() <= 1)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path3() -> Graph {
        Graph::new([1, 2, 3], [(1, 2, 1), (2, 3, 2)]).unwrap()
    }

    pub fn set(vs: &[Vertex]) -> VertexSet {
        vs.iter().copied().collect()
    }
}
