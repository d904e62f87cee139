//! Rooted tree decompositions with a leaf-only vertex set `L`, their
//! validators, and the construction from a multiway cut.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, TerminalSet, Vertex, VertexSet};
use crate::multiway::MultiwayCut;

pub type NodeId = usize;

/// A rooted tree whose nodes carry bags, plus the set `L` of vertices that
/// may only occur in a single leaf bag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeKFreeDecomposition {
    bags: Vec<VertexSet>,
    children: Vec<Vec<NodeId>>,
    parent: Vec<Option<NodeId>>,
    root: NodeId,
    leafset: VertexSet,
}

/// Same shape as [`TreeKFreeDecomposition`], but the fourth condition asks
/// only that `G[χ(x) ∩ L]` be triangle-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleFreeDecomposition(pub TreeKFreeDecomposition);

impl TreeKFreeDecomposition {
    /// Builds from bags, a root and `(parent, child)` tree edges, checking
    /// that the edges form a tree rooted at `root`.
    pub fn new(
        bags: Vec<VertexSet>,
        root: NodeId,
        tree_edges: &[(NodeId, NodeId)],
        leafset: VertexSet,
    ) -> Result<Self> {
        let n = bags.len();
        if n == 0 {
            return Err(Error::invalid("a decomposition needs at least one node"));
        }
        if root >= n {
            return Err(Error::invalid(format!("root {root} is not a node")));
        }
        if tree_edges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "{n} nodes need {} tree edges, got {}",
                n - 1,
                tree_edges.len()
            )));
        }
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        for &(p, c) in tree_edges {
            if p >= n || c >= n {
                return Err(Error::invalid(format!("tree edge {p}-{c} names a missing node")));
            }
            if c == root || parent[c].is_some() || p == c {
                return Err(Error::invalid(format!("node {c} has more than one parent")));
            }
            parent[c] = Some(p);
            children[p].push(c);
        }
        for list in &mut children {
            list.sort_unstable();
        }
        let d = TreeKFreeDecomposition {
            bags,
            children,
            parent,
            root,
            leafset,
        };
        if d.preorder().len() != n {
            return Err(Error::invalid("tree edges do not connect every node to the root"));
        }
        Ok(d)
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn bag(&self, x: NodeId) -> &VertexSet {
        &self.bags[x]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn children(&self, x: NodeId) -> &[NodeId] {
        &self.children[x]
    }

    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x]
    }

    pub fn leafset(&self) -> &VertexSet {
        &self.leafset
    }

    pub fn is_leaf(&self, x: NodeId) -> bool {
        self.children[x].is_empty()
    }

    /// `(parent, child)` pairs ordered by child.
    pub fn tree_edges(&self) -> Vec<(NodeId, NodeId)> {
        (0..self.num_nodes())
            .filter_map(|c| self.parent[c].map(|p| (p, c)))
            .collect()
    }

    /// Nodes with every parent before its children.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.bags.len());
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            if out.len() > self.bags.len() {
                break;
            }
            out.push(x);
            stack.extend(self.children[x].iter().rev());
        }
        out
    }

    /// `max(0, max_x |χ(x) \ L| - 1)`.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.difference(&self.leafset).count())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub(crate) fn bags_mut(&mut self) -> &mut Vec<VertexSet> {
        &mut self.bags
    }

    pub(crate) fn leafset_mut(&mut self) -> &mut VertexSet {
        &mut self.leafset
    }
}

impl TriangleFreeDecomposition {
    pub fn width(&self) -> usize {
        self.0.width()
    }
}

/// The first violated decomposition condition, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A bag or `L` names a vertex outside the graph.
    UnknownVertex { vertex: Vertex, node: Option<NodeId> },
    /// (A): the vertex occurs in no bag.
    VertexUncovered { vertex: Vertex },
    /// (A): the nodes holding the vertex do not form a subtree.
    VertexSubtreeDisconnected { vertex: Vertex, nodes: Vec<NodeId> },
    /// (B): no bag holds both endpoints.
    EdgeUncovered { u: Vertex, v: Vertex },
    /// (C): a vertex of `L` occurs in several bags.
    LeafVertexRepeated { vertex: Vertex, nodes: Vec<NodeId> },
    /// (C): a vertex of `L` occurs in a non-leaf bag.
    LeafVertexInInterior { vertex: Vertex, node: NodeId },
    /// (K.D): a terminal belongs to `L`.
    TerminalInLeafSet { vertex: Vertex, node: NodeId },
    /// (△.D): `G[χ(x) ∩ L]` has a triangle.
    TriangleInLeafPart { node: NodeId, triangle: [Vertex; 3] },
}

impl Violation {
    /// The condition label: `A`, `B`, `C` or `D`, or `vertex` for unknown ids.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::UnknownVertex { .. } => "vertex",
            Violation::VertexUncovered { .. } | Violation::VertexSubtreeDisconnected { .. } => "A",
            Violation::EdgeUncovered { .. } => "B",
            Violation::LeafVertexRepeated { .. } | Violation::LeafVertexInInterior { .. } => "C",
            Violation::TerminalInLeafSet { .. } | Violation::TriangleInLeafPart { .. } => "D",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { vertex, node: Some(x) } => {
                write!(f, "bag {x} holds vertex {vertex}, which is not in the graph")
            }
            Violation::UnknownVertex { vertex, node: None } => {
                write!(f, "L holds vertex {vertex}, which is not in the graph")
            }
            Violation::VertexUncovered { vertex } => write!(f, "(A) vertex {vertex} is in no bag"),
            Violation::VertexSubtreeDisconnected { vertex, nodes } => {
                write!(f, "(A) bags holding vertex {vertex} are not connected: {nodes:?}")
            }
            Violation::EdgeUncovered { u, v } => write!(f, "(B) no bag holds edge {u}-{v}"),
            Violation::LeafVertexRepeated { vertex, nodes } => {
                write!(f, "(C) L-vertex {vertex} occurs in several bags: {nodes:?}")
            }
            Violation::LeafVertexInInterior { vertex, node } => {
                write!(f, "(C) L-vertex {vertex} occurs in non-leaf bag {node}")
            }
            Violation::TerminalInLeafSet { vertex, node } => {
                write!(f, "(D) bag {node} holds terminal {vertex}, which is in L")
            }
            Violation::TriangleInLeafPart { node, triangle } => {
                write!(f, "(D) bag {node} has triangle {triangle:?} inside L")
            }
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Validation(v.to_string())
    }
}

/// Conditions (A) to (C), shared by both decomposition kinds.
fn check_common(g: &Graph, d: &TreeKFreeDecomposition) -> std::result::Result<(), Violation> {
    for (x, bag) in d.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|v| !g.contains(**v)) {
            return Err(Violation::UnknownVertex { vertex: v, node: Some(x) });
        }
    }
    if let Some(&v) = d.leafset.iter().find(|v| !g.contains(**v)) {
        return Err(Violation::UnknownVertex { vertex: v, node: None });
    }
    let mut holders: BTreeMap<Vertex, Vec<NodeId>> = BTreeMap::new();
    for (x, bag) in d.bags.iter().enumerate() {
        for &v in bag {
            holders.entry(v).or_default().push(x);
        }
    }
    for &v in g.vertices() {
        let Some(nodes) = holders.get(&v) else {
            return Err(Violation::VertexUncovered { vertex: v });
        };
        // a node set is a subtree iff exactly one member has its parent outside
        let tops = nodes
            .iter()
            .filter(|&&x| d.parent[x].is_none_or(|p| !d.bags[p].contains(&v)))
            .count();
        if tops != 1 {
            return Err(Violation::VertexSubtreeDisconnected {
                vertex: v,
                nodes: nodes.clone(),
            });
        }
    }
    for e in g.edges() {
        if !d.bags.iter().any(|b| b.contains(&e.u) && b.contains(&e.v)) {
            return Err(Violation::EdgeUncovered { u: e.u, v: e.v });
        }
    }
    for &v in &d.leafset {
        let nodes = &holders[&v];
        if nodes.len() > 1 {
            return Err(Violation::LeafVertexRepeated {
                vertex: v,
                nodes: nodes.clone(),
            });
        }
        if !d.is_leaf(nodes[0]) {
            return Err(Violation::LeafVertexInInterior {
                vertex: v,
                node: nodes[0],
            });
        }
    }
    Ok(())
}

/// Checks conditions (K.A) to (K.D) and reports the first violation.
pub fn validate(
    g: &Graph,
    k: &TerminalSet,
    d: &TreeKFreeDecomposition,
) -> std::result::Result<(), Violation> {
    check_common(g, d)?;
    for (x, bag) in d.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|v| d.leafset.contains(v) && k.contains(v)) {
            return Err(Violation::TerminalInLeafSet { vertex: v, node: x });
        }
    }
    Ok(())
}

/// Checks conditions (△.A) to (△.D) and reports the first violation.
pub fn validate_triangle_free(
    g: &Graph,
    d: &TriangleFreeDecomposition,
) -> std::result::Result<(), Violation> {
    check_common(g, &d.0)?;
    for (x, bag) in d.0.bags.iter().enumerate() {
        let inside: Vec<Vertex> = bag.intersection(&d.0.leafset).copied().collect();
        if let Some(t) = find_triangle(g, &inside) {
            return Err(Violation::TriangleInLeafPart { node: x, triangle: t });
        }
    }
    Ok(())
}

/// The lexicographically first triangle of `g[vs]`, `vs` sorted.
pub(crate) fn find_triangle(g: &Graph, vs: &[Vertex]) -> Option<[Vertex; 3]> {
    for (i, &a) in vs.iter().enumerate() {
        for (j, &b) in vs.iter().enumerate().skip(i + 1) {
            if !g.has_edge(a, b) {
                continue;
            }
            for &c in &vs[j + 1..] {
                if g.has_edge(a, c) && g.has_edge(b, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Root bag `S` with one leaf `S ∪ C_p` per component `C_p` of `G - S`;
/// the non-terminal vertices of the components form `L`.
pub fn decompose_from_multiway_cut(
    g: &Graph,
    k: &TerminalSet,
    s: &MultiwayCut,
) -> Result<TreeKFreeDecomposition> {
    if let Some(&v) = s.vertices.iter().chain(k.iter()).find(|v| !g.contains(**v)) {
        return Err(Error::UnknownVertex(v));
    }
    if !crate::graph::is_multiway_cut(g, k, &s.vertices) {
        return Err(Error::invalid("vertex set is not a multiway cut for the terminals"));
    }
    let mut bags = vec![s.vertices.clone()];
    let mut edges = Vec::new();
    let mut leafset = VertexSet::new();
    for comp in connected_components(&g.without(&s.vertices)) {
        leafset.extend(comp.iter().copied().filter(|v| !k.contains(v)));
        let mut bag = s.vertices.clone();
        bag.extend(comp);
        edges.push((0, bags.len()));
        bags.push(bag);
    }
    let d = TreeKFreeDecomposition::new(bags, 0, &edges, leafset)?;
    validate(g, k, &d)?;
    Ok(d)
}
