//! The subdivided graph with terminal triangles, and the two conversions
//! between K-free decompositions of `G` and triangle-free decompositions
//! of it.

use std::collections::BTreeMap;

use crate::decomposition::tree::{
    validate, validate_triangle_free, TreeKFreeDecomposition, TriangleFreeDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph, TerminalSet, Vertex, VertexSet};

/// `Ĝ` with the correspondence to `G`.
///
/// Numbering: with `b` the largest vertex id of `G` (0 if empty), edge `i`
/// of `G` in input order becomes vertex `b + 1 + i`, and the `j`-th terminal
/// in sorted order gets `k' = b + m + 1 + 2j` and `k'' = b + m + 2 + 2j`.
#[derive(Clone, Debug)]
pub struct HatGraph {
    pub graph: Graph,
    edge_vertices: Vec<Vertex>,
    edge_of: BTreeMap<Vertex, EdgeKey>,
    gadgets: BTreeMap<Vertex, (Vertex, Vertex)>,
    terminal_of: BTreeMap<Vertex, Vertex>,
}

impl HatGraph {
    /// The subdivision vertex of edge `(u, v)`.
    pub fn edge_vertex(&self, u: Vertex, v: Vertex) -> Option<Vertex> {
        let key = crate::graph::edge_key(u, v);
        self.edge_of.iter().find(|(_, &e)| e == key).map(|(&x, _)| x)
    }

    /// Subdivision vertices indexed by the original edge order.
    pub fn edge_vertices(&self) -> &[Vertex] {
        &self.edge_vertices
    }

    /// The original edge a subdivision vertex stands for.
    pub fn edge_of(&self, x: Vertex) -> Option<EdgeKey> {
        self.edge_of.get(&x).copied()
    }

    /// `(k', k'')` for a terminal.
    pub fn gadget(&self, k: Vertex) -> Option<(Vertex, Vertex)> {
        self.gadgets.get(&k).copied()
    }

    /// The terminal a gadget vertex belongs to.
    pub fn terminal_of(&self, x: Vertex) -> Option<Vertex> {
        self.terminal_of.get(&x).copied()
    }
}

/// Subdivides every edge and attaches a triangle `k, k', k''` to every
/// terminal. All edges of `Ĝ` have weight 1.
pub fn hat_graph(g: &Graph, k: &TerminalSet) -> Result<HatGraph> {
    crate::exact::check_terminals(g, k)?;
    let base = g.vertices().last().copied().unwrap_or(0);
    let m = g.num_edges() as Vertex;
    let mut vertices: Vec<Vertex> = g.vertices().to_vec();
    let mut edges = Vec::new();
    let mut edge_vertices = Vec::new();
    let mut edge_of = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        let x = base + 1 + i as Vertex;
        vertices.push(x);
        edge_vertices.push(x);
        edge_of.insert(x, e.key());
        edges.push((e.u, x, 1));
        edges.push((x, e.v, 1));
    }
    let mut gadgets = BTreeMap::new();
    let mut terminal_of = BTreeMap::new();
    for (j, &t) in k.iter().enumerate() {
        let a = base + m + 1 + 2 * j as Vertex;
        let b = a + 1;
        vertices.extend([a, b]);
        edges.extend([(t, a, 1), (t, b, 1), (a, b, 1)]);
        gadgets.insert(t, (a, b));
        terminal_of.insert(a, t);
        terminal_of.insert(b, t);
    }
    Ok(HatGraph {
        graph: Graph::new(vertices, edges)?,
        edge_vertices,
        edge_of,
        gadgets,
        terminal_of,
    })
}

/// Every triangle of `g`, each as a sorted triple, in lexicographic order.
pub fn triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for &a in g.vertices() {
        let up: Vec<Vertex> = g.neighbors(a).map(|(b, _)| b).filter(|&b| b > a).collect();
        for (i, &b) in up.iter().enumerate() {
            for &c in &up[i + 1..] {
                if g.has_edge(b, c) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// Lifts a K-free decomposition of `G` to a triangle-free decomposition of
/// `Ĝ` of width at most `max(width, 1)`.
///
/// Gadget vertices and subdivision vertices all join `L̂`. Each is placed in
/// the first node whose bag holds its neighbours in `G`: added to the bag if
/// that node is a leaf, otherwise to a new leaf child.
pub fn hat_decomposition(
    g: &Graph,
    k: &TerminalSet,
    hat: &HatGraph,
    d: &TreeKFreeDecomposition,
) -> Result<TriangleFreeDecomposition> {
    validate(g, k, d)?;
    let original = d.num_nodes();
    let mut bags = d.bags().to_vec();
    let mut tree_edges = d.tree_edges();
    let mut leafset = d.leafset().clone();
    let mut place = |anchor: &[Vertex], extra: &[Vertex]| {
        let x = (0..original)
            .find(|&x| anchor.iter().all(|v| bags[x].contains(v)))
            .expect("a valid decomposition covers every vertex and edge");
        leafset.extend(extra.iter().copied());
        if d.is_leaf(x) {
            bags[x].extend(extra.iter().copied());
        } else {
            let bag: VertexSet = anchor.iter().chain(extra).copied().collect();
            tree_edges.push((x, bags.len()));
            bags.push(bag);
        }
    };
    for &t in k {
        let (a, b) = hat.gadget(t).expect("every terminal has a gadget");
        place(&[t], &[a, b]);
    }
    for (e, &x) in g.edges().iter().zip(hat.edge_vertices()) {
        place(&[e.u, e.v], &[x]);
    }
    let lifted = TriangleFreeDecomposition(TreeKFreeDecomposition::new(
        bags,
        d.root(),
        &tree_edges,
        leafset,
    )?);
    validate_triangle_free(&hat.graph, &lifted)?;
    Ok(lifted)
}

/// Turns a triangle-free decomposition of `Ĝ` into a K-free decomposition
/// of `G` of the same or smaller width.
///
/// Terminals are first moved out of `L̂` by swapping with a gadget vertex.
/// Each subdivision vertex is then replaced by the smaller endpoint `α(e)`
/// of its edge, and `α(e)` leaves `L` whenever `e` is outside `L̂`.
pub fn convert_hat_decomposition(
    g: &Graph,
    k: &TerminalSet,
    dhat: &TriangleFreeDecomposition,
) -> Result<TreeKFreeDecomposition> {
    let hat = hat_graph(g, k)?;
    validate_triangle_free(&hat.graph, dhat)?;
    let mut d = dhat.0.clone();

    for &t in k {
        if !d.leafset().contains(&t) {
            continue;
        }
        let (a, b) = hat.gadget(t).expect("every terminal has a gadget");
        let home = (0..d.num_nodes())
            .find(|&x| d.bag(x).contains(&t))
            .expect("validated decompositions cover every vertex");
        // k' and k'' have no neighbours outside the gadget, so the single
        // bag holding k suffices for them
        for (x, bag) in d.bags_mut().iter_mut().enumerate() {
            if x != home {
                bag.remove(&a);
                bag.remove(&b);
            }
        }
        let swap = if d.leafset().contains(&a) { b } else { a };
        let l = d.leafset_mut();
        l.remove(&t);
        l.insert(swap);
    }

    let alpha = |x: Vertex| hat.edge_of(x).map(|(u, _)| u);
    let mut leafset: VertexSet = d
        .leafset()
        .iter()
        .copied()
        .filter(|v| g.contains(*v))
        .collect();
    for &x in hat.edge_vertices() {
        if !d.leafset().contains(&x) {
            leafset.remove(&alpha(x).expect("subdivision vertex"));
        }
    }
    let bags: Vec<VertexSet> = d
        .bags()
        .iter()
        .map(|bag| {
            bag.iter()
                .filter_map(|&v| if g.contains(v) { Some(v) } else { alpha(v) })
                .collect()
        })
        .collect();
    let out = TreeKFreeDecomposition::new(bags, d.root(), &d.tree_edges(), leafset)?;
    validate(g, k, &out).map_err(|v| Error::Validation(format!("converted decomposition: {v}")))?;
    Ok(out)
}
