//! Nice tree K-free decompositions: binary joins, single-vertex introduce
//! and forget steps, one introduce node per edge, and a leaf-introduce node
//! above every leaf.

use std::collections::{BTreeMap, VecDeque};

use crate::decomposition::tree::{validate, NodeId, TreeKFreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{edge_key, EdgeKey, Graph, TerminalSet, Vertex, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeKind {
    /// An original leaf; introduces its edges that touch `L`.
    Leaf { edges: Vec<EdgeKey> },
    /// Sole parent of a leaf, with bag `χ(c) \ L`.
    LeafIntroduce,
    IntroduceVertex(Vertex),
    ForgetVertex(Vertex),
    IntroduceEdge(Vertex, Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub bag: VertexSet,
    pub kind: NodeKind,
    pub children: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeKFreeDecomposition {
    nodes: Vec<NiceNode>,
    parent: Vec<Option<NodeId>>,
    root: NodeId,
    leafset: VertexSet,
}

impl NiceTreeKFreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn node(&self, x: NodeId) -> &NiceNode {
        &self.nodes[x]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, x: NodeId) -> Option<NodeId> {
        self.parent[x]
    }

    pub fn leafset(&self) -> &VertexSet {
        &self.leafset
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// The underlying decomposition, without node kinds.
    pub fn as_decomposition(&self) -> TreeKFreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.clone()).collect();
        let edges: Vec<(NodeId, NodeId)> = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(p, n)| n.children.iter().map(move |&c| (p, c)))
            .collect();
        TreeKFreeDecomposition::new(bags, self.root, &edges, self.leafset.clone())
            .expect("nice decomposition is a rooted tree")
    }

    pub fn width(&self) -> usize {
        self.as_decomposition().width()
    }

    /// Children before parents.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((x, done)) = stack.pop() {
            if done {
                out.push(x);
                continue;
            }
            stack.push((x, true));
            for &c in self.nodes[x].children.iter().rev() {
                stack.push((c, false));
            }
        }
        out
    }

    /// Every `(edge, node)` introduction, in node order.
    pub fn edge_assignment(&self) -> Vec<(EdgeKey, NodeId)> {
        let mut out = Vec::new();
        for (x, n) in self.nodes.iter().enumerate() {
            match &n.kind {
                NodeKind::Leaf { edges } => out.extend(edges.iter().map(|&e| (e, x))),
                NodeKind::IntroduceEdge(u, v) => out.push((edge_key(*u, *v), x)),
                _ => {}
            }
        }
        out
    }

    /// Checks the decomposition conditions, the per-kind bag constraints,
    /// and that every graph edge is introduced exactly once.
    pub fn validate(&self, g: &Graph, k: &TerminalSet) -> Result<()> {
        validate(g, k, &self.as_decomposition())?;
        let bad = |x: NodeId, why: &str| Err(Error::Validation(format!("node {x}: {why}")));
        for (x, n) in self.nodes.iter().enumerate() {
            let kids: Vec<&NiceNode> = n.children.iter().map(|&c| &self.nodes[c]).collect();
            let arity_ok = match n.kind {
                NodeKind::Leaf { .. } => kids.is_empty(),
                NodeKind::Join => kids.len() == 2,
                _ => kids.len() == 1,
            };
            if !arity_ok {
                return bad(x, "wrong number of children for its kind");
            }
            match &n.kind {
                NodeKind::Leaf { edges } => {
                    if self.parent[x].is_none_or(|p| self.nodes[p].kind != NodeKind::LeafIntroduce) {
                        return bad(x, "leaf without a leaf-introduce parent");
                    }
                    for &(u, v) in edges {
                        if !n.bag.contains(&u) || !n.bag.contains(&v) || !g.has_edge(u, v) {
                            return bad(x, "leaf introduces an edge outside its bag graph");
                        }
                    }
                }
                NodeKind::LeafIntroduce => {
                    if !matches!(kids[0].kind, NodeKind::Leaf { .. }) {
                        return bad(x, "leaf-introduce child is not a leaf");
                    }
                    let expect: VertexSet = kids[0].bag.difference(&self.leafset).copied().collect();
                    if n.bag != expect {
                        return bad(x, "leaf-introduce bag is not the leaf bag minus L");
                    }
                }
                NodeKind::IntroduceVertex(v) => {
                    let mut expect = kids[0].bag.clone();
                    if !expect.insert(*v) || n.bag != expect {
                        return bad(x, "introduce bag is not child bag plus the vertex");
                    }
                }
                NodeKind::ForgetVertex(v) => {
                    let mut expect = kids[0].bag.clone();
                    if !expect.remove(v) || n.bag != expect {
                        return bad(x, "forget bag is not child bag minus the vertex");
                    }
                }
                NodeKind::IntroduceEdge(u, v) => {
                    if n.bag != kids[0].bag || !n.bag.contains(u) || !n.bag.contains(v) {
                        return bad(x, "edge introduced outside a bag holding both endpoints");
                    }
                    if !g.has_edge(*u, *v) {
                        return bad(x, "introduced edge is not in the graph");
                    }
                }
                NodeKind::Join => {
                    if kids.iter().any(|c| c.bag != n.bag) {
                        return bad(x, "join children bags differ from the join bag");
                    }
                }
            }
        }
        let mut count: BTreeMap<EdgeKey, usize> = BTreeMap::new();
        for (e, _) in self.edge_assignment() {
            *count.entry(e).or_default() += 1;
        }
        for e in g.edges() {
            match count.remove(&e.key()) {
                Some(1) => {}
                Some(c) => {
                    return Err(Error::Validation(format!(
                        "edge {}-{} introduced {c} times",
                        e.u, e.v
                    )))
                }
                None => {
                    return Err(Error::Validation(format!("edge {}-{} is never introduced", e.u, e.v)))
                }
            }
        }
        if let Some(((u, v), _)) = count.into_iter().next() {
            return Err(Error::Validation(format!("introduced edge {u}-{v} is not in the graph")));
        }
        Ok(())
    }
}

struct Builder<'a> {
    g: &'a Graph,
    d: &'a TreeKFreeDecomposition,
    nodes: Vec<NiceNode>,
}

impl Builder<'_> {
    fn push(&mut self, bag: VertexSet, kind: NodeKind, children: Vec<NodeId>) -> NodeId {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    /// Forgets then introduces one vertex at a time until the bag is `target`.
    fn bridge(&mut self, mut top: NodeId, target: &VertexSet) -> NodeId {
        let from = self.nodes[top].bag.clone();
        let mut bag = from.clone();
        for &v in from.difference(target) {
            bag.remove(&v);
            top = self.push(bag.clone(), NodeKind::ForgetVertex(v), vec![top]);
        }
        for &v in target.difference(&from) {
            bag.insert(v);
            top = self.push(bag.clone(), NodeKind::IntroduceVertex(v), vec![top]);
        }
        top
    }

    fn build(&mut self, t: NodeId) -> NodeId {
        let bag = self.d.bag(t).clone();
        if self.d.is_leaf(t) {
            let l = self.d.leafset();
            let edges: Vec<EdgeKey> = self
                .g
                .edges()
                .iter()
                .filter(|e| bag.contains(&e.u) && bag.contains(&e.v))
                .filter(|e| l.contains(&e.u) || l.contains(&e.v))
                .map(|e| e.key())
                .collect();
            let leaf = self.push(bag.clone(), NodeKind::Leaf { edges }, Vec::new());
            let core: VertexSet = bag.difference(l).copied().collect();
            return self.push(core, NodeKind::LeafIntroduce, vec![leaf]);
        }
        let mut tops = Vec::new();
        for &c in self.d.children(t) {
            let sub = self.build(c);
            tops.push(self.bridge(sub, &bag));
        }
        let mut acc = tops[0];
        for &next in &tops[1..] {
            acc = self.push(bag.clone(), NodeKind::Join, vec![acc, next]);
        }
        acc
    }
}

/// Converts a valid decomposition into nice form of the same width.
///
/// Each leaf `c` introduces the edges of `G[χ(c)]` with an endpoint in `L`.
/// Every other edge gets its own introduce node directly above the
/// shallowest node whose bag holds both endpoints.
pub fn to_nice(
    g: &Graph,
    k: &TerminalSet,
    d: &TreeKFreeDecomposition,
) -> Result<NiceTreeKFreeDecomposition> {
    validate(g, k, d)?;
    let mut b = Builder { g, d, nodes: Vec::new() };
    let mut root = b.build(d.root());
    let mut nodes = b.nodes;

    let n = nodes.len();
    let mut parent = vec![None; n];
    for (p, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            parent[c] = Some(p);
        }
    }
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        for &c in &nodes[x].children {
            depth[c] = depth[x] + 1;
            queue.push_back(c);
        }
    }
    let l = d.leafset();
    let mut pending: BTreeMap<NodeId, Vec<EdgeKey>> = BTreeMap::new();
    for e in g.edges() {
        if l.contains(&e.u) || l.contains(&e.v) {
            continue;
        }
        let host = (0..n)
            .filter(|&x| !matches!(nodes[x].kind, NodeKind::Leaf { .. }))
            .filter(|&x| nodes[x].bag.contains(&e.u) && nodes[x].bag.contains(&e.v))
            .min_by_key(|&x| (depth[x], x))
            .expect("a valid decomposition covers every edge away from its leaves");
        pending.entry(host).or_default().push(e.key());
    }
    for (host, edges) in pending {
        let above = parent[host];
        let mut top = host;
        for (u, v) in edges {
            nodes.push(NiceNode {
                bag: nodes[host].bag.clone(),
                kind: NodeKind::IntroduceEdge(u, v),
                children: vec![top],
            });
            let id = nodes.len() - 1;
            parent.push(None);
            parent[top] = Some(id);
            top = id;
        }
        match above {
            Some(p) => {
                for c in nodes[p].children.iter_mut() {
                    if *c == host {
                        *c = top;
                    }
                }
                parent[top] = Some(p);
            }
            None => root = top,
        }
    }
    Ok(NiceTreeKFreeDecomposition {
        nodes,
        parent,
        root,
        leafset: l.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::tree::decompose_from_multiway_cut;
    use crate::graph::fixtures::{path3, set};
    use crate::multiway::MultiwayCut;

    #[test]
    fn trivial_single_bag() {
        let g = path3();
        let k = set(&[1, 3]);
        let d = TreeKFreeDecomposition::new(vec![g.vertex_set()], 0, &[], set(&[])).unwrap();
        let nice = to_nice(&g, &k, &d).unwrap();
        nice.validate(&g, &k).unwrap();
        assert_eq!(nice.width(), d.width());
        assert_eq!(nice.edge_assignment().len(), g.num_edges());
    }

    #[test]
    fn from_cut_with_leafset() {
        let g = Graph::new(
            1..=6,
            [(1, 2, 1), (1, 3, 1), (3, 4, 1), (4, 1, 1), (5, 1, 2), (5, 6, 1), (2, 6, 3)],
        )
        .unwrap();
        let k = set(&[2, 5]);
        let cut = MultiwayCut {
            vertices: set(&[1, 6]),
            certified_minimum: false,
        };
        let d = decompose_from_multiway_cut(&g, &k, &cut).unwrap();
        assert!(!d.leafset().is_empty());
        let nice = to_nice(&g, &k, &d).unwrap();
        nice.validate(&g, &k).unwrap();
        assert_eq!(nice.width(), d.width());
        for x in nice.postorder() {
            if let NodeKind::Leaf { edges } = &nice.node(x).kind {
                assert!(edges.iter().all(|&(u, v)| d.leafset().contains(&u) || d.leafset().contains(&v)));
            }
        }
    }

    #[test]
    fn deep_interior_tree() {
        // path 1-2-3-4-5 with a path decomposition, L empty
        let g = Graph::new(1..=5, [(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1)]).unwrap();
        let bags = vec![set(&[2, 3]), set(&[1, 2]), set(&[3, 4]), set(&[4, 5])];
        let d = TreeKFreeDecomposition::new(bags, 0, &[(0, 1), (0, 2), (2, 3)], set(&[])).unwrap();
        let k = set(&[1, 5]);
        let nice = to_nice(&g, &k, &d).unwrap();
        nice.validate(&g, &k).unwrap();
        assert_eq!(nice.width(), 1);
        let joins = nice.nodes().iter().filter(|n| n.kind == NodeKind::Join).count();
        assert_eq!(joins, 1);
    }

    #[test]
    fn rejects_invalid_input() {
        let g = path3();
        let d = TreeKFreeDecomposition::new(vec![set(&[1, 2])], 0, &[], set(&[])).unwrap();
        assert!(to_nice(&g, &set(&[]), &d).is_err());
    }
}
