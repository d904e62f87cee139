//! The rank-based dynamic program over a nice tree K-free decomposition.
//!
//! A table maps each `Z ⊆ χ(x)` to a weighted partition set over `Z`
//! describing the partial solutions in `G_x` that meet the bag exactly in
//! `Z`. Every set is reduced to a representative subset as soon as it is
//! built. Leaf-introduce nodes get their tables from [`leaf_table`].

use std::collections::BTreeMap;

use crate::cost::{Cost, EdgeWeight, Weight};
use crate::decomposition::nice::{NiceTreeKFreeDecomposition, NodeKind};
use crate::error::{Error, Result};
use crate::exact::{check_terminals, dreyfus_wagner, SteinerResult};
use crate::graph::{minimum_spanning_tree, Graph, Subgraph, TerminalSet, Vertex, VertexSet};
use crate::partition::{Partition, Universe};
use crate::rank::{partition_set_of, reduce, WeightedPartitionSet, Witness};

/// The sets `A'_x(Z)` of one node, keyed by `Z`. Absent keys are empty.
pub type NodeTable<W = ()> = BTreeMap<VertexSet, WeightedPartitionSet<W>>;

fn universe(z: &VertexSet) -> Universe {
    Universe::new(z.iter().copied()).expect("bag subsets fit a partition universe")
}

/// A representative subset of all subgraphs of `G[Z ∪ Y]`, on `Z`.
///
/// `Z` is grown one sorted element at a time. At step `i`, every kept
/// subgraph is extended by a minimum Steiner tree of `G[Z_i ∪ Y]` for each
/// `T ⊆ Z_i` holding `z_i`, and the result is reduced on all of `Z`. Each
/// surviving witness contains every vertex of `Z`.
pub fn leaf_table(g: &Graph, y: &VertexSet, z: &VertexSet) -> Result<WeightedPartitionSet<Subgraph>> {
    if z.is_empty() {
        return Err(Error::invalid("leaf tables need a nonempty Z"));
    }
    if let Some(&v) = y.iter().chain(z).find(|v| !g.contains(**v)) {
        return Err(Error::UnknownVertex(v));
    }
    if let Some(v) = y.intersection(z).next() {
        return Err(Error::invalid(format!("vertex {v} is in both Y and Z")));
    }
    let zs: Vec<Vertex> = z.iter().copied().collect();
    let mut kept: Vec<Subgraph> = vec![Subgraph::new()];
    let mut prefix = y.clone();
    let mut table = None;
    for (i, &zi) in zs.iter().enumerate() {
        prefix.insert(zi);
        let gi = g.induced(&prefix);
        // Steiner trees depend only on (i, T), so they are computed once
        // and combined with every kept subgraph
        let mut trees = Vec::new();
        for sub in 0u64..(1 << i) {
            let mut t: TerminalSet = (0..i).filter(|j| sub & (1 << j) != 0).map(|j| zs[j]).collect();
            t.insert(zi);
            let st = dreyfus_wagner(&gi, &t)?;
            if st.cost.is_finite() {
                trees.push(st.tree);
            }
        }
        let mut b = kept.clone();
        for f in &kept {
            for t in &trees {
                b.push(f.union(t));
            }
        }
        let reduced = reduce(&partition_set_of(g, &b, z)?)?;
        kept = reduced.iter().map(|(_, _, f)| f.clone()).collect();
        table = Some(reduced);
    }
    let table = table.expect("Z is nonempty");
    let mut out = WeightedPartitionSet::new(table.universe().clone());
    for (p, w, f) in table.iter() {
        let mut f = f.clone();
        for &v in z {
            f.add_vertex(v);
        }
        out.insert_unchecked(&p, w, f);
    }
    Ok(out)
}

/// `A'_x(Z)` at a node introducing `v`.
pub fn introduce_vertex<W: Witness>(
    child: &NodeTable<W>,
    v: Vertex,
    z: &VertexSet,
    k: &TerminalSet,
) -> WeightedPartitionSet<W> {
    let u = universe(z);
    let mut out = WeightedPartitionSet::new(u.clone());
    if z.contains(&v) {
        let mut below = z.clone();
        below.remove(&v);
        if let Some(set) = child.get(&below) {
            for (p, w, x) in set.iter() {
                out.insert_unchecked(&p.remap(&u), w, x.with_vertex(v));
            }
        }
    } else if !k.contains(&v) {
        if let Some(set) = child.get(z) {
            return set.clone();
        }
    }
    out
}

/// `A'_x(Z)` at a node forgetting `v`.
pub fn forget_vertex<W: Witness>(child: &NodeTable<W>, v: Vertex, z: &VertexSet) -> WeightedPartitionSet<W> {
    let u = universe(z);
    let mut out = child.get(z).cloned().unwrap_or_else(|| WeightedPartitionSet::new(u.clone()));
    let mut with = z.clone();
    with.insert(v);
    if let Some(set) = child.get(&with) {
        for (p, w, x) in set.iter() {
            if !p.has_singleton(v) {
                out.insert_unchecked(&p.remap(&u), w, x.clone());
            }
        }
    }
    out
}

/// `A'_x(Z)` at a node introducing the edge `{a, b}` of weight `weight`.
pub fn introduce_edge<W: Witness>(
    child: &NodeTable<W>,
    (a, b): (Vertex, Vertex),
    weight: EdgeWeight,
    z: &VertexSet,
) -> WeightedPartitionSet<W> {
    let Some(set) = child.get(z) else {
        return WeightedPartitionSet::new(universe(z));
    };
    let mut out = set.clone();
    if z.contains(&a) && z.contains(&b) {
        for (p, w, x) in set.iter() {
            out.insert_unchecked(&p.merge_pair(a, b), w + Weight::from(weight), x.with_edge(a, b));
        }
    }
    out
}

/// `A'_x(Z)` at a join node.
pub fn join_tables<W: Witness>(
    left: &NodeTable<W>,
    right: &NodeTable<W>,
    z: &VertexSet,
) -> WeightedPartitionSet<W> {
    let mut out = WeightedPartitionSet::new(universe(z));
    if let (Some(l), Some(r)) = (left.get(z), right.get(z)) {
        for (p1, w1, x1) in l.iter() {
            for (p2, w2, x2) in r.iter() {
                out.insert_unchecked(&p1.join_unchecked(&p2), w1 + w2, x1.union(x2));
            }
        }
    }
    out
}

/// Tables of a leaf-introduce node with bag `bag` above a leaf whose
/// introduced graph is `gx` and whose private vertices are `y`.
fn leaf_introduce<W: Witness>(
    gx: &Graph,
    k: &TerminalSet,
    bag: &VertexSet,
    y: &VertexSet,
) -> Result<NodeTable<W>> {
    let required: VertexSet = bag.intersection(k).copied().collect();
    let free: Vec<Vertex> = bag.difference(k).copied().collect();
    let mut out = NodeTable::new();
    for sub in 0u64..(1 << free.len()) {
        let mut z = required.clone();
        z.extend((0..free.len()).filter(|j| sub & (1 << j) != 0).map(|j| free[j]));
        let set = if z.is_empty() {
            // terminal-free leaf parts never beat the empty subgraph
            let mut s = WeightedPartitionSet::new(Universe::empty());
            s.insert_unchecked(&Partition::discrete(Universe::empty()), 0, W::empty());
            s
        } else {
            let table = leaf_table(gx, y, &z)?;
            let mut s = WeightedPartitionSet::new(table.universe().clone());
            for (p, w, f) in table.iter() {
                s.insert_unchecked(&p, w, W::from_subgraph(f));
            }
            s
        };
        out.insert(z, set);
    }
    Ok(out)
}

/// Outcome of the dynamic program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFreeSolution {
    pub cost: Cost,
    /// A minimum Steiner tree when witnesses were requested and one exists.
    pub tree: Option<Subgraph>,
    /// Whether every stored set had at most `2^max(0, |Z|-1)` entries.
    pub table_bound_held: bool,
    pub max_table_size: usize,
}

impl KFreeSolution {
    pub fn into_result(self) -> Option<SteinerResult> {
        match (self.cost, self.tree) {
            (Cost::Infinite, _) => Some(SteinerResult::infeasible()),
            (cost, Some(tree)) => Some(SteinerResult { cost, tree }),
            _ => None,
        }
    }
}

/// Minimum-weight Steiner tree by dynamic programming over the nice
/// decomposition `d`.
///
/// The optimum is read off every node whose subtree has introduced all of
/// `K`, as the cheapest single-block entry of a nonempty `Z`. Restricting
/// the read-out to the root would miss trees that avoid the root bag.
pub fn solve(
    g: &Graph,
    k: &TerminalSet,
    d: &NiceTreeKFreeDecomposition,
    witnesses: bool,
) -> Result<KFreeSolution> {
    check_terminals(g, k)?;
    d.validate(g, k)?;
    if k.len() <= 1 {
        let trivial = SteinerResult::trivial(k);
        return Ok(KFreeSolution {
            cost: trivial.cost,
            tree: witnesses.then_some(trivial.tree),
            table_bound_held: true,
            max_table_size: 0,
        });
    }
    if witnesses {
        run::<Subgraph>(g, k, d, |best| {
            let tree = extract_tree(g, k, best)?;
            Ok(Some(tree))
        })
    } else {
        run::<()>(g, k, d, |_| Ok(None))
    }
}

fn extract_tree(g: &Graph, k: &TerminalSet, f: &Subgraph) -> Result<Subgraph> {
    let first = *k.iter().next().expect("at least two terminals");
    let comp = f
        .components()
        .into_iter()
        .find(|c| c.contains(&first))
        .ok_or_else(|| Error::Validation("witness misses a terminal".into()))?;
    let mut part = Subgraph::new();
    for &v in &comp {
        part.add_vertex(v);
    }
    for &(a, b) in f.edges() {
        if comp.contains(&a) {
            part.add_edge(a, b);
        }
    }
    minimum_spanning_tree(g, &part)
}

fn run<W: Witness>(
    g: &Graph,
    k: &TerminalSet,
    d: &NiceTreeKFreeDecomposition,
    finish: impl FnOnce(&W) -> Result<Option<Subgraph>>,
) -> Result<KFreeSolution> {
    let n = d.num_nodes();
    let mut tables: Vec<Option<NodeTable<W>>> = vec![None; n];
    // terminals of G_x
    let mut covered: Vec<TerminalSet> = vec![TerminalSet::new(); n];
    let mut best: Option<(Weight, W)> = None;
    let mut bound_held = true;
    let mut max_size = 0;

    for x in d.postorder() {
        let node = d.node(x);
        let kids = &node.children;
        let bag = &node.bag;
        covered[x] = match node.kind {
            NodeKind::LeafIntroduce => d.node(kids[0]).bag.intersection(k).copied().collect(),
            _ => {
                let mut t: TerminalSet = kids.iter().flat_map(|&c| covered[c].iter().copied()).collect();
                t.extend(bag.intersection(k));
                t
            }
        };
        let mut take = |c: usize| tables[c].take().expect("children are evaluated first");
        let table: NodeTable<W> = match &node.kind {
            NodeKind::Leaf { .. } => NodeTable::new(),
            NodeKind::LeafIntroduce => {
                let leaf = d.node(kids[0]);
                let NodeKind::Leaf { edges } = &leaf.kind else {
                    unreachable!("validated nice decomposition")
                };
                let gx = Graph::new(
                    leaf.bag.iter().copied(),
                    edges.iter().map(|&(a, b)| (a, b, g.edge_weight(a, b).expect("graph edge"))),
                )?;
                let y: VertexSet = leaf.bag.difference(bag).copied().collect();
                take(kids[0]);
                leaf_introduce(&gx, k, bag, &y)?
            }
            &NodeKind::IntroduceVertex(v) => {
                let child = take(kids[0]);
                let mut zs: Vec<VertexSet> = Vec::new();
                for z in child.keys() {
                    let mut with = z.clone();
                    with.insert(v);
                    zs.push(with);
                    if !k.contains(&v) {
                        zs.push(z.clone());
                    }
                }
                zs.into_iter().map(|z| {
                    let s = introduce_vertex(&child, v, &z, k);
                    (z, s)
                }).collect()
            }
            &NodeKind::ForgetVertex(v) => {
                let child = take(kids[0]);
                let zs: std::collections::BTreeSet<VertexSet> = child
                    .keys()
                    .map(|z| {
                        let mut z = z.clone();
                        z.remove(&v);
                        z
                    })
                    .collect();
                zs.into_iter().map(|z| {
                    let s = forget_vertex(&child, v, &z);
                    (z, s)
                }).collect()
            }
            &NodeKind::IntroduceEdge(a, b) => {
                let child = take(kids[0]);
                let w = g.edge_weight(a, b).expect("validated edge");
                child
                    .keys()
                    .map(|z| (z.clone(), introduce_edge(&child, (a, b), w, z)))
                    .collect()
            }
            NodeKind::Join => {
                let left = take(kids[0]);
                let right = take(kids[1]);
                left.keys()
                    .filter(|z| right.contains_key(*z))
                    .map(|z| (z.clone(), join_tables(&left, &right, z)))
                    .collect()
            }
        };
        let mut reduced = NodeTable::new();
        for (z, set) in table {
            if set.is_empty() {
                continue;
            }
            let set = reduce(&set)?;
            let cap = 1usize << z.len().saturating_sub(1);
            bound_held &= set.len() <= cap;
            max_size = max_size.max(set.len());
            reduced.insert(z, set);
        }
        if covered[x].len() == k.len() {
            for (z, set) in &reduced {
                if z.is_empty() {
                    continue;
                }
                for (p, w, wit) in set.iter() {
                    if p.num_blocks() == 1 && best.as_ref().is_none_or(|b| w < b.0) {
                        best = Some((w, wit.clone()));
                    }
                }
            }
        }
        tables[x] = Some(reduced);
    }

    let Some((value, witness)) = best else {
        return Ok(KFreeSolution {
            cost: Cost::Infinite,
            tree: None,
            table_bound_held: bound_held,
            max_table_size: max_size,
        });
    };
    let tree = finish(&witness)?;
    if let Some(t) = &tree {
        let c = t.cost(g)?;
        if c != value {
            return Err(Error::Validation(format!(
                "witness costs {c} but the table entry says {value}"
            )));
        }
    }
    Ok(KFreeSolution {
        cost: Cost::Finite(value),
        tree,
        table_bound_held: bound_held,
        max_table_size: max_size,
    })
}
