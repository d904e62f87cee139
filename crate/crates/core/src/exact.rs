//! Exact baseline solvers: Dreyfus–Wagner and an exhaustive oracle.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::cost::{Cost, Weight};
use crate::error::{Error, Result};
use crate::graph::{
    connected_components, minimum_spanning_tree, Graph, Subgraph, TerminalSet, Vertex, VertexSet,
};

/// Default cap on the number of terminals handed to Dreyfus–Wagner.
pub const DEFAULT_TERMINAL_LIMIT: usize = 20;

/// Largest graph the exhaustive oracle accepts.
pub const BRUTE_FORCE_VERTEX_LIMIT: usize = 16;

/// A Steiner tree and its cost. An infeasible instance has cost
/// [`Cost::Infinite`] and an empty tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SteinerResult {
    pub cost: Cost,
    pub tree: Subgraph,
}

impl SteinerResult {
    pub fn infeasible() -> Self {
        SteinerResult {
            cost: Cost::Infinite,
            tree: Subgraph::new(),
        }
    }

    /// The zero-cost answer for at most one terminal.
    pub fn trivial(k: &TerminalSet) -> Self {
        let mut tree = Subgraph::new();
        for &t in k {
            tree.add_vertex(t);
        }
        SteinerResult {
            cost: Cost::ZERO,
            tree,
        }
    }

    /// Checks that the tree is an acyclic connected subgraph of `g` spanning
    /// `k` whose weight is the reported cost.
    pub fn check(&self, g: &Graph, k: &TerminalSet) -> Result<()> {
        let fail = |m: String| Err(Error::Validation(m));
        let Cost::Finite(cost) = self.cost else {
            if self.tree.is_empty() {
                return Ok(());
            }
            return fail("infeasible result carries a tree".into());
        };
        if let Some(v) = self.tree.vertices().iter().find(|v| !g.contains(**v)) {
            return fail(format!("tree vertex {v} is not in the graph"));
        }
        let actual = self
            .tree
            .cost(g)
            .map_err(|e| Error::Validation(e.to_string()))?;
        if actual != cost {
            return fail(format!("tree weighs {actual} but the reported cost is {cost}"));
        }
        if let Some(t) = k.iter().find(|t| !self.tree.contains_vertex(**t)) {
            return fail(format!("terminal {t} is not spanned"));
        }
        if !self.tree.is_connected() {
            return fail("tree is disconnected".into());
        }
        if !self.tree.is_acyclic() {
            return fail("tree contains a cycle".into());
        }
        Ok(())
    }
}

pub(crate) fn check_terminals(g: &Graph, k: &TerminalSet) -> Result<()> {
    match k.iter().find(|t| !g.contains(**t)) {
        Some(&t) => Err(Error::UnknownVertex(t)),
        None => Ok(()),
    }
}

pub(crate) fn terminals_connected(g: &Graph, k: &TerminalSet) -> bool {
    let Some(first) = k.first() else {
        return true;
    };
    connected_components(g)
        .into_iter()
        .find(|c| c.contains(first))
        .is_some_and(|c| k.is_subset(&c))
}

#[derive(Clone, Copy)]
enum Back {
    None,
    Terminal,
    Split(u32),
    Pred(usize),
}

/// Dreyfus–Wagner with the default terminal limit.
pub fn dreyfus_wagner(g: &Graph, k: &TerminalSet) -> Result<SteinerResult> {
    dreyfus_wagner_limited(g, k, DEFAULT_TERMINAL_LIMIT)
}

/// Minimum Steiner tree by the Dreyfus–Wagner subset DP.
///
/// The last terminal serves as root; `D[T][v]` is the cheapest tree joining
/// `T ∪ {v}` for `T` a subset of the other terminals. Each layer combines
/// splits at `v` and then relaxes along edges with Dijkstra.
pub fn dreyfus_wagner_limited(g: &Graph, k: &TerminalSet, limit: usize) -> Result<SteinerResult> {
    check_terminals(g, k)?;
    if k.len() > limit {
        return Err(Error::TooLarge(format!(
            "{} terminals exceed the Dreyfus-Wagner limit of {limit}",
            k.len()
        )));
    }
    if k.len() <= 1 {
        return Ok(SteinerResult::trivial(k));
    }
    if !terminals_connected(g, k) {
        return Ok(SteinerResult::infeasible());
    }
    let n = g.num_vertices();
    let pos: HashMap<Vertex, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<Vec<(usize, Weight)>> = g
        .vertices()
        .iter()
        .map(|&v| g.neighbors(v).map(|(u, w)| (pos[&u], w as Weight)).collect())
        .collect();
    let terms: Vec<Vertex> = k.iter().copied().collect();
    let r = terms.len() - 1;
    let root = pos[&terms[r]];
    let full = (1u32 << r) - 1;

    let mut masks: Vec<u32> = (1..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));

    let size = 1usize << r;
    let mut dist: Vec<Option<Weight>> = vec![None; size * n];
    let mut back: Vec<Back> = vec![Back::None; size * n];
    let at = |mask: u32, v: usize| mask as usize * n + v;

    for &mask in &masks {
        if mask.count_ones() == 1 {
            let t = pos[&terms[mask.trailing_zeros() as usize]];
            dist[at(mask, t)] = Some(0);
            back[at(mask, t)] = Back::Terminal;
        } else {
            let low = mask & mask.wrapping_neg();
            for v in 0..n {
                let mut best: Option<(Weight, u32)> = None;
                // submasks containing the lowest bit, so each split is seen once
                let rest = mask & !low;
                let mut sub = rest;
                loop {
                    let a = sub | low;
                    if a != mask {
                        if let (Some(x), Some(y)) = (dist[at(a, v)], dist[at(mask & !a, v)]) {
                            let c = x + y;
                            if best.is_none_or(|(b, _)| c < b) {
                                best = Some((c, a));
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                if let Some((c, a)) = best {
                    dist[at(mask, v)] = Some(c);
                    back[at(mask, v)] = Back::Split(a);
                }
            }
        }
        // relax along edges
        let mut heap = BinaryHeap::new();
        for v in 0..n {
            if let Some(d) = dist[at(mask, v)] {
                heap.push(Reverse((d, v)));
            }
        }
        while let Some(Reverse((d, v))) = heap.pop() {
            if dist[at(mask, v)] != Some(d) {
                continue;
            }
            for &(u, w) in &adj[v] {
                let c = d + w;
                if dist[at(mask, u)].is_none_or(|cur| c < cur) {
                    dist[at(mask, u)] = Some(c);
                    back[at(mask, u)] = Back::Pred(v);
                    heap.push(Reverse((c, u)));
                }
            }
        }
    }

    let best = dist[at(full, root)].expect("terminals share a component");
    let mut union = Subgraph::single(terms[r]);
    let mut stack = vec![(full, root)];
    while let Some((mask, v)) = stack.pop() {
        union.add_vertex(g.vertices()[v]);
        match back[at(mask, v)] {
            Back::Terminal => {}
            Back::Pred(u) => {
                union.add_edge(g.vertices()[u], g.vertices()[v]);
                stack.push((mask, u));
            }
            Back::Split(a) => {
                stack.push((a, v));
                stack.push((mask & !a, v));
            }
            Back::None => unreachable!("reachable DP entries carry a backpointer"),
        }
    }
    let tree = minimum_spanning_tree(g, &union)?;
    debug_assert_eq!(tree.cost(g).ok(), Some(best));
    Ok(SteinerResult {
        cost: Cost::Finite(best),
        tree,
    })
}

/// Exhaustive oracle: the cheapest spanning tree of a connected induced
/// subgraph `g[W]` over all `K ⊆ W ⊆ V(g)`.
pub fn brute_force_steiner(g: &Graph, k: &TerminalSet) -> Result<SteinerResult> {
    check_terminals(g, k)?;
    let n = g.num_vertices();
    if n > BRUTE_FORCE_VERTEX_LIMIT {
        return Err(Error::TooLarge(format!(
            "brute force handles at most {BRUTE_FORCE_VERTEX_LIMIT} vertices, got {n}"
        )));
    }
    if k.is_empty() {
        return Ok(SteinerResult::trivial(k));
    }
    let verts = g.vertices();
    let required: u32 = verts
        .iter()
        .enumerate()
        .filter(|(_, v)| k.contains(v))
        .fold(0, |m, (i, _)| m | (1 << i));
    let mut best: Option<(Weight, VertexSet)> = None;
    for w in 0u32..(1 << n) {
        if w & required != required {
            continue;
        }
        let chosen: VertexSet = (0..n).filter(|i| w & (1 << i) != 0).map(|i| verts[i]).collect();
        let Some(c) = prim_cost(g, &chosen) else {
            continue;
        };
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, chosen));
        }
    }
    match best {
        None => Ok(SteinerResult::infeasible()),
        Some((c, chosen)) => {
            let tree = minimum_spanning_tree(g, &g.induced(&chosen).as_subgraph())?;
            Ok(SteinerResult {
                cost: Cost::Finite(c),
                tree,
            })
        }
    }
}

/// Minimum spanning tree weight of `g[w]` by Prim, or `None` if disconnected.
fn prim_cost(g: &Graph, w: &VertexSet) -> Option<Weight> {
    let start = *w.first()?;
    let mut inside = VertexSet::new();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0 as Weight, start)));
    let mut total = 0;
    while let Some(Reverse((c, v))) = heap.pop() {
        if !inside.insert(v) {
            continue;
        }
        total += c;
        for (u, wt) in g.neighbors(v) {
            if w.contains(&u) && !inside.contains(&u) {
                heap.push(Reverse((wt as Weight, u)));
            }
        }
    }
    (inside.len() == w.len()).then_some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::{path3, set};

    #[test]
    fn path_example() {
        let g = path3();
        let k = set(&[1, 3]);
        for res in [dreyfus_wagner(&g, &k).unwrap(), brute_force_steiner(&g, &k).unwrap()] {
            assert_eq!(res.cost, Cost::Finite(3));
            assert_eq!(res.tree, g.as_subgraph());
            res.check(&g, &k).unwrap();
        }
    }

    #[test]
    fn trivial_terminal_sets() {
        let g = path3();
        assert_eq!(dreyfus_wagner(&g, &set(&[2])).unwrap().cost, Cost::ZERO);
        let empty = brute_force_steiner(&g, &set(&[])).unwrap();
        assert_eq!(empty.cost, Cost::ZERO);
        assert!(empty.tree.is_empty());
    }

    #[test]
    fn all_terminals_gives_mst() {
        let g = Graph::new([1, 2, 3, 4], [(1, 2, 4), (2, 3, 1), (3, 4, 2), (4, 1, 3), (1, 3, 5)])
            .unwrap();
        let k = g.vertex_set();
        let mst = minimum_spanning_tree(&g, &g.as_subgraph()).unwrap();
        let res = dreyfus_wagner(&g, &k).unwrap();
        assert_eq!(res.cost, Cost::Finite(mst.cost(&g).unwrap()));
    }

    #[test]
    fn disconnected_terminals() {
        let g = Graph::new([1, 2, 3], [(1, 2, 1)]).unwrap();
        let k = set(&[1, 3]);
        assert_eq!(dreyfus_wagner(&g, &k).unwrap(), SteinerResult::infeasible());
        assert_eq!(brute_force_steiner(&g, &k).unwrap().cost, Cost::Infinite);
    }

    #[test]
    fn errors() {
        let g = path3();
        assert_eq!(dreyfus_wagner(&g, &set(&[1, 9])), Err(Error::UnknownVertex(9)));
        let big = Graph::new(1..=17, []).unwrap();
        assert!(matches!(brute_force_steiner(&big, &set(&[1])), Err(Error::TooLarge(_))));
        assert!(matches!(
            dreyfus_wagner_limited(&g, &set(&[1, 2, 3]), 2),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn steiner_point_is_used() {
        // star through 4 beats the outer cycle
        let g = Graph::new(
            [1, 2, 3, 4],
            [(1, 2, 5), (2, 3, 5), (1, 3, 5), (1, 4, 2), (2, 4, 2), (3, 4, 2)],
        )
        .unwrap();
        let k = set(&[1, 2, 3]);
        let res = dreyfus_wagner(&g, &k).unwrap();
        assert_eq!(res.cost, Cost::Finite(6));
        res.check(&g, &k).unwrap();
        assert_eq!(brute_force_steiner(&g, &k).unwrap().cost, Cost::Finite(6));
    }
}
