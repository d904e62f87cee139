//! The Steiner tree solver parameterized by a multiway cut: guess the part
//! `S'` of the cut used by the tree, guess how the tree meets `S'`, and
//! settle the rest with one bipartite matching per guess.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::connecting::matching::{min_weight_assignment, Matching, SignedWeight};
use crate::connecting::systems::{enumerate_systems, SConnectingSystem};
use crate::cost::{Cost, Weight};
use crate::error::{Error, Result};
use crate::exact::{check_terminals, dreyfus_wagner, terminals_connected, SteinerResult};
use crate::graph::{
    connected_components, graph_around, is_multiway_cut, minimum_spanning_tree, shortest_path,
    Graph, Subgraph, TerminalSet, Vertex, VertexSet,
};
use crate::multiway::MultiwayCut;

/// The weighted complete bipartite graph between the subsets of a system
/// and the slots `(p, j)`, `j = 0..=m`, of every component `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteWeights {
    pub left: Vec<VertexSet>,
    pub right: Vec<(usize, usize)>,
    /// `weight[i][c]` for left `i` and right `c`.
    pub weight: Vec<Vec<SignedWeight>>,
}

/// Result of assembling a tree from one matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub result: SteinerResult,
    /// `ω(M) + cost(𝒯[S']) + Σ_k cost(SP[S', k])`.
    pub bound: i128,
}

/// Per-instance data shared by all `(S', system)` iterations: the
/// components of `G - S`, their graphs `G_p`, and a memo of Steiner
/// subproblems on those graphs.
pub struct CutInstance<'a> {
    g: &'a Graph,
    k: &'a TerminalSet,
    cut: VertexSet,
    components: Vec<VertexSet>,
    component_graphs: Vec<Graph>,
    component_terminal: Vec<Option<Vertex>>,
    memo: Mutex<HashMap<(usize, VertexSet), SteinerResult>>,
}

impl<'a> CutInstance<'a> {
    pub fn new(g: &'a Graph, k: &'a TerminalSet, cut: &MultiwayCut) -> Result<Self> {
        check_terminals(g, k)?;
        if let Some(&v) = cut.vertices.iter().find(|v| !g.contains(**v)) {
            return Err(Error::UnknownVertex(v));
        }
        if !is_multiway_cut(g, k, &cut.vertices) {
            return Err(Error::invalid("vertex set is not a multiway cut for the terminals"));
        }
        let components = connected_components(&g.without(&cut.vertices));
        let component_graphs = components.iter().map(|c| graph_around(g, c)).collect();
        let component_terminal = components
            .iter()
            .map(|c| c.iter().copied().find(|v| k.contains(v)))
            .collect();
        Ok(CutInstance {
            g,
            k,
            cut: cut.vertices.clone(),
            components,
            component_graphs,
            component_terminal,
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn components(&self) -> &[VertexSet] {
        &self.components
    }

    pub fn component_graph(&self, p: usize) -> &Graph {
        &self.component_graphs[p]
    }

    /// `MST[G_p, x]`, infeasible when `x` is not inside one component of `G_p`.
    pub fn steiner_in_component(&self, p: usize, x: &VertexSet) -> Result<SteinerResult> {
        let key = (p, x.clone());
        if let Some(hit) = self.memo.lock().expect("memo lock").get(&key) {
            return Ok(hit.clone());
        }
        let gp = &self.component_graphs[p];
        let res = if x.iter().all(|v| gp.contains(*v)) {
            dreyfus_wagner(gp, x)?
        } else {
            SteinerResult::infeasible()
        };
        self.memo
            .lock()
            .expect("memo lock")
            .entry(key)
            .or_insert_with(|| res.clone());
        Ok(res)
    }

    /// `SP[S', t]` in the whole graph.
    fn shortest_to(&self, s_prime: &VertexSet, t: Vertex) -> Result<Option<(Subgraph, Weight)>> {
        shortest_path(self.g, s_prime, t)
    }

    fn check_base(&self, s_prime: &VertexSet, sys: &SConnectingSystem) -> Result<()> {
        if sys.base != *s_prime {
            return Err(Error::invalid("system is not built on the chosen cut subset"));
        }
        if !s_prime.is_subset(&self.cut) {
            return Err(Error::invalid("chosen subset is not inside the multiway cut"));
        }
        if self.k.iter().any(|t| self.cut.contains(t) && !s_prime.contains(t)) {
            return Err(Error::invalid("chosen subset misses a terminal of the cut"));
        }
        Ok(())
    }

    /// The weight table `ω` for one iteration.
    pub fn build_weights(
        &self,
        s_prime: &VertexSet,
        sys: &SConnectingSystem,
    ) -> Result<BipartiteWeights> {
        self.check_base(s_prime, sys)?;
        let m = sys.num_hubs();
        let q = self.components.len();
        let right: Vec<(usize, usize)> = (0..q).flat_map(|p| (0..=m).map(move |j| (p, j))).collect();
        let mut sp_cost: Vec<Option<Weight>> = Vec::with_capacity(q);
        for p in 0..q {
            sp_cost.push(match self.component_terminal[p] {
                Some(t) => self.shortest_to(s_prime, t)?.map(|(_, d)| d),
                None => None,
            });
        }
        let mut weight = Vec::with_capacity(m);
        for si in &sys.subsets {
            let mut row = Vec::with_capacity(right.len());
            for &(p, j) in &right {
                let w = if j == 0 {
                    match (self.component_terminal[p], sp_cost[p]) {
                        (Some(t), Some(d)) => {
                            let mut x = si.clone();
                            x.insert(t);
                            self.steiner_in_component(p, &x)?
                                .cost
                                .finite()
                                .map(|c| c as i128 - d as i128)
                        }
                        _ => None,
                    }
                } else {
                    self.steiner_in_component(p, si)?.cost.finite().map(|c| c as i128)
                };
                row.push(w);
            }
            weight.push(row);
        }
        Ok(BipartiteWeights {
            left: sys.subsets.clone(),
            right,
            weight,
        })
    }

    /// Assembles `T_M` from a finite matching and returns a spanning tree
    /// of its component holding `S' ∪ K`.
    pub fn reconstruct_tree(
        &self,
        s_prime: &VertexSet,
        sys: &SConnectingSystem,
        b: &BipartiteWeights,
        matching: &Matching,
    ) -> Result<Reconstruction> {
        self.check_base(s_prime, sys)?;
        if matching.pairs.len() != b.left.len() {
            return Err(Error::invalid("matching does not saturate the subsets"));
        }
        let mut union = sys.base_subgraph();
        let mut bound: i128 = matching.total + union.cost(self.g)? as i128;
        let mut covered = vec![false; self.components.len()];
        for &(i, c) in &matching.pairs {
            let (p, j) = b.right[c];
            if b.weight[i][c].is_none() {
                return Err(Error::invalid("matching uses an infinite weight"));
            }
            let mut x = b.left[i].clone();
            if j == 0 {
                let t = self.component_terminal[p].expect("finite (p, 0) slot has a terminal");
                x.insert(t);
                covered[p] = true;
            }
            let piece = self.steiner_in_component(p, &x)?;
            union.extend(&piece.tree);
        }
        for (p, &terminal) in self.component_terminal.iter().enumerate() {
            let Some(t) = terminal else {
                continue;
            };
            match self.shortest_to(s_prime, t)? {
                None => {
                    return Ok(Reconstruction {
                        result: SteinerResult::infeasible(),
                        bound,
                    })
                }
                Some((path, d)) => {
                    bound += d as i128;
                    if !covered[p] {
                        union.extend(&path);
                    }
                }
            }
        }
        let mut required: VertexSet = s_prime.clone();
        required.extend(self.k.iter().copied());
        let Some(comp) = union.components().into_iter().find(|c| required.is_subset(c)) else {
            return Ok(Reconstruction {
                result: SteinerResult::infeasible(),
                bound,
            });
        };
        let mut part = Subgraph::new();
        for &v in &comp {
            part.add_vertex(v);
        }
        for &(a, c) in union.edges() {
            if comp.contains(&a) {
                part.add_edge(a, c);
            }
        }
        let tree = minimum_spanning_tree(self.g, &part)?;
        let cost = tree.cost(self.g)?;
        debug_assert!((cost as i128) <= bound);
        Ok(Reconstruction {
            result: SteinerResult {
                cost: Cost::Finite(cost),
                tree,
            },
            bound,
        })
    }

    /// Subsets `S'` with `S ∩ K ⊆ S' ⊆ S`, nonempty, in a fixed order.
    pub fn cut_subsets(&self) -> Vec<VertexSet> {
        let forced: VertexSet = self.cut.intersection(self.k).copied().collect();
        let free: Vec<Vertex> = self.cut.difference(self.k).copied().collect();
        (0u64..1 << free.len())
            .map(|mask| {
                let mut s = forced.clone();
                for (i, &v) in free.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        s.insert(v);
                    }
                }
                s
            })
            .filter(|s| !s.is_empty())
            .collect()
    }

    /// Best tree over every system built on `s_prime`.
    pub fn best_for_subset(&self, s_prime: &VertexSet) -> Result<SteinerResult> {
        let mut best = SteinerResult::infeasible();
        // every terminal outside the cut must reach S'
        for t in self.k.iter().filter(|t| !self.cut.contains(t)) {
            if self.shortest_to(s_prime, *t)?.is_none() {
                return Ok(best);
            }
        }
        for sys in enumerate_systems(self.g, s_prime) {
            let b = self.build_weights(s_prime, &sys)?;
            let Some(m) = min_weight_assignment(&b.weight, b.right.len()) else {
                continue;
            };
            let r = self.reconstruct_tree(s_prime, &sys, &b, &m)?;
            if r.result.cost < best.cost {
                best = r.result;
            }
        }
        Ok(best)
    }

    /// Minimum over all `S'`, split across `threads` workers. The answer
    /// does not depend on the thread count: ties go to the earliest `S'`.
    pub fn solve(&self, threads: usize) -> Result<SteinerResult> {
        if self.k.len() <= 1 {
            return Ok(SteinerResult::trivial(self.k));
        }
        if !terminals_connected(self.g, self.k) {
            return Ok(SteinerResult::infeasible());
        }
        let subsets = self.cut_subsets();
        let threads = threads.max(1).min(subsets.len().max(1));
        let run = |worker: usize| -> Result<Option<(Cost, usize, SteinerResult)>> {
            let mut best: Option<(Cost, usize, SteinerResult)> = None;
            for (idx, s_prime) in subsets.iter().enumerate().skip(worker).step_by(threads) {
                let r = self.best_for_subset(s_prime)?;
                if r.cost.is_finite() && best.as_ref().is_none_or(|b| r.cost < b.0) {
                    best = Some((r.cost, idx, r));
                }
            }
            Ok(best)
        };
        let partials: Vec<Result<Option<(Cost, usize, SteinerResult)>>> = if threads == 1 {
            vec![run(0)]
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads).map(|w| scope.spawn(move || run(w))).collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect()
            })
        };
        let mut best: Option<(Cost, usize, SteinerResult)> = None;
        for part in partials {
            if let Some(c) = part? {
                if best.as_ref().is_none_or(|b| (c.0, c.1) < (b.0, b.1)) {
                    best = Some(c);
                }
            }
        }
        Ok(best.map_or_else(SteinerResult::infeasible, |b| b.2))
    }
}

/// Minimum Steiner tree using the multiway cut `s`.
pub fn solve_via_multiway_cut(g: &Graph, k: &TerminalSet, s: &MultiwayCut) -> Result<SteinerResult> {
    solve_via_multiway_cut_threads(g, k, s, 1)
}

pub fn solve_via_multiway_cut_threads(
    g: &Graph,
    k: &TerminalSet,
    s: &MultiwayCut,
    threads: usize,
) -> Result<SteinerResult> {
    CutInstance::new(g, k, s)?.solve(threads)
}
