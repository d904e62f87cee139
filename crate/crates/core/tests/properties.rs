mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use steiner_core::connecting::matching::min_weight_assignment;
use steiner_core::connecting::solver::CutInstance;
use steiner_core::decomposition::{
    decompose_from_multiway_cut, parse_tkd, to_nice, validate, write_tkd, NodeKind,
};
use steiner_core::dp;
use steiner_core::exact::{brute_force_steiner, dreyfus_wagner};
use steiner_core::graph::{connected_components, is_multiway_cut, minimum_spanning_tree, shortest_path};
use steiner_core::multiway::{default_multiway_cut, minimum_multiway_cut, MultiwayCut};
use steiner_core::partition::{enumerate_partitions, Universe};
use steiner_core::rank::{reduce, represents_check, WeightedPartitionSet};
use steiner_core::{Cost, Graph, Vertex, VertexSet};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cut check by search over `G - S`, written apart from the library.
fn separates(g: &Graph, k: &VertexSet, s: &VertexSet) -> bool {
    let edges: BTreeSet<(Vertex, Vertex)> = g
        .edges()
        .iter()
        .filter(|e| !s.contains(&e.u) && !s.contains(&e.v))
        .map(|e| (e.u, e.v))
        .collect();
    let free: Vec<Vertex> = k.iter().copied().filter(|t| !s.contains(t)).collect();
    free.iter().all(|&t| reach(&edges, t).iter().filter(|v| k.contains(v) && !s.contains(v)).count() == 1)
}

fn subsets_of_size(items: &[Vertex], size: usize) -> Vec<VertexSet> {
    fn go(items: &[Vertex], size: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<VertexSet>) {
        if cur.len() == size {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, size, 0, &mut Vec::new(), &mut out);
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn components_partition_the_vertices(seed in any::<u64>(), n in 1u32..=10, p in 0.0f64..0.6) {
        let g = random_graph(&mut rng(seed), n, p, 5);
        let comps = connected_components(&g);
        let mut seen = VertexSet::new();
        for c in &comps {
            prop_assert!(!c.is_empty());
            for v in c {
                prop_assert!(seen.insert(*v), "vertex {} in two components", v);
            }
            let edges: BTreeSet<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            prop_assert_eq!(&reach(&edges, *c.iter().next().unwrap()), c);
        }
        prop_assert_eq!(seen, g.vertex_set());
    }

    #[test]
    fn shortest_path_is_minimal_over_all_simple_paths(seed in any::<u64>(), n in 1u32..=8, p in 0.1f64..0.7) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, p, 9);
        let verts = g.vertices().to_vec();
        let size = r.random_range(1..=verts.len());
        let targets = random_subset(&mut r, &verts, size);
        let source = verts[r.random_range(0..verts.len())];
        // exhaustive DFS over simple paths starting at the source
        let adj = adjacency(&g);
        let mut best: Option<u128> = None;
        let mut stack = vec![(source, 0u128, VertexSet::from([source]))];
        while let Some((v, d, on)) = stack.pop() {
            if targets.contains(&v) {
                best = Some(best.map_or(d, |b| b.min(d)));
            }
            for &u in &adj[&v] {
                if !on.contains(&u) {
                    let mut next = on.clone();
                    next.insert(u);
                    stack.push((u, d + g.edge_weight(v, u).unwrap() as u128, next));
                }
            }
        }
        let got = shortest_path(&g, &targets, source).unwrap();
        prop_assert_eq!(got.as_ref().map(|x| x.1), best);
        if let Some((path, d)) = got {
            prop_assert_eq!(path.cost(&g).unwrap(), d);
            prop_assert!(path.contains_vertex(source));
            prop_assert_eq!(path.vertices().iter().filter(|v| targets.contains(v)).count(), 1);
            prop_assert!(path.is_connected() && path.is_acyclic());
        }
    }

    #[test]
    fn mst_matches_brute_force(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 7, 21, 1, 9);
        let g = &inst.graph;
        let t = minimum_spanning_tree(g, &g.as_subgraph()).unwrap();
        let n = g.num_vertices();
        let m = g.num_edges();
        let mut best = u128::MAX;
        for mask in 0u32..1 << m {
            if mask.count_ones() as usize + 1 != n {
                continue;
            }
            let edges: BTreeSet<_> = (0..m).filter(|i| mask & (1 << i) != 0).map(|i| (g.edges()[i].u, g.edges()[i].v)).collect();
            if reach(&edges, g.vertices()[0]).len() == n {
                best = best.min(edges.iter().map(|&(a, b)| g.edge_weight(a, b).unwrap() as u128).sum());
            }
        }
        prop_assert_eq!(t.cost(g).unwrap(), if n == 1 { 0 } else { best });
        prop_assert_eq!(t.edges().len() + 1, n);
    }

    #[test]
    fn multiway_cut_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 10, 18, 5, 1);
        let verts = inst.graph.vertices().to_vec();
        let size = r.random_range(0..=verts.len());
        let s = random_subset(&mut r, &verts, size);
        prop_assert_eq!(is_multiway_cut(&inst.graph, &inst.terminals, &s), separates(&inst.graph, &inst.terminals, &s));
        if is_multiway_cut(&inst.graph, &inst.terminals, &s) {
            for v in verts {
                let mut bigger = s.clone();
                bigger.insert(v);
                prop_assert!(is_multiway_cut(&inst.graph, &inst.terminals, &bigger));
            }
        }
    }

    #[test]
    fn minimum_cut_matches_brute_force(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 12, 24, 5, 1);
        let (g, k) = (&inst.graph, &inst.terminals);
        let cut = minimum_multiway_cut(g, k, k.len()).expect("K minus one terminal is a cut");
        prop_assert!(cut.certified_minimum);
        prop_assert!(is_multiway_cut(g, k, &cut.vertices));
        prop_assert!(cut.len() <= k.len().saturating_sub(1));
        let verts = g.vertices().to_vec();
        let brute = (0..=verts.len())
            .find(|&s| subsets_of_size(&verts, s).iter().any(|c| separates(g, k, c)))
            .unwrap();
        prop_assert_eq!(cut.len(), brute);
        prop_assert!(default_multiway_cut(g, k).len() <= k.len().saturating_sub(1));
    }

    #[test]
    fn adding_a_terminal_never_helps(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 10, 20, 4, 10);
        let g = &inst.graph;
        let base = dreyfus_wagner(g, &inst.terminals).unwrap().cost;
        let v = g.vertices()[r.random_range(0..g.num_vertices())];
        let mut more = inst.terminals.clone();
        more.insert(v);
        prop_assert!(dreyfus_wagner(g, &more).unwrap().cost >= base);
    }

    #[test]
    fn reductions_are_idempotent(seed in any::<u64>(), n in 1u32..=5) {
        let mut r = rng(seed);
        let u = Universe::new(1..=n).unwrap();
        let all = enumerate_partitions(&u);
        let mut a = WeightedPartitionSet::new(u);
        for _ in 0..r.random_range(0..=all.len() * 2) {
            a.insert(all[r.random_range(0..all.len())].clone(), r.random_range(0..=100), ()).unwrap();
        }
        let once = reduce(&a).unwrap();
        let twice = reduce(&once).unwrap();
        prop_assert!(represents_check(&a, &twice).unwrap());
        prop_assert!(twice.len() <= once.len());
        for (p, w, _) in once.iter() {
            prop_assert_eq!(a.weight_of(&p), Some(w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn dreyfus_wagner_matches_brute_force(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 12, 24, 5, 10);
        let (g, k) = (&inst.graph, &inst.terminals);
        let dw = dreyfus_wagner(g, k).unwrap();
        let bf = brute_force_steiner(g, k).unwrap();
        prop_assert_eq!(dw.cost, bf.cost);
        prop_assert_eq!(check_witness(g, k, dw.cost, &dw.tree), Ok(()));
        prop_assert_eq!(check_witness(g, k, bf.cost, &bf.tree), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn every_matching_respects_the_cost_bound(seed in any::<u64>()) {
        let inst = random_instance(&mut rng(seed), 9, 14, 4, 10);
        let (g, k) = (&inst.graph, &inst.terminals);
        let cut = minimum_multiway_cut(g, k, k.len()).unwrap();
        let ci = CutInstance::new(g, k, &cut).unwrap();
        for s_prime in ci.cut_subsets() {
            for sys in steiner_core::connecting::systems::enumerate_systems(g, &s_prime) {
                let b = ci.build_weights(&s_prime, &sys).unwrap();
                let Some(m) = min_weight_assignment(&b.weight, b.right.len()) else { continue };
                let rec = ci.reconstruct_tree(&s_prime, &sys, &b, &m).unwrap();
                if let Cost::Finite(c) = rec.result.cost {
                    prop_assert!(c as i128 <= rec.bound, "{} > {}", c, rec.bound);
                    prop_assert_eq!(check_witness(g, k, rec.result.cost, &rec.result.tree), Ok(()));
                }
            }
        }
    }

    #[test]
    fn any_cut_gives_the_optimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 9, 16, 4, 10);
        let (g, k) = (&inst.graph, &inst.terminals);
        let opt = dreyfus_wagner(g, k).unwrap().cost;
        let mut cut = default_multiway_cut(g, k).vertices;
        let extra = g.vertices()[r.random_range(0..g.num_vertices())];
        if cut.len() < 4 {
            cut.insert(extra);
        }
        let cut = MultiwayCut::checked(g, k, cut).unwrap();
        let got = steiner_core::connecting::solve_via_multiway_cut(g, k, &cut).unwrap();
        prop_assert_eq!(got.cost, opt);
        let d = decompose_from_multiway_cut(g, k, &cut).unwrap();
        prop_assert!(d.width() <= cut.len());
        let nice = to_nice(g, k, &d).unwrap();
        prop_assert_eq!(nice.width(), d.width());
        let s = dp::solve(g, k, &nice, true).unwrap();
        prop_assert_eq!(s.cost, opt);
        prop_assert!(s.table_bound_held);
        prop_assert!(s.max_table_size <= 1usize << d.width());
        let tree = s.tree.unwrap_or_default();
        prop_assert_eq!(check_witness(g, k, s.cost, &tree), Ok(()));
    }

    #[test]
    fn elimination_decompositions_survive_nice_conversion(seed in any::<u64>()) {
        let mut r = rng(seed);
        let inst = random_instance(&mut r, 10, 20, 4, 10);
        let (g, k) = (&inst.graph, &inst.terminals);
        let d = elimination_decomposition(g, &shuffled_vertices(&mut r, g));
        prop_assert_eq!(validate(g, k, &d), Ok(()));
        prop_assert_eq!(parse_tkd(&write_tkd(&d)).unwrap(), d.clone());
        let nice = to_nice(g, k, &d).unwrap();
        prop_assert_eq!(nice.width(), d.width());
        prop_assert!(nice.validate(g, k).is_ok());
        let leaf_edges = nice.nodes().iter().any(|x| matches!(&x.kind, NodeKind::Leaf { edges } if !edges.is_empty()));
        prop_assert!(!leaf_edges);
        let s = dp::solve(g, k, &nice, false).unwrap();
        prop_assert_eq!(s.cost, brute_force_steiner(g, k).unwrap().cost);
        prop_assert!(s.table_bound_held);
    }
}
