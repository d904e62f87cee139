//! Partitions of a small ordered universe, stored as block bitmasks.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Subgraph, Vertex, VertexSet};

/// Largest universe a bitmask partition can hold.
pub const MAX_UNIVERSE: usize = 64;

/// A sorted, duplicate-free vertex list. Bit `i` of a block mask stands for
/// the `i`-th vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe(Arc<[Vertex]>);

impl Universe {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Universe> {
        let set: VertexSet = vertices.into_iter().collect();
        if set.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge(format!(
                "partition universe of {} elements exceeds {MAX_UNIVERSE}",
                set.len()
            )));
        }
        Ok(Universe(set.into_iter().collect()))
    }

    pub fn empty() -> Universe {
        Universe(Arc::from(Vec::new()))
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    pub fn full_mask(&self) -> u64 {
        mask_below(self.len())
    }

    pub fn to_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    fn members(&self, mask: u64) -> impl Iterator<Item = Vertex> + '_ {
        bits(mask).map(|i| self.0[i])
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

pub(crate) fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

/// A partition of a [`Universe`]. Blocks are kept sorted by their smallest
/// element, so derived equality and ordering are structural.
///
/// Over the empty universe the only partition has no blocks; it is treated
/// as both discrete and single-block.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    universe: Universe,
    blocks: Vec<u64>,
}

fn canonical(mut blocks: Vec<u64>) -> Vec<u64> {
    blocks.retain(|&b| b != 0);
    blocks.sort_unstable_by_key(|b| b.trailing_zeros());
    blocks
}

impl Partition {
    /// Builds a partition from block masks, checking disjointness and cover.
    pub fn from_masks(universe: Universe, blocks: Vec<u64>) -> Result<Partition> {
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 {
                return Err(Error::invalid("partition block is empty"));
            }
            if b & seen != 0 {
                return Err(Error::invalid("partition blocks overlap"));
            }
            seen |= b;
        }
        if seen != universe.full_mask() {
            return Err(Error::invalid("partition blocks do not cover the universe"));
        }
        Ok(Partition {
            universe,
            blocks: canonical(blocks),
        })
    }

    pub fn from_blocks<B>(universe: Universe, blocks: impl IntoIterator<Item = B>) -> Result<Partition>
    where
        B: IntoIterator<Item = Vertex>,
    {
        let mut masks = Vec::new();
        for block in blocks {
            let mut m = 0u64;
            for v in block {
                let i = universe
                    .index_of(v)
                    .ok_or_else(|| Error::invalid(format!("vertex {v} is not in the universe")))?;
                m |= 1 << i;
            }
            masks.push(m);
        }
        Partition::from_masks(universe, masks)
    }

    pub(crate) fn from_masks_unchecked(universe: Universe, blocks: Vec<u64>) -> Partition {
        debug_assert!(blocks.iter().fold(0, |a, b| a | b) == universe.full_mask());
        Partition {
            universe,
            blocks: canonical(blocks),
        }
    }

    /// All singletons.
    pub fn discrete(universe: Universe) -> Partition {
        let blocks = (0..universe.len()).map(|i| 1u64 << i).collect();
        Partition { universe, blocks }
    }

    /// The one-block partition `{U}`.
    pub fn single_block(universe: Universe) -> Partition {
        let blocks = if universe.is_empty() {
            Vec::new()
        } else {
            vec![universe.full_mask()]
        };
        Partition { universe, blocks }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn masks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> Vec<VertexSet> {
        self.blocks
            .iter()
            .map(|&b| self.universe.members(b).collect())
            .collect()
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// True iff `{v}` is a block.
    pub fn has_singleton(&self, v: Vertex) -> bool {
        self.universe
            .index_of(v)
            .is_some_and(|i| self.blocks.contains(&(1u64 << i)))
    }

    fn same_universe(&self, other: &Partition) -> Result<()> {
        if self.universe != other.universe {
            return Err(Error::invalid(format!(
                "partition universes differ: {:?} vs {:?}",
                self.universe, other.universe
            )));
        }
        Ok(())
    }

    pub(crate) fn join_unchecked(&self, other: &Partition) -> Partition {
        let mut out = self.blocks.clone();
        for &qb in &other.blocks {
            let mut merged = qb;
            out.retain(|&b| {
                if b & qb != 0 {
                    merged |= b;
                    false
                } else {
                    true
                }
            });
            out.push(merged);
        }
        Partition {
            universe: self.universe.clone(),
            blocks: canonical(out),
        }
    }

    /// Merges the blocks holding `a` and `b`; both must be in the universe.
    pub(crate) fn merge_pair(&self, a: Vertex, b: Vertex) -> Partition {
        let mask = (1u64 << self.universe.index_of(a).expect("a in universe"))
            | (1u64 << self.universe.index_of(b).expect("b in universe"));
        let mut merged = 0u64;
        let mut out: Vec<u64> = Vec::with_capacity(self.blocks.len());
        for &blk in &self.blocks {
            if blk & mask != 0 {
                merged |= blk;
            } else {
                out.push(blk);
            }
        }
        out.push(merged);
        Partition {
            universe: self.universe.clone(),
            blocks: canonical(out),
        }
    }

    /// Re-expresses the partition over `target`: elements missing from
    /// `target` are dropped and elements new to it become singletons.
    pub fn remap(&self, target: &Universe) -> Partition {
        let mut out: Vec<u64> = Vec::with_capacity(self.blocks.len() + 1);
        let mut covered = 0u64;
        for &b in &self.blocks {
            let mut m = 0u64;
            for v in self.universe.members(b) {
                if let Some(j) = target.index_of(v) {
                    m |= 1 << j;
                }
            }
            covered |= m;
            out.push(m);
        }
        for j in bits(target.full_mask() & !covered) {
            out.push(1 << j);
        }
        Partition {
            universe: target.clone(),
            blocks: canonical(out),
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, &b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, v) in self.universe.members(b).enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// The finest partition coarser than both `p` and `q`.
pub fn join(p: &Partition, q: &Partition) -> Result<Partition> {
    p.same_universe(q)?;
    Ok(p.join_unchecked(q))
}

/// True iff every block of `q` lies inside a block of `p`, that is `q` is a
/// refinement of `p`.
pub fn refines(p: &Partition, q: &Partition) -> Result<bool> {
    p.same_universe(q)?;
    Ok(q
        .blocks
        .iter()
        .all(|&qb| p.blocks.iter().any(|&pb| qb & !pb == 0)))
}

/// The partition of `x` induced by the components of `f`; vertices of `x`
/// outside `f` are singletons.
pub fn project(f: &Subgraph, x: &VertexSet) -> Result<Partition> {
    let universe = Universe::new(x.iter().copied())?;
    Ok(project_onto(f, &universe))
}

pub(crate) fn project_onto(f: &Subgraph, universe: &Universe) -> Partition {
    let mut blocks = Vec::new();
    let mut covered = 0u64;
    for comp in f.components() {
        let mut m = 0u64;
        for v in comp {
            if let Some(i) = universe.index_of(v) {
                m |= 1 << i;
            }
        }
        covered |= m;
        blocks.push(m);
    }
    for i in bits(universe.full_mask() & !covered) {
        blocks.push(1 << i);
    }
    Partition::from_masks_unchecked(universe.clone(), blocks)
}

/// Intersects every block with `z` and drops empty blocks.
pub fn restrict(p: &Partition, z: &VertexSet) -> Result<Partition> {
    if let Some(v) = z.iter().find(|v| !p.universe.contains(**v)) {
        return Err(Error::invalid(format!("vertex {v} is not in the universe")));
    }
    Ok(p.remap(&Universe::new(z.iter().copied())?))
}

/// Every partition of `universe`, in restricted-growth-string order.
pub fn enumerate_partitions(universe: &Universe) -> Vec<Partition> {
    let n = universe.len();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let nblocks = rgs.iter().max().map_or(0, |&m| m + 1);
        let mut blocks = vec![0u64; nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b] |= 1 << i;
        }
        out.push(Partition::from_masks_unchecked(universe.clone(), blocks));
        // advance: rightmost position that can grow
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn uni(n: u32) -> Universe {
        Universe::new(1..=n).unwrap()
    }

    fn part(n: u32, blocks: &[&[Vertex]]) -> Partition {
        Partition::from_blocks(uni(n), blocks.iter().map(|b| b.iter().copied())).unwrap()
    }

    #[test]
    fn join_examples() {
        let discrete = part(3, &[&[1], &[2], &[3]]);
        let ab_c = part(3, &[&[1, 2], &[3]]);
        let a_bc = part(3, &[&[1], &[2, 3]]);
        assert_eq!(join(&discrete, &ab_c).unwrap(), ab_c);
        assert_eq!(join(&ab_c, &a_bc).unwrap(), part(3, &[&[1, 2, 3]]));
        assert_eq!(join(&ab_c, &ab_c).unwrap(), ab_c);
        assert!(join(&ab_c, &part(2, &[&[1, 2]])).is_err());
    }

    #[test]
    fn refines_examples() {
        let ab = part(2, &[&[1, 2]]);
        let a_b = part(2, &[&[1], &[2]]);
        assert!(refines(&ab, &a_b).unwrap());
        assert!(!refines(&a_b, &ab).unwrap());
        assert!(refines(&ab, &ab).unwrap());
    }

    #[test]
    fn project_examples() {
        // the drawn figure: x_i is vertex i, unnamed bends are 101..
        let mut f = Subgraph::new();
        let lines: &[&[Vertex]] = &[
            &[1, 101, 102, 103],
            &[2, 104, 105, 106, 3],
            &[4, 106],
            &[4, 107, 108, 5],
            &[107, 109, 110],
            &[6, 111, 112, 113, 114, 7],
            &[115, 7],
        ];
        for line in lines {
            for w in line.windows(2) {
                f.add_edge(w[0], w[1]);
            }
        }
        let x: VertexSet = (1..=8).collect();
        let p = project(&f, &x).unwrap();
        assert_eq!(p, part(8, &[&[1], &[2, 3, 4, 5], &[6, 7], &[8]]));

        let x2: VertexSet = [1, 2].into_iter().collect();
        assert_eq!(project(&Subgraph::new(), &x2).unwrap(), Partition::discrete(uni(2)));
        let edge = Subgraph::from_edges([(1, 2)]);
        let x3: VertexSet = (1..=3).collect();
        assert_eq!(project(&edge, &x3).unwrap(), part(3, &[&[1, 2], &[3]]));
    }

    #[test]
    fn restrict_examples() {
        let ab_c = part(3, &[&[1, 2], &[3]]);
        let z: VertexSet = [1, 3].into_iter().collect();
        let r = restrict(&ab_c, &z).unwrap();
        assert_eq!(r.blocks(), vec![[1].into(), [3].into()]);
        assert_eq!(restrict(&ab_c, &(1..=3).collect()).unwrap(), ab_c);
        let one = part(3, &[&[1, 2, 3]]);
        let r = restrict(&one, &[2].into()).unwrap();
        assert_eq!(r.blocks(), vec![VertexSet::from([2])]);
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_partitions(&uni(n)).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
        let all = enumerate_partitions(&uni(4));
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn lattice_laws_exhaustive() {
        for n in 0..=4 {
            let all = enumerate_partitions(&uni(n));
            let discrete = Partition::discrete(uni(n));
            for p in &all {
                assert_eq!(join(p, &discrete).unwrap(), *p);
                assert_eq!(join(p, p).unwrap(), *p);
                for q in &all {
                    let pq = join(p, q).unwrap();
                    assert_eq!(pq, join(q, p).unwrap());
                    assert_eq!(refines(p, q).unwrap(), pq == *p);
                    for r in &all {
                        assert_eq!(join(&pq, r).unwrap(), join(p, &join(q, r).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn empty_universe_partition() {
        let e = Universe::empty();
        assert_eq!(Partition::discrete(e.clone()), Partition::single_block(e.clone()));
        assert!(Partition::single_block(e).is_single_block());
    }

    proptest! {
        #[test]
        fn projection_splits_over_components(
            edges in proptest::collection::vec((1u32..=8, 1u32..=8), 0..12),
            xmask in 0u32..256,
        ) {
            let f = Subgraph::from_edges(edges.into_iter().filter(|(a, b)| a != b));
            let x: VertexSet = (1..=8).filter(|v| xmask & (1 << (v - 1)) != 0).collect();
            let whole = project(&f, &x).unwrap();
            for comp in f.components() {
                let mut c = Subgraph::new();
                let mut h = Subgraph::new();
                for &v in f.vertices() {
                    if comp.contains(&v) { c.add_vertex(v) } else { h.add_vertex(v) }
                }
                for &(a, b) in f.edges() {
                    if comp.contains(&a) { c.add_edge(a, b) } else { h.add_edge(a, b) }
                }
                let split = join(&project(&h, &x).unwrap(), &project(&c, &x).unwrap()).unwrap();
                prop_assert_eq!(&split, &whole);
            }
        }
    }
}
